#!/usr/bin/env python3
"""Solve an SDPA sparse (.dat-s) problem with cvxpy and write a CSDP-style solution.

The problem is read in the CSDP convention

    maximize tr(C X)  subject to  tr(A_i X) = a_i,  X >= 0 (PSD),

where C is matrix 0 of the file.  The solution file has the dual vector y on
its first line followed by "matno block i j value" lines for the upper
triangle of X (matno 2).
"""

import argparse
import re
import sys

import cvxpy as cp
import numpy as np
import scipy.sparse as sp


def read_sdpa(path):
    with open(path) as fh:
        lines = [ln for ln in fh if ln.strip() and ln.lstrip()[0] not in '"*']
    tokens = lambda s: [t for t in re.split(r"[\s,{}()]+", s) if t]
    m = int(tokens(lines[0])[0])
    nblocks = int(tokens(lines[1])[0])
    sizes = [int(t) for t in tokens(lines[2])[:nblocks]]
    rest = [t for ln in lines[3:] for t in tokens(ln)]
    rhs = np.array([float(t) for t in rest[:m]])
    entries = rest[m:]
    data = []
    for k in range(0, len(entries), 5):
        mat, blk, i, j = (int(x) for x in entries[k:k + 4])
        data.append((mat, blk - 1, i - 1, j - 1, float(entries[k + 4])))
    return m, sizes, rhs, data


def solve(m, sizes, rhs, data, solver, verbose):
    variables = []
    for n in sizes:
        if n > 0:
            variables.append(cp.Variable((n, n), PSD=True))
        else:
            variables.append(cp.Variable(-n, nonneg=True))

    def flat_index(blk, i, j):
        n = sizes[blk]
        return i + j * n if n > 0 else i

    rows = {b: ([], [], []) for b in range(len(sizes))}
    objective_terms = {b: ([], []) for b in range(len(sizes))}
    for mat, blk, i, j, v in data:
        cells = [(i, j)] if sizes[blk] < 0 or i == j else [(i, j), (j, i)]
        for a, b in cells:
            if mat == 0:
                objective_terms[blk][0].append(flat_index(blk, a, b))
                objective_terms[blk][1].append(v)
            else:
                rows[blk][0].append(mat - 1)
                rows[blk][1].append(flat_index(blk, a, b))
                rows[blk][2].append(v)

    lhs = 0
    objective = 0
    for b, n in enumerate(sizes):
        width = n * n if n > 0 else -n
        flat = cp.vec(variables[b], order="F") if n > 0 else variables[b]
        r, c, v = rows[b]
        if v:
            lhs = lhs + sp.csr_matrix((v, (r, c)), shape=(m, width)) @ flat
        idx, vals = objective_terms[b]
        if vals:
            cvec = np.zeros(width)
            np.add.at(cvec, idx, vals)
            objective = objective + cvec @ flat
    constraint = lhs == rhs
    problem = cp.Problem(cp.Maximize(objective), [constraint])
    problem.solve(solver=solver, verbose=verbose)
    if problem.status not in ("optimal", "optimal_inaccurate"):
        raise SystemExit(f"solver status: {problem.status}")
    return problem.value, constraint.dual_value, variables


def write_solution(path, y, sizes, variables):
    with open(path, "w") as fh:
        fh.write(" ".join(f"{v:.17g}" for v in np.atleast_1d(y)) + "\n")
        for b, n in enumerate(sizes):
            value = variables[b].value
            if n > 0:
                value = (value + value.T) / 2
                for i in range(n):
                    for j in range(i, n):
                        if value[i, j] != 0:
                            fh.write(f"2 {b + 1} {i + 1} {j + 1} {value[i, j]:.17g}\n")
            else:
                for i in range(-n):
                    if value[i] != 0:
                        fh.write(f"2 {b + 1} {i + 1} {i + 1} {value[i]:.17g}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("problem")
    parser.add_argument("solution")
    parser.add_argument("--solver", default="CLARABEL")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args()
    m, sizes, rhs, data = read_sdpa(args.problem)
    value, y, variables = solve(m, sizes, rhs, data, args.solver, args.verbose)
    write_solution(args.solution, y, sizes, variables)
    print(f"objective {value:.17g}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
