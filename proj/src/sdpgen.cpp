#include "radomult/sdpgen.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "radomult/parallel.hpp"

namespace radomult {

Rational SdpProblem::trivial_bound() const {
  if (lambda.empty()) throw std::logic_error("problem has no classes");
  return *std::min_element(lambda.begin(), lambda.end());
}

SdpProblem assemble(const ParameterSpec& spec, const ColoringFamily& family, const AssembleOptions& options) {
  const int t_lambda = spec.t_lambda();
  const int N = family.n;
  if (family.q != spec.q() || family.c != spec.c() || family.t != t_lambda) {
    throw std::invalid_argument("family does not match the parameter");
  }
  if (N < spec.n_lambda()) throw std::invalid_argument("base dimension below n_lambda");
  if (options.root && (t_lambda != 0 || *options.root < 1 || *options.root > spec.c())) {
    throw std::invalid_argument("a root color needs t_lambda = 0 and a valid color");
  }
  std::vector<int> dims = options.type_dims.value_or(std::vector<int>{});
  if (!options.type_dims)
    for (int t = t_lambda; t <= N - 2; ++t) dims.push_back(t);
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  for (int t : dims) {
    if (t < t_lambda || t > N - 2) {
      throw std::invalid_argument("type dimension " + std::to_string(t) + " outside " + std::to_string(t_lambda) + ".." +
                                  std::to_string(N - 2));
    }
  }

  SdpProblem p;
  p.q = spec.q();
  p.c = spec.c();
  p.system = spec.system().name();
  p.t_lambda = t_lambda;
  p.n_lambda = spec.n_lambda();
  p.N = N;
  p.root = options.root;

  // Engines and the global block numbering (engine, engine block) -> block.
  std::vector<std::unique_ptr<PairDensityEngine>> engines;
  std::vector<std::vector<std::int64_t>> global;
  for (int t : dims) {
    engines.push_back(std::make_unique<PairDensityEngine>(family, t, default_flag_dim(t, N)));
    const auto& eng = *engines.back();
    std::vector<std::int64_t> map(eng.blocks().size(), -1);
    for (std::size_t b = 0; b < eng.blocks().size(); ++b) {
      const auto& tb = eng.blocks()[b];
      if (options.root && t >= 0 && tb.type.colors[0] != *options.root) continue;
      SdpBlock blk{t, eng.k(), tb.type, {}};
      for (auto idx : tb.flags) blk.flags.push_back(eng.flag_family().representative(idx).colors);
      map[b] = static_cast<std::int64_t>(p.blocks.size());
      p.blocks.push_back(std::move(blk));
    }
    global.push_back(std::move(map));
  }

  std::vector<std::size_t> selected;
  for (std::size_t h = 0; h < family.size(); ++h) {
    const auto colors = family.representative(h).colors;
    if (options.root && colors[0] != *options.root) continue;
    selected.push_back(h);
    p.classes.push_back(colors);
  }
  p.lambda.resize(selected.size());
  p.constraints.resize(selected.size());

  auto build = [&](std::size_t i) {
    const std::size_t h = selected[i];
    p.lambda[i] = spec.lambda(Coloring(family.q, family.n, family.c, p.classes[i]));
    auto& row = p.constraints[i];
    for (std::size_t e = 0; e < engines.size(); ++e) {
      const Rational den(engines[e]->denominator());
      for (const auto& pc : engines[e]->counts(h)) {
        if (pc.a > pc.b) continue;
        const auto g = global[e][pc.block];
        if (g < 0) continue;
        row.push_back(SdpEntry{static_cast<std::uint32_t>(g), pc.a, pc.b,
                               Rational(BigInt(static_cast<unsigned long>(pc.count))) / den});
      }
    }
    std::sort(row.begin(), row.end(), [](const SdpEntry& x, const SdpEntry& y) {
      return std::tie(x.block, x.a, x.b) < std::tie(y.block, y.a, y.b);
    });
  };
  if (options.serial) {
    for (std::size_t i = 0; i < selected.size(); ++i) build(i);
  } else {
    ThreadScope scope(options.threads);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(selected.size()); ++i) build(static_cast<std::size_t>(i));
  }
  return p;
}

// ---------------------------------------------------------------------------
// SDPA files

namespace {

Rational rounded(const Rational& v, int digits) { return parse_decimal(to_decimal(v, digits)); }

}  // namespace

SdpaData to_sdpa(const SdpProblem& problem, int digits) {
  SdpaData d;
  std::ostringstream comment;
  comment << "radomult " << problem.system << " q=" << problem.q << " c=" << problem.c << " t=" << problem.t_lambda
          << " N=" << problem.N;
  if (problem.root) comment << " root=" << *problem.root;
  d.comment = comment.str();
  const int m = static_cast<int>(problem.classes.size());
  d.m = m;
  for (const auto& b : problem.blocks) d.block_sizes.push_back(static_cast<int>(b.flags.size()));
  const int diag = static_cast<int>(problem.blocks.size()) + 1;
  d.block_sizes.push_back(-(m + 2));
  for (const auto& l : problem.lambda) d.rhs.push_back(rounded(l, digits));
  d.entries.push_back({0, diag, m + 1, m + 1, Rational(1)});
  d.entries.push_back({0, diag, m + 2, m + 2, Rational(-1)});
  for (int i = 0; i < m; ++i) {
    for (const auto& e : problem.constraints[i]) {
      const Rational v = rounded(e.value, digits);
      if (v != 0) d.entries.push_back({i + 1, static_cast<int>(e.block) + 1, static_cast<int>(e.a) + 1,
                                       static_cast<int>(e.b) + 1, v});
    }
    d.entries.push_back({i + 1, diag, i + 1, i + 1, Rational(1)});
    d.entries.push_back({i + 1, diag, m + 1, m + 1, Rational(1)});
    d.entries.push_back({i + 1, diag, m + 2, m + 2, Rational(-1)});
  }
  return d;
}

void write_sdpa(std::ostream& out, const SdpaData& d, int digits) {
  if (!d.comment.empty()) out << '"' << d.comment << "\"\n";
  out << d.m << " =mdim\n" << d.block_sizes.size() << " =nblocks\n";
  for (std::size_t i = 0; i < d.block_sizes.size(); ++i) out << (i ? " " : "") << d.block_sizes[i];
  out << '\n';
  for (std::size_t i = 0; i < d.rhs.size(); ++i) out << (i ? " " : "") << to_decimal(d.rhs[i], digits);
  out << '\n';
  for (const auto& e : d.entries) {
    out << e.matrix << ' ' << e.block << ' ' << e.i << ' ' << e.j << ' ' << to_decimal(e.value, digits) << '\n';
  }
}

void write_sdpa_file(const std::string& path, const SdpProblem& problem, int digits) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_sdpa(out, to_sdpa(problem, digits), digits);
}

SdpaData read_sdpa(std::istream& in) {
  SdpaData d;
  std::string line;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '"' || line[first] == '*') {
      if (d.comment.empty() && body.empty()) {
        auto text = line.substr(first + 1);
        if (!text.empty() && text.back() == '"') text.pop_back();
        d.comment = text;
      }
      continue;
    }
    body.push_back(line);
  }
  // Numbers may be separated by blanks, commas or braces.
  auto tokens_of = [](std::string s) {
    for (char& ch : s)
      if (ch == ',' || ch == '{' || ch == '}' || ch == '(' || ch == ')') ch = ' ';
    std::istringstream ss(s);
    std::vector<std::string> out;
    for (std::string tok; ss >> tok;) out.push_back(std::move(tok));
    return out;
  };
  if (body.size() < 3) throw std::runtime_error("truncated SDPA file");
  d.m = std::stoi(tokens_of(body[0]).at(0));
  const int nblocks = std::stoi(tokens_of(body[1]).at(0));
  const auto sizes = tokens_of(body[2]);
  if (static_cast<int>(sizes.size()) < nblocks) throw std::runtime_error("SDPA block structure is truncated");
  for (int b = 0; b < nblocks; ++b) d.block_sizes.push_back(std::stoi(sizes[b]));
  std::vector<std::string> rest;
  for (std::size_t i = 3; i < body.size(); ++i)
    for (auto& tok : tokens_of(body[i])) rest.push_back(std::move(tok));
  if (static_cast<int>(rest.size()) < d.m || (rest.size() - d.m) % 5 != 0) {
    throw std::runtime_error("SDPA body has a malformed entry list");
  }
  for (int i = 0; i < d.m; ++i) d.rhs.push_back(parse_decimal(rest[i]));
  for (std::size_t k = d.m; k < rest.size(); k += 5) {
    d.entries.push_back({std::stoi(rest[k]), std::stoi(rest[k + 1]), std::stoi(rest[k + 2]), std::stoi(rest[k + 3]),
                         parse_decimal(rest[k + 4])});
  }
  return d;
}

SdpaData read_sdpa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_sdpa(in);
}

NumericSolution read_solution(std::istream& in, const SdpProblem& problem) {
  NumericSolution sol;
  const std::size_t nb = problem.blocks.size();
  const std::size_t m = problem.classes.size();
  for (const auto& b : problem.blocks) sol.blocks.emplace_back(b.flags.size() * b.flags.size(), 0.0);
  sol.slacks.assign(m, 0.0);
  double a = 0, b = 0;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty solution file");  // dual vector y
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    long mat = 0, blk = 0, i = 0, j = 0;
    double v = 0;
    if (!(ls >> mat)) continue;
    if (!(ls >> blk >> i >> j >> v)) throw std::runtime_error("solution line " + std::to_string(lineno) + " malformed");
    if (mat != 2) continue;  // the dual slack matrix Z is not needed
    if (blk < 1 || static_cast<std::size_t>(blk) > nb + 1 || i < 1 || j < 1) {
      throw std::runtime_error("solution line " + std::to_string(lineno) + " refers to a missing block");
    }
    if (static_cast<std::size_t>(blk) == nb + 1) {
      if (i != j || static_cast<std::size_t>(i) > m + 2) throw std::runtime_error("bad diagonal entry in solution");
      if (static_cast<std::size_t>(i) <= m) sol.slacks[i - 1] = v;
      else if (static_cast<std::size_t>(i) == m + 1) a = v;
      else b = v;
      continue;
    }
    const std::size_t s = problem.blocks[blk - 1].flags.size();
    if (static_cast<std::size_t>(i) > s || static_cast<std::size_t>(j) > s) {
      throw std::runtime_error("solution entry outside block " + std::to_string(blk));
    }
    sol.blocks[blk - 1][(i - 1) * s + (j - 1)] = v;
    sol.blocks[blk - 1][(j - 1) * s + (i - 1)] = v;
  }
  sol.objective = a - b;
  return sol;
}

NumericSolution read_solution_file(const std::string& path, const SdpProblem& problem) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open solution " + path);
  return read_solution(in, problem);
}

// ---------------------------------------------------------------------------
// Exact evaluation

std::vector<Rational> exact_slacks(const SdpProblem& problem, const std::vector<std::vector<Rational>>& q_blocks,
                                   const Rational& bound) {
  std::vector<Rational> out(problem.classes.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t ii = 0; ii < static_cast<std::int64_t>(out.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    Rational s = problem.lambda[i] - bound;
    for (const auto& e : problem.constraints[i]) {
      const std::size_t n = problem.blocks[e.block].flags.size();
      const Rational& qv = q_blocks[e.block][e.a * n + e.b];
      if (qv == 0) continue;
      if (e.a == e.b) s -= e.value * qv;
      else s -= 2 * e.value * qv;
    }
    out[i] = s;
  }
  return out;
}

namespace {

std::size_t find_block(const SdpProblem& problem, const CertificateBlock& b) {
  for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
    const auto& pb = problem.blocks[i];
    if (pb.t == b.type.t && pb.k == b.flag_dim && pb.type.colors == b.type.colors) return i;
  }
  throw CertificateError("certificate block has no counterpart in the problem");
}

std::vector<std::vector<Rational>> zero_blocks(const SdpProblem& problem) {
  std::vector<std::vector<Rational>> q;
  for (const auto& b : problem.blocks) q.emplace_back(b.flags.size() * b.flags.size(), Rational(0));
  return q;
}

SosCertificate empty_certificate(const SdpProblem& problem) {
  SosCertificate cert;
  cert.q = problem.q;
  cert.c = problem.c;
  cert.system = problem.system;
  cert.t_lambda = problem.t_lambda;
  cert.n_lambda = problem.n_lambda;
  cert.N = problem.N;
  cert.root = problem.root;
  return cert;
}

CertificateBlock& block_for(SosCertificate& cert, const SdpBlock& b) {
  for (auto& cb : cert.blocks)
    if (cb.type == b.type && cb.flag_dim == b.k) return cb;
  cert.blocks.push_back(CertificateBlock{b.type, b.k, {}});
  return cert.blocks.back();
}

void add_term(SosCertificate& cert, const SdpBlock& b, const Rational& weight, const std::vector<Rational>& v) {
  SquareTerm term{weight, {}};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) term.coeffs.emplace(b.flags[i], v[i]);
  if (weight == 0 || term.coeffs.empty()) return;
  block_for(cert, b).terms.push_back(std::move(term));
}

Rational min_of(const std::vector<Rational>& xs) { return *std::min_element(xs.begin(), xs.end()); }

}  // namespace

std::vector<std::vector<Rational>> certificate_matrices(const SdpProblem& problem, const SosCertificate& cert) {
  auto q = zero_blocks(problem);
  for (const auto& cb : cert.blocks) {
    const std::size_t bi = find_block(problem, cb);
    const auto& flags = problem.blocks[bi].flags;
    const std::size_t n = flags.size();
    for (const auto& term : cb.terms) {
      std::vector<std::pair<std::size_t, Rational>> v;
      for (const auto& [colors, coef] : term.coeffs) {
        const auto it = std::find(flags.begin(), flags.end(), colors);
        if (it == flags.end()) throw CertificateError("certificate flag missing from its problem block");
        v.emplace_back(static_cast<std::size_t>(it - flags.begin()), coef);
      }
      for (const auto& [a, va] : v)
        for (const auto& [b, vb] : v) q[bi][a * n + b] += term.weight * va * vb;
    }
  }
  return q;
}

// ---------------------------------------------------------------------------
// Rounding

SosCertificate round_solution(const SdpProblem& problem, const NumericSolution& numeric, const RoundOptions& options) {
  if (numeric.blocks.size() != problem.blocks.size()) throw std::invalid_argument("solution has the wrong block count");
  SosCertificate cert = empty_certificate(problem);
  for (std::size_t bi = 0; bi < problem.blocks.size(); ++bi) {
    const std::size_t n = problem.blocks[bi].flags.size();
    const auto& X = numeric.blocks[bi];
    if (X.size() != n * n) throw std::invalid_argument("solution block has the wrong size");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const double scale = std::max({1.0, std::fabs(X[i * n + j]), std::fabs(X[j * n + i])});
        if (std::fabs(X[i * n + j] - X[j * n + i]) > 1e-9 * scale) throw std::invalid_argument("solution block is not symmetric");
      }
    // Numeric LDL^T without pivoting; columns with a non-positive pivot are dropped.
    std::vector<double> L(n * n, 0.0), D(n, 0.0);
    double trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace = std::max(trace, std::fabs(X[i * n + i]));
    for (std::size_t j = 0; j < n; ++j) {
      double d = X[j * n + j];
      for (std::size_t k = 0; k < j; ++k) d -= L[j * n + k] * L[j * n + k] * D[k];
      if (d <= options.pivot_tolerance * std::max(1.0, trace)) continue;
      D[j] = d;
      L[j * n + j] = 1;
      for (std::size_t i = j + 1; i < n; ++i) {
        double s = X[i * n + j];
        for (std::size_t k = 0; k < j; ++k) s -= L[i * n + k] * L[j * n + k] * D[k];
        L[i * n + j] = s / d;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (D[j] == 0) continue;
      const Rational w = approximate(D[j], options.max_denominator);
      if (w <= 0) continue;
      std::vector<Rational> v(n, Rational(0));
      for (std::size_t i = j; i < n; ++i) v[i] = approximate(L[i * n + j], options.max_denominator);
      add_term(cert, problem.blocks[bi], w, v);
    }
  }
  cert.bound = min_of(exact_slacks(problem, certificate_matrices(problem, cert), Rational(0)));
  return cert;
}

// ---------------------------------------------------------------------------
// Exact polish

namespace {

using RMatrix = std::vector<std::vector<Rational>>;

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(RMatrix& A, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < A.size(); ++c) {
    std::size_t p = r;
    while (p < A.size() && A[p][c] == 0) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[r]);
    const Rational inv = 1 / A[r][c];
    for (auto& x : A[r]) x *= inv;
    for (std::size_t i = 0; i < A.size(); ++i) {
      if (i == r || A[i][c] == 0) continue;
      const Rational f = A[i][c];
      for (std::size_t k = c; k < A[i].size(); ++k) A[i][k] -= f * A[r][k];
    }
    pivots.push_back(c);
    ++r;
  }
  A.resize(r);
  return pivots;
}

// Exact LDL^T of a symmetric matrix; nullopt unless it is PSD.
struct ExactLdl {
  std::vector<Rational> d;
  RMatrix columns;  // columns[j] is the j-th column of L
};

std::optional<ExactLdl> exact_ldl(RMatrix A) {
  const std::size_t n = A.size();
  ExactLdl out;
  for (std::size_t j = 0; j < n; ++j) {
    const Rational p = A[j][j];
    if (p < 0) return std::nullopt;
    if (p == 0) {
      for (std::size_t i = j + 1; i < n; ++i)
        if (A[i][j] != 0) return std::nullopt;
      continue;
    }
    std::vector<Rational> l(n, Rational(0));
    for (std::size_t i = j; i < n; ++i) l[i] = A[i][j] / p;
    for (std::size_t i = j + 1; i < n; ++i) {
      if (l[i] == 0) continue;
      for (std::size_t k = j + 1; k < n; ++k) A[i][k] -= p * l[i] * l[k];
    }
    out.d.push_back(p);
    out.columns.push_back(std::move(l));
  }
  return out;
}

struct Face {
  RMatrix P;  // n x r basis of the complement of the rounded kernel (row-major n rows)
  std::size_t r = 0;
};

// Rounded kernel of a numeric PSD block and an exact basis of its complement.
std::optional<Face> face_of(const std::vector<double>& X, std::size_t n, double ker_tol, long long ker_den) {
  Eigen::MatrixXd M(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) M(i, j) = X[i * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  std::vector<int> ker;
  for (int i = 0; i < static_cast<int>(n); ++i)
    if (es.eigenvalues()(i) < ker_tol * top) ker.push_back(i);
  Face f;
  if (ker.empty()) {
    f.r = n;
    f.P.assign(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) f.P[i][i] = 1;
    return f;
  }
  // Numeric RREF of the kernel rows, then rational rounding of its entries.
  Eigen::MatrixXd K(ker.size(), n);
  for (std::size_t r = 0; r < ker.size(); ++r) K.row(r) = es.eigenvectors().col(ker[r]).transpose();
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < ker.size(); ++c) {
    Eigen::Index best;
    const double mx = K.col(c).segment(row, K.rows() - row).cwiseAbs().maxCoeff(&best);
    if (mx < 1e-6) continue;
    K.row(row).swap(K.row(row + best));
    K.row(row) /= K(row, c);
    for (Eigen::Index i = 0; i < K.rows(); ++i)
      if (i != static_cast<Eigen::Index>(row)) K.row(i) -= K(i, c) * K.row(row);
    ++row;
  }
  RMatrix Kr(row, std::vector<Rational>(n, Rational(0)));
  for (std::size_t r = 0; r < row; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const double v = K(r, c);
      if (std::fabs(v) > 1e-9) Kr[r][c] = approximate(v, ker_den);
    }
  const auto pivots = rref(Kr, n);
  std::vector<char> is_pivot(n, 0);
  for (auto p : pivots) is_pivot[p] = 1;
  f.r = n - pivots.size();
  f.P.assign(n, std::vector<Rational>(f.r, Rational(0)));
  std::size_t col = 0;
  for (std::size_t fc = 0; fc < n; ++fc) {
    if (is_pivot[fc]) continue;
    f.P[fc][col] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) f.P[pivots[i]][col] = -Kr[i][fc];
    ++col;
  }
  return f;
}

// A basic solution of A x = b (free variables zero), exactly. nullopt if inconsistent.
std::optional<std::vector<Rational>> basic_solution(RMatrix A, const std::vector<Rational>& b, std::size_t vars) {
  for (std::size_t i = 0; i < A.size(); ++i) A[i].push_back(b[i]);
  const auto pivots = rref(A, vars + 1);
  if (!pivots.empty() && pivots.back() == vars) return std::nullopt;
  std::vector<Rational> x(vars, Rational(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = A[r][vars];
  return x;
}

std::optional<SosCertificate> polish_attempt(const SdpProblem& problem, const NumericSolution& numeric,
                                             const Rational& target, double tight_tol, double ker_tol, long long ker_den,
                                             long long max_den, std::ostringstream& log) {
  const std::size_t nb = problem.blocks.size();
  const std::size_t m = problem.classes.size();
  const double target_d = to_double(target);

  // Classes pinned as tight.
  std::vector<std::size_t> tight;
  for (std::size_t i = 0; i < m; ++i) {
    double s = to_double(problem.lambda[i]) - target_d;
    for (const auto& e : problem.constraints[i]) {
      const std::size_t n = problem.blocks[e.block].flags.size();
      const double qv = numeric.blocks[e.block][e.a * n + e.b];
      s -= (e.a == e.b ? 1.0 : 2.0) * to_double(e.value) * qv;
    }
    if (s < tight_tol) tight.push_back(i);
  }

  // Faces and rounded restricted Gram matrices R0 = P^+ X P^+T.
  std::vector<Face> faces(nb);
  std::vector<RMatrix> R0(nb);
  std::size_t vars = 0;
  std::vector<std::size_t> offset(nb, 0);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t n = problem.blocks[bi].flags.size();
    auto f = face_of(numeric.blocks[bi], n, ker_tol, ker_den);
    if (!f) return std::nullopt;
    faces[bi] = std::move(*f);
    const std::size_t r = faces[bi].r;
    R0[bi].assign(r, std::vector<Rational>(r, Rational(0)));
    if (r > 0) {
      Eigen::MatrixXd P(n, r), X(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) P(i, j) = to_double(faces[bi].P[i][j]);
        for (std::size_t j = 0; j < n; ++j) X(i, j) = numeric.blocks[bi][i * n + j];
      }
      const Eigen::MatrixXd Pp = P.completeOrthogonalDecomposition().pseudoInverse();
      const Eigen::MatrixXd R = Pp * X * Pp.transpose();
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
          R0[bi][i][j] = approximate(0.5 * (R(i, j) + R(j, i)), max_den);
          R0[bi][j][i] = R0[bi][i][j];
        }
    }
    offset[bi] = vars;
    vars += r * (r + 1) / 2;
  }
  // Upper-triangle index: rows i contribute r - i entries each.
  std::vector<std::vector<std::size_t>> row_start(nb);
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t r = faces[bi].r;
    row_start[bi].resize(r + 1, 0);
    for (std::size_t i = 0; i < r; ++i) row_start[bi][i + 1] = row_start[bi][i] + (r - i);
  }
  auto idx = [&](std::size_t bi, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return offset[bi] + row_start[bi][i] + (j - i);
  };

  // Rows: sum_b <R_b, P_b^T M_b(H) P_b> = lambda(H) - target for pinned H.
  RMatrix A(tight.size(), std::vector<Rational>(vars, Rational(0)));
  std::vector<Rational> rhs(tight.size());
  for (std::size_t ti = 0; ti < tight.size(); ++ti) {
    const std::size_t h = tight[ti];
    std::map<std::size_t, RMatrix> B;  // P^T M P per block
    for (const auto& e : problem.constraints[h]) {
      const auto& P = faces[e.block].P;
      const std::size_t r = faces[e.block].r;
      if (r == 0) continue;
      auto& Bb = B[e.block];
      if (Bb.empty()) Bb.assign(r, std::vector<Rational>(r, Rational(0)));
      // M has entries at (a,b) and (b,a).
      for (std::size_t i = 0; i < r; ++i) {
        if (P[e.a][i] == 0 && P[e.b][i] == 0) continue;
        for (std::size_t j = 0; j < r; ++j) {
          Rational add = P[e.a][i] * P[e.b][j];
          if (e.a != e.b) add += P[e.b][i] * P[e.a][j];
          if (add != 0) Bb[i][j] += e.value * add;
        }
      }
    }
    Rational lhs0 = 0;
    for (const auto& [bi, Bb] : B) {
      const std::size_t r = faces[bi].r;
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i; j < r; ++j) {
          const Rational coef = i == j ? Bb[i][i] : Bb[i][j] + Bb[j][i];
          A[ti][idx(bi, i, j)] = coef;
          lhs0 += coef * R0[bi][i][j];
        }
    }
    rhs[ti] = problem.lambda[h] - target - lhs0;
  }
  const auto delta = basic_solution(std::move(A), rhs, vars);
  if (!delta) {
    log << "  pinned equations inconsistent (tight " << tight.size() << ", vars " << vars << ")\n";
    return std::nullopt;
  }

  SosCertificate cert = empty_certificate(problem);
  cert.bound = target;
  for (std::size_t bi = 0; bi < nb; ++bi) {
    const std::size_t r = faces[bi].r;
    if (r == 0) continue;
    RMatrix R = R0[bi];
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = i; j < r; ++j) {
        R[i][j] += (*delta)[idx(bi, i, j)];
        R[j][i] = R[i][j];
      }
    const auto ldl = exact_ldl(R);
    if (!ldl) {
      log << "  corrected block " << bi << " is not PSD\n";
      return std::nullopt;
    }
    const std::size_t n = problem.blocks[bi].flags.size();
    for (std::size_t k = 0; k < ldl->d.size(); ++k) {
      std::vector<Rational> v(n, Rational(0));
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < r; ++i)
          if (faces[bi].P[a][i] != 0 && ldl->columns[k][i] != 0) v[a] += faces[bi].P[a][i] * ldl->columns[k][i];
      add_term(cert, problem.blocks[bi], ldl->d[k], v);
    }
  }
  const auto slacks = exact_slacks(problem, certificate_matrices(problem, cert), target);
  const Rational worst = min_of(slacks);
  if (worst < 0) {
    log << "  minimum slack " << to_double(worst) << " after correction\n";
    return std::nullopt;
  }
  log << "  pinned " << tight.size() << " classes, " << vars << " free entries\n";
  return cert;
}

}  // namespace

PolishResult polish_solution(const SdpProblem& problem, const NumericSolution& numeric, const Rational& target,
                             const PolishOptions& options) {
  if (numeric.blocks.size() != problem.blocks.size()) throw std::invalid_argument("solution has the wrong block count");
  PolishResult result;
  std::ostringstream log;
  for (long long max_den : options.max_denominators)
  for (long long ker_den : options.kernel_denominators)
    for (double tight_tol : options.tight_tolerances)
      for (double ker_tol : options.kernel_tolerances) {
        log << "tight " << tight_tol << " kernel " << ker_tol << " kernel den " << ker_den << " den " << max_den << '\n';
        auto cert = polish_attempt(problem, numeric, target, tight_tol, ker_tol, ker_den, max_den, log);
        if (cert) {
          result.certificate = std::move(cert);
          result.log = log.str();
          return result;
        }
      }
  result.log = log.str();
  return result;
}

void run_external_solver(const std::string& command, const std::string& problem_path, const std::string& solution_path) {
  const std::string full = command + " '" + problem_path + "' '" + solution_path + "'";
  const int status = std::system(full.c_str());
  if (status != 0) throw std::runtime_error("solver command failed (" + std::to_string(status) + "): " + full);
}

std::string default_solver_command() {
  if (const char* env = std::getenv("RADOMULT_SDP_SOLVER"); env && *env) return env;
  return std::string("python3 ") + RADOMULT_TOOLS_DIR + "/sdpa_solve.py";
}

}  // namespace radomult
