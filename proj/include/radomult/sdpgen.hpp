#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radomult/bounds.hpp"
#include "radomult/certificate.hpp"

namespace radomult {

/// One PSD block: the flags of a single type, in the engine's order.
struct SdpBlock {
  int t = -1;
  int k = 0;
  FlagType type;
  std::vector<std::vector<std::uint8_t>> flags;  // canonical colors
};

/// Upper-triangle entry (a <= b) of M_tau(H) for one block.
struct SdpEntry {
  std::uint32_t block;
  std::uint32_t a;
  std::uint32_t b;
  Rational value;

  friend bool operator==(const SdpEntry&, const SdpEntry&) = default;
};

/// maximize lambda' subject to lambda(H) - lambda' - sum_tau <Q_tau, M_tau(H)> >= 0
/// for every base class H, with Q_tau PSD.
struct SdpProblem {
  int q = 2;
  int c = 2;
  std::string system;
  int t_lambda = -1;
  int n_lambda = 1;
  int N = 2;
  std::optional<int> root;
  std::vector<std::vector<std::uint8_t>> classes;  // canonical colors, ascending
  std::vector<Rational> lambda;
  std::vector<SdpBlock> blocks;
  std::vector<std::vector<SdpEntry>> constraints;  // per class, sorted by (block, a, b)

  Rational trivial_bound() const;
};

struct AssembleOptions {
  /// Type dimensions to include; unset means every t with t_lambda <= t <= N-2,
  /// an empty list gives the linear relaxation without squares.
  std::optional<std::vector<int>> type_dims;
  /// For t_lambda = 0: restrict to classes and types whose origin has this color.
  std::optional<int> root;
  int threads = 0;
  bool serial = false;
};

/// Builds the problem over the family Gamma^{t_lambda}(N) of the parameter.
SdpProblem assemble(const ParameterSpec& spec, const ColoringFamily& family, const AssembleOptions& options = {});

/// Raw SDPA data; values are exact rationals (decimals when read from a file).
struct SdpaData {
  std::string comment;
  int m = 0;
  std::vector<int> block_sizes;
  std::vector<Rational> rhs;
  struct Entry {
    int matrix;
    int block;
    int i;
    int j;
    Rational value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };
  std::vector<Entry> entries;
};

/// The problem in the dual form tr(A_H X) = lambda(H) with
/// X = blockdiag(Q_tau..., diag(s_H..., a, b)) and objective a - b. Entries
/// are rounded to `digits` significant decimal digits.
SdpaData to_sdpa(const SdpProblem& problem, int digits = 25);

/// SDPA sparse format; matrix 0 is the objective.
void write_sdpa(std::ostream& out, const SdpaData& data, int digits = 25);
void write_sdpa_file(const std::string& path, const SdpProblem& problem, int digits = 25);

SdpaData read_sdpa(std::istream& in);
SdpaData read_sdpa_file(const std::string& path);

/// Numeric primal matrix X from a CSDP-style solution file, split per block.
struct NumericSolution {
  std::vector<std::vector<double>> blocks;  // dense row-major s x s, one per SdpBlock
  std::vector<double> slacks;               // s_H per class
  double objective = 0;                     // a - b
};

NumericSolution read_solution(std::istream& in, const SdpProblem& problem);
NumericSolution read_solution_file(const std::string& path, const SdpProblem& problem);

/// Exact slack lambda(H) - bound - sum <Q, M(H)> of every class for exact
/// block matrices (dense row-major).
std::vector<Rational> exact_slacks(const SdpProblem& problem, const std::vector<std::vector<Rational>>& q_blocks,
                                   const Rational& bound);

/// Square terms of a certificate to exact block matrices.
std::vector<std::vector<Rational>> certificate_matrices(const SdpProblem& problem, const SosCertificate& cert);

struct RoundOptions {
  long long max_denominator = 1'000'000;
  double pivot_tolerance = 1e-9;
};

/// LDL-factor each numeric block, round the factors, drop non-positive
/// pivots and set the bound to the exact minimum slack. The result always
/// verifies at its own bound.
SosCertificate round_solution(const SdpProblem& problem, const NumericSolution& numeric, const RoundOptions& options = {});

struct PolishOptions {
  /// Denominator budgets for the restricted Gram matrices, smallest first.
  std::vector<long long> max_denominators = {1'000, 1'000'000, 1'000'000'000};
  /// Denominator budgets tried for the rounded kernel vectors.
  std::vector<long long> kernel_denominators = {1'000, 100'000};
  /// Tried in order until one succeeds.
  std::vector<double> tight_tolerances = {1e-6, 1e-7, 1e-5, 1e-8, 1e-4};
  std::vector<double> kernel_tolerances = {1e-6, 1e-7, 1e-5, 1e-8, 1e-4};
};

struct PolishResult {
  std::optional<SosCertificate> certificate;
  std::string log;
};

/// Exact certificate at `target`: pins the classes whose numeric slack is
/// near zero, rounds the numeric kernel of every block to a rational
/// subspace, restricts Q to its complement and applies an exact basic
/// correction that makes the pinned classes tight at `target`.
PolishResult polish_solution(const SdpProblem& problem, const NumericSolution& numeric, const Rational& target,
                             const PolishOptions& options = {});

/// Invokes an external solver: `command problem.dat-s solution.sol`.
/// Throws std::runtime_error when it exits nonzero.
void run_external_solver(const std::string& command, const std::string& problem_path, const std::string& solution_path);

/// Default solver command: $RADOMULT_SDP_SOLVER, else the bundled cvxpy adapter.
std::string default_solver_command();

}  // namespace radomult
