#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radomult/linsys.hpp"

namespace radomult {

/// The parameter lambda(gamma) = mono_fraction of L at its natural fixedness.
class ParameterSpec {
 public:
  ParameterSpec(LinearSystem system, int c);

  const LinearSystem& system() const { return evaluator_.system(); }
  int q() const { return system().q(); }
  int c() const { return c_; }
  int t_lambda() const { return evaluator_.t(); }
  int n_lambda() const { return evaluator_.base_dim(); }
  const MonoEvaluator& evaluator() const { return evaluator_; }

  Rational lambda(const Coloring& gamma) const { return evaluator_(gamma); }

  /// Monochromatic solution count of every raw coloring of F_q^{n_lambda},
  /// indexed by coloring_rank, out of solutions_per_coloring().
  const std::vector<std::uint32_t>& mono_table() const { return table_; }
  std::uint64_t solutions_per_coloring() const { return evaluator_.base_solutions().size(); }

 private:
  MonoEvaluator evaluator_;
  int c_;
  std::vector<std::uint32_t> table_;
};

/// Distribution of gamma o phi over all raw t-fixed affine maps
/// phi: F_q^k -> F_q^n. counts[r] is the number of maps whose pullback has
/// coloring_rank r; the counts sum to `maps`.
struct DegenerateProfile {
  int q = 2;
  int k = 0;
  int c = 1;
  int t = -1;
  std::vector<std::uint64_t> counts;
  std::uint64_t maps = 0;
};

/// OpenMP over the linear parts of the maps.
DegenerateProfile degenerate_profile(const Coloring& gamma, int t, int k, int threads = 0);
/// Single-threaded reference with the same output.
DegenerateProfile degenerate_profile_serial(const Coloring& gamma, int t, int k);

/// lambda^d(gamma) = sum_beta lambda(beta) p^d(beta, gamma).
Rational lambda_degenerate(const ParameterSpec& spec, const Coloring& gamma, int threads = 0);
Rational lambda_degenerate(const ParameterSpec& spec, const DegenerateProfile& profile);

/// gamma^{[k]}(x) = gamma(x restricted to the first n coordinates).
Coloring blowup(const Coloring& gamma, int k);

/// gamma (x) beta: beta on the last k coordinates where the first n vanish.
Coloring product(const Coloring& gamma, const Coloring& beta);

/// gamma with gamma(0) replaced by `color`.
Coloring recolor_origin(const Coloring& gamma, int color);

/// The 0-dimensional coloring with the color of gamma(0).
Coloring origin_coloring(const Coloring& gamma);

/// Blow-up bound: lambda^star <= lambda^d(gamma).
inline Rational blowup_bound(const ParameterSpec& spec, const Coloring& gamma, int threads = 0) {
  return lambda_degenerate(spec, gamma, threads);
}

class HypothesisViolated : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MorphismCounting { Raw, Classes };

/// Result of the iterated product bound with its consistency data.
struct IteratedBound {
  Rational lambda_d;                   // lambda^d(gamma)
  Rational lambda_d_origin;            // lambda^d(gamma_0)
  std::vector<Rational> recolored;     // lambda^d(gamma_i), i = 1..c
  BigInt raw_count;                    // raw t-fixed maps F^{n_lambda} -> F^n
  BigInt class_count;                  // t-fixed subspaces of dimension <= n_lambda
  MorphismCounting convention = MorphismCounting::Raw;
  Rational bound;                      // closed form with the chosen convention
  Rational raw_bound;
  Rational class_bound;
  // Present when the direct product computation was run.
  std::optional<Rational> lambda_d_square;  // lambda^d(gamma (x) gamma)
  std::optional<Rational> solved_count;     // D back-solved from the recurrence
};

/// (D x - x0) / (D - 1).
Rational iterated_fixpoint(const Rational& x, const Rational& x0, const BigInt& D);

struct IteratedOptions {
  bool run_oracle = true;
  /// Largest number of raw maps the direct oracle may enumerate.
  std::uint64_t oracle_map_limit = std::uint64_t{1} << 32;
  int threads = 0;
};

/// Iterated product bound for a free-origin construction. Throws HypothesisViolated when
/// lambda^d(gamma_i) differs from lambda^d(gamma) for some color i, and
/// std::runtime_error when the oracle matches neither counting convention.
IteratedBound iterated_bound(const ParameterSpec& spec, const Coloring& gamma, const IteratedOptions& options = {});

/// lambda^d of the depth-fold product gamma (x) ... (x) gamma (depth >= 1).
/// Throws BudgetExceeded when the raw map count exceeds `map_limit`.
Rational iterated_product_lambda(const ParameterSpec& spec, const Coloring& gamma, int depth,
                                 std::uint64_t map_limit = std::uint64_t{1} << 32, int threads = 0);

/// Sidecar manifest of a shipped construction ("key = value" lines).
struct ConstructionManifest {
  std::string name;
  std::string coloring_path;  // resolved against the manifest's directory
  std::string system;
  int c = 2;
  int t = -1;
  Rational bound;
  std::string method;  // "blowup" or "iterated"
  bool free_origin = false;
  std::string note;
};

ConstructionManifest read_manifest(const std::string& path);

/// Loads the coloring, builds the parameter and evaluates the claimed method.
struct ConstructionResult {
  ConstructionManifest manifest;
  Rational computed;
  bool matches = false;
  std::optional<IteratedBound> iterated;
};

ConstructionResult evaluate_construction(const ConstructionManifest& manifest, const IteratedOptions& options = {});

}  // namespace radomult
