#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "radomult/space.hpp"

namespace radomult {

/// A c-coloring of F_q^n: colors[enc(x)] in {1..c}.
struct Coloring {
  int q = 2;
  int n = 0;
  int c = 1;
  std::vector<std::uint8_t> colors;

  Coloring() = default;
  /// Validates length q^n and the color range; throws std::invalid_argument.
  Coloring(int q, int n, int c, std::vector<std::uint8_t> colors);

  static Coloring constant(int q, int n, int c, int color);

  std::uint32_t size() const { return static_cast<std::uint32_t>(colors.size()); }
  int at(std::uint32_t x) const { return colors[x]; }

  friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// Lexicographic rank of a color array: sum (colors[x]-1) c^(Q-1-x), so the
/// origin is the most significant digit and rank order equals array order.
using Rank = std::uint64_t;

Rank coloring_rank(std::span<const std::uint8_t> colors, int c);
Rank coloring_rank(const Coloring& coloring);
Coloring coloring_from_rank(int q, int n, int c, Rank rank);

/// c^(q^n) as an exact integer.
BigInt raw_coloring_count(int q, int n, int c);

/// gamma o phi for a morphism into F_q^n. Throws on dimension mismatch.
Coloring restrict(const Coloring& gamma, const VectorSpace& space, const Morphism& phi);

/// The t-fixed isomorphism group of F_q^n acting on points.
///
/// Generators: diag(w, 1, ..., 1) at the first free coordinate for a
/// primitive w (q > 2), every elementary transvection e_j -> e_j + e_i with
/// j > t, and for t = -1 the translations by e_1..e_n.
class IsoGroup {
 public:
  IsoGroup(const VectorSpace& space, int t);

  int t() const { return t_; }
  const VectorSpace& space() const { return space_; }

  /// Exact group order from the closed formula.
  BigInt order() const;

  /// Point permutations: perm[x] = psi(x).
  const std::vector<std::vector<std::uint32_t>>& generators() const { return generators_; }

  /// Every element as a point permutation, identity first. Throws
  /// std::length_error if the group has more than `limit` elements.
  std::vector<std::vector<std::uint32_t>> elements(std::size_t limit = 4'000'000) const;

 private:
  VectorSpace space_;
  int t_;
  std::vector<std::vector<std::uint32_t>> generators_;
};

/// Canonical key: the lexicographically minimal color array over the
/// t-fixed isomorphism group, plus the parameters it was computed for.
struct CanonicalKey {
  int q = 2;
  int n = 0;
  int c = 1;
  int t = -1;
  std::vector<std::uint8_t> colors;

  Coloring coloring() const { return Coloring(q, n, c, colors); }
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey& a, const CanonicalKey& b) {
    return a.colors <=> b.colors;
  }
};

/// Thrown when a search would exceed its configured work or memory budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lex-min canonical form by a level-wise pruned search over partial maps
/// (translation first, then one column at a time). Throws BudgetExceeded if
/// more than `node_budget` partial maps would be expanded.
CanonicalKey canonicalize(const Coloring& gamma, int t, std::size_t node_budget = 20'000'000);

/// Reference implementation: minimum over the explicit element list.
CanonicalKey canonicalize_bruteforce(const Coloring& gamma, int t);

/// Gamma^t(n): canonical representatives in ascending rank order.
struct ColoringFamily {
  int q = 2;
  int n = 0;
  int c = 1;
  int t = -1;
  std::vector<Rank> reps;
  std::vector<std::uint64_t> orbit_sizes;

  std::size_t size() const { return reps.size(); }
  Coloring representative(std::size_t i) const { return coloring_from_rank(q, n, c, reps[i]); }
  /// Index of a canonical rank, if present.
  std::optional<std::size_t> find(Rank canonical_rank) const;
};

enum class EnumerationStrategy {
  Auto,
  OrbitSweep,      // serial: one bit per raw coloring, orbits by generator BFS
  MinimalityScan,  // OpenMP: keep a raw coloring iff no group element lowers it
};

struct EnumerationOptions {
  EnumerationStrategy strategy = EnumerationStrategy::Auto;
  std::size_t memory_budget_bytes = std::size_t{256} << 20;
  int threads = 0;  // 0 keeps the OpenMP default
};

/// Raised instead of truncating when the raw space does not fit the budget.
class InfeasibleEnumeration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ColoringFamily enumerate_colorings(int q, int n, int c, int t, const EnumerationOptions& options = {});

/// Maps arbitrary colorings of F_q^n to their class index in a family.
/// Uses a dense rank table when c^(q^n) is small, canonicalization otherwise.
class ClassIndex {
 public:
  explicit ClassIndex(const ColoringFamily& family, std::size_t dense_limit = std::size_t{1} << 22);

  const ColoringFamily& family() const { return *family_; }
  std::size_t classify(std::span<const std::uint8_t> colors) const;
  std::size_t classify(const Coloring& coloring) const { return classify(coloring.colors); }
  bool dense() const { return !table_.empty(); }

 private:
  const ColoringFamily* family_;
  std::vector<std::uint32_t> table_;
};

/// Coloring file: "q n c t" then q^n colors in enc order.
struct ColoringRecord {
  Coloring coloring;
  int t = -1;
};

ColoringRecord read_coloring(std::istream& in);
ColoringRecord read_coloring_file(const std::string& path);
void write_coloring(std::ostream& out, const Coloring& coloring, int t);
void write_coloring_file(const std::string& path, const Coloring& coloring, int t);

}  // namespace radomult
