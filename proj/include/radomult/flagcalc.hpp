#pragma once

#include <map>
#include <tuple>
#include <optional>
#include <span>
#include <vector>

#include "radomult/coloring.hpp"

namespace radomult {

/// A type is a fully labelled coloring of F_q^t; t = -1 is the empty type.
struct FlagType {
  int t = -1;
  std::vector<std::uint8_t> colors;

  bool empty() const { return t < 0; }
  friend bool operator==(const FlagType&, const FlagType&) = default;
  friend auto operator<=>(const FlagType&, const FlagType&) = default;
};

/// The type of a flag F of type dimension t is F restricted to span(e_1..e_t),
/// which is the first q^t entries of its color array.
FlagType type_of(std::span<const std::uint8_t> flag_colors, int q, int t);

/// p_t(delta_1..delta_m; gamma): probability that a uniform tuple of t-fixed
/// subspaces of the given dimensions, pairwise meeting exactly in the fixed
/// part, induces copies of the deltas. The denominator is the number of such
/// tuples.
Rational density(std::span<const Coloring> deltas, const Coloring& gamma, int t);
Rational density(const Coloring& delta, const Coloring& gamma, int t);

/// p^d_t(delta; gamma) over all raw t-fixed affine maps F^k -> F^n.
Rational degenerate_density(const Coloring& delta, const Coloring& gamma, int t);

/// Finite expansion of an element of the flag algebra of a type at dimension `dim`.
struct FlagVector {
  FlagType type;
  int q = 2;
  int c = 2;
  int dim = 0;
  std::map<std::vector<std::uint8_t>, Rational> coeffs;  // canonical flag colors -> coefficient

  Rational total() const;
};

/// F_1 * F_2 expanded over the canonical t-flags of dimension n with the same type.
FlagVector flag_product(const Coloring& f1, const Coloring& f2, int t, int n);

/// Injective t_lambda-fixed maps F^t -> F^N, each extended to a
/// t_lambda-fixed isomorphism of F^N by appending unit vectors. Stored as
/// point tables of the isomorphisms.
std::vector<std::vector<std::uint32_t>> type_placements(const VectorSpace& space, int t, int t_lambda);
BigInt count_type_placements(int q, int N, int t, int t_lambda);

/// q_{t_lambda}(F): probability that a uniformly random t_lambda-fixed
/// isomorphism psi of F^n gives F o psi t-isomorphic to F.
Rational downward_coefficient(const Coloring& flag, int t, int t_lambda);

/// [[f]]_{t_lambda} at the dimension of f: sum_G f(G) q(G) accumulated onto the
/// t_lambda-class of G. Keys are canonical t_lambda colors.
std::map<std::vector<std::uint8_t>, Rational> downward_eval(const FlagVector& f, int t_lambda);

/// Flags of one type inside a family Gamma^t(k), in ascending rank order.
struct TypeBlock {
  FlagType type;
  std::vector<std::size_t> flags;  // indices into the flag family
};

/// One nonzero entry of the pair-count matrices at a base class.
struct PairCount {
  std::uint32_t block;
  std::uint32_t a;
  std::uint32_t b;
  std::uint64_t count;
};

/// Pair densities [[F_a F_b]] at every base class H of Gamma^{t_lambda}(N), for
/// all flags of type dimension t and flag dimension k.
///
/// The entry for (H, tau, a, b) is count / denominator(), where count sums,
/// over the placements sigma of the type with H o psi_sigma restricted to
/// span(e_1..e_t) equal to tau, the number of ordered pairs of t-fixed
/// k-subspaces meeting exactly in the fixed part that carry F_a and F_b.
class PairDensityEngine {
 public:
  PairDensityEngine(const ColoringFamily& base, int t, int k);
  PairDensityEngine(const PairDensityEngine&) = delete;
  PairDensityEngine& operator=(const PairDensityEngine&) = delete;

  const SubspaceCatalog& catalog() const { return catalog_; }
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }
  const VectorSpace& space() const { return space_; }

  int t() const { return t_; }
  int k() const { return k_; }
  int t_lambda() const { return base_->t; }
  int N() const { return base_->n; }
  const ColoringFamily& base() const { return *base_; }
  const ColoringFamily& flag_family() const { return flags_; }
  const std::vector<TypeBlock>& blocks() const { return blocks_; }
  std::optional<std::size_t> block_of(const FlagType& type) const;
  /// (block, position) of a flag family index.
  std::pair<std::size_t, std::size_t> locate(std::size_t flag_index) const { return where_[flag_index]; }
  /// (block, position) of a canonical flag given by its colors.
  std::optional<std::pair<std::size_t, std::size_t>> locate(std::span<const std::uint8_t> flag_colors) const;

  std::size_t placements() const { return psi_.size(); }
  std::size_t pair_count() const { return pairs_.size(); }
  BigInt denominator() const;

  /// Sparse counts at base class h, sorted by (block, a, b).
  std::vector<PairCount> counts(std::size_t h) const;
  /// The same for an arbitrary coloring of F^N.
  std::vector<PairCount> counts(std::span<const std::uint8_t> colors) const;

 private:
  const ColoringFamily* base_;
  int t_;
  int k_;
  VectorSpace space_;
  ColoringFamily flags_;
  std::optional<ClassIndex> index_;
  std::vector<TypeBlock> blocks_;
  std::map<std::vector<std::uint8_t>, std::size_t> block_by_type_;
  std::vector<std::pair<std::size_t, std::size_t>> where_;
  std::vector<std::vector<std::uint32_t>> psi_;
  SubspaceCatalog catalog_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
};

/// Nonzero entries of the pair-density matrices at every base class:
/// [h] -> (block, a, b) -> value.
using RouteMatrices = std::vector<std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, Rational>>;

/// Reference computation of the same matrices through the flag algebra:
/// expand F_a F_b over the t-flags G of dimension N, weight by q_{t_lambda}(G)
/// and accumulate onto the t_lambda-class of G.
RouteMatrices expansion_route_matrices(const PairDensityEngine& engine);

/// Direct placement route as exact rationals, same layout as expansion_route_matrices.
RouteMatrices placement_route_matrices(const PairDensityEngine& engine);

}  // namespace radomult
