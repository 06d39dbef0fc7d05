#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "radomult/field.hpp"
#include "radomult/rational.hpp"

namespace radomult {

/// Points of F_q^n encoded as integers: enc(x) = sum_i index(x_i) * q^(i-1).
///
/// With this encoding the points of span(e_1, ..., e_j) are exactly the
/// encodings below q^j, which the canonical-form and subspace code relies on.
class VectorSpace {
 public:
  VectorSpace(const GaloisField& field, int n);

  const GaloisField& field() const { return field_; }
  int q() const { return field_.order(); }
  int dim() const { return n_; }
  std::uint32_t size() const { return size_; }

  FieldElement coord(std::uint32_t x, int i) const;  // i is 0-based
  std::vector<FieldElement> coords(std::uint32_t x) const;
  std::uint32_t encode(std::span<const FieldElement> coords) const;

  /// e_j for 1 <= j <= n, and e_0 = 0.
  std::uint32_t unit(int j) const;

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t neg(std::uint32_t a) const { return scale(field_.neg(field_.one()), a); }
  std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return add(a, neg(b)); }
  std::uint32_t scale(FieldElement s, std::uint32_t a) const;

  /// Dimension of the linear span of the given points.
  int rank(std::span<const std::uint32_t> vectors) const;

  /// Reduced row echelon basis (pivot = lowest nonzero coordinate, scaled to
  /// 1, cleared in every other row) of the linear span, sorted by pivot.
  std::vector<std::uint32_t> rref(std::span<const std::uint32_t> vectors) const;

  /// All points of the linear span, in no particular order.
  std::vector<std::uint32_t> span_points(std::span<const std::uint32_t> vectors) const;

 private:
  GaloisField field_;
  int n_;
  std::uint32_t size_;
  // Addition and scaling act chunk-wise on groups of `chunk_digits_` digits.
  int chunk_digits_ = 1;
  int chunks_ = 1;
  std::uint32_t chunk_size_ = 1;
  std::vector<std::uint32_t> chunk_pow_;
  std::vector<std::uint16_t> add_chunk_;
  std::vector<std::uint16_t> scale_chunk_;
};

/// Affine map F_q^k -> F_q^n given by the images of e_1..e_k (linear part)
/// and a translation. `t` records the fixedness the map was built for.
struct Morphism {
  int k = 0;
  int n = 0;
  int t = -1;
  std::vector<std::uint32_t> columns;
  std::uint32_t translation = 0;

  std::uint32_t apply(const VectorSpace& target, std::uint32_t x) const;
  /// Images of all q^k domain points in enc order.
  std::vector<std::uint32_t> image_table(const VectorSpace& target) const;
  bool is_injective(const VectorSpace& target) const;
  /// phi(e_j) = e_j for 0 <= j <= t.
  bool is_t_fixed(const VectorSpace& target, int t_check) const;
  /// (*this) o inner.
  Morphism compose(const VectorSpace& target, const Morphism& inner) const;

  /// id_{t,n}: F_q^t -> F_q^n (t >= 0), with n = target.dim().
  static Morphism identity(const VectorSpace& target, int t);
};

/// Canonical representative of a t-fixed k-dimensional subspace of F_q^n.
///
/// For t >= 0 the subspace is span(e_1..e_t) + W' where W' lies in the
/// coordinates t+1..n; `basis` holds the RREF rows of W'. For t = -1 it is
/// offset + V with `basis` the RREF rows of V and `offset` zero on the pivot
/// coordinates of V.
struct SubspaceRep {
  int t = -1;
  int k = 0;
  std::vector<std::uint32_t> basis;
  std::uint32_t offset = 0;

  /// A t-fixed monomorphism F_q^k -> F_q^n whose image is this subspace.
  Morphism to_morphism(const VectorSpace& space) const;

  friend bool operator==(const SubspaceRep&, const SubspaceRep&) = default;
};

/// Gaussian multinomial [n]_q! / ([k_1]_q! ... [k_m]_q! [n - sum k]_q!).
/// Throws std::invalid_argument if some k_i < 0 or sum k_i > n.
BigInt gaussian_multinomial(int n, std::span<const int> ks, int q);
BigInt gaussian_binomial(int n, int k, int q);

/// |Mon_t(k_1..k_m; n)| by the closed q-multinomial formulas.
/// Throws std::invalid_argument when the dimension constraints fail.
BigInt count_mon(int t, std::span<const int> ks, int n, int q);
BigInt count_mon(int t, int k, int n, int q);

/// Number of raw t-fixed affine maps F_q^k -> F_q^n:
/// (q^n)^(k-t) for t >= 0 and (q^n)^(k+1) for t = -1.
BigInt count_raw_morphisms(int t, int k, int n, int q);

/// Every t-fixed k-dimensional subspace of F_q^n, exactly once.
std::vector<SubspaceRep> enumerate_mon(const VectorSpace& space, int t, int k);

/// The t-fixed k-dimensional subspaces of a space together with their point
/// tables, built once and shared by the density and placement code.
struct SubspaceCatalog {
  int t = -1;
  int k = 0;
  std::vector<SubspaceRep> reps;
  /// images[s][x] = phi_s(x) for the monomorphism of subspace s.
  std::vector<std::vector<std::uint32_t>> images;

  static SubspaceCatalog build(const VectorSpace& space, int t, int k);
  std::size_t size() const { return reps.size(); }
};

/// Whether two t-fixed subspaces (given as point lists) meet exactly in the
/// fixed part: span(e_1..e_t) for t >= 0, nothing for t = -1.
bool meet_only_in_fixed(const VectorSpace& space, int t, std::span<const std::uint32_t> a,
                        std::span<const std::uint32_t> b);

/// Ordered index pairs (i, j) of catalogue entries meeting only in the fixed part.
std::vector<std::pair<std::uint32_t, std::uint32_t>> disjoint_pairs(const VectorSpace& space,
                                                                    const SubspaceCatalog& a,
                                                                    const SubspaceCatalog& b);

}  // namespace radomult
