#pragma once

#include <cstdint>
#include <compare>
#include <span>
#include <string>
#include <vector>

namespace radomult {

/// Element of a small Galois field, stored as its table index.
///
/// Index 0 is the additive identity and index 1 the multiplicative identity.
/// For prime powers p^m the index of a_0 + a_1 x + ... + a_{m-1} x^{m-1} is
/// sum_i a_i p^i, where x is a root of the fixed modulus listed at make().
struct FieldElement {
  std::uint8_t index = 0;

  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

/// Arithmetic in GF(q) for q in {2,3,4,5,7,8,9}, backed by lookup tables.
///
/// Immutable after construction; all operations are O(1) table reads, so a
/// single instance may be shared freely across threads.
class GaloisField {
 public:
  /// Builds GF(q). Prime fields use arithmetic mod q; the prime powers use
  ///   GF(4) = F_2[x]/(x^2 + x + 1)
  ///   GF(8) = F_2[x]/(x^3 + x + 1)
  ///   GF(9) = F_3[x]/(x^2 + 1)
  /// Throws std::invalid_argument for any other q.
  static GaloisField make(int q);

  int order() const { return q_; }
  int characteristic() const { return p_; }
  int degree() const { return degree_; }

  FieldElement zero() const { return FieldElement{0}; }
  FieldElement one() const { return FieldElement{1}; }
  FieldElement element(int index) const;

  FieldElement add(FieldElement a, FieldElement b) const {
    return FieldElement{add_[a.index * q_ + b.index]};
  }
  FieldElement mul(FieldElement a, FieldElement b) const {
    return FieldElement{mul_[a.index * q_ + b.index]};
  }
  FieldElement neg(FieldElement a) const { return FieldElement{neg_[a.index]}; }
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }
  /// Throws std::domain_error for the zero element.
  FieldElement inv(FieldElement a) const;

  /// (z mod p) * 1, i.e. the image of an integer under the ring map Z -> GF(q).
  FieldElement embed_integer(long long z) const;

  /// A generator of the multiplicative group.
  FieldElement primitive() const { return FieldElement{primitive_}; }

  /// Raw row-major tables (q*q entries) for hot loops.
  std::span<const std::uint8_t> add_table() const { return add_; }
  std::span<const std::uint8_t> mul_table() const { return mul_; }

  std::string describe() const;

 private:
  GaloisField() = default;

  int q_ = 0;
  int p_ = 0;
  int degree_ = 0;
  std::uint8_t primitive_ = 1;
  std::vector<std::uint8_t> add_;
  std::vector<std::uint8_t> mul_;
  std::vector<std::uint8_t> neg_;
  std::vector<std::uint8_t> inv_;
};

/// True iff q is one of the supported field orders.
bool is_supported_field_order(int q);

}  // namespace radomult
