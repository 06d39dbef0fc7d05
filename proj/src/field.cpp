#include "radomult/field.hpp"

#include <array>
#include <stdexcept>

namespace radomult {

namespace {

struct Modulus {
  int q;
  int p;
  int degree;
  // Low coefficients c_0..c_{m-1} of the monic modulus x^m + sum c_i x^i.
  std::array<int, 3> low;
};

constexpr std::array<Modulus, 3> kModuli{{
    {4, 2, 2, {1, 1, 0}},  // x^2 + x + 1
    {8, 2, 3, {1, 1, 0}},  // x^3 + x + 1
    {9, 3, 2, {1, 0, 0}},  // x^2 + 1
}};

std::vector<int> digits(int index, int p, int m) {
  std::vector<int> d(m);
  for (int i = 0; i < m; ++i) {
    d[i] = index % p;
    index /= p;
  }
  return d;
}

int undigits(const std::vector<int>& d, int p) {
  int v = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) v = v * p + d[i];
  return v;
}

int poly_mul_mod(int a, int b, const Modulus& mod) {
  const int p = mod.p;
  const int m = mod.degree;
  auto da = digits(a, p, m);
  auto db = digits(b, p, m);
  std::vector<int> prod(2 * m - 1, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
  // x^m = -sum low_i x^i
  for (int k = 2 * m - 2; k >= m; --k) {
    const int c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (int i = 0; i < m; ++i) {
      prod[k - m + i] = ((prod[k - m + i] - c * mod.low[i]) % p + p) % p;
    }
  }
  prod.resize(m);
  return undigits(prod, p);
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

}  // namespace

bool is_supported_field_order(int q) {
  return q == 2 || q == 3 || q == 4 || q == 5 || q == 7 || q == 8 || q == 9;
}

GaloisField GaloisField::make(int q) {
  if (!is_supported_field_order(q)) {
    throw std::invalid_argument("unsupported field order q=" + std::to_string(q) +
                                " (supported: 2,3,4,5,7,8,9)");
  }
  GaloisField f;
  f.q_ = q;
  f.add_.resize(q * q);
  f.mul_.resize(q * q);
  f.neg_.resize(q);
  f.inv_.assign(q, 0);

  if (is_prime(q)) {
    f.p_ = q;
    f.degree_ = 1;
    for (int a = 0; a < q; ++a) {
      for (int b = 0; b < q; ++b) {
        f.add_[a * q + b] = static_cast<std::uint8_t>((a + b) % q);
        f.mul_[a * q + b] = static_cast<std::uint8_t>((a * b) % q);
      }
    }
  } else {
    const Modulus* mod = nullptr;
    for (const auto& m : kModuli)
      if (m.q == q) mod = &m;
    f.p_ = mod->p;
    f.degree_ = mod->degree;
    for (int a = 0; a < q; ++a) {
      auto da = digits(a, f.p_, f.degree_);
      for (int b = 0; b < q; ++b) {
        auto db = digits(b, f.p_, f.degree_);
        std::vector<int> s(f.degree_);
        for (int i = 0; i < f.degree_; ++i) s[i] = (da[i] + db[i]) % f.p_;
        f.add_[a * q + b] = static_cast<std::uint8_t>(undigits(s, f.p_));
        f.mul_[a * q + b] = static_cast<std::uint8_t>(poly_mul_mod(a, b, *mod));
      }
    }
  }

  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      if (f.add_[a * q + b] == 0) f.neg_[a] = static_cast<std::uint8_t>(b);
      if (f.mul_[a * q + b] == 1) f.inv_[a] = static_cast<std::uint8_t>(b);
    }
  }

  // Smallest index whose powers reach every nonzero element.
  for (int g = 1; g < q; ++g) {
    int x = 1;
    int order = 0;
    do {
      x = f.mul_[x * q + g];
      ++order;
    } while (x != 1);
    if (order == q - 1) {
      f.primitive_ = static_cast<std::uint8_t>(g);
      break;
    }
  }
  return f;
}

FieldElement GaloisField::element(int index) const {
  if (index < 0 || index >= q_) throw std::out_of_range("field element index out of range");
  return FieldElement{static_cast<std::uint8_t>(index)};
}

FieldElement GaloisField::inv(FieldElement a) const {
  if (a.index == 0) throw std::domain_error("inverse of zero");
  return FieldElement{inv_[a.index]};
}

FieldElement GaloisField::embed_integer(long long z) const {
  long long r = z % p_;
  if (r < 0) r += p_;
  // r * 1: prime-field elements occupy indices 0..p-1 in both encodings.
  return FieldElement{static_cast<std::uint8_t>(r)};
}

std::string GaloisField::describe() const {
  switch (q_) {
    case 4: return "GF(4) = F_2[x]/(x^2+x+1)";
    case 8: return "GF(8) = F_2[x]/(x^3+x+1)";
    case 9: return "GF(9) = F_3[x]/(x^2+1)";
    default: return "GF(" + std::to_string(q_) + ") = Z/" + std::to_string(q_);
  }
}

}  // namespace radomult
