#include "doctest.h"

#include <algorithm>
#include <set>
#include <vector>

#include "radomult/space.hpp"

using namespace radomult;

namespace {

std::uint32_t ipow(std::uint32_t b, int e) {
  std::uint32_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// Distinct image point sets over all injective t-fixed affine maps F^k -> F^n.
std::set<std::vector<std::uint32_t>> brute_subspaces(const VectorSpace& s, int t, int k) {
  std::set<std::vector<std::uint32_t>> out;
  const int tp = std::max(t, 0);
  const int free_cols = k - tp;
  const std::uint32_t Q = s.size();
  const std::uint64_t col_choices = ipow(Q, free_cols);
  const std::uint32_t translations = t == -1 ? Q : 1;
  for (std::uint64_t code = 0; code < col_choices; ++code) {
    Morphism m{k, s.dim(), t, {}, 0};
    for (int j = 1; j <= tp; ++j) m.columns.push_back(s.unit(j));
    std::uint64_t rest = code;
    for (int j = 0; j < free_cols; ++j) {
      m.columns.push_back(static_cast<std::uint32_t>(rest % Q));
      rest /= Q;
    }
    if (s.rank(m.columns) != k) continue;
    for (std::uint32_t b = 0; b < translations; ++b) {
      m.translation = b;
      auto img = m.image_table(s);
      std::sort(img.begin(), img.end());
      out.insert(img);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("gaussian coefficients") {
  CHECK(gaussian_binomial(2, 1, 5) == 6);
  CHECK(gaussian_binomial(3, 1, 3) == 13);
  for (int n = 0; n <= 5; ++n) CHECK(gaussian_binomial(n, 0, 2) == 1);
  for (int q : {2, 3, 4, 5})
    for (int n = 0; n <= 5; ++n)
      for (int k = 0; k <= n; ++k) CHECK(gaussian_binomial(n, k, q) == gaussian_binomial(n, n - k, q));
  const int ks[] = {1, 1};
  // [3]_2! / ([1]! [1]! [1]!) = 1 * 3 * 7
  CHECK(gaussian_multinomial(3, ks, 2) == 21);
  const int bad[] = {2, 2};
  CHECK_THROWS(gaussian_multinomial(3, bad, 2));
  CHECK_THROWS(gaussian_binomial(2, -1, 2));
}

TEST_CASE("count_mon examples") {
  CHECK(count_mon(-1, 1, 2, 5) == 30);
  CHECK(count_mon(-1, 1, 2, 3) == 12);
  for (int n = 0; n <= 3; ++n) CHECK(count_mon(0, n, n, 3) == 1);
  CHECK_THROWS(count_mon(0, 3, 2, 3));
  CHECK_THROWS(count_mon(2, 1, 3, 3));
}

TEST_CASE("raw morphism counts") {
  CHECK(count_raw_morphisms(-1, 1, 1, 3) == 9);
  CHECK(count_raw_morphisms(0, 1, 2, 5) == 25);
  CHECK(count_raw_morphisms(2, 2, 3, 3) == 1);
}

TEST_CASE("enumerate_mon matches brute force and count_mon") {
  for (int q : {2, 3, 5}) {
    const auto f = GaloisField::make(q);
    for (int n = 0; n <= (q == 5 ? 2 : 3); ++n) {
      const VectorSpace s(f, n);
      for (int t = -1; t <= n; ++t) {
        for (int k = std::max(t, 0); k <= n; ++k) {
          CAPTURE(q);
          CAPTURE(n);
          CAPTURE(t);
          CAPTURE(k);
          const auto reps = enumerate_mon(s, t, k);
          CHECK(BigInt(static_cast<unsigned long>(reps.size())) == count_mon(t, k, n, q));
          std::set<std::vector<std::uint32_t>> sets;
          for (const auto& r : reps) {
            const auto m = r.to_morphism(s);
            CHECK(m.is_injective(s));
            if (t >= 0) CHECK(m.is_t_fixed(s, t));
            auto img = m.image_table(s);
            std::sort(img.begin(), img.end());
            sets.insert(img);
          }
          CHECK(sets == brute_subspaces(s, t, k));
        }
      }
    }
  }
}

TEST_CASE("the counting identity between levels") {
  for (int q : {2, 3, 5}) {
    for (int t = -1; t <= 1; ++t) {
      for (int n = std::max(t, 0); n <= 4; ++n) {
        for (int np = std::max(t, 0); np <= n; ++np) {
          for (int k = std::max(t, 0); k <= np; ++k) {
            const int ks[] = {k};
            const BigInt lhs = count_mon(t, ks, np, q) * count_mon(t, np, n, q);
            const BigInt rhs = count_mon(t, ks, n, q) * gaussian_binomial(n - k, np - k, q);
            CAPTURE(q);
            CAPTURE(t);
            CAPTURE(n);
            CAPTURE(np);
            CAPTURE(k);
            CHECK(lhs == rhs);
          }
        }
      }
    }
    // Two-part tuples.
    for (int t = 0; t <= 1; ++t)
      for (int n = 2; n <= 4; ++n)
        for (int np = 2; np <= n; ++np) {
          const int ks[] = {1, 1};
          const int kp = 2 - t;
          const BigInt lhs = count_mon(t, ks, np, q) * count_mon(t, np, n, q);
          const BigInt rhs = count_mon(t, ks, n, q) * gaussian_binomial(n - kp, np - kp, q);
          CHECK(lhs == rhs);
        }
  }
}

TEST_CASE("composition preserves fixedness and injectivity") {
  const auto f = GaloisField::make(3);
  const VectorSpace s2(f, 2), s3(f, 3);
  for (int t = 0; t <= 1; ++t) {
    for (const auto& outer : enumerate_mon(s3, t, 2)) {
      for (const auto& inner : enumerate_mon(s2, t, 1)) {
        const auto mo = outer.to_morphism(s3);
        const auto mi = inner.to_morphism(s2);
        const auto comp = mo.compose(s3, mi);
        CHECK(comp.is_injective(s3));
        CHECK(comp.is_t_fixed(s3, t));
        for (std::uint32_t x = 0; x < 3; ++x) CHECK(comp.apply(s3, x) == mo.apply(s3, mi.apply(s2, x)));
      }
    }
  }
}

TEST_CASE("vector arithmetic and echelon form") {
  const auto f = GaloisField::make(5);
  const VectorSpace s(f, 3);
  for (std::uint32_t a = 0; a < s.size(); a += 7)
    for (std::uint32_t b = 0; b < s.size(); b += 11) {
      const auto ca = s.coords(a), cb = s.coords(b);
      std::vector<FieldElement> sum(3);
      for (int i = 0; i < 3; ++i) sum[i] = f.add(ca[i], cb[i]);
      CHECK(s.add(a, b) == s.encode(sum));
      CHECK(s.sub(s.add(a, b), b) == a);
    }
  CHECK(s.unit(0) == 0);
  CHECK(s.unit(2) == 5);
  const std::uint32_t vs[] = {s.unit(1), s.unit(2), s.add(s.unit(1), s.unit(2))};
  CHECK(s.rank(vs) == 2);
  CHECK(s.span_points(vs).size() == 25);
  CHECK(s.rref(vs) == std::vector<std::uint32_t>{1, 5});
}
