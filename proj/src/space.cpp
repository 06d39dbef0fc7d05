#include "radomult/space.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace radomult {

namespace {

std::uint32_t ipow(std::uint32_t base, int e) {
  std::uint32_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

BigInt big_pow(int base, long e) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(e));
  return r;
}

BigInt q_factorial(int n, int q) {
  BigInt r = 1;
  for (int i = 1; i <= n; ++i) r *= (big_pow(q, i) - 1) / (q - 1);
  return r;
}

}  // namespace

VectorSpace::VectorSpace(const GaloisField& field, int n) : field_(field), n_(n) {
  if (n < 0) throw std::invalid_argument("negative dimension");
  const int q = field_.order();
  size_ = ipow(static_cast<std::uint32_t>(q), n);
  if (n > 0 && size_ / static_cast<std::uint32_t>(q) != ipow(static_cast<std::uint32_t>(q), n - 1)) {
    throw std::invalid_argument("vector space too large to encode");
  }

  chunk_digits_ = 1;
  while (ipow(q, chunk_digits_ + 1) <= 512) ++chunk_digits_;
  if (n > 0 && chunk_digits_ > n) chunk_digits_ = n;
  chunk_size_ = ipow(static_cast<std::uint32_t>(q), chunk_digits_);
  chunks_ = n == 0 ? 1 : (n + chunk_digits_ - 1) / chunk_digits_;
  chunk_pow_.resize(chunks_);
  for (int c = 0; c < chunks_; ++c) chunk_pow_[c] = ipow(chunk_size_, c);

  const std::uint32_t cs = chunk_size_;
  add_chunk_.resize(static_cast<std::size_t>(cs) * cs);
  scale_chunk_.resize(static_cast<std::size_t>(q) * cs);
  for (std::uint32_t a = 0; a < cs; ++a) {
    for (std::uint32_t b = 0; b < cs; ++b) {
      std::uint32_t x = a, y = b, r = 0, p = 1;
      for (int d = 0; d < chunk_digits_; ++d) {
        r += p * field_.add(FieldElement{static_cast<std::uint8_t>(x % q)},
                            FieldElement{static_cast<std::uint8_t>(y % q)}).index;
        x /= q;
        y /= q;
        p *= q;
      }
      add_chunk_[a * cs + b] = static_cast<std::uint16_t>(r);
    }
    for (int s = 0; s < q; ++s) {
      std::uint32_t x = a, r = 0, p = 1;
      for (int d = 0; d < chunk_digits_; ++d) {
        r += p * field_.mul(FieldElement{static_cast<std::uint8_t>(s)},
                            FieldElement{static_cast<std::uint8_t>(x % q)}).index;
        x /= q;
        p *= q;
      }
      scale_chunk_[s * cs + a] = static_cast<std::uint16_t>(r);
    }
  }
}

FieldElement VectorSpace::coord(std::uint32_t x, int i) const {
  const auto q = static_cast<std::uint32_t>(this->q());
  for (int j = 0; j < i; ++j) x /= q;
  return FieldElement{static_cast<std::uint8_t>(x % q)};
}

std::vector<FieldElement> VectorSpace::coords(std::uint32_t x) const {
  std::vector<FieldElement> out(n_);
  const auto q = static_cast<std::uint32_t>(this->q());
  for (int i = 0; i < n_; ++i) {
    out[i] = FieldElement{static_cast<std::uint8_t>(x % q)};
    x /= q;
  }
  return out;
}

std::uint32_t VectorSpace::encode(std::span<const FieldElement> c) const {
  if (static_cast<int>(c.size()) != n_) throw std::invalid_argument("coordinate count mismatch");
  std::uint32_t x = 0;
  for (int i = n_ - 1; i >= 0; --i) x = x * static_cast<std::uint32_t>(q()) + c[i].index;
  return x;
}

std::uint32_t VectorSpace::unit(int j) const {
  if (j < 0 || j > n_) throw std::out_of_range("unit vector index out of range");
  return j == 0 ? 0 : ipow(static_cast<std::uint32_t>(q()), j - 1);
}

std::uint32_t VectorSpace::add(std::uint32_t a, std::uint32_t b) const {
  if (chunks_ == 1) return add_chunk_[a * chunk_size_ + b];
  std::uint32_t r = 0;
  for (int c = 0; c < chunks_; ++c) {
    r += chunk_pow_[c] * add_chunk_[(a % chunk_size_) * chunk_size_ + (b % chunk_size_)];
    a /= chunk_size_;
    b /= chunk_size_;
  }
  return r;
}

std::uint32_t VectorSpace::scale(FieldElement s, std::uint32_t a) const {
  const std::uint16_t* row = scale_chunk_.data() + static_cast<std::size_t>(s.index) * chunk_size_;
  if (chunks_ == 1) return row[a];
  std::uint32_t r = 0;
  for (int c = 0; c < chunks_; ++c) {
    r += chunk_pow_[c] * row[a % chunk_size_];
    a /= chunk_size_;
  }
  return r;
}

std::vector<std::uint32_t> VectorSpace::rref(std::span<const std::uint32_t> vectors) const {
  std::vector<std::vector<FieldElement>> rows;
  rows.reserve(vectors.size());
  for (auto v : vectors) rows.push_back(coords(v));
  std::vector<std::vector<FieldElement>> basis;
  std::vector<int> pivots;
  for (auto& row : rows) {
    // Reduce against the current basis.
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const FieldElement f = row[pivots[b]];
      if (f.index == 0) continue;
      for (int i = 0; i < n_; ++i) row[i] = field_.sub(row[i], field_.mul(f, basis[b][i]));
    }
    int p = 0;
    while (p < n_ && row[p].index == 0) ++p;
    if (p == n_) continue;
    const FieldElement inv = field_.inv(row[p]);
    for (int i = 0; i < n_; ++i) row[i] = field_.mul(inv, row[i]);
    // Clear the new pivot from earlier rows.
    for (auto& b : basis) {
      const FieldElement f = b[p];
      if (f.index == 0) continue;
      for (int i = 0; i < n_; ++i) b[i] = field_.sub(b[i], field_.mul(f, row[i]));
    }
    basis.push_back(row);
    pivots.push_back(p);
  }
  std::vector<std::size_t> order(basis.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return pivots[a] < pivots[b]; });
  std::vector<std::uint32_t> out;
  out.reserve(basis.size());
  for (auto i : order) out.push_back(encode(basis[i]));
  return out;
}

int VectorSpace::rank(std::span<const std::uint32_t> vectors) const {
  return static_cast<int>(rref(vectors).size());
}

std::vector<std::uint32_t> VectorSpace::span_points(std::span<const std::uint32_t> vectors) const {
  const auto basis = rref(vectors);
  std::vector<std::uint32_t> pts{0};
  for (auto b : basis) {
    const std::size_t m = pts.size();
    for (int s = 1; s < q(); ++s) {
      const std::uint32_t sb = scale(FieldElement{static_cast<std::uint8_t>(s)}, b);
      for (std::size_t i = 0; i < m; ++i) pts.push_back(add(pts[i], sb));
    }
  }
  return pts;
}

std::uint32_t Morphism::apply(const VectorSpace& target, std::uint32_t x) const {
  const auto q = static_cast<std::uint32_t>(target.q());
  std::uint32_t r = translation;
  for (int i = 0; i < k; ++i) {
    const auto d = static_cast<std::uint8_t>(x % q);
    x /= q;
    if (d != 0) r = target.add(r, target.scale(FieldElement{d}, columns[i]));
  }
  return r;
}

std::vector<std::uint32_t> Morphism::image_table(const VectorSpace& target) const {
  const int q = target.q();
  std::vector<std::uint32_t> img{translation};
  img.reserve(ipow(static_cast<std::uint32_t>(q), k));
  for (int j = 0; j < k; ++j) {
    const std::size_t block = img.size();
    for (int d = 1; d < q; ++d) {
      const std::uint32_t step = target.scale(FieldElement{static_cast<std::uint8_t>(d)}, columns[j]);
      for (std::size_t y = 0; y < block; ++y) img.push_back(target.add(img[y], step));
    }
  }
  return img;
}

bool Morphism::is_injective(const VectorSpace& target) const {
  return target.rank(columns) == k;
}

bool Morphism::is_t_fixed(const VectorSpace& target, int t_check) const {
  if (t_check < 0) return true;
  if (translation != 0 || t_check > k) return false;
  for (int j = 1; j <= t_check; ++j)
    if (columns[j - 1] != target.unit(j)) return false;
  return true;
}

Morphism Morphism::compose(const VectorSpace& target, const Morphism& inner) const {
  if (inner.n != k) throw std::invalid_argument("morphism composition dimension mismatch");
  Morphism out;
  out.k = inner.k;
  out.n = n;
  out.t = std::min(t, inner.t);
  out.translation = apply(target, inner.translation);
  out.columns.resize(inner.k);
  for (int j = 0; j < inner.k; ++j) {
    out.columns[j] = target.sub(apply(target, inner.columns[j]), translation);
  }
  return out;
}

Morphism Morphism::identity(const VectorSpace& target, int t) {
  if (t < 0 || t > target.dim()) throw std::invalid_argument("id_{t,n} needs 0 <= t <= n");
  Morphism m;
  m.k = t;
  m.n = target.dim();
  m.t = t;
  for (int j = 1; j <= t; ++j) m.columns.push_back(target.unit(j));
  return m;
}

Morphism SubspaceRep::to_morphism(const VectorSpace& space) const {
  Morphism m;
  m.k = k;
  m.n = space.dim();
  m.t = t;
  m.translation = t < 0 ? offset : 0;
  for (int j = 1; j <= std::max(t, 0); ++j) m.columns.push_back(space.unit(j));
  for (auto b : basis) m.columns.push_back(b);
  return m;
}

BigInt gaussian_multinomial(int n, std::span<const int> ks, int q) {
  if (q < 2) throw std::invalid_argument("q must be at least 2");
  int total = 0;
  for (int k : ks) {
    if (k < 0) throw std::invalid_argument("negative part in Gaussian multinomial");
    total += k;
  }
  if (total > n || n < 0) throw std::invalid_argument("parts exceed n in Gaussian multinomial");
  BigInt den = q_factorial(n - total, q);
  for (int k : ks) den *= q_factorial(k, q);
  BigInt num = q_factorial(n, q);
  return num / den;
}

BigInt gaussian_binomial(int n, int k, int q) {
  const int ks[1] = {k};
  return gaussian_multinomial(n, ks, q);
}

BigInt count_mon(int t, std::span<const int> ks, int n, int q) {
  if (t < -1) throw std::invalid_argument("t must be at least -1");
  if (ks.empty()) throw std::invalid_argument("count_mon needs at least one dimension");
  const int tp = std::max(t, 0);
  long kprime = 0;
  for (int k : ks) {
    if (k < tp) throw std::invalid_argument("subspace dimension below t");
    kprime += k;
  }
  kprime -= static_cast<long>(ks.size() - 1) * tp;
  if (n < kprime) throw std::invalid_argument("n too small for the requested subspaces");
  if (t == -1) {
    return big_pow(q, n - kprime) * gaussian_multinomial(n, ks, q);
  }
  std::vector<int> shifted(ks.begin(), ks.end());
  for (int& k : shifted) k -= t;
  return gaussian_multinomial(n - t, shifted, q);
}

BigInt count_mon(int t, int k, int n, int q) {
  const int ks[1] = {k};
  return count_mon(t, ks, n, q);
}

BigInt count_raw_morphisms(int t, int k, int n, int q) {
  const int tp = std::max(t, 0);
  if (t < -1 || k < tp || n < tp) throw std::invalid_argument("raw morphism count needs n, k >= t^+");
  const BigInt base = big_pow(q, n);
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(t >= 0 ? k - t : k + 1));
  return r;
}

namespace {

// Calls `emit` with the RREF rows of every r-dimensional subspace of the
// coordinates lo..n-1 (0-based).
template <class Emit>
void for_each_rref(const VectorSpace& space, int lo, int r, Emit&& emit) {
  const int n = space.dim();
  const int q = space.q();
  std::vector<int> piv(r);
  std::iota(piv.begin(), piv.end(), lo);
  if (r == 0) {
    emit(std::vector<std::uint32_t>{});
    return;
  }
  if (lo + r > n) return;
  while (true) {
    // Free slots: (row, column) with column > pivot of the row and not a pivot.
    std::vector<std::pair<int, int>> free;
    for (int i = 0; i < r; ++i)
      for (int c = piv[i] + 1; c < n; ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free.emplace_back(i, c);
    std::vector<int> val(free.size(), 0);
    while (true) {
      std::vector<std::vector<FieldElement>> rows(r, std::vector<FieldElement>(n));
      for (int i = 0; i < r; ++i) rows[i][piv[i]] = space.field().one();
      for (std::size_t f = 0; f < free.size(); ++f)
        rows[free[f].first][free[f].second] = FieldElement{static_cast<std::uint8_t>(val[f])};
      std::vector<std::uint32_t> enc(r);
      for (int i = 0; i < r; ++i) enc[i] = space.encode(rows[i]);
      emit(enc);
      std::size_t f = 0;
      while (f < val.size() && ++val[f] == q) val[f++] = 0;
      if (f == val.size()) break;
    }
    // Next pivot combination.
    int i = r - 1;
    while (i >= 0 && piv[i] == n - r + i) --i;
    if (i < 0) break;
    ++piv[i];
    for (int j = i + 1; j < r; ++j) piv[j] = piv[j - 1] + 1;
  }
}

int pivot_of(const VectorSpace& space, std::uint32_t v) {
  for (int i = 0; i < space.dim(); ++i)
    if (space.coord(v, i).index != 0) return i;
  return -1;
}

}  // namespace

std::vector<SubspaceRep> enumerate_mon(const VectorSpace& space, int t, int k) {
  const int n = space.dim();
  const int tp = std::max(t, 0);
  if (t < -1 || k < tp || k > n) throw std::invalid_argument("enumerate_mon needs t^+ <= k <= n");
  std::vector<SubspaceRep> out;
  if (t >= 0) {
    for_each_rref(space, t, k - t, [&](const std::vector<std::uint32_t>& rows) {
      out.push_back(SubspaceRep{t, k, rows, 0});
    });
    return out;
  }
  for_each_rref(space, 0, k, [&](const std::vector<std::uint32_t>& rows) {
    std::vector<bool> is_pivot(n, false);
    for (auto r : rows) is_pivot[pivot_of(space, r)] = true;
    std::vector<int> free_coords;
    for (int i = 0; i < n; ++i)
      if (!is_pivot[i]) free_coords.push_back(i);
    const int q = space.q();
    std::vector<int> val(free_coords.size(), 0);
    while (true) {
      std::vector<FieldElement> c(n);
      for (std::size_t f = 0; f < free_coords.size(); ++f)
        c[free_coords[f]] = FieldElement{static_cast<std::uint8_t>(val[f])};
      out.push_back(SubspaceRep{-1, k, rows, space.encode(c)});
      std::size_t f = 0;
      while (f < val.size() && ++val[f] == q) val[f++] = 0;
      if (f == val.size()) break;
    }
  });
  return out;
}

SubspaceCatalog SubspaceCatalog::build(const VectorSpace& space, int t, int k) {
  SubspaceCatalog cat;
  cat.t = t;
  cat.k = k;
  cat.reps = enumerate_mon(space, t, k);
  cat.images.reserve(cat.reps.size());
  for (const auto& rep : cat.reps) {
    cat.images.push_back(rep.to_morphism(space).image_table(space));
  }
  return cat;
}

bool meet_only_in_fixed(const VectorSpace& space, int t, std::span<const std::uint32_t> a,
                        std::span<const std::uint32_t> b) {
  std::vector<char> mark(space.size(), 0);
  for (auto x : a) mark[x] = 1;
  const std::uint32_t fixed_bound = t < 0 ? 0 : ipow(static_cast<std::uint32_t>(space.q()), t);
  for (auto y : b) {
    if (mark[y] && y >= fixed_bound) return false;
  }
  return true;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> disjoint_pairs(const VectorSpace& space,
                                                                    const SubspaceCatalog& a,
                                                                    const SubspaceCatalog& b) {
  if (a.t != b.t) throw std::invalid_argument("catalogues with different fixedness");
  const int t = a.t;
  const std::uint32_t fixed_bound = t < 0 ? 0 : ipow(static_cast<std::uint32_t>(space.q()), t);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  std::vector<std::uint32_t> mark(space.size(), 0);
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (auto x : a.images[i]) mark[x] = i + 1;
    for (std::uint32_t j = 0; j < b.size(); ++j) {
      bool ok = true;
      for (auto y : b.images[j]) {
        if (mark[y] == i + 1 && y >= fixed_bound) {
          ok = false;
          break;
        }
      }
      if (ok) out.emplace_back(i, j);
    }
  }
  return out;
}

}  // namespace radomult
