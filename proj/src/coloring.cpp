#include "radomult/coloring.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "radomult/parallel.hpp"

namespace radomult {

namespace {

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) {
      throw InfeasibleEnumeration("raw coloring count exceeds 64 bits");
    }
    r *= base;
  }
  return r;
}

// Maps the rank of gamma to the rank of gamma o psi for one fixed psi, using
// per-chunk lookup tables over groups of consecutive points.
class RankPermuter {
 public:
  RankPermuter(const std::vector<std::uint32_t>& perm, int c, int chunk_points) {
    const auto Q = static_cast<int>(perm.size());
    std::vector<int> inv(Q);
    for (int x = 0; x < Q; ++x) inv[perm[x]] = x;
    std::vector<std::uint64_t> weight(Q);  // c^(Q-1-pos)
    std::uint64_t w = 1;
    for (int pos = Q - 1; pos >= 0; --pos) {
      weight[pos] = w;
      w *= static_cast<std::uint64_t>(c);
    }
    for (int start = 0; start < Q; start += chunk_points) {
      const int len = std::min(chunk_points, Q - start);
      const auto values = static_cast<std::size_t>(checked_pow(c, len));
      std::vector<std::uint64_t> table(values);
      for (std::size_t v = 0; v < values; ++v) {
        std::size_t rest = v;
        std::uint64_t sum = 0;
        // Last point of the chunk is the least significant digit of v.
        for (int i = len - 1; i >= 0; --i) {
          const auto d = static_cast<std::uint64_t>(rest % static_cast<std::size_t>(c));
          rest /= static_cast<std::size_t>(c);
          sum += d * weight[inv[start + i]];
        }
        table[v] = sum;
      }
      lens_.push_back(len);
      tables_.push_back(std::move(table));
    }
    for (int len : lens_) mods_.push_back(checked_pow(c, len));
  }

  // Chunk values of a rank, most significant chunk first.
  void split(Rank r, std::vector<std::uint64_t>& out) const {
    out.resize(lens_.size());
    for (std::size_t j = lens_.size(); j-- > 0;) {
      out[j] = r % mods_[j];
      r /= mods_[j];
    }
  }

  Rank apply(const std::vector<std::uint64_t>& chunks) const {
    Rank r = 0;
    for (std::size_t j = 0; j < chunks.size(); ++j) r += tables_[j][chunks[j]];
    return r;
  }

 private:
  std::vector<int> lens_;
  std::vector<std::uint64_t> mods_;
  std::vector<std::vector<std::uint64_t>> tables_;
};

int chunk_points_for(int c, std::uint64_t max_entries) {
  // With one color every chunk has a single value, so cap the width.
  int g = 1;
  while (g < 16 && checked_pow(c, g + 1) <= max_entries) ++g;
  return g;
}

void check_budget(int q, int n, int c, std::size_t budget) {
  const BigInt raw = raw_coloring_count(q, n, c);
  const BigInt bytes = (raw + 7) / 8;
  if (bytes > BigInt(static_cast<unsigned long>(budget))) {
    std::ostringstream msg;
    msg << "enumerating " << c << "-colorings of F_" << q << "^" << n << " needs " << raw.get_str()
        << " raw colorings (" << bytes.get_str() << " bytes of orbit bitmap), which exceeds the memory budget of "
        << budget << " bytes";
    throw InfeasibleEnumeration(msg.str());
  }
}

ColoringFamily orbit_sweep(const VectorSpace& space, int c, int t) {
  const std::uint32_t Q = space.size();
  const std::uint64_t total = checked_pow(c, Q);
  IsoGroup group(space, t);
  const int g = chunk_points_for(c, 256);
  std::vector<RankPermuter> gens;
  for (const auto& p : group.generators()) gens.emplace_back(p, c, g);

  std::vector<std::uint64_t> seen((total + 63) / 64, 0);
  auto test_and_set = [&](Rank r) {
    std::uint64_t& word = seen[r >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (r & 63);
    if (word & bit) return true;
    word |= bit;
    return false;
  };

  ColoringFamily fam{space.q(), space.dim(), c, t, {}, {}};
  std::vector<Rank> stack;
  std::vector<std::uint64_t> chunks;
  for (Rank r = 0; r < total; ++r) {
    if (seen[r >> 6] == ~std::uint64_t{0}) {
      r |= 63;
      continue;
    }
    if (test_and_set(r)) continue;
    std::uint64_t orbit = 0;
    stack.push_back(r);
    while (!stack.empty()) {
      const Rank x = stack.back();
      stack.pop_back();
      ++orbit;
      if (gens.empty()) continue;
      gens.front().split(x, chunks);
      for (const auto& gen : gens) {
        const Rank y = gen.apply(chunks);
        if (!test_and_set(y)) stack.push_back(y);
      }
    }
    fam.reps.push_back(r);
    fam.orbit_sizes.push_back(orbit);
  }
  return fam;
}

ColoringFamily minimality_scan(const VectorSpace& space, int c, int t, std::size_t budget) {
  const std::uint32_t Q = space.size();
  const std::uint64_t total = checked_pow(c, Q);
  IsoGroup group(space, t);
  const BigInt order = group.order();
  const BigInt element_bytes = order * Q * 2;
  if (element_bytes > BigInt(static_cast<unsigned long>(budget))) {
    throw InfeasibleEnumeration("group element table of " + element_bytes.get_str() +
                                " bytes exceeds the memory budget");
  }
  const auto elements = group.elements(std::numeric_limits<std::size_t>::max());
  // Identity excluded; permutations packed as 16-bit point indices.
  const std::size_t m = elements.size() - 1;
  std::vector<std::uint16_t> perms(m * Q);
  for (std::size_t e = 0; e < m; ++e)
    for (std::uint32_t x = 0; x < Q; ++x) perms[e * Q + x] = static_cast<std::uint16_t>(elements[e + 1][x]);
  const auto group_order = static_cast<std::uint64_t>(elements.size());

  const std::uint64_t block = 1 << 14;
  const std::uint64_t blocks = (total + block - 1) / block;
  std::vector<std::vector<std::pair<Rank, std::uint64_t>>> found(blocks);

#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(blocks); ++b) {
    const Rank lo = static_cast<Rank>(b) * block;
    const Rank hi = std::min<Rank>(lo + block, total);
    std::vector<std::uint8_t> d(Q);
    {
      Rank r = lo;
      for (std::uint32_t x = Q; x-- > 0;) {
        d[x] = static_cast<std::uint8_t>(r % static_cast<Rank>(c));
        r /= static_cast<Rank>(c);
      }
    }
    auto& out = found[static_cast<std::size_t>(b)];
    for (Rank r = lo; r < hi; ++r) {
      std::uint64_t stab = 1;
      bool minimal = true;
      for (std::size_t e = 0; e < m && minimal; ++e) {
        const std::uint16_t* p = perms.data() + e * Q;
        std::uint32_t x = 0;
        for (; x < Q; ++x) {
          const std::uint8_t a = d[p[x]];
          if (a != d[x]) {
            if (a < d[x]) minimal = false;
            break;
          }
        }
        if (x == Q) ++stab;
      }
      if (minimal) out.emplace_back(r, group_order / stab);
      // Odometer increment: the last point is the least significant digit.
      for (std::uint32_t x = Q; x-- > 0;) {
        if (++d[x] < c) break;
        d[x] = 0;
      }
    }
  }

  ColoringFamily fam{space.q(), space.dim(), c, t, {}, {}};
  for (const auto& part : found)
    for (const auto& [r, size] : part) {
      fam.reps.push_back(r);
      fam.orbit_sizes.push_back(size);
    }
  return fam;
}

}  // namespace

Coloring::Coloring(int q_, int n_, int c_, std::vector<std::uint8_t> colors_)
    : q(q_), n(n_), c(c_), colors(std::move(colors_)) {
  if (c < 1 || c > 255) throw std::invalid_argument("color count out of range");
  std::uint64_t expected = 1;
  for (int i = 0; i < n; ++i) expected *= static_cast<std::uint64_t>(q);
  if (colors.size() != expected) {
    throw std::invalid_argument("coloring of F_" + std::to_string(q) + "^" + std::to_string(n) + " needs " +
                                std::to_string(expected) + " entries, got " + std::to_string(colors.size()));
  }
  for (auto v : colors)
    if (v < 1 || v > c) throw std::invalid_argument("color " + std::to_string(v) + " outside 1.." + std::to_string(c));
}

Coloring Coloring::constant(int q, int n, int c, int color) {
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) size *= static_cast<std::uint64_t>(q);
  return Coloring(q, n, c, std::vector<std::uint8_t>(size, static_cast<std::uint8_t>(color)));
}

Rank coloring_rank(std::span<const std::uint8_t> colors, int c) {
  Rank r = 0;
  for (auto v : colors) r = r * static_cast<Rank>(c) + static_cast<Rank>(v - 1);
  return r;
}

Rank coloring_rank(const Coloring& coloring) { return coloring_rank(coloring.colors, coloring.c); }

Coloring coloring_from_rank(int q, int n, int c, Rank rank) {
  std::uint64_t size = 1;
  for (int i = 0; i < n; ++i) size *= static_cast<std::uint64_t>(q);
  std::vector<std::uint8_t> colors(size);
  for (std::size_t x = size; x-- > 0;) {
    colors[x] = static_cast<std::uint8_t>(rank % static_cast<Rank>(c) + 1);
    rank /= static_cast<Rank>(c);
  }
  return Coloring(q, n, c, std::move(colors));
}

BigInt raw_coloring_count(int q, int n, int c) {
  unsigned long points = 1;
  for (int i = 0; i < n; ++i) points *= static_cast<unsigned long>(q);
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(c), points);
  return r;
}

Coloring restrict(const Coloring& gamma, const VectorSpace& space, const Morphism& phi) {
  if (phi.n != gamma.n || space.dim() != gamma.n || space.q() != gamma.q) {
    throw std::invalid_argument("restrict: morphism codomain does not match the coloring");
  }
  const auto img = phi.image_table(space);
  std::vector<std::uint8_t> colors(img.size());
  for (std::size_t x = 0; x < img.size(); ++x) colors[x] = gamma.colors[img[x]];
  return Coloring(gamma.q, phi.k, gamma.c, std::move(colors));
}

IsoGroup::IsoGroup(const VectorSpace& space, int t) : space_(space), t_(t) {
  const int n = space.dim();
  if (t < -1 || t > n) throw std::invalid_argument("fixedness t must satisfy -1 <= t <= n");
  auto perm_of = [&](const Morphism& m) { return m.image_table(space_); };
  auto identity_cols = [&]() {
    std::vector<std::uint32_t> cols(n);
    for (int j = 1; j <= n; ++j) cols[j - 1] = space_.unit(j);
    return cols;
  };
  const int first_free = std::max(t, 0) + 1;
  if (first_free <= n && space.q() > 2) {
    Morphism m{n, n, t, identity_cols(), 0};
    m.columns[first_free - 1] = space_.scale(space_.field().primitive(), space_.unit(first_free));
    generators_.push_back(perm_of(m));
  }
  for (int j = first_free; j <= n; ++j) {
    for (int i = 1; i <= n; ++i) {
      if (i == j) continue;
      Morphism m{n, n, t, identity_cols(), 0};
      m.columns[j - 1] = space_.add(space_.unit(j), space_.unit(i));
      generators_.push_back(perm_of(m));
    }
  }
  if (t == -1) {
    for (int i = 1; i <= n; ++i) {
      Morphism m{n, n, t, identity_cols(), space_.unit(i)};
      generators_.push_back(perm_of(m));
    }
  }
}

BigInt IsoGroup::order() const {
  const int n = space_.dim();
  BigInt qn;
  mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(space_.q()), static_cast<unsigned long>(n));
  BigInt r = t_ == -1 ? qn : BigInt(1);
  BigInt qj = 1;
  for (int j = 0; j < n; ++j) {
    if (j >= std::max(t_, 0)) r *= qn - qj;
    qj *= space_.q();
  }
  return r;
}

std::vector<std::vector<std::uint32_t>> IsoGroup::elements(std::size_t limit) const {
  if (order() > BigInt(static_cast<unsigned long>(std::min<std::size_t>(limit, std::numeric_limits<unsigned long>::max())))) {
    throw std::length_error("isomorphism group of order " + order().get_str() + " exceeds the element limit");
  }
  const int n = space_.dim();
  const int tp = std::max(t_, 0);
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cols(n);
  for (int j = 1; j <= tp; ++j) cols[j - 1] = space_.unit(j);
  std::vector<std::uint32_t> translations;
  if (t_ == -1) {
    for (std::uint32_t b = 0; b < space_.size(); ++b) translations.push_back(b);
  } else {
    translations.push_back(0);
  }
  // Depth-first over the free columns; each must avoid the span of the previous ones.
  auto dfs = [&](auto&& self, int j) -> void {
    if (j > n) {
      Morphism lin{n, n, t_, cols, 0};
      const auto base = lin.image_table(space_);
      for (auto b : translations) {
        std::vector<std::uint32_t> perm(base.size());
        for (std::size_t x = 0; x < base.size(); ++x) perm[x] = space_.add(base[x], b);
        out.push_back(std::move(perm));
      }
      return;
    }
    const std::span<const std::uint32_t> prev(cols.data(), static_cast<std::size_t>(j - 1));
    const auto span = space_.span_points(prev);
    std::vector<char> in_span(space_.size(), 0);
    for (auto p : span) in_span[p] = 1;
    for (std::uint32_t a = 0; a < space_.size(); ++a) {
      if (in_span[a]) continue;
      cols[j - 1] = a;
      self(self, j + 1);
    }
  };
  dfs(dfs, tp + 1);

  // Move the identity to the front.
  std::vector<std::uint32_t> id(space_.size());
  for (std::uint32_t x = 0; x < space_.size(); ++x) id[x] = x;
  auto it = std::find(out.begin(), out.end(), id);
  if (it != out.end()) std::iter_swap(out.begin(), it);
  return out;
}

CanonicalKey canonicalize(const Coloring& gamma, int t, std::size_t node_budget) {
  const GaloisField field = GaloisField::make(gamma.q);
  const VectorSpace space(field, gamma.n);
  const int n = gamma.n;
  const int q = gamma.q;
  if (t < -1 || t > n) throw std::invalid_argument("fixedness t must satisfy -1 <= t <= n");
  const auto& col = gamma.colors;

  struct Cand {
    std::uint32_t b;
    std::vector<std::uint32_t> img;  // images of span(e_1..e_j) in enc order
  };
  std::vector<std::uint8_t> best{};
  std::vector<Cand> cands;
  if (t >= 0) {
    cands.push_back(Cand{0, {0}});
    best.push_back(col[0]);
  } else {
    const std::uint8_t mn = *std::min_element(col.begin(), col.end());
    for (std::uint32_t b = 0; b < space.size(); ++b)
      if (col[b] == mn) cands.push_back(Cand{b, {b}});
    best.push_back(mn);
  }

  std::size_t work = 0;
  std::vector<std::uint32_t> stamp(space.size(), 0);
  std::uint32_t stamp_id = 0;
  std::vector<std::uint8_t> block, best_block;
  for (int j = 1; j <= n; ++j) {
    std::vector<Cand> next;
    best_block.clear();
    bool have_best = false;
    for (const auto& cand : cands) {
      ++stamp_id;
      for (auto p : cand.img) stamp[space.sub(p, cand.b)] = stamp_id;
      auto try_column = [&](std::uint32_t a) {
        if (++work > node_budget) {
          throw BudgetExceeded("canonicalization search exceeded its node budget");
        }
        // Colors of the new block d*e_j + y, d = 1..q-1, y in span(e_1..e_{j-1}).
        block.clear();
        int cmp = have_best ? 0 : -1;
        for (int d = 1; d < q && cmp <= 0; ++d) {
          const std::uint32_t step = space.scale(FieldElement{static_cast<std::uint8_t>(d)}, a);
          for (std::size_t y = 0; y < cand.img.size(); ++y) {
            const std::uint8_t v = col[space.add(cand.img[y], step)];
            if (cmp == 0) {
              const std::uint8_t bv = best_block[block.size()];
              if (v > bv) {
                cmp = 1;
                break;
              }
              if (v < bv) cmp = -1;
            }
            block.push_back(v);
          }
        }
        if (cmp > 0) return;
        Cand ext{cand.b, cand.img};
        ext.img.reserve(cand.img.size() * static_cast<std::size_t>(q));
        for (int d = 1; d < q; ++d) {
          const std::uint32_t step = space.scale(FieldElement{static_cast<std::uint8_t>(d)}, a);
          for (std::size_t y = 0; y < cand.img.size(); ++y) ext.img.push_back(space.add(cand.img[y], step));
        }
        if (cmp < 0) {
          next.clear();
          best_block = block;
          have_best = true;
        }
        next.push_back(std::move(ext));
      };
      if (j <= t) {
        try_column(space.unit(j));
      } else {
        for (std::uint32_t a = 0; a < space.size(); ++a)
          if (stamp[a] != stamp_id) try_column(a);
      }
    }
    best.insert(best.end(), best_block.begin(), best_block.end());
    cands = std::move(next);
  }
  return CanonicalKey{gamma.q, gamma.n, gamma.c, t, std::move(best)};
}

CanonicalKey canonicalize_bruteforce(const Coloring& gamma, int t) {
  const GaloisField field = GaloisField::make(gamma.q);
  const VectorSpace space(field, gamma.n);
  const IsoGroup group(space, t);
  std::vector<std::uint8_t> best = gamma.colors, cur(gamma.colors.size());
  for (const auto& perm : group.elements()) {
    for (std::size_t x = 0; x < cur.size(); ++x) cur[x] = gamma.colors[perm[x]];
    if (cur < best) best = cur;
  }
  return CanonicalKey{gamma.q, gamma.n, gamma.c, t, std::move(best)};
}

std::optional<std::size_t> ColoringFamily::find(Rank canonical_rank) const {
  auto it = std::lower_bound(reps.begin(), reps.end(), canonical_rank);
  if (it == reps.end() || *it != canonical_rank) return std::nullopt;
  return static_cast<std::size_t>(it - reps.begin());
}

ColoringFamily enumerate_colorings(int q, int n, int c, int t, const EnumerationOptions& options) {
  const GaloisField field = GaloisField::make(q);
  if (n < 0 || c < 1) throw std::invalid_argument("enumeration needs n >= 0 and c >= 1");
  if (t < -1 || t > n) throw std::invalid_argument("fixedness t must satisfy -1 <= t <= n");
  const VectorSpace space(field, n);
  if (space.size() > 63) {
    // c^(q^n) would not fit the 64-bit rank for any c >= 2.
    if (c >= 2) throw InfeasibleEnumeration("raw coloring space of F_" + std::to_string(q) + "^" + std::to_string(n) +
                                            " does not fit 64-bit ranks");
  }
  check_budget(q, n, c, options.memory_budget_bytes);
  ThreadScope threads(options.threads);
  EnumerationStrategy s = options.strategy;
  if (s == EnumerationStrategy::Auto) {
    s = max_threads() > 1 ? EnumerationStrategy::MinimalityScan : EnumerationStrategy::OrbitSweep;
  }
  if (s == EnumerationStrategy::OrbitSweep) return orbit_sweep(space, c, t);
  return minimality_scan(space, c, t, options.memory_budget_bytes);
}

ClassIndex::ClassIndex(const ColoringFamily& family, std::size_t dense_limit) : family_(&family) {
  const BigInt raw = raw_coloring_count(family.q, family.n, family.c);
  if (raw > BigInt(static_cast<unsigned long>(dense_limit))) return;
  const GaloisField field = GaloisField::make(family.q);
  const VectorSpace space(field, family.n);
  const IsoGroup group(space, family.t);
  std::vector<std::vector<std::uint32_t>> elements;
  try {
    elements = group.elements(std::size_t{1} << 22);
  } catch (const std::length_error&) {
    return;
  }
  table_.assign(raw.get_ui(), std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint8_t> cur(space.size());
  for (std::size_t i = 0; i < family.size(); ++i) {
    const Coloring rep = family.representative(i);
    for (const auto& perm : elements) {
      for (std::size_t x = 0; x < cur.size(); ++x) cur[x] = rep.colors[perm[x]];
      table_[coloring_rank(cur, family.c)] = static_cast<std::uint32_t>(i);
    }
  }
}

std::size_t ClassIndex::classify(std::span<const std::uint8_t> colors) const {
  if (!table_.empty()) {
    const std::uint32_t id = table_[coloring_rank(colors, family_->c)];
    if (id == std::numeric_limits<std::uint32_t>::max()) throw std::logic_error("class table is incomplete");
    return id;
  }
  const Coloring g(family_->q, family_->n, family_->c, std::vector<std::uint8_t>(colors.begin(), colors.end()));
  const auto key = canonicalize(g, family_->t);
  const auto idx = family_->find(coloring_rank(key.colors, family_->c));
  if (!idx) throw std::logic_error("canonical form missing from the family");
  return *idx;
}

ColoringRecord read_coloring(std::istream& in) {
  long q = 0, n = 0, c = 0, t = 0;
  if (!(in >> q >> n >> c >> t)) throw std::runtime_error("malformed coloring header (expected 'q n c t')");
  if (!is_supported_field_order(static_cast<int>(q))) throw std::runtime_error("unsupported q in coloring header");
  if (n < 0 || n > 12 || c < 1 || c > 255 || t < -1 || t > n) {
    throw std::runtime_error("coloring header values out of range");
  }
  std::uint64_t size = 1;
  for (long i = 0; i < n; ++i) size *= static_cast<std::uint64_t>(q);
  std::vector<std::uint8_t> colors;
  colors.reserve(size);
  long v = 0;
  while (colors.size() < size && in >> v) {
    if (v < 1 || v > c) {
      throw std::runtime_error("color " + std::to_string(v) + " outside 1.." + std::to_string(c));
    }
    colors.push_back(static_cast<std::uint8_t>(v));
  }
  if (colors.size() != size) {
    throw std::runtime_error("coloring body has " + std::to_string(colors.size()) + " entries, expected " +
                             std::to_string(size));
  }
  std::string extra;
  if (in >> extra) throw std::runtime_error("trailing data after coloring body");
  return ColoringRecord{Coloring(static_cast<int>(q), static_cast<int>(n), static_cast<int>(c), std::move(colors)),
                        static_cast<int>(t)};
}

ColoringRecord read_coloring_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open coloring file " + path);
  return read_coloring(in);
}

void write_coloring(std::ostream& out, const Coloring& coloring, int t) {
  out << coloring.q << ' ' << coloring.n << ' ' << coloring.c << ' ' << t << '\n';
  // One row per q consecutive points keeps the files readable.
  for (std::size_t x = 0; x < coloring.colors.size(); ++x) {
    out << static_cast<int>(coloring.colors[x]);
    out << (((x + 1) % static_cast<std::size_t>(coloring.q) == 0) ? '\n' : ' ');
  }
  if (coloring.colors.size() % static_cast<std::size_t>(coloring.q) != 0) out << '\n';
}

void write_coloring_file(const std::string& path, const Coloring& coloring, int t) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write coloring file " + path);
  write_coloring(out, coloring, t);
}

}  // namespace radomult
