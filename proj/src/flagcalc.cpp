#include "radomult/flagcalc.hpp"

#include <algorithm>
#include <stdexcept>

namespace radomult {

namespace {

std::uint32_t ipow(std::uint32_t b, int e) {
  std::uint32_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

struct Setup {
  GaloisField field;
  VectorSpace space;
};

Setup setup_for(const Coloring& gamma) {
  GaloisField f = GaloisField::make(gamma.q);
  VectorSpace s(f, gamma.n);
  return Setup{f, s};
}

std::vector<std::uint8_t> restricted(const Coloring& gamma, const std::vector<std::uint32_t>& img) {
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t x = 0; x < img.size(); ++x) out[x] = gamma.colors[img[x]];
  return out;
}

// Calls visit(columns) for every ordered tuple of `count` linearly independent
// points that are also independent of `base`.
template <class Visit>
void for_each_independent(const VectorSpace& s, std::vector<std::uint32_t>& cols, int count, Visit&& visit) {
  if (count == 0) {
    visit(cols);
    return;
  }
  const auto span = s.span_points(cols);
  std::vector<char> in_span(s.size(), 0);
  for (auto p : span) in_span[p] = 1;
  for (std::uint32_t a = 0; a < s.size(); ++a) {
    if (in_span[a]) continue;
    cols.push_back(a);
    for_each_independent(s, cols, count - 1, visit);
    cols.pop_back();
  }
}

}  // namespace

FlagType type_of(std::span<const std::uint8_t> flag_colors, int q, int t) {
  if (t < 0) return FlagType{};
  const std::uint32_t len = ipow(static_cast<std::uint32_t>(q), t);
  if (flag_colors.size() < len) throw std::invalid_argument("flag is smaller than its type");
  return FlagType{t, std::vector<std::uint8_t>(flag_colors.begin(), flag_colors.begin() + len)};
}

Rational density(std::span<const Coloring> deltas, const Coloring& gamma, int t) {
  if (deltas.empty()) throw std::invalid_argument("density needs at least one sub-coloring");
  const auto [field, space] = setup_for(gamma);
  std::vector<SubspaceCatalog> cats;
  std::vector<CanonicalKey> want;
  for (const auto& d : deltas) {
    if (d.q != gamma.q || d.c != gamma.c) throw std::invalid_argument("density arguments use different q or c");
    if (d.n < std::max(t, 0) || d.n > gamma.n) throw std::invalid_argument("sub-coloring dimension out of range");
    cats.push_back(SubspaceCatalog::build(space, t, d.n));
    want.push_back(canonicalize(d, t));
  }
  // match[i][s]: subspace s of catalogue i carries a copy of delta_i.
  std::vector<std::vector<char>> match(deltas.size());
  std::vector<std::vector<std::vector<std::uint32_t>>> sorted_pts(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    for (const auto& img : cats[i].images) {
      const Coloring sub(gamma.q, deltas[i].n, gamma.c, restricted(gamma, img));
      match[i].push_back(canonicalize(sub, t).colors == want[i].colors);
      auto pts = img;
      std::sort(pts.begin(), pts.end());
      sorted_pts[i].push_back(std::move(pts));
    }
  }
  BigInt hits = 0, total = 0;
  std::vector<std::size_t> chosen;
  auto dfs = [&](auto&& self, std::size_t i, bool all_match) -> void {
    if (i == deltas.size()) {
      ++total;
      if (all_match) ++hits;
      return;
    }
    for (std::size_t s = 0; s < cats[i].size(); ++s) {
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j)
        ok = meet_only_in_fixed(space, t, sorted_pts[j][chosen[j]], sorted_pts[i][s]);
      if (!ok) continue;
      chosen.push_back(s);
      self(self, i + 1, all_match && match[i][s]);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, true);
  if (total == 0) throw std::invalid_argument("no subspace tuples of the requested dimensions exist");
  return ratio(hits, total);
}

Rational density(const Coloring& delta, const Coloring& gamma, int t) {
  const Coloring ds[1] = {delta};
  return density(ds, gamma, t);
}

Rational degenerate_density(const Coloring& delta, const Coloring& gamma, int t) {
  if (delta.q != gamma.q || delta.c != gamma.c) throw std::invalid_argument("density arguments use different q or c");
  const int tp = std::max(t, 0);
  if (delta.n < tp || gamma.n < tp) throw std::invalid_argument("dimensions below the fixed part");
  const auto [field, space] = setup_for(gamma);
  const auto want = canonicalize(delta, t);
  const int k = delta.n;
  const int free_cols = k - tp;
  const std::uint32_t Q = space.size();
  const std::uint32_t translations = t == -1 ? Q : 1;
  std::vector<std::uint32_t> digits(free_cols, 0);
  BigInt hits = 0, total = 0;
  Morphism m{k, gamma.n, t, std::vector<std::uint32_t>(k), 0};
  for (int j = 1; j <= tp; ++j) m.columns[j - 1] = space.unit(j);
  while (true) {
    for (int j = 0; j < free_cols; ++j) m.columns[tp + j] = digits[j];
    for (std::uint32_t b = 0; b < translations; ++b) {
      m.translation = b;
      const Coloring sub(gamma.q, k, gamma.c, restricted(gamma, m.image_table(space)));
      ++total;
      if (canonicalize(sub, t).colors == want.colors) ++hits;
    }
    int j = 0;
    while (j < free_cols && ++digits[j] == Q) digits[j++] = 0;
    if (j == free_cols) break;
  }
  return ratio(hits, total);
}

Rational FlagVector::total() const {
  Rational s = 0;
  for (const auto& [k, v] : coeffs) s += v;
  return s;
}

FlagVector flag_product(const Coloring& f1, const Coloring& f2, int t, int n) {
  if (f1.q != f2.q || f1.c != f2.c) throw std::invalid_argument("flags use different q or c");
  const auto type = type_of(f1.colors, f1.q, t);
  if (type != type_of(f2.colors, f2.q, t)) throw std::invalid_argument("flags have different types");
  const int need = f1.n + f2.n - std::max(t, 0);
  if (n < need) throw std::invalid_argument("target dimension too small for the product");
  FlagVector out{type, f1.q, f1.c, n, {}};
  const auto fam = enumerate_colorings(f1.q, n, f1.c, t);
  const Coloring pair[2] = {f1, f2};
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const auto g = fam.representative(i);
    if (type_of(g.colors, g.q, t) != type) continue;
    const Rational p = density(pair, g, t);
    if (p != 0) out.coeffs.emplace(g.colors, p);
  }
  return out;
}

std::vector<std::vector<std::uint32_t>> type_placements(const VectorSpace& space, int t, int t_lambda) {
  const int N = space.dim();
  if (t < t_lambda || t > N) throw std::invalid_argument("type dimension must lie between t_lambda and N");
  if (t_lambda < -1 || t_lambda > 0) throw std::invalid_argument("t_lambda must be -1 or 0");
  std::vector<std::vector<std::uint32_t>> out;
  if (t == -1) {
    std::vector<std::uint32_t> id(space.size());
    for (std::uint32_t x = 0; x < space.size(); ++x) id[x] = x;
    out.push_back(std::move(id));
    return out;
  }
  const std::uint32_t translations = t_lambda == -1 ? space.size() : 1;
  std::vector<std::uint32_t> cols;
  for (std::uint32_t b = 0; b < translations; ++b) {
    for_each_independent(space, cols, t, [&](const std::vector<std::uint32_t>& chosen) {
      std::vector<std::uint32_t> full = chosen;
      for (int j = 1; j <= N && static_cast<int>(full.size()) < N; ++j) {
        full.push_back(space.unit(j));
        if (space.rank(full) != static_cast<int>(full.size())) full.pop_back();
      }
      const Morphism psi{N, N, t_lambda, full, b};
      out.push_back(psi.image_table(space));
    });
  }
  return out;
}

BigInt count_type_placements(int q, int N, int t, int t_lambda) {
  if (t == -1) return 1;
  BigInt qn;
  mpz_ui_pow_ui(qn.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(N));
  BigInt r = t_lambda == -1 ? qn : BigInt(1);
  BigInt qj = 1;
  for (int j = 0; j < t; ++j) {
    r *= qn - qj;
    qj *= q;
  }
  return r;
}

Rational downward_coefficient(const Coloring& flag, int t, int t_lambda) {
  const auto [field, space] = setup_for(flag);
  const auto psis = type_placements(space, t, t_lambda);
  const auto key = canonicalize(flag, t);
  unsigned long hits = 0;
  for (const auto& psi : psis) {
    const Coloring moved(flag.q, flag.n, flag.c, restricted(flag, psi));
    if (canonicalize(moved, t).colors == key.colors) ++hits;
  }
  return ratio(hits, static_cast<unsigned long>(psis.size()));
}

std::map<std::vector<std::uint8_t>, Rational> downward_eval(const FlagVector& f, int t_lambda) {
  std::map<std::vector<std::uint8_t>, Rational> out;
  for (const auto& [colors, coeff] : f.coeffs) {
    const Coloring g(f.q, f.dim, f.c, colors);
    const Rational w = coeff * downward_coefficient(g, f.type.t, t_lambda);
    if (w == 0) continue;
    out[canonicalize(g, t_lambda).colors] += w;
  }
  return out;
}

PairDensityEngine::PairDensityEngine(const ColoringFamily& base, int t, int k)
    : base_(&base), t_(t), k_(k), space_(GaloisField::make(base.q), base.n) {
  const int N = base.n;
  if (t < base.t) throw std::invalid_argument("type dimension below t_lambda");
  if (k < std::max(t, 0) || k > N) throw std::invalid_argument("flag dimension out of range");
  flags_ = enumerate_colorings(base.q, k, base.c, t);
  index_.emplace(flags_);
  where_.resize(flags_.size());
  for (std::size_t i = 0; i < flags_.size(); ++i) {
    const auto f = flags_.representative(i);
    auto type = type_of(f.colors, f.q, t);
    auto [it, inserted] = block_by_type_.emplace(type.colors, blocks_.size());
    if (inserted) blocks_.push_back(TypeBlock{std::move(type), {}});
    auto& blk = blocks_[it->second];
    where_[i] = {it->second, blk.flags.size()};
    blk.flags.push_back(i);
  }
  psi_ = type_placements(space_, t, base.t);
  catalog_ = SubspaceCatalog::build(space_, t, k);
  pairs_ = disjoint_pairs(space_, catalog_, catalog_);
  if (pairs_.empty()) {
    throw std::invalid_argument("no pairs of " + std::to_string(k) + "-dimensional " + std::to_string(t) +
                                "-fixed subspaces fit in dimension " + std::to_string(N));
  }
}

std::optional<std::size_t> PairDensityEngine::block_of(const FlagType& type) const {
  if (type.t != t_) return std::nullopt;
  auto it = block_by_type_.find(type.colors);
  if (it == block_by_type_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::pair<std::size_t, std::size_t>> PairDensityEngine::locate(
    std::span<const std::uint8_t> flag_colors) const {
  if (flag_colors.size() != ipow(static_cast<std::uint32_t>(base_->q), k_)) return std::nullopt;
  const auto idx = flags_.find(coloring_rank(flag_colors, base_->c));
  if (!idx) return std::nullopt;
  return where_[*idx];
}

BigInt PairDensityEngine::denominator() const {
  return BigInt(static_cast<unsigned long>(psi_.size())) * static_cast<unsigned long>(pairs_.size());
}

std::vector<PairCount> PairDensityEngine::counts(std::size_t h) const {
  return counts(base_->representative(h).colors);
}

std::vector<PairCount> PairDensityEngine::counts(std::span<const std::uint8_t> colors) const {
  const std::uint32_t Q = space_.size();
  const std::uint32_t type_len = t_ < 0 ? 0 : ipow(static_cast<std::uint32_t>(base_->q), t_);
  std::map<std::size_t, std::vector<std::uint64_t>> dense;
  std::vector<std::uint8_t> moved(Q), sub(catalog_.images.empty() ? 0 : catalog_.images.front().size());
  std::vector<std::uint32_t> pos(catalog_.size());
  std::vector<std::uint8_t> prefix(type_len);
  for (const auto& psi : psi_) {
    for (std::uint32_t x = 0; x < Q; ++x) moved[x] = colors[psi[x]];
    std::copy_n(moved.begin(), type_len, prefix.begin());
    const auto it = block_by_type_.find(prefix);
    if (it == block_by_type_.end()) continue;
    const std::size_t blk = it->second;
    for (std::size_t s = 0; s < catalog_.size(); ++s) {
      const auto& img = catalog_.images[s];
      for (std::size_t x = 0; x < img.size(); ++x) sub[x] = moved[img[x]];
      pos[s] = static_cast<std::uint32_t>(where_[index_->classify(sub)].second);
    }
    const std::size_t size = blocks_[blk].flags.size();
    auto& mat = dense[blk];
    if (mat.empty()) mat.assign(size * size, 0);
    for (const auto& [i, j] : pairs_) ++mat[pos[i] * size + pos[j]];
  }
  std::vector<PairCount> out;
  for (const auto& [blk, mat] : dense) {
    const std::size_t size = blocks_[blk].flags.size();
    for (std::size_t a = 0; a < size; ++a)
      for (std::size_t b = 0; b < size; ++b)
        if (mat[a * size + b] != 0)
          out.push_back(PairCount{static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(a),
                                  static_cast<std::uint32_t>(b), mat[a * size + b]});
  }
  return out;
}

RouteMatrices placement_route_matrices(const PairDensityEngine& engine) {
  const auto& base = engine.base();
  RouteMatrices out(base.size());
  const BigInt den = engine.denominator();
  for (std::size_t h = 0; h < base.size(); ++h)
    for (const auto& pc : engine.counts(h))
      if (pc.count != 0) out[h][{pc.block, pc.a, pc.b}] = ratio(BigInt(static_cast<unsigned long>(pc.count)), den);
  return out;
}

RouteMatrices expansion_route_matrices(const PairDensityEngine& engine) {
  const auto& base = engine.base();
  const int t = engine.t();
  const int k = engine.k();
  const int N = base.n;
  const GaloisField field = GaloisField::make(base.q);
  const VectorSpace space(field, N);
  // t-flags of dimension N; their t-orbit over t_lambda-orbit size is q(G).
  const auto big = enumerate_colorings(base.q, N, base.c, t);
  const ClassIndex base_index(base);
  const auto catalog = SubspaceCatalog::build(space, t, k);
  const auto pairs = disjoint_pairs(space, catalog, catalog);
  const auto& flags = engine.flag_family();

  RouteMatrices out(base.size());
  for (std::size_t g = 0; g < big.size(); ++g) {
    const auto G = big.representative(g);
    const auto blk = engine.block_of(type_of(G.colors, G.q, t));
    if (!blk) continue;
    const std::size_t h = base_index.classify(G);
    const Rational qG = ratio(BigInt(static_cast<unsigned long>(big.orbit_sizes[g])),
                              BigInt(static_cast<unsigned long>(base.orbit_sizes[h])));
    // p_t(F_a, F_b; G) for all a, b: classify the flag carried by every subspace.
    std::vector<std::size_t> pos(catalog.size());
    for (std::size_t s = 0; s < catalog.size(); ++s) {
      const Coloring sub(G.q, k, G.c, restricted(G, catalog.images[s]));
      const auto key = canonicalize(sub, t);
      const auto idx = flags.find(coloring_rank(key.colors, G.c));
      if (!idx) throw std::logic_error("flag missing from the flag family");
      pos[s] = engine.locate(*idx).second;
    }
    const Rational unit = qG / static_cast<unsigned long>(pairs.size());
    const auto b = static_cast<std::uint32_t>(*blk);
    for (const auto& [i, j] : pairs)
      out[h][{b, static_cast<std::uint32_t>(pos[i]), static_cast<std::uint32_t>(pos[j])}] += unit;
  }
  return out;
}

}  // namespace radomult
