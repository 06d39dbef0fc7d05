#include "radomult/bounds.hpp"

#include <omp.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "radomult/parallel.hpp"

namespace radomult {

namespace {

constexpr std::size_t kProfileLimit = std::size_t{1} << 26;

std::uint64_t checked_pow(std::uint64_t base, int e, const char* what) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > UINT64_MAX / base) throw BudgetExceeded(std::string(what) + " does not fit in 64 bits");
    r *= base;
  }
  return r;
}

struct ProfileShape {
  std::uint64_t linear_parts = 0;  // choices of the free columns
  std::uint64_t translations = 0;
  int free_columns = 0;
  std::size_t ranks = 0;
};

ProfileShape profile_shape(const Coloring& gamma, int t, int k) {
  const int tp = std::max(t, 0);
  if (t < -1 || k < tp || gamma.n < tp) throw std::invalid_argument("degenerate profile needs k, n >= t^+");
  const std::uint64_t points = checked_pow(static_cast<std::uint64_t>(gamma.q), gamma.n, "space size");
  ProfileShape s;
  s.free_columns = k - tp;
  s.linear_parts = checked_pow(points, s.free_columns, "map count");
  s.translations = t < 0 ? points : 1;
  checked_pow(points, s.free_columns + (t < 0 ? 1 : 0), "map count");
  const std::uint64_t domain = checked_pow(static_cast<std::uint64_t>(gamma.q), k, "domain size");
  std::uint64_t ranks = 1;
  for (std::uint64_t i = 0; i < domain; ++i) {
    if (ranks > kProfileLimit / static_cast<std::uint64_t>(gamma.c)) {
      throw BudgetExceeded("pullback colorings of F_q^k are too many to tabulate");
    }
    ranks *= static_cast<std::uint64_t>(gamma.c);
  }
  s.ranks = static_cast<std::size_t>(ranks);
  return s;
}

// Tallies every map whose free columns are given by linear indices in [lo, hi).
void tally_linear_parts(const Coloring& gamma, const VectorSpace& space, int t, int k, std::uint64_t lo,
                        std::uint64_t hi, std::uint64_t translations, std::vector<std::uint64_t>& counts) {
  const int tp = std::max(t, 0);
  const std::uint32_t q = static_cast<std::uint32_t>(space.q());
  const std::uint32_t domain = [&] {
    std::uint32_t d = 1;
    for (int i = 0; i < k; ++i) d *= q;
    return d;
  }();
  const std::uint64_t c = static_cast<std::uint64_t>(gamma.c);
  std::vector<std::uint64_t> weight(domain);
  for (std::uint32_t x = 0; x < domain; ++x) {
    std::uint64_t w = 1;
    for (std::uint32_t y = x + 1; y < domain; ++y) w *= c;
    weight[x] = w;
  }

  std::vector<std::uint32_t> columns(static_cast<std::size_t>(k));
  for (int j = 0; j < tp; ++j) columns[j] = space.unit(j + 1);
  std::vector<std::uint32_t> lin(domain);
  // Split the coordinates into a low part indexed by table and a high part.
  int lo_dim = 0;
  std::uint32_t lo_size = 1;
  while (lo_dim < space.dim() && lo_size * q <= 4096) lo_size *= q, ++lo_dim;
  const VectorSpace lo_space(space.field(), lo_dim);
  const VectorSpace hi_space(space.field(), space.dim() - lo_dim);
  const std::uint32_t hi_size = hi_space.size();
  std::vector<std::uint32_t> lo_table(translations > 1 ? static_cast<std::size_t>(domain) * lo_size : 0);
  std::vector<std::uint32_t> hi_base(domain);
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    std::uint64_t rest = idx;
    for (int j = tp; j < k; ++j) {
      columns[j] = static_cast<std::uint32_t>(rest % space.size());
      rest /= space.size();
    }
    // lin[x] = sum_i x_i a_i, built digit by digit in enc order.
    lin[0] = 0;
    std::uint32_t block = 1;
    for (int j = 0; j < k; ++j) {
      for (std::uint32_t d = 1; d < q; ++d) {
        const std::uint32_t step = space.scale(FieldElement{static_cast<std::uint8_t>(d)}, columns[j]);
        for (std::uint32_t y = 0; y < block; ++y) lin[d * block + y] = space.add(lin[y], step);
      }
      block *= q;
    }
    if (translations == 1) {
      std::uint64_t rank = 0;
      for (std::uint32_t x = 0; x < domain; ++x) rank += static_cast<std::uint64_t>(gamma.colors[lin[x]] - 1) * weight[x];
      ++counts[rank];
      continue;
    }
    // b = b_lo + b_hi * lo_size; the low digits of b + lin[x] come from a
    // table, the high digits are fixed while b_lo runs.
    for (std::uint32_t x = 0; x < domain; ++x) {
      const std::uint32_t v_lo = lin[x] % lo_size;
      for (std::uint32_t b = 0; b < lo_size; ++b) lo_table[x * lo_size + b] = lo_space.add(b, v_lo);
    }
    for (std::uint32_t b_hi = 0; b_hi < hi_size; ++b_hi) {
      for (std::uint32_t x = 0; x < domain; ++x) hi_base[x] = hi_space.add(b_hi, lin[x] / lo_size) * lo_size;
      for (std::uint32_t b_lo = 0; b_lo < lo_size; ++b_lo) {
        std::uint64_t rank = 0;
        for (std::uint32_t x = 0; x < domain; ++x) {
          rank += static_cast<std::uint64_t>(gamma.colors[hi_base[x] + lo_table[x * lo_size + b_lo]] - 1) * weight[x];
        }
        ++counts[rank];
      }
    }
  }
}

}  // namespace

ParameterSpec::ParameterSpec(LinearSystem system, int c)
    : evaluator_(system, natural_fixedness(system)), c_(c) {
  if (c < 1 || c > 255) throw std::invalid_argument("color count out of range");
  const int q = system.q();
  const auto points = evaluator_.base_space().size();
  std::size_t ranks = 1;
  for (std::uint32_t i = 0; i < points; ++i) {
    if (ranks > kProfileLimit / static_cast<std::size_t>(c)) {
      throw BudgetExceeded("colorings of F_q^{n_lambda} are too many to tabulate");
    }
    ranks *= static_cast<std::size_t>(c);
  }
  table_.resize(ranks);
  const int n = evaluator_.base_dim();
  for (std::size_t r = 0; r < ranks; ++r) {
    const auto col = coloring_from_rank(q, n, c, r);
    table_[r] = static_cast<std::uint32_t>(evaluator_.mono_count(col.colors));
  }
}

DegenerateProfile degenerate_profile(const Coloring& gamma, int t, int k, int threads) {
  const auto shape = profile_shape(gamma, t, k);
  const VectorSpace space(GaloisField::make(gamma.q), gamma.n);
  DegenerateProfile out{gamma.q, k, gamma.c, t, std::vector<std::uint64_t>(shape.ranks, 0),
                        shape.linear_parts * shape.translations};
  ThreadScope scope(threads);
  const std::uint64_t total = shape.linear_parts;
  // Chunks of linear parts keep per-thread tallies long enough to amortize the merge.
  const std::uint64_t chunk = std::max<std::uint64_t>(1, total / (64 * static_cast<std::uint64_t>(max_threads())));
  const std::int64_t chunks = static_cast<std::int64_t>((total + chunk - 1) / chunk);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(shape.ranks, 0);
#pragma omp for schedule(dynamic)
    for (std::int64_t i = 0; i < chunks; ++i) {
      const std::uint64_t lo = static_cast<std::uint64_t>(i) * chunk;
      tally_linear_parts(gamma, space, t, k, lo, std::min(total, lo + chunk), shape.translations, local);
    }
#pragma omp critical
    for (std::size_t r = 0; r < local.size(); ++r) out.counts[r] += local[r];
  }
  return out;
}

DegenerateProfile degenerate_profile_serial(const Coloring& gamma, int t, int k) {
  const auto shape = profile_shape(gamma, t, k);
  const VectorSpace space(GaloisField::make(gamma.q), gamma.n);
  const VectorSpace domain(GaloisField::make(gamma.q), k);
  DegenerateProfile out{gamma.q, k, gamma.c, t, std::vector<std::uint64_t>(shape.ranks, 0), 0};
  const int tp = std::max(t, 0);
  Morphism phi{k, gamma.n, t, std::vector<std::uint32_t>(static_cast<std::size_t>(k)), 0};
  for (int j = 0; j < tp; ++j) phi.columns[j] = space.unit(j + 1);
  std::vector<std::uint8_t> pulled(domain.size());
  // Odometer over the free columns, then the translation.
  std::vector<std::uint32_t> digits(static_cast<std::size_t>(k - tp + (t < 0 ? 1 : 0)), 0);
  while (true) {
    for (int j = tp; j < k; ++j) phi.columns[j] = digits[j - tp];
    phi.translation = t < 0 ? digits.back() : 0;
    for (std::uint32_t x = 0; x < domain.size(); ++x) pulled[x] = gamma.colors[phi.apply(space, x)];
    ++out.counts[coloring_rank(pulled, gamma.c)];
    ++out.maps;
    std::size_t i = 0;
    while (i < digits.size() && ++digits[i] == space.size()) digits[i++] = 0;
    if (i == digits.size()) break;
  }
  return out;
}

Rational lambda_degenerate(const ParameterSpec& spec, const DegenerateProfile& profile) {
  if (profile.q != spec.q() || profile.c != spec.c() || profile.k != spec.n_lambda() ||
      profile.t != spec.t_lambda()) {
    throw std::invalid_argument("profile does not match the parameter");
  }
  BigInt mono = 0;
  const auto& table = spec.mono_table();
  for (std::size_t r = 0; r < profile.counts.size(); ++r) {
    if (profile.counts[r] == 0 || table[r] == 0) continue;
    mono += BigInt(static_cast<unsigned long>(profile.counts[r])) * static_cast<unsigned long>(table[r]);
  }
  return ratio(mono, BigInt(static_cast<unsigned long>(profile.maps)) *
                         static_cast<unsigned long>(spec.solutions_per_coloring()));
}

Rational lambda_degenerate(const ParameterSpec& spec, const Coloring& gamma, int threads) {
  if (gamma.q != spec.q() || gamma.c != spec.c()) throw std::invalid_argument("coloring does not match the parameter");
  return lambda_degenerate(spec, degenerate_profile(gamma, spec.t_lambda(), spec.n_lambda(), threads));
}

Coloring blowup(const Coloring& gamma, int k) {
  if (k < 0) throw std::invalid_argument("negative blow-up dimension");
  const VectorSpace big(GaloisField::make(gamma.q), gamma.n + k);
  std::vector<std::uint8_t> colors(big.size());
  for (std::uint32_t x = 0; x < big.size(); ++x) colors[x] = gamma.colors[x % gamma.size()];
  return Coloring(gamma.q, gamma.n + k, gamma.c, std::move(colors));
}

Coloring product(const Coloring& gamma, const Coloring& beta) {
  if (gamma.q != beta.q || gamma.c != beta.c) throw std::invalid_argument("product of incompatible colorings");
  const VectorSpace big(GaloisField::make(gamma.q), gamma.n + beta.n);
  std::vector<std::uint8_t> colors(big.size());
  const std::uint32_t low = gamma.size();
  for (std::uint32_t x = 0; x < big.size(); ++x) {
    colors[x] = x % low == 0 ? beta.colors[x / low] : gamma.colors[x % low];
  }
  return Coloring(gamma.q, gamma.n + beta.n, gamma.c, std::move(colors));
}

Coloring recolor_origin(const Coloring& gamma, int color) {
  Coloring out = gamma;
  if (color < 1 || color > gamma.c) throw std::invalid_argument("color out of range");
  out.colors[0] = static_cast<std::uint8_t>(color);
  return out;
}

Coloring origin_coloring(const Coloring& gamma) { return Coloring(gamma.q, 0, gamma.c, {gamma.colors[0]}); }

Rational iterated_fixpoint(const Rational& x, const Rational& x0, const BigInt& D) {
  if (D <= 1) throw std::invalid_argument("morphism count must exceed 1");
  return (Rational(D) * x - x0) / Rational(D - 1);
}

IteratedBound iterated_bound(const ParameterSpec& spec, const Coloring& gamma, const IteratedOptions& options) {
  IteratedBound r;
  const int t = spec.t_lambda();
  const int nl = spec.n_lambda();
  r.lambda_d = lambda_degenerate(spec, gamma, options.threads);
  r.lambda_d_origin = lambda_degenerate(spec, origin_coloring(gamma), options.threads);
  for (int i = 1; i <= spec.c(); ++i) {
    r.recolored.push_back(lambda_degenerate(spec, recolor_origin(gamma, i), options.threads));
    if (r.recolored.back() != r.lambda_d) {
      throw HypothesisViolated("recoloring the origin with color " + std::to_string(i) + " changes lambda^d from " +
                               to_string(r.lambda_d) + " to " + to_string(r.recolored.back()));
    }
  }
  r.raw_count = count_raw_morphisms(t, nl, gamma.n, gamma.q);
  r.class_count = 0;
  for (int j = std::max(t, 0); j <= std::min(nl, gamma.n); ++j) r.class_count += count_mon(t, j, gamma.n, gamma.q);
  r.raw_bound = iterated_fixpoint(r.lambda_d, r.lambda_d_origin, r.raw_count);
  r.class_bound = iterated_fixpoint(r.lambda_d, r.lambda_d_origin, r.class_count);
  r.convention = MorphismCounting::Raw;
  r.bound = r.raw_bound;
  if (!options.run_oracle) return r;

  r.lambda_d_square = iterated_product_lambda(spec, gamma, 2, options.oracle_map_limit, options.threads);
  const Rational& y = *r.lambda_d_square;
  if (y == r.lambda_d) {
    // Fixpoint: the recurrence carries no information about D.
    if (r.lambda_d != r.lambda_d_origin) throw std::runtime_error("product left lambda^d unchanged away from the fixpoint");
    return r;
  }
  r.solved_count = (r.lambda_d_origin - r.lambda_d) / (r.lambda_d - y);
  if (*r.solved_count == Rational(r.raw_count)) {
    r.convention = MorphismCounting::Raw;
    r.bound = r.raw_bound;
  } else if (*r.solved_count == Rational(r.class_count)) {
    r.convention = MorphismCounting::Classes;
    r.bound = r.class_bound;
  } else {
    throw std::runtime_error("direct product gives D = " + to_string(*r.solved_count) +
                             ", matching neither the raw count " + to_string(r.raw_count) +
                             " nor the class count " + to_string(r.class_count));
  }
  return r;
}

Rational iterated_product_lambda(const ParameterSpec& spec, const Coloring& gamma, int depth, std::uint64_t map_limit,
                                 int threads) {
  if (depth < 1) throw std::invalid_argument("depth must be at least 1");
  const BigInt maps = count_raw_morphisms(spec.t_lambda(), spec.n_lambda(), gamma.n * depth, gamma.q);
  if (maps > BigInt(static_cast<unsigned long>(map_limit))) {
    throw BudgetExceeded("depth " + std::to_string(depth) + " product needs " + to_string(maps) +
                         " maps, above the limit of " + std::to_string(map_limit));
  }
  Coloring g = gamma;
  for (int i = 1; i < depth; ++i) g = product(g, gamma);
  return lambda_degenerate(spec, g, threads);
}

ConstructionManifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path);
  ConstructionManifest m;
  m.name = std::filesystem::path(path).stem().string();
  std::string line;
  bool have_bound = false;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "name") m.name = value;
    else if (key == "coloring") m.coloring_path = (std::filesystem::path(path).parent_path() / value).string();
    else if (key == "system") m.system = value;
    else if (key == "c") m.c = std::stoi(value);
    else if (key == "t") m.t = std::stoi(value);
    else if (key == "bound") m.bound = parse_rational(value), have_bound = true;
    else if (key == "method") m.method = value;
    else if (key == "free_origin") m.free_origin = value == "true" || value == "yes" || value == "1";
    else if (key == "note") m.note = value;
    else throw std::runtime_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  if (m.coloring_path.empty() || m.system.empty() || !have_bound) {
    throw std::runtime_error(path + ": coloring, system and bound are required");
  }
  if (m.method != "blowup" && m.method != "iterated") throw std::runtime_error(path + ": unknown method '" + m.method + "'");
  return m;
}

ConstructionResult evaluate_construction(const ConstructionManifest& manifest, const IteratedOptions& options) {
  const auto record = read_coloring_file(manifest.coloring_path);
  if (record.coloring.c != manifest.c) throw std::runtime_error(manifest.name + ": coloring and manifest disagree on c");
  ParameterSpec spec(resolve_system(manifest.system, record.coloring.q), manifest.c);
  if (spec.t_lambda() != manifest.t) throw std::runtime_error(manifest.name + ": manifest t differs from t_lambda");
  ConstructionResult res{manifest, Rational(0), false, std::nullopt};
  if (manifest.method == "blowup") {
    res.computed = blowup_bound(spec, record.coloring, options.threads);
  } else {
    if (!manifest.free_origin) throw HypothesisViolated(manifest.name + ": iterated bound needs a free origin");
    res.iterated = iterated_bound(spec, record.coloring, options);
    res.computed = res.iterated->bound;
  }
  res.matches = res.computed == manifest.bound;
  return res;
}

}  // namespace radomult
