#include "reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "radomult/bounds.hpp"
#include "radomult/certificate.hpp"
#include "radomult/flagcalc.hpp"
#include "radomult/sdpgen.hpp"

namespace radomult::cli {

namespace {

namespace fs = std::filesystem;

const std::string& arg(const CheckSpec& s, const std::string& key) {
  auto it = s.args.find(key);
  if (it == s.args.end()) throw std::invalid_argument(s.kind + ": missing argument '" + key + "'");
  return it->second;
}

std::string arg_or(const CheckSpec& s, const std::string& key, const std::string& fallback) {
  auto it = s.args.find(key);
  return it == s.args.end() ? fallback : it->second;
}

int int_arg(const CheckSpec& s, const std::string& key) { return std::stoi(arg(s, key)); }

// "2,3,5" or "-1..1".
std::vector<int> int_list(const std::string& text) {
  std::vector<int> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::vector<Rational> rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
  return out;
}

std::string resolve(const RunOptions& o, const std::string& path) {
  const fs::path p(path);
  return p.is_absolute() ? path : (fs::path(o.base_dir) / p).string();
}

EnumerationOptions enumeration_options(const RunOptions& o) {
  EnumerationOptions e;
  e.memory_budget_bytes = o.memory_budget;
  e.threads = o.threads;
  return e;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

// Families and density tables are shared between the property checks.
class DensityCache {
 public:
  explicit DensityCache(const RunOptions& o) : opts_(o) {}

  const ColoringFamily& family(int q, int c, int t, int n) {
    auto key = std::make_tuple(q, c, t, n);
    auto it = families_.find(key);
    if (it == families_.end()) it = families_.emplace(key, enumerate_colorings(q, n, c, t, enumeration_options(opts_))).first;
    return it->second;
  }

  // table[i][j] = p_t(delta_i; gamma_j), delta in Gamma^t(k), gamma in Gamma^t(n).
  const std::vector<std::vector<Rational>>& table(int q, int c, int t, int k, int n) {
    auto key = std::make_tuple(q, c, t, k, n);
    auto it = tables_.find(key);
    if (it != tables_.end()) return it->second;
    const auto& small = family(q, c, t, k);
    const auto& big = family(q, c, t, n);
    std::vector<Coloring> deltas, gammas;
    for (std::size_t i = 0; i < small.size(); ++i) deltas.push_back(small.representative(i));
    for (std::size_t j = 0; j < big.size(); ++j) gammas.push_back(big.representative(j));
    std::vector<std::vector<Rational>> m(small.size(), std::vector<Rational>(big.size()));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t j = 0; j < gammas.size(); ++j)
      for (std::size_t i = 0; i < deltas.size(); ++i) m[i][j] = density(deltas[i], gammas[j], t);
    return tables_.emplace(key, std::move(m)).first->second;
  }

 private:
  RunOptions opts_;
  std::map<std::tuple<int, int, int, int>, ColoringFamily> families_;
  std::map<std::tuple<int, int, int, int, int>, std::vector<std::vector<Rational>>> tables_;
};

namespace {

// (q, c, n) with n >= 1 and c^(q^n) <= max_raw.
std::vector<std::tuple<int, int, int>> small_scopes(double max_raw, const std::vector<int>& colors) {
  std::vector<std::tuple<int, int, int>> out;
  for (int q : {2, 3, 4, 5, 7, 8, 9})
    for (int c : colors)
      for (int n = 1; std::pow(static_cast<double>(c), std::pow(static_cast<double>(q), n)) <= max_raw; ++n)
        out.emplace_back(q, c, n);
  return out;
}

void check_count(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const int q = int_arg(s, "q"), n = int_arg(s, "n"), c = int_arg(s, "c"), t = int_arg(s, "t");
  r.label = "classes q=" + std::to_string(q) + " c=" + std::to_string(c) + " n=" + std::to_string(n) +
            " t=" + std::to_string(t);
  r.claimed = arg(s, "expect");
  r.computed = std::to_string(enumerate_colorings(q, n, c, t, enumeration_options(o)).size());
  r.pass = r.computed == r.claimed;
}

void check_certificate(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const auto cert = read_certificate_file(resolve(o, arg(s, "file")));
  r.label = "verify " + arg(s, "file");
  r.claimed = "PASS at " + arg(s, "expect") + " over " + arg(s, "classes") + " classes";
  const auto fam = enumerate_colorings(cert.q, cert.N, cert.c, cert.t_lambda, enumeration_options(o));
  VerifyOptions vo;
  vo.threads = o.threads;
  const auto rep = verify(cert, fam, vo);
  r.computed = std::string(rep.pass ? "PASS" : "FAIL") + " at " + to_string(cert.bound) + " over " +
               std::to_string(rep.classes.size()) + " classes (" + std::to_string(rep.tight.size()) + " tight)";
  r.pass = rep.pass && cert.bound == parse_rational(arg(s, "expect")) &&
           std::to_string(rep.classes.size()) == arg(s, "classes");
}

void check_construction(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const auto m = read_manifest(resolve(o, arg(s, "file")));
  r.label = m.method + " bound " + m.name;
  r.claimed = to_string(m.bound);
  IteratedOptions io;
  io.threads = o.threads;
  io.run_oracle = true;
  const auto res = evaluate_construction(m, io);
  r.computed = to_string(res.computed);
  r.pass = res.matches;
  if (res.iterated) {
    const auto& it = *res.iterated;
    const BigInt& D = it.convention == MorphismCounting::Raw ? it.raw_count : it.class_count;
    const bool oracle = it.lambda_d_square && it.solved_count && *it.solved_count == Rational(D);
    r.computed += oracle ? " (oracle D=" + to_string(D) + ")" : " (oracle inconsistent)";
    r.pass = r.pass && oracle;
  }
}

void check_count_identity(const CheckSpec& s, const RunOptions&, CheckResult& r) {
  const auto qs = int_list(arg(s, "q"));
  const auto ts = int_list(arg(s, "t"));
  const int nmax = int_arg(s, "nmax");
  r.label = "count_mon identity q=" + join(qs) + " t=" + join(ts) + " n<=" + std::to_string(nmax);
  long total = 0, good = 0;
  for (int q : qs)
    for (int t : ts)
      for (int n = std::max(t, 0); n <= nmax; ++n)
        for (int np = std::max(t, 0); np <= n; ++np)
          for (int k = std::max(t, 0); k <= np; ++k) {
            ++total;
            if (count_mon(t, k, np, q) * count_mon(t, np, n, q) == count_mon(t, k, n, q) * gaussian_binomial(n - k, np - k, q))
              ++good;
          }
  r.claimed = "all hold";
  r.computed = std::to_string(good) + "/" + std::to_string(total) + " hold";
  r.pass = total > 0 && good == total;
}

void check_chain_rule(const CheckSpec& s, const RunOptions&, CheckResult& r, DensityCache& cache) {
  const double max_raw = std::stod(arg(s, "max-raw"));
  const auto colors = int_list(arg(s, "c"));
  r.label = "chain rule, c=" + join(colors) + ", c^(q^n)<=" + arg(s, "max-raw");
  long total = 0, good = 0;
  for (auto [q, c, n] : small_scopes(max_raw, colors)) {
    for (int t = -1; t <= std::min(n, 1); ++t) {
      const auto& top = cache.family(q, c, t, n);
      // Densities of each level form a distribution.
      for (int k = std::max(t, 0); k < n; ++k) {
        const auto& p = cache.table(q, c, t, k, n);
        for (std::size_t j = 0; j < top.size(); ++j) {
          Rational sum = 0;
          for (const auto& row : p) sum += row[j];
          ++total;
          if (sum == 1) ++good;
        }
      }
      for (int k = std::max(t, 0); k < n; ++k)
        for (int np = k + 1; np < n; ++np) {
          const auto& low = cache.table(q, c, t, k, np);
          const auto& high = cache.table(q, c, t, np, n);
          const auto& direct = cache.table(q, c, t, k, n);
          for (std::size_t i = 0; i < low.size(); ++i)
            for (std::size_t j = 0; j < top.size(); ++j) {
              Rational via = 0;
              for (std::size_t b = 0; b < high.size(); ++b)
                if (high[b][j] != 0) via += low[i][b] * high[b][j];
              ++total;
              if (via == direct[i][j]) ++good;
            }
        }
    }
  }
  r.claimed = "all hold";
  r.computed = std::to_string(good) + "/" + std::to_string(total) + " identities hold";
  r.pass = total > 0 && good == total;
}

void check_averaging(const CheckSpec& s, const RunOptions&, CheckResult& r, DensityCache& cache) {
  const double max_raw = std::stod(arg(s, "max-raw"));
  const auto colors = int_list(arg(s, "c"));
  std::vector<std::string> systems;
  {
    std::stringstream ss(arg(s, "systems"));
    std::string item;
    while (std::getline(ss, item, ',')) systems.push_back(item);
  }
  r.label = "solution averaging, c=" + join(colors) + ", c^(q^n)<=" + arg(s, "max-raw");
  long total = 0, good = 0;
  for (auto [q, c, n] : small_scopes(max_raw, colors)) {
    for (const auto& name : systems) {
      std::optional<LinearSystem> L;
      try {
        L = builtin_system(name, q);
      } catch (const std::invalid_argument&) {
        continue;  // not a valid system over this field
      }
      const MonoEvaluator lambda(*L, natural_fixedness(*L));
      const int t = lambda.t();
      const int d = lambda.base_dim();
      if (n < d) continue;
      const auto& top = cache.family(q, c, t, n);
      std::vector<Rational> want(top.size());
      for (std::size_t j = 0; j < top.size(); ++j) want[j] = lambda(top.representative(j));
      for (int k = d; k < n; ++k) {
        const auto& low = cache.family(q, c, t, k);
        const auto& p = cache.table(q, c, t, k, n);
        std::vector<Rational> lam(low.size());
        for (std::size_t i = 0; i < low.size(); ++i) lam[i] = lambda(low.representative(i));
        for (std::size_t j = 0; j < top.size(); ++j) {
          Rational via = 0;
          for (std::size_t i = 0; i < low.size(); ++i) via += lam[i] * p[i][j];
          ++total;
          if (via == want[j]) ++good;
        }
      }
    }
  }
  r.claimed = "all hold";
  r.computed = std::to_string(good) + "/" + std::to_string(total) + " identities hold";
  r.pass = total > 0 && good == total;
}

bool same_distribution(const DegenerateProfile& a, const DegenerateProfile& b) {
  if (a.counts.size() != b.counts.size()) return false;
  for (std::size_t i = 0; i < a.counts.size(); ++i)
    if (BigInt(static_cast<unsigned long>(a.counts[i])) * static_cast<unsigned long>(b.maps) !=
        BigInt(static_cast<unsigned long>(b.counts[i])) * static_cast<unsigned long>(a.maps))
      return false;
  return true;
}

void check_blowup_invariance(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const auto m = read_manifest(resolve(o, arg(s, "file")));
  const auto extras = int_list(arg(s, "extra"));
  const auto g = read_coloring_file(m.coloring_path).coloring;
  ParameterSpec spec(resolve_system(m.system, g.q), m.c);
  const int t = spec.t_lambda();
  std::vector<int> ks;
  // Dimensions whose full raw pullback table stays small.
  for (int k = std::max(t, 0); k <= spec.n_lambda(); ++k)
    if (std::pow(static_cast<double>(g.c), std::pow(static_cast<double>(g.q), k)) <= double(1 << 22)) ks.push_back(k);
  r.label = "p^d blow-up invariance " + m.name + " k=" + join(ks) + " extra=" + join(extras);
  int total = 0, good = 0;
  for (int k : ks) {
    const auto base = degenerate_profile(g, t, k, o.threads);
    for (int e : extras) {
      ++total;
      if (same_distribution(base, degenerate_profile(blowup(g, e), t, k, o.threads))) ++good;
    }
  }
  r.claimed = "invariant";
  r.computed = std::to_string(good) + "/" + std::to_string(total) + " profiles equal";
  r.pass = total > 0 && good == total;
}

void check_uniform(const CheckSpec& s, const RunOptions&, CheckResult& r) {
  const int q = int_arg(s, "q");
  const auto L = builtin_system(arg(s, "system"), q);
  const MonoEvaluator lambda(L, natural_fixedness(L));
  const auto colors = int_list(arg(s, "c"));
  const int d = lambda.base_dim();
  r.label = "uniform expectation " + arg(s, "system") + " q=" + std::to_string(q) + " c=" + join(colors);
  std::string claimed, computed;
  bool ok = true;
  for (int c : colors) {
    const BigInt raw = raw_coloring_count(q, d, c);
    Rational sum = 0;
    for (Rank rank = 0; rank < raw.get_ui(); ++rank) sum += lambda(coloring_from_rank(q, d, c, rank));
    BigInt cm;
    mpz_ui_pow_ui(cm.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(L.vars() - 1));
    const Rational want = ratio(BigInt(1), cm);
    const Rational got = sum / Rational(raw);
    claimed += (claimed.empty() ? "" : ", ") + to_string(want);
    computed += (computed.empty() ? "" : ", ") + to_string(got);
    ok = ok && got == want;
  }
  r.claimed = claimed;
  r.computed = computed;
  r.pass = ok;
}

void check_routes(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const int q = int_arg(s, "q"), c = int_arg(s, "c"), N = int_arg(s, "N");
  r.label = "expansion vs placement q=" + std::to_string(q) + " c=" + std::to_string(c) + " N=" + std::to_string(N);
  int total = 0, good = 0;
  for (int tl = -1; tl <= 0; ++tl) {
    const auto base = enumerate_colorings(q, N, c, tl, enumeration_options(o));
    // Every type dimension a certificate at level N can use.
    for (int t = tl; t <= N - 2; ++t) {
      const int k = default_flag_dim(t, N);
      if (t >= 0 && 2 * (k - t) > N - t) continue;
      const PairDensityEngine engine(base, t, k);
      ++total;
      if (placement_route_matrices(engine) == expansion_route_matrices(engine)) ++good;
    }
  }
  r.claimed = "equal";
  r.computed = std::to_string(good) + "/" + std::to_string(total) + " (t_lambda, t) pairs equal";
  r.pass = total > 0 && good == total;
}

void check_sdp(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const int q = int_arg(s, "q"), c = int_arg(s, "c"), N = int_arg(s, "N");
  const auto target = parse_rational(arg(s, "target"));
  const double tol = std::stod(arg_or(s, "tolerance", "1e-4"));
  ParameterSpec spec(resolve_system(arg(s, "system"), q), c);
  r.label = "SDP round trip " + arg(s, "system") + " q=" + std::to_string(q) + " c=" + std::to_string(c) +
            " N=" + std::to_string(N);
  r.claimed = "numeric >= " + to_string(target) + " - " + arg_or(s, "tolerance", "1e-4") + ", exact " +
              to_string(target) + " PASS";
  const auto fam = enumerate_colorings(q, N, c, spec.t_lambda(), enumeration_options(o));
  AssembleOptions ao;
  ao.threads = o.threads;
  const auto problem = assemble(spec, fam, ao);
  fs::create_directories(o.work_dir);
  const std::string stem = (fs::path(o.work_dir) / (arg(s, "system") + "_q" + std::to_string(q) + "_c" +
                                                    std::to_string(c) + "_N" + std::to_string(N)))
                               .string();
  write_sdpa_file(stem + ".dat-s", problem);
  run_external_solver(o.solver_command, stem + ".dat-s", stem + ".sol");
  const auto numeric = read_solution_file(stem + ".sol", problem);
  std::ostringstream num;
  num.precision(10);
  num << numeric.objective;
  r.computed = "numeric " + num.str();
  const auto polished = polish_solution(problem, numeric, target);
  if (!polished.certificate) {
    r.computed += ", polishing failed";
    r.pass = false;
    return;
  }
  write_certificate_file(stem + ".cert", *polished.certificate);
  VerifyOptions vo;
  vo.threads = o.threads;
  const auto rep = verify(*polished.certificate, fam, vo);
  r.computed += ", exact " + to_string(polished.certificate->bound) + (rep.pass ? " PASS" : " FAIL");
  r.pass = numeric.objective >= to_double(target) - tol && polished.certificate->bound == target && rep.pass;
}

void check_assembly(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const int q = int_arg(s, "q"), c = int_arg(s, "c"), N = int_arg(s, "N");
  ParameterSpec spec(resolve_system(arg(s, "system"), q), c);
  r.label = "SDP assembly " + arg(s, "system") + " q=" + std::to_string(q) + " c=" + std::to_string(c) +
            " N=" + std::to_string(N);
  r.claimed = arg(s, "classes") + " classes";
  const auto fam = enumerate_colorings(q, N, c, spec.t_lambda(), enumeration_options(o));
  AssembleOptions ao;
  ao.threads = o.threads;
  const auto problem = assemble(spec, fam, ao);
  std::size_t entries = 0;
  for (const auto& row : problem.constraints) entries += row.size();
  r.computed = std::to_string(problem.classes.size()) + " classes (" + std::to_string(problem.blocks.size()) +
               " blocks, " + std::to_string(entries) + " entries)";
  r.pass = std::to_string(problem.classes.size()) == arg(s, "classes") && !problem.blocks.empty() && entries > 0;
}

// Any certificate claiming more than the construction allows must fail, at a
// class the construction sees: averaged against p^d(.; gamma) the slacks sum
// to lambda^d(gamma) - bound - (average of squares) < 0.
void check_soundness(const CheckSpec& s, const RunOptions& o, CheckResult& r) {
  const auto golden = read_certificate_file(resolve(o, arg(s, "certificate")));
  const auto m = read_manifest(resolve(o, arg(s, "construction")));
  const auto excesses = rational_list(arg(s, "excess"));
  const int random_count = std::stoi(arg_or(s, "random", "0"));
  const auto gamma = read_coloring_file(m.coloring_path).coloring;
  ParameterSpec spec(resolve_system(golden.system, golden.q), golden.c);
  const Rational upper = lambda_degenerate(spec, gamma, o.threads);
  r.label = "soundness above " + to_string(upper) + " (" + m.name + ")";

  const auto fam = enumerate_colorings(golden.q, golden.N, golden.c, golden.t_lambda, enumeration_options(o));
  const ClassIndex index(fam);
  const auto profile = degenerate_profile(gamma, golden.t_lambda, golden.N, o.threads);
  std::vector<Rational> weight(fam.size());
  for (std::size_t rank = 0; rank < profile.counts.size(); ++rank)
    if (profile.counts[rank] != 0)
      weight[index.classify(coloring_from_rank(golden.q, golden.N, golden.c, rank).colors)] +=
          Rational(static_cast<unsigned long>(profile.counts[rank]));
  for (auto& w : weight) w /= Rational(static_cast<unsigned long>(profile.maps));

  std::vector<SosCertificate> certs{golden};
  const auto problem = assemble(spec, fam);
  std::mt19937 rng(20240917);
  std::uniform_int_distribution<int> coef(-6, 6), wt(1, 9);
  for (int i = 0; i < random_count; ++i) {
    SosCertificate cert = golden;
    cert.blocks.clear();
    for (const auto& b : problem.blocks) {
      CertificateBlock cb{b.type, b.k, {}};
      const int terms = 1 + static_cast<int>(rng() % 3);
      for (int j = 0; j < terms; ++j) {
        SquareTerm term{Rational(wt(rng), wt(rng) * 10), {}};
        for (const auto& f : b.flags)
          if (int v = coef(rng); v != 0) term.coeffs.emplace(f, Rational(v));
        if (!term.coeffs.empty()) cb.terms.push_back(std::move(term));
      }
      cert.blocks.push_back(std::move(cb));
    }
    certs.push_back(std::move(cert));
  }

  int trials = 0, rejected = 0, witnessed = 0;
  VerifyOptions vo;
  vo.threads = o.threads;
  for (auto cert : certs) {
    for (const auto& e : excesses) {
      cert.bound = upper + e;
      const auto rep = verify(cert, fam, vo);
      ++trials;
      if (rep.pass) continue;
      ++rejected;
      Rational avg = 0;
      bool seen = false;
      for (const auto& cr : rep.classes) {
        avg += weight[cr.index] * cr.slack;
        if (cr.slack < 0 && weight[cr.index] != 0) seen = true;
      }
      if (seen && avg <= upper - cert.bound) ++witnessed;
    }
  }
  r.claimed = "every claim above " + to_string(upper) + " FAILs";
  r.computed = std::to_string(rejected) + "/" + std::to_string(trials) + " FAIL, " + std::to_string(witnessed) +
               " witnessed on the construction";
  r.pass = trials > 0 && rejected == trials && witnessed == trials && upper == m.bound;
}

}  // namespace

std::vector<CheckSpec> read_checks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reproduction manifest " + path);
  std::vector<CheckSpec> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    CheckSpec spec;
    spec.line = lineno;
    if (!(ss >> spec.criterion)) continue;
    if (!(ss >> spec.kind)) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": missing check kind");
    std::string token;
    while (ss >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos || eq == 0)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key=value, got '" + token + "'");
      spec.args[token.substr(0, eq)] = token.substr(eq + 1);
    }
    out.push_back(std::move(spec));
  }
  return out;
}

Runner::Runner(RunOptions options) : options_(std::move(options)), cache_(std::make_unique<DensityCache>(options_)) {}

Runner::~Runner() = default;

CheckResult Runner::run(const CheckSpec& spec) {
  const RunOptions& options = options_;
  CheckResult r;
  r.criterion = spec.criterion;
  r.kind = spec.kind;
  r.label = spec.kind;
  const auto start = std::chrono::steady_clock::now();
  try {
    if (spec.kind == "count") check_count(spec, options, r);
    else if (spec.kind == "certificate") check_certificate(spec, options, r);
    else if (spec.kind == "construction") check_construction(spec, options, r);
    else if (spec.kind == "count-identity") check_count_identity(spec, options, r);
    else if (spec.kind == "chain-rule") check_chain_rule(spec, options, r, *cache_);
    else if (spec.kind == "averaging") check_averaging(spec, options, r, *cache_);
    else if (spec.kind == "blowup-invariance") check_blowup_invariance(spec, options, r);
    else if (spec.kind == "uniform") check_uniform(spec, options, r);
    else if (spec.kind == "routes") check_routes(spec, options, r);
    else if (spec.kind == "sdp") check_sdp(spec, options, r);
    else if (spec.kind == "assembly") check_assembly(spec, options, r);
    else if (spec.kind == "soundness") check_soundness(spec, options, r);
    else throw std::invalid_argument("unknown check kind '" + spec.kind + "'");
  } catch (const std::exception& e) {
    r.computed = std::string("error: ") + e.what();
    r.pass = false;
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionSummary> summarize(const std::vector<CheckResult>& results) {
  std::map<int, CriterionSummary> by;
  for (const auto& r : results) {
    auto& s = by[r.criterion];
    s.criterion = r.criterion;
    ++s.total;
    if (r.pass) ++s.passed;
    s.seconds += r.seconds;
  }
  std::vector<CriterionSummary> out;
  for (auto& [k, v] : by) out.push_back(v);
  return out;
}

std::string criterion_title(int criterion) {
  switch (criterion) {
    case 1: return "enumeration counts";
    case 2: return "exact certificate verification";
    case 3: return "upper bounds from shipped constructions";
    case 4: return "property suites";
    case 5: return "expansion route equals placement route";
    case 6: return "SDP pipeline";
    case 7: return "soundness of claims above the construction";
    default: return "criterion " + std::to_string(criterion);
  }
}

}  // namespace radomult::cli
