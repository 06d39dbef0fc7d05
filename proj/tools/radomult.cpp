#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "radomult/bounds.hpp"
#include "radomult/certificate.hpp"
#include "radomult/sdpgen.hpp"
#include "reproduce.hpp"

using namespace radomult;
using json = nlohmann::ordered_json;

namespace {

struct Globals {
  std::string format = "text";
  int threads = 0;
  std::size_t memory_budget_mib = 256;

  bool json() const { return format == "json"; }
  EnumerationOptions enumeration() const {
    EnumerationOptions o;
    o.memory_budget_bytes = memory_budget_mib << 20;
    o.threads = threads;
    return o;
  }
};

// Failures that are results rather than errors (a certificate that does not
// verify, a bound that does not match) exit with this status.
constexpr int kCheckFailed = 1;
constexpr int kError = 2;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    for (int v = std::stoi(text.substr(0, dots)); v <= std::stoi(text.substr(dots + 2)); ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::string colors_string(std::span<const std::uint8_t> colors) {
  std::string s;
  for (std::size_t i = 0; i < colors.size(); ++i) s += (i ? " " : "") + std::to_string(colors[i]);
  return s;
}

void emit(const Globals& g, const json& report, const std::string& text) {
  if (g.json()) std::cout << report.dump(2) << '\n';
  else std::cout << text;
}

// ---------------------------------------------------------------- enumerate

struct EnumerateArgs {
  int q = 2, n = 1, c = 2, t = -1;
  std::string strategy = "auto";
  std::string out;
};

int run_enumerate(const Globals& g, const EnumerateArgs& a) {
  auto opts = g.enumeration();
  if (a.strategy == "sweep") opts.strategy = EnumerationStrategy::OrbitSweep;
  else if (a.strategy == "scan") opts.strategy = EnumerationStrategy::MinimalityScan;
  const auto fam = enumerate_colorings(a.q, a.n, a.c, a.t, opts);
  if (!a.out.empty()) {
    std::ofstream out(a.out);
    if (!out) throw std::runtime_error("cannot write " + a.out);
    out << a.q << ' ' << a.n << ' ' << a.c << ' ' << a.t << ' ' << fam.size() << '\n';
    for (std::size_t i = 0; i < fam.size(); ++i)
      out << colors_string(fam.representative(i).colors) << " : " << fam.orbit_sizes[i] << '\n';
  }
  json r{{"command", "enumerate"}, {"q", a.q}, {"n", a.n}, {"c", a.c}, {"t", a.t}, {"classes", fam.size()}};
  std::ostringstream text;
  text << "classes " << fam.size() << "  (q=" << a.q << " n=" << a.n << " c=" << a.c << " t=" << a.t << ")\n";
  if (!a.out.empty()) {
    r["out"] = a.out;
    text << "representatives written to " << a.out << '\n';
  }
  emit(g, r, text.str());
  return 0;
}

// ------------------------------------------------------------------- tables

struct TablesArgs {
  int q = 2, c = 2;
  std::string n = "1";
  std::string t = "-1";
};

int run_tables(const Globals& g, const TablesArgs& a) {
  const auto ns = parse_int_list(a.n);
  const auto ts = parse_int_list(a.t);
  json rows = json::array();
  std::ostringstream text;
  const bool single = ns.size() == 1 && ts.size() == 1;
  if (!single) text << std::setw(4) << "t" << std::setw(4) << "n" << std::setw(12) << "classes" << '\n';
  for (int t : ts)
    for (int n : ns) {
      if (n < std::max(t, 0)) continue;
      const auto size = enumerate_colorings(a.q, n, a.c, t, g.enumeration()).size();
      rows.push_back({{"q", a.q}, {"c", a.c}, {"n", n}, {"t", t}, {"classes", size}});
      if (single) text << size << '\n';
      else text << std::setw(4) << t << std::setw(4) << n << std::setw(12) << size << '\n';
    }
  emit(g, json{{"command", "tables"}, {"rows", rows}}, text.str());
  return 0;
}

// ------------------------------------------------------------------- lambda

struct LambdaArgs {
  std::string system;
  std::string coloring;
  std::optional<int> t;
};

int run_lambda(const Globals& g, const LambdaArgs& a) {
  const auto rec = read_coloring_file(a.coloring);
  const auto L = resolve_system(a.system, rec.coloring.q);
  const int t = a.t.value_or(natural_fixedness(L));
  const MonoEvaluator lambda(L, t);
  const Rational value = lambda(rec.coloring);
  json r{{"command", "lambda"}, {"system", L.name()}, {"q", rec.coloring.q}, {"n", rec.coloring.n},
         {"c", rec.coloring.c}, {"t", t}, {"lambda", to_string(value)}};
  std::ostringstream text;
  text << "lambda   " << to_string(value) << '\n';
  if (!a.t || *a.t == natural_fixedness(L)) {
    const ParameterSpec spec(L, rec.coloring.c);
    const Rational ld = lambda_degenerate(spec, rec.coloring, g.threads);
    r["lambda_d"] = to_string(ld);
    text << "lambda^d " << to_string(ld) << '\n';
  }
  emit(g, r, text.str());
  return 0;
}

// -------------------------------------------------------------- upper-bound

struct UpperBoundArgs {
  std::string manifest;
  std::string coloring;
  std::string system;
  std::string method = "blowup";
  bool no_oracle = false;
};

int run_upper_bound(const Globals& g, const UpperBoundArgs& a) {
  IteratedOptions io;
  io.threads = g.threads;
  io.run_oracle = !a.no_oracle;
  ConstructionManifest m;
  std::optional<Rational> claimed;
  if (!a.manifest.empty()) {
    m = read_manifest(a.manifest);
    claimed = m.bound;
  } else {
    if (a.coloring.empty() || a.system.empty())
      throw CLI::ValidationError("upper-bound needs --manifest, or --coloring with --system");
    const auto rec = read_coloring_file(a.coloring);
    const auto L = resolve_system(a.system, rec.coloring.q);
    m.name = std::filesystem::path(a.coloring).stem().string();
    m.coloring_path = a.coloring;
    m.system = a.system;
    m.c = rec.coloring.c;
    m.t = natural_fixedness(L);
    m.method = a.method;
    m.free_origin = a.method == "iterated";
  }
  const auto res = evaluate_construction(m, io);
  json r{{"command", "upper-bound"}, {"name", m.name}, {"method", m.method}, {"bound", to_string(res.computed)}};
  std::ostringstream text;
  text << "upper bound " << to_string(res.computed) << "  (" << m.name << ", " << m.method << ")\n";
  if (res.iterated) {
    const auto& it = *res.iterated;
    r["lambda_d"] = to_string(it.lambda_d);
    r["lambda_d_origin"] = to_string(it.lambda_d_origin);
    r["maps_raw"] = to_string(it.raw_count);
    r["maps_classes"] = to_string(it.class_count);
    r["convention"] = it.convention == MorphismCounting::Raw ? "raw" : "classes";
    text << "  lambda^d " << to_string(it.lambda_d) << ", origin " << to_string(it.lambda_d_origin) << '\n';
    text << "  D raw " << to_string(it.raw_count) << " -> " << to_string(it.raw_bound) << ", D classes "
         << to_string(it.class_count) << " -> " << to_string(it.class_bound) << '\n';
    if (it.lambda_d_square) {
      r["oracle_lambda_d_square"] = to_string(*it.lambda_d_square);
      r["oracle_D"] = to_string(*it.solved_count);
      text << "  oracle lambda^d(gamma x gamma) " << to_string(*it.lambda_d_square) << ", solved D "
           << to_string(*it.solved_count) << '\n';
    }
  }
  int status = 0;
  if (claimed) {
    r["claimed"] = to_string(*claimed);
    r["match"] = res.matches;
    text << "  claimed " << to_string(*claimed) << ": " << (res.matches ? "PASS" : "FAIL") << '\n';
    if (!res.matches) status = kCheckFailed;
  }
  emit(g, r, text.str());
  return status;
}

// ------------------------------------------------------------- SDP commands

struct ProblemArgs {
  std::string system;
  int q = 3, c = 3, N = 2;
  std::string types;  // empty: every type dimension
  std::optional<int> root;
};

void add_problem_options(CLI::App* cmd, ProblemArgs& p) {
  cmd->add_option("--system", p.system, "Built-in system name or system file")->required();
  cmd->add_option("--q", p.q, "Field order")->required();
  cmd->add_option("--c", p.c, "Number of colors")->required();
  cmd->add_option("--N", p.N, "Dimension of the base colorings")->required();
  cmd->add_option("--types", p.types, "Type dimensions to use, e.g. -1,0 (default: all; 'none' for no squares)");
  cmd->add_option("--root", p.root, "Restrict a 0-fixed problem to one origin color");
}

struct BuiltProblem {
  ColoringFamily family;
  SdpProblem problem;
};

BuiltProblem build_problem(const Globals& g, const ProblemArgs& p) {
  ParameterSpec spec(resolve_system(p.system, p.q), p.c);
  AssembleOptions ao;
  ao.threads = g.threads;
  ao.root = p.root;
  if (p.types == "none") ao.type_dims = std::vector<int>{};
  else if (!p.types.empty()) ao.type_dims = parse_int_list(p.types);
  auto fam = enumerate_colorings(p.q, p.N, p.c, spec.t_lambda(), g.enumeration());
  auto prob = assemble(spec, fam, ao);
  return {std::move(fam), std::move(prob)};
}

json problem_json(const SdpProblem& p) {
  json blocks = json::array();
  for (const auto& b : p.blocks) blocks.push_back({{"t", b.t}, {"k", b.k}, {"size", b.flags.size()}});
  return {{"classes", p.classes.size()}, {"blocks", blocks}, {"trivial_bound", to_string(p.trivial_bound())}};
}

struct AssembleArgs {
  ProblemArgs problem;
  std::string out;
  int digits = 25;
  std::string solution;
  std::string solver;
};

int run_assemble(const Globals& g, const AssembleArgs& a) {
  const auto built = build_problem(g, a.problem);
  const auto& p = built.problem;
  write_sdpa_file(a.out, p, a.digits);
  json r{{"command", "assemble-sdp"}, {"out", a.out}};
  r.update(problem_json(p));
  std::ostringstream text;
  text << "classes " << p.classes.size() << ", blocks " << p.blocks.size() << " (sizes";
  for (const auto& b : p.blocks) text << ' ' << b.flags.size();
  text << "), trivial bound " << to_string(p.trivial_bound()) << '\n';
  text << "SDPA problem written to " << a.out << '\n';
  if (!a.solution.empty()) {
    run_external_solver(a.solver.empty() ? default_solver_command() : a.solver, a.out, a.solution);
    const auto numeric = read_solution_file(a.solution, p);
    r["solution"] = a.solution;
    r["numeric_bound"] = numeric.objective;
    text << "numeric bound " << std::setprecision(12) << numeric.objective << " (solution in " << a.solution << ")\n";
  }
  emit(g, r, text.str());
  return 0;
}

struct RoundArgs {
  ProblemArgs problem;
  std::string solution;
  std::string out;
  std::string target;
  long long max_denominator = 1'000'000;
};

int run_round(const Globals& g, const RoundArgs& a) {
  const auto built = build_problem(g, a.problem);
  const auto& p = built.problem;
  const auto numeric = read_solution_file(a.solution, p);
  json r{{"command", "round"}, {"numeric_bound", numeric.objective}};
  std::ostringstream text;
  text << "numeric bound " << std::setprecision(12) << numeric.objective << '\n';
  std::optional<SosCertificate> cert;
  if (!a.target.empty()) {
    const auto polished = polish_solution(p, numeric, parse_rational(a.target));
    r["polished"] = polished.certificate.has_value();
    if (polished.certificate) {
      cert = polished.certificate;
      text << "polished to the target " << a.target << '\n';
    } else {
      text << "polishing to " << a.target << " failed; falling back to plain rounding\n";
    }
  }
  if (!cert) {
    RoundOptions ro;
    ro.max_denominator = a.max_denominator;
    cert = round_solution(p, numeric, ro);
  }
  VerifyOptions vo;
  vo.threads = g.threads;
  const auto rep = verify(*cert, built.family, vo);
  if (!a.out.empty()) write_certificate_file(a.out, *cert);
  r["bound"] = to_string(cert->bound);
  r["verified"] = rep.pass;
  text << "exact bound " << to_string(cert->bound) << " (" << to_decimal(cert->bound, 12) << "): "
       << (rep.pass ? "PASS" : "FAIL") << '\n';
  if (!a.out.empty()) {
    r["out"] = a.out;
    text << "certificate written to " << a.out << '\n';
  }
  emit(g, r, text.str());
  return rep.pass ? 0 : kCheckFailed;
}

// -------------------------------------------------------------- verify-cert

struct VerifyArgs {
  std::string certificate;
  std::string bound;
  bool list_tight = false;
};

int run_verify(const Globals& g, const VerifyArgs& a) {
  auto cert = read_certificate_file(a.certificate);
  if (!a.bound.empty()) cert.bound = parse_rational(a.bound);
  const auto fam = enumerate_colorings(cert.q, cert.N, cert.c, cert.t_lambda, g.enumeration());
  VerifyOptions vo;
  vo.threads = g.threads;
  const auto rep = verify(cert, fam, vo);
  json r{{"command", "verify-cert"},
         {"result", rep.pass ? "PASS" : "FAIL"},
         {"bound", to_string(rep.bound)},
         {"classes", rep.classes.size()},
         {"tight", rep.tight.size()},
         {"failing", rep.failing.size()},
         {"min_slack", to_string(rep.min_slack)}};
  std::ostringstream text;
  text << (rep.pass ? "PASS" : "FAIL") << ", bound " << to_string(rep.bound) << '\n';
  text << "  " << rep.classes.size() << " classes, " << rep.tight.size() << " tight, " << rep.failing.size()
       << " failing, min slack " << to_string(rep.min_slack) << '\n';
  auto describe = [&](const std::vector<std::size_t>& which, const char* key, const char* word) {
    json list = json::array();
    for (auto i : which) {
      const auto& cr = rep.classes[i];
      list.push_back({{"class", cr.index}, {"colors", colors_string(cr.colors)}, {"slack", to_string(cr.slack)}});
      text << "  " << word << " class " << cr.index << " [" << colors_string(cr.colors) << "] slack "
           << to_string(cr.slack) << '\n';
    }
    r[key] = list;
  };
  if (!rep.pass) describe(rep.failing, "failing_classes", "failing");
  if (a.list_tight) describe(rep.tight, "tight_classes", "tight");
  emit(g, r, text.str());
  return rep.pass ? 0 : kCheckFailed;
}

// ---------------------------------------------------------------- reproduce

struct ReproduceArgs {
  std::string manifest = std::string(RADOMULT_DATA_DIR) + "/reproduce.manifest";
  std::string criteria;
  std::string work_dir;
  std::string solver;
};

int run_reproduce(const Globals& g, const ReproduceArgs& a) {
  cli::RunOptions o;
  o.base_dir = std::filesystem::path(a.manifest).parent_path().string();
  o.solver_command = a.solver.empty() ? default_solver_command() : a.solver;
  o.work_dir = a.work_dir.empty() ? (std::filesystem::temp_directory_path() / "radomult_reproduce").string() : a.work_dir;
  o.memory_budget = g.memory_budget_mib << 20;
  o.threads = g.threads;
  std::vector<int> only;
  if (!a.criteria.empty()) only = parse_int_list(a.criteria);
  cli::Runner runner(o);
  std::vector<cli::CheckResult> results;
  json checks = json::array();
  for (const auto& spec : cli::read_checks(a.manifest)) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.criterion) == only.end()) continue;
    const auto r = runner.run(spec);
    results.push_back(r);
    checks.push_back({{"criterion", r.criterion},
                      {"check", r.label},
                      {"claimed", r.claimed},
                      {"computed", r.computed},
                      {"pass", r.pass}});
    if (!g.json()) {
      std::cout << std::left << std::setw(3) << r.criterion << std::setw(56) << r.label << std::setw(6)
                << (r.pass ? "PASS" : "FAIL") << "claimed " << r.claimed << " | computed " << r.computed << '\n';
      std::cout.flush();
    }
  }
  bool all = true;
  json summary = json::array();
  for (const auto& s : cli::summarize(results)) {
    all = all && s.pass();
    summary.push_back({{"criterion", s.criterion}, {"passed", s.passed}, {"total", s.total}, {"pass", s.pass()}});
    if (!g.json())
      std::cout << "criterion " << s.criterion << ": " << (s.pass() ? "PASS" : "FAIL") << " (" << s.passed << "/"
                << s.total << ") " << cli::criterion_title(s.criterion) << '\n';
  }
  if (g.json()) std::cout << json{{"command", "reproduce"}, {"checks", checks}, {"criteria", summary}}.dump(2) << '\n';
  return all ? 0 : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radomult: Rado multiplicity in vector spaces over finite fields"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--threads", g.threads, "Worker threads (0: OpenMP default)");
  app.add_option("--memory-budget", g.memory_budget_mib, "Memory budget for enumeration bitmaps, in MiB");
  app.fallthrough();

  EnumerateArgs ea;
  auto* enumerate = app.add_subcommand("enumerate", "Enumerate Gamma^t(n), the c-colorings of F_q^n up to t-fixed isomorphism");
  enumerate->add_option("--q", ea.q, "Field order")->required();
  enumerate->add_option("--n", ea.n, "Dimension")->required();
  enumerate->add_option("--c", ea.c, "Number of colors")->required();
  enumerate->add_option("--t", ea.t, "Fixedness, -1 for unfixed");
  enumerate->add_option("--strategy", ea.strategy, "auto, sweep or scan")->check(CLI::IsMember({"auto", "sweep", "scan"}));
  enumerate->add_option("--out", ea.out, "Write the representatives and orbit sizes here");

  TablesArgs ta;
  auto* tables = app.add_subcommand("tables", "Class counts, one per (n, t)");
  tables->add_option("--q", ta.q, "Field order")->required();
  tables->add_option("--c", ta.c, "Number of colors")->required();
  tables->add_option("--n", ta.n, "Dimensions, e.g. 2 or 1..4 or 1,2");
  tables->add_option("--t", ta.t, "Fixedness values, e.g. -1 or -1..0");

  LambdaArgs la;
  auto* lambda = app.add_subcommand("lambda", "Monochromatic fraction lambda and lambda^d of a coloring");
  lambda->add_option("--system", la.system, "Built-in system name or system file")->required();
  lambda->add_option("--coloring", la.coloring, "Coloring file")->required()->check(CLI::ExistingFile);
  lambda->add_option("--t", la.t, "Fixedness (default: natural for the system)");

  UpperBoundArgs ua;
  auto* upper = app.add_subcommand("upper-bound", "Upper bound from a blow-up or iterated product construction");
  upper->add_option("--manifest", ua.manifest, "Construction manifest")->check(CLI::ExistingFile);
  upper->add_option("--coloring", ua.coloring, "Coloring file (instead of a manifest)")->check(CLI::ExistingFile);
  upper->add_option("--system", ua.system, "System for --coloring");
  upper->add_option("--method", ua.method, "blowup or iterated")->check(CLI::IsMember({"blowup", "iterated"}));
  upper->add_flag("--no-oracle", ua.no_oracle, "Skip the direct lambda^d(gamma x gamma) computation");

  AssembleArgs aa;
  auto* assemble_cmd = app.add_subcommand("assemble-sdp", "Assemble the flag-algebra SDP and write it in SDPA format");
  add_problem_options(assemble_cmd, aa.problem);
  assemble_cmd->add_option("--out", aa.out, "SDPA output file (.dat-s)")->required();
  assemble_cmd->add_option("--digits", aa.digits, "Significant digits of the emitted coefficients");
  assemble_cmd->add_option("--solution", aa.solution, "Also run the external solver and write its solution here");
  assemble_cmd->add_option("--solver", aa.solver, "Solver command (default: $RADOMULT_SDP_SOLVER or the cvxpy adapter)");

  RoundArgs ra;
  auto* round_cmd = app.add_subcommand("round", "Round a numeric SDP solution to an exact certificate");
  add_problem_options(round_cmd, ra.problem);
  round_cmd->add_option("--solution", ra.solution, "Solver output")->required()->check(CLI::ExistingFile);
  round_cmd->add_option("--out", ra.out, "Certificate output file");
  round_cmd->add_option("--target", ra.target, "Exact bound to polish to, e.g. 1/27");
  round_cmd->add_option("--max-denominator", ra.max_denominator, "Denominator limit for plain rounding");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify-cert", "Verify an SOS certificate in exact arithmetic");
  verify_cmd->add_option("--certificate", va.certificate, "Certificate file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--bound", va.bound, "Check this bound instead of the one in the file");
  verify_cmd->add_flag("--list-tight", va.list_tight, "List the classes with zero slack");

  ReproduceArgs pa;
  auto* reproduce = app.add_subcommand("reproduce", "Run the reproduction manifest: claimed vs computed values");
  reproduce->add_option("--manifest", pa.manifest, "Reproduction manifest")->check(CLI::ExistingFile);
  reproduce->add_option("--criteria", pa.criteria, "Only these criteria, e.g. 1,3 or 2..4");
  reproduce->add_option("--work-dir", pa.work_dir, "Directory for SDP scratch files");
  reproduce->add_option("--solver", pa.solver, "Solver command");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enumerate) return run_enumerate(g, ea);
    if (*tables) return run_tables(g, ta);
    if (*lambda) return run_lambda(g, la);
    if (*upper) return run_upper_bound(g, ua);
    if (*assemble_cmd) return run_assemble(g, aa);
    if (*round_cmd) return run_round(g, ra);
    if (*verify_cmd) return run_verify(g, va);
    if (*reproduce) return run_reproduce(g, pa);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const InfeasibleEnumeration& e) {
    std::cerr << "infeasible: " << e.what() << " (raise --memory-budget)\n";
    return kError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
