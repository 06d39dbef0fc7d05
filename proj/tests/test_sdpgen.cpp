#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "radomult/sdpgen.hpp"

using namespace radomult;

namespace {

std::string data(const std::string& rel) { return std::string(RADOMULT_DATA_DIR) + "/" + rel; }

const ColoringFamily& family_3ap() {
  static const ColoringFamily f = enumerate_colorings(3, 2, 3, -1);
  return f;
}

const SdpProblem& problem_3ap() {
  static const SdpProblem p = assemble(ParameterSpec(builtin_system("3ap", 3), 3), family_3ap());
  return p;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("radomult_test_" + name)).string();
}

NumericSolution zero_solution(const SdpProblem& p) {
  NumericSolution s;
  for (const auto& b : p.blocks) s.blocks.emplace_back(b.flags.size() * b.flags.size(), 0.0);
  s.slacks.assign(p.classes.size(), 0.0);
  return s;
}

}  // namespace

TEST_CASE("3-AP problem structure") {
  const auto& p = problem_3ap();
  CHECK(p.classes.size() == 140);
  CHECK(p.constraints.size() == 140);
  REQUIRE(p.blocks.size() == 4);
  CHECK(p.blocks[0].t == -1);
  CHECK(p.blocks[0].flags.size() == 10);
  // Flags of the 0-dimensional types: the five used by the shipped certificate plus (i, j, j) for the third color.
  for (int i = 1; i <= 3; ++i) {
    const auto& b = p.blocks[i];
    CHECK(b.t == 0);
    CHECK(b.type.colors == std::vector<std::uint8_t>{static_cast<std::uint8_t>(i)});
    CHECK(b.flags.size() == 6);
  }
  const auto cert = read_certificate_file(data("certificates/3ap_q3_c3.cert"));
  for (const auto& cb : cert.blocks) {
    const auto it = std::find_if(p.blocks.begin(), p.blocks.end(), [&](const SdpBlock& b) { return b.type == cb.type; });
    REQUIRE(it != p.blocks.end());
    for (const auto& term : cb.terms)
      for (const auto& [colors, v] : term.coeffs) CHECK(std::find(it->flags.begin(), it->flags.end(), colors) != it->flags.end());
  }
  CHECK(p.trivial_bound() == 0);
}

TEST_CASE("M_tau(H) entries are nonnegative") {
  for (const auto& row : problem_3ap().constraints)
    for (const auto& e : row) CHECK(e.value > 0);
}

TEST_CASE("serial and parallel assembly agree") {
  ParameterSpec spec(builtin_system("schur", 2), 2);
  const auto fam = enumerate_colorings(2, 3, 2, 0);
  AssembleOptions serial;
  serial.serial = true;
  const auto a = assemble(spec, fam, serial);
  const auto b = assemble(spec, fam);
  CHECK(a.lambda == b.lambda);
  CHECK(a.constraints == b.constraints);
}

TEST_CASE("problem data matches certificate verification on square terms") {
  // Exact slacks from the assembled matrices must equal verify's per-class slack.
  const auto& p = problem_3ap();
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> coef(-4, 4);
  SosCertificate cert;
  cert.q = 3;
  cert.c = 3;
  cert.system = "3ap";
  cert.t_lambda = -1;
  cert.n_lambda = 1;
  cert.N = 2;
  cert.bound = Rational(1, 50);
  for (const auto& b : p.blocks) {
    CertificateBlock cb{b.type, b.k, {}};
    for (int r = 0; r < 2; ++r) {
      SquareTerm term{Rational(1, 7 + r), {}};
      for (const auto& f : b.flags)
        if (int v = coef(rng); v != 0) term.coeffs.emplace(f, Rational(v, 3));
      cb.terms.push_back(term);
    }
    cert.blocks.push_back(cb);
  }
  const auto slacks = exact_slacks(p, certificate_matrices(p, cert), cert.bound);
  const auto report = verify(cert, family_3ap());
  REQUIRE(report.classes.size() == slacks.size());
  for (std::size_t i = 0; i < slacks.size(); ++i) {
    CHECK(report.classes[i].colors == p.classes[i]);
    CHECK(report.classes[i].slack == slacks[i]);
  }
}

TEST_CASE("shipped certificates reproduce through the problem data") {
  const auto& p = problem_3ap();
  const auto cert = read_certificate_file(data("certificates/3ap_q3_c3.cert"));
  const auto slacks = exact_slacks(p, certificate_matrices(p, cert), cert.bound);
  CHECK(*std::min_element(slacks.begin(), slacks.end()) == 0);
}

TEST_CASE("4-AP problem structure") {
  ParameterSpec spec(builtin_system("4ap", 5), 2);
  const auto fam = enumerate_colorings(5, 2, 2, -1);
  const auto p = assemble(spec, fam);
  CHECK(p.classes.size() == 3324);
  const auto cert = read_certificate_file(data("certificates/4ap_q5_c2.cert"));
  for (const auto& cb : cert.blocks) {
    const auto it = std::find_if(p.blocks.begin(), p.blocks.end(), [&](const SdpBlock& b) { return b.type == cb.type; });
    REQUIRE(it != p.blocks.end());
    CHECK(it->flags.size() == 6);
    for (const auto& term : cb.terms)
      for (const auto& [colors, v] : term.coeffs) CHECK(std::find(it->flags.begin(), it->flags.end(), colors) != it->flags.end());
  }
  const auto slacks = exact_slacks(p, certificate_matrices(p, cert), cert.bound);
  CHECK(*std::min_element(slacks.begin(), slacks.end()) >= 0);
}

TEST_CASE("no types gives the trivial bound") {
  ParameterSpec spec(builtin_system("3ap", 3), 3);
  const auto fam = enumerate_colorings(3, 1, 3, -1);
  AssembleOptions none;
  none.type_dims = std::vector<int>{};
  const auto p = assemble(spec, fam, none);
  CHECK(p.blocks.empty());
  CHECK(p.classes.size() == 10);
  const auto cert = round_solution(p, zero_solution(p));
  CHECK(cert.blocks.empty());
  CHECK(cert.bound == p.trivial_bound());
  CHECK(cert.bound == 0);
}

TEST_CASE("SDPA output for a one-class problem") {
  ParameterSpec spec(builtin_system("3ap", 3), 1);
  const auto fam = enumerate_colorings(3, 1, 1, -1);
  AssembleOptions none;
  none.type_dims = std::vector<int>{};
  const auto p = assemble(spec, fam, none);
  std::ostringstream out;
  write_sdpa(out, to_sdpa(p));
  CHECK(out.str() ==
        "\"radomult 3ap q=3 c=1 t=-1 N=1\"\n"
        "1 =mdim\n"
        "1 =nblocks\n"
        "-3\n"
        "1\n"
        "0 1 2 2 1\n"
        "0 1 3 3 -1\n"
        "1 1 1 1 1\n"
        "1 1 2 2 1\n"
        "1 1 3 3 -1\n");
}

TEST_CASE("SDPA round trip is byte-identical") {
  const auto& p = problem_3ap();
  std::ostringstream first;
  const auto d = to_sdpa(p);
  write_sdpa(first, d);
  std::istringstream in(first.str());
  const auto back = read_sdpa(in);
  CHECK(back.m == 140);
  CHECK(back.block_sizes == std::vector<int>{10, 6, 6, 6, -142});
  CHECK(back.entries == d.entries);
  CHECK(back.rhs == d.rhs);
  std::ostringstream second;
  write_sdpa(second, back);
  CHECK(first.str() == second.str());
  // Emitted values are within the documented precision of the exact data.
  std::size_t k = 2;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    for (const auto& e : p.constraints[i]) {
      REQUIRE(k < back.entries.size());
      const auto& x = back.entries[k++];
      CHECK(x.matrix == static_cast<int>(i) + 1);
      CHECK(abs(x.value - e.value) <= Rational(1, 1000000) * Rational(1, 1000000) * Rational(1, 1000000));
    }
    k += 3;
  }
}

TEST_CASE("solution reader") {
  const auto& p = problem_3ap();
  std::ostringstream sol;
  sol << "0.5 0.25\n";
  sol << "1 1 1 1 9.0\n";  // dual slack entries are skipped
  sol << "2 2 1 2 0.5\n";
  sol << "2 2 2 2 2.0\n";
  sol << "2 5 3 3 0.125\n";
  sol << "2 5 141 141 0.75\n";
  sol << "2 5 142 142 0.25\n";
  std::istringstream in(sol.str());
  const auto s = read_solution(in, p);
  CHECK(s.blocks[1][0 * 6 + 1] == 0.5);
  CHECK(s.blocks[1][1 * 6 + 0] == 0.5);
  CHECK(s.blocks[1][1 * 6 + 1] == 2.0);
  CHECK(s.slacks[2] == 0.125);
  CHECK(s.objective == 0.5);
  std::istringstream bad("0\n2 9 1 1 1.0\n");
  CHECK_THROWS(read_solution(bad, p));
}

TEST_CASE("rounding an exact rational solution reproduces it") {
  const auto& p = problem_3ap();
  auto s = zero_solution(p);
  // Q = 1/4 (e_0 + 1/2 e_1)(e_0 + 1/2 e_1)^T on the first 0-dimensional block.
  s.blocks[1][0] = 0.25;
  s.blocks[1][1] = s.blocks[1][6] = 0.125;
  s.blocks[1][7] = 0.0625;
  const auto cert = round_solution(p, s);
  REQUIRE(cert.blocks.size() == 1);
  REQUIRE(cert.blocks[0].terms.size() == 1);
  CHECK(cert.blocks[0].terms[0].weight == Rational(1, 4));
  const auto q = certificate_matrices(p, cert);
  CHECK(q[1][0] == Rational(1, 4));
  CHECK(q[1][1] == Rational(1, 8));
  CHECK(q[1][7] == Rational(1, 16));
  const auto slacks = exact_slacks(p, q, Rational(0));
  CHECK(cert.bound == *std::min_element(slacks.begin(), slacks.end()));
  CHECK(verify(cert, family_3ap()).pass);
}

TEST_CASE("rounded certificates verify at their own bound") {
  const auto& p = problem_3ap();
  std::mt19937 rng(5);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int trial = 0; trial < 3; ++trial) {
    auto s = zero_solution(p);
    for (std::size_t b = 0; b < p.blocks.size(); ++b) {
      const std::size_t n = p.blocks[b].flags.size();
      std::vector<double> G(n * 2);
      for (auto& x : G) x = g(rng);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) s.blocks[b][i * n + j] = G[i * 2] * G[j * 2] + G[i * 2 + 1] * G[j * 2 + 1];
    }
    const auto cert = round_solution(p, s);
    const auto report = verify(cert, family_3ap());
    CHECK(report.pass);
    CHECK(report.min_slack == 0);
  }
}

TEST_CASE("round rejects malformed numeric input") {
  const auto& p = problem_3ap();
  auto s = zero_solution(p);
  s.blocks[1][1] = 1.0;  // not symmetric
  CHECK_THROWS_AS(round_solution(p, s), std::invalid_argument);
  auto t = zero_solution(p);
  t.blocks.pop_back();
  CHECK_THROWS_AS(round_solution(p, t), std::invalid_argument);
}

TEST_CASE("3-AP pipeline through the external solver") {
  const auto& p = problem_3ap();
  const auto prob = temp_path("3ap.dat-s");
  const auto sol = temp_path("3ap.sol");
  write_sdpa_file(prob, p);
  run_external_solver(default_solver_command(), prob, sol);
  const auto numeric = read_solution_file(sol, p);
  CHECK(numeric.objective >= 1.0 / 27 - 1e-4);
  const auto rounded = round_solution(p, numeric);
  CHECK(verify(rounded, family_3ap()).pass);
  CHECK(rounded.bound >= Rational(1, 27) - Rational(1, 1000000));
  const auto polished = polish_solution(p, numeric, Rational(1, 27));
  INFO(polished.log);
  REQUIRE(polished.certificate.has_value());
  CHECK(polished.certificate->bound == Rational(1, 27));
  const auto report = verify(*polished.certificate, family_3ap());
  CHECK(report.pass);
  CHECK(report.min_slack == 0);
  std::filesystem::remove(prob);
  std::filesystem::remove(sol);
}
