#include "doctest.h"

#include <random>
#include <set>
#include <sstream>

#include "radomult/linsys.hpp"

using namespace radomult;

namespace {

// Direct check of A s = 0 coordinate-wise, independent of the kernel basis.
bool satisfies(const LinearSystem& L, const VectorSpace& s, const Solution& sol) {
  const auto& f = L.field();
  for (const auto& row : L.matrix()) {
    for (int i = 0; i < s.dim(); ++i) {
      FieldElement acc = f.zero();
      for (int j = 0; j < L.vars(); ++j) acc = f.add(acc, f.mul(f.embed_integer(row[j]), s.coord(sol[j], i)));
      if (acc != f.zero()) return false;
    }
  }
  return true;
}

std::vector<Solution> brute_solutions(const LinearSystem& L, const VectorSpace& s) {
  std::vector<Solution> out;
  Solution sol(L.vars(), 0);
  while (true) {
    if (satisfies(L, s, sol)) out.push_back(sol);
    std::size_t j = 0;
    while (j < sol.size() && ++sol[j] == s.size()) sol[j++] = 0;
    if (j == sol.size()) break;
  }
  return out;
}

}  // namespace

TEST_CASE("built-in systems") {
  const auto ap4 = builtin_system("4ap", 5);
  CHECK(ap4.rows() == 2);
  CHECK(ap4.vars() == 4);
  CHECK(ap4.invariant());
  CHECK_FALSE(builtin_system("schur", 2).invariant());
  const auto ap3 = builtin_system("3AP", 3);
  CHECK(ap3.rows() == 1);
  CHECK(ap3.kernel().size() == 2);
  CHECK_THROWS(builtin_system("2ap", 5));
  CHECK_THROWS(builtin_system("fermat", 5));
  // -2 vanishes in characteristic 2.
  CHECK_THROWS(builtin_system("3ap", 2));
  CHECK_THROWS(LinearSystem("dependent", {{1, 1}, {2, 2}}, 5));
}

TEST_CASE("system dimension") {
  CHECK(dim_of_system(builtin_system("4ap", 5), -1) == 1);
  CHECK(dim_of_system(builtin_system("schur", 3), 0) == 2);
  CHECK_THROWS(dim_of_system(builtin_system("schur", 3), -1));
  CHECK(dim_of_system(builtin_system("3ap", 3), 1) == 3);
}

TEST_CASE("solution enumeration") {
  const auto f3 = GaloisField::make(3);
  const VectorSpace l3(f3, 1);
  const auto ap3 = builtin_system("3ap", 3);
  const auto fd = solutions(ap3, l3, SolutionKind::FullyDimensional, -1);
  CHECK(fd.size() == 6);
  for (const auto& s : fd) CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == 3);

  const auto f5 = GaloisField::make(5);
  CHECK(solutions(builtin_system("4ap", 5), VectorSpace(f5, 1), SolutionKind::Distinct).size() == 20);
  CHECK(solutions(ap3, l3, SolutionKind::All, 0, std::vector<char>(3, 0)).empty());
  const std::vector<char> T{1, 1, 0};
  for (const auto& s : solutions(ap3, l3, SolutionKind::All, 0, T))
    for (auto x : s) CHECK(x != 2);

  for (auto [name, q, n] : {std::tuple{"3ap", 3, 2}, {"schur", 2, 2}, {"schur", 3, 2}, {"4ap", 5, 1}, {"schur", 5, 1}}) {
    const auto L = builtin_system(name, q);
    const VectorSpace s(L.field(), n);
    auto got = solutions(L, s, SolutionKind::All);
    auto want = brute_solutions(L, s);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("monochromatic fraction examples") {
  const auto ap3 = builtin_system("3ap", 3);
  CHECK(mono_fraction(ap3, Coloring::constant(3, 2, 3, 2), -1) == 1);
  CHECK(mono_fraction(ap3, Coloring(3, 1, 2, {1, 1, 2}), -1) == 0);
  CHECK(mono_fraction(builtin_system("4ap", 5), Coloring(5, 1, 2, {1, 1, 1, 1, 2}), -1) == Rational(1, 5));
  CHECK_THROWS(mono_fraction(builtin_system("schur", 3), Coloring(3, 1, 2, {1, 1, 2}), 0));
}

TEST_CASE("subspace decomposition agrees with direct solution counting") {
  std::mt19937 rng(99);
  for (auto [name, q, t, n, c] : {std::tuple{"3ap", 3, -1, 2, 3}, {"3ap", 3, 0, 2, 2}, {"4ap", 5, -1, 2, 2},
                                  {"schur", 2, 0, 3, 3}, {"schur", 2, 0, 4, 2}, {"schur", 3, 1, 3, 2}, {"5ap", 5, -1, 2, 2}}) {
    const auto L = builtin_system(name, q);
    const VectorSpace s(L.field(), n);
    const auto fd = solutions(L, s, SolutionKind::FullyDimensional, t);
    const int d = dim_of_system(L, t);
    CAPTURE(name);
    CAPTURE(t);
    CHECK(BigInt(static_cast<unsigned long>(fd.size())) ==
          BigInt(static_cast<unsigned long>(MonoEvaluator(L, t).base_solutions().size())) * count_mon(t, d, n, q));
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<std::uint8_t> colors(s.size());
      for (auto& v : colors) v = static_cast<std::uint8_t>(1 + rng() % c);
      const Coloring g(q, n, c, colors);
      unsigned long mono = 0;
      for (const auto& sol : fd) {
        bool same = true;
        for (auto x : sol) same = same && colors[x] == colors[sol[0]];
        mono += same;
      }
      CHECK(mono_fraction(L, g, t) == ratio(mono, static_cast<unsigned long>(fd.size())));
    }
  }
}

TEST_CASE("monochromatic fraction is invariant under t-fixed isomorphisms") {
  std::mt19937 rng(5);
  for (auto [name, q, t, n] : {std::tuple{"3ap", 3, -1, 2}, {"schur", 3, 0, 2}, {"4ap", 5, -1, 2}, {"schur", 2, 1, 3}}) {
    const auto L = builtin_system(name, q);
    const VectorSpace s(L.field(), n);
    const IsoGroup g(s, t);
    const MonoEvaluator lambda(L, t);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<std::uint8_t> colors(s.size());
      for (auto& v : colors) v = static_cast<std::uint8_t>(1 + rng() % 3);
      const Rational base = lambda(Coloring(q, n, 3, colors));
      for (const auto& perm : g.generators()) {
        std::vector<std::uint8_t> moved(colors.size());
        for (std::size_t x = 0; x < moved.size(); ++x) moved[x] = colors[perm[x]];
        CHECK(lambda(Coloring(q, n, 3, moved)) == base);
      }
    }
  }
}

TEST_CASE("fully-dimensional solutions of built-in systems have distinct entries") {
  for (auto [name, q, t] : {std::tuple{"3ap", 3, -1}, {"4ap", 5, -1}, {"5ap", 5, -1}, {"schur", 2, 0}, {"schur", 3, 0},
                            {"schur", 5, 0}, {"3ap", 5, 0}, {"schur", 2, 1}}) {
    const MonoEvaluator e(builtin_system(name, q), t);
    CHECK_FALSE(e.base_solutions().empty());
    for (const auto& s : e.base_solutions()) CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == s.size());
  }
}

TEST_CASE("uniform random coloring attains c^(1-m) in expectation") {
  for (auto [name, q, t, c] : {std::tuple{"3ap", 3, -1, 2}, {"3ap", 3, -1, 3}, {"4ap", 5, -1, 2}, {"4ap", 5, -1, 3},
                               {"schur", 2, 0, 2}, {"schur", 2, 0, 3}, {"schur", 3, 0, 2}, {"schur", 3, 0, 3}}) {
    const auto L = builtin_system(name, q);
    const MonoEvaluator lambda(L, t);
    const int d = lambda.base_dim();
    const BigInt raw = raw_coloring_count(q, d, c);
    Rational sum = 0;
    for (Rank r = 0; r < raw.get_ui(); ++r) sum += lambda(coloring_from_rank(q, d, c, r));
    BigInt cm;
    mpz_ui_pow_ui(cm.get_mpz_t(), static_cast<unsigned long>(c), static_cast<unsigned long>(L.vars() - 1));
    CAPTURE(name);
    CAPTURE(c);
    CHECK(sum / raw == ratio(BigInt(1), cm));
  }
}

TEST_CASE("system files") {
  std::istringstream in("2 4\n1 -2 1 0\n0 1 -2 1\n");
  const auto L = read_system(in, 5);
  CHECK(L.invariant());
  CHECK(L.matrix() == builtin_system("4ap", 5).matrix());
  std::istringstream bad("1 3\n1 1");
  CHECK_THROWS(read_system(bad, 5));
}
