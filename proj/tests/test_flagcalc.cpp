#include "doctest.h"

#include <cmath>
#include <map>
#include <random>

#include "radomult/flagcalc.hpp"
#include "radomult/linsys.hpp"

using namespace radomult;

namespace {

// Small (q, c, n) with c^(q^n) <= 3^9.
const std::vector<std::tuple<int, int, int>> kSmall = {{2, 2, 1}, {2, 2, 2}, {2, 2, 3}, {2, 3, 1}, {2, 3, 2},
                                                       {3, 2, 1}, {3, 2, 2}, {3, 3, 1}, {3, 3, 2}, {5, 2, 1},
                                                       {5, 3, 1}, {4, 2, 1}, {7, 2, 1}};

}  // namespace

TEST_CASE("density examples") {
  const Coloring g(3, 2, 2, {2, 1, 1, 1, 1, 1, 1, 1, 1});
  CHECK(density(g, g, -1) == 1);
  CHECK(density(Coloring(3, 1, 2, {2, 1, 1}), g, -1) == Rational(1, 3));
  const Coloring pt(3, 0, 2, {2});
  CHECK(density(pt, g, -1) == Rational(1, 9));
  CHECK_THROWS(density(Coloring(3, 3, 2, std::vector<std::uint8_t>(27, 1)), g, -1));
}

TEST_CASE("densities over a family sum to one") {
  for (auto [q, c, n] : kSmall) {
    for (int t = -1; t <= std::min(n, 1); ++t) {
      const auto gamma = enumerate_colorings(q, n, c, t).representative(0);
      std::mt19937 rng(q * 100 + n);
      std::vector<std::uint8_t> colors(gamma.colors.size());
      for (auto& v : colors) v = static_cast<std::uint8_t>(1 + rng() % c);
      const Coloring g(q, n, c, colors);
      for (int k = std::max(t, 0); k <= n; ++k) {
        const auto fam = enumerate_colorings(q, k, c, t);
        Rational sum = 0;
        for (std::size_t i = 0; i < fam.size(); ++i) sum += density(fam.representative(i), g, t);
        CHECK(sum == 1);
      }
    }
  }
}

TEST_CASE("degenerate density examples") {
  CHECK(degenerate_density(Coloring::constant(3, 1, 2, 1), Coloring::constant(3, 2, 2, 1), -1) == 1);
  const Coloring g(3, 1, 2, {1, 2, 2});
  CHECK(degenerate_density(Coloring::constant(3, 1, 2, 1), g, -1) == Rational(1, 9));
  // Blow-up of g to F_3^2: the color depends on the first coordinate only.
  const Coloring blown(3, 2, 2, {1, 2, 2, 1, 2, 2, 1, 2, 2});
  CHECK(degenerate_density(Coloring::constant(3, 1, 2, 1), blown, -1) == Rational(1, 9));
}

TEST_CASE("chain rule for single densities") {
  for (auto [q, c, n] : kSmall) {
    std::mt19937 rng(q + 7 * n + 31 * c);
    for (int t = -1; t <= std::min(n, 1); ++t) {
      std::vector<std::uint8_t> colors(static_cast<std::size_t>(std::pow(q, n)));
      for (auto& v : colors) v = static_cast<std::uint8_t>(1 + rng() % c);
      const Coloring g(q, n, c, colors);
      for (int k = std::max(t, 0); k <= n; ++k) {
        const auto small = enumerate_colorings(q, k, c, t);
        for (int np = k; np <= n; ++np) {
          const auto mid = enumerate_colorings(q, np, c, t);
          std::vector<Rational> p_mid(mid.size());
          for (std::size_t b = 0; b < mid.size(); ++b) p_mid[b] = density(mid.representative(b), g, t);
          for (std::size_t d = 0; d < small.size(); ++d) {
            const auto delta = small.representative(d);
            Rational via = 0;
            for (std::size_t b = 0; b < mid.size(); ++b)
              if (p_mid[b] != 0) via += density(delta, mid.representative(b), t) * p_mid[b];
            CAPTURE(q);
            CAPTURE(c);
            CAPTURE(n);
            CAPTURE(t);
            CAPTURE(k);
            CAPTURE(np);
            CHECK(via == density(delta, g, t));
          }
        }
      }
    }
  }
}

TEST_CASE("chain rule for pair densities") {
  for (auto [q, c, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {2, 3, 2}, {3, 3, 2}}) {
    std::mt19937 rng(11 * q + n);
    for (int t = 0; t <= 1; ++t) {
      if (2 - t > n) continue;
      std::vector<std::uint8_t> colors(static_cast<std::size_t>(std::pow(q, n)));
      for (auto& v : colors) v = static_cast<std::uint8_t>(1 + rng() % c);
      const Coloring g(q, n, c, colors);
      const auto flags = enumerate_colorings(q, 1, c, t);
      const int kp = 2 - t;
      for (int np = kp; np <= n; ++np) {
        const auto mid = enumerate_colorings(q, np, c, t);
        std::vector<Rational> p_mid(mid.size());
        for (std::size_t b = 0; b < mid.size(); ++b) p_mid[b] = density(mid.representative(b), g, t);
        for (std::size_t a = 0; a < flags.size(); ++a)
          for (std::size_t b2 = 0; b2 < flags.size(); ++b2) {
            const Coloring pair[2] = {flags.representative(a), flags.representative(b2)};
            if (t >= 0 && type_of(pair[0].colors, q, t) != type_of(pair[1].colors, q, t)) continue;
            Rational via = 0;
            for (std::size_t b = 0; b < mid.size(); ++b)
              if (p_mid[b] != 0) via += density(pair, mid.representative(b), t) * p_mid[b];
            CHECK(via == density(pair, g, t));
          }
      }
    }
  }
}

TEST_CASE("solution averaging through densities") {
  for (auto [name, q, t, c, n] : {std::tuple{"3ap", 3, -1, 2, 2}, {"3ap", 3, -1, 3, 2}, {"schur", 2, 0, 2, 3},
                                  {"schur", 2, 0, 3, 2}, {"schur", 3, 0, 2, 2}, {"4ap", 5, -1, 2, 1}}) {
    const auto L = builtin_system(name, q);
    const MonoEvaluator lambda(L, t);
    std::mt19937 rng(3);
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<std::uint8_t> colors(static_cast<std::size_t>(std::pow(q, n)));
      for (auto& v : colors) v = static_cast<std::uint8_t>(1 + rng() % c);
      const Coloring g(q, n, c, colors);
      for (int k = lambda.base_dim(); k <= n; ++k) {
        const auto fam = enumerate_colorings(q, k, c, t);
        Rational via = 0;
        for (std::size_t i = 0; i < fam.size(); ++i) {
          const auto delta = fam.representative(i);
          via += lambda(delta) * density(delta, g, t);
        }
        CHECK(via == lambda(g));
      }
    }
  }
}

TEST_CASE("flag products are distributions and the type is the unit") {
  const Coloring f(3, 1, 2, {1, 2, 2});
  const auto prod = flag_product(f, f, 0, 2);
  for (const auto& [k, v] : prod.coeffs) CHECK(v > 0);
  // Summed over all pairs of flags, the products expand the type itself.
  const auto lines = enumerate_colorings(3, 1, 2, 0);
  std::map<std::vector<std::uint8_t>, Rational> total;
  for (std::size_t a = 0; a < lines.size(); ++a)
    for (std::size_t b = 0; b < lines.size(); ++b) {
      const auto fa = lines.representative(a), fb = lines.representative(b);
      if (fa.colors[0] != 1 || fb.colors[0] != 1) continue;
      for (const auto& [key, v] : flag_product(fa, fb, 0, 2).coeffs) total[key] += v;
    }
  CHECK_FALSE(total.empty());
  for (const auto& [key, v] : total) CHECK(v == 1);
  const auto f2 = enumerate_colorings(3, 2, 2, 0);
  const Coloring tau(3, 0, 2, {1});
  const auto unit = flag_product(tau, f, 0, 2);
  for (std::size_t i = 0; i < f2.size(); ++i) {
    const auto g = f2.representative(i);
    if (g.colors[0] != 1) continue;
    const auto it = unit.coeffs.find(g.colors);
    const Rational got = it == unit.coeffs.end() ? Rational(0) : it->second;
    CHECK(got == density(f, g, 0));
  }
  CHECK_THROWS(flag_product(f, Coloring(3, 1, 2, {2, 1, 1}), 0, 2));
  CHECK_THROWS(flag_product(f, f, 0, 1));
}

TEST_CASE("downward coefficient examples and the orbit-ratio identity") {
  CHECK(downward_coefficient(Coloring::constant(3, 2, 2, 2), 0, -1) == 1);
  CHECK(downward_coefficient(Coloring(3, 1, 2, {1, 1, 2}), 0, -1) == Rational(2, 3));
  for (auto [q, c, n] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {3, 2, 2}, {3, 3, 1}, {2, 3, 2}, {5, 2, 1}}) {
    for (int tl = -1; tl <= 0; ++tl) {
      const auto low = enumerate_colorings(q, n, c, tl);
      const ClassIndex idx(low);
      for (int t = tl; t <= std::min(n, 1); ++t) {
        const auto fam = enumerate_colorings(q, n, c, t);
        for (std::size_t i = 0; i < fam.size(); ++i) {
          const auto g = fam.representative(i);
          const Rational expect = ratio(fam.orbit_sizes[i], low.orbit_sizes[idx.classify(g)]);
          CHECK(downward_coefficient(g, t, tl) == expect);
        }
      }
    }
  }
}

TEST_CASE("placement counts") {
  const auto f = GaloisField::make(3);
  for (int N = 1; N <= 3; ++N) {
    const VectorSpace s(f, N);
    for (int tl = -1; tl <= 0; ++tl)
      for (int t = tl; t <= N; ++t)
        CHECK(BigInt(static_cast<unsigned long>(type_placements(s, t, tl).size())) == count_type_placements(3, N, t, tl));
  }
}

TEST_CASE("downward evaluation is consistent across dimensions") {
  // [[F]] at dimension 2 equals [[F]] at dimension 1 pushed up by densities.
  for (auto [q, c] : {std::pair{2, 2}, {3, 2}, {2, 3}}) {
    for (int tl = -1; tl <= 0; ++tl) {
      const auto flags = enumerate_colorings(q, 1, c, 0);
      const auto base1 = enumerate_colorings(q, 1, c, tl);
      const auto base2 = enumerate_colorings(q, 2, c, tl);
      const auto lift = enumerate_colorings(q, 2, c, 0);
      for (std::size_t i = 0; i < flags.size(); ++i) {
        const auto F = flags.representative(i);
        FlagVector f1{type_of(F.colors, q, 0), q, c, 1, {{F.colors, Rational(1)}}};
        const auto low = downward_eval(f1, tl);
        // Expansion of F at dimension 2 within its type.
        FlagVector f2{f1.type, q, c, 2, {}};
        for (std::size_t g = 0; g < lift.size(); ++g) {
          const auto G = lift.representative(g);
          if (G.colors[0] != F.colors[0]) continue;
          const Rational p = density(F, G, 0);
          if (p != 0) f2.coeffs.emplace(G.colors, p);
        }
        const auto high = downward_eval(f2, tl);
        for (std::size_t h = 0; h < base2.size(); ++h) {
          const auto H = base2.representative(h);
          Rational via = 0;
          for (const auto& [key, v] : low) via += v * density(Coloring(q, 1, c, key), H, tl);
          const auto it = high.find(H.colors);
          CHECK(via == (it == high.end() ? Rational(0) : it->second));
        }
        (void)base1;
      }
    }
  }
}

TEST_CASE("pair-density engine agrees with a direct averaging oracle") {
  // q=2 and q=3, N=2, unfixed base, point types, line flags: average over all
  // points x of H with the type color, and all ordered pairs of distinct
  // lines through x.
  for (auto [q, c] : {std::pair{2, 2}, {3, 2}, {3, 3}}) {
    const auto base = enumerate_colorings(q, 2, c, -1);
    const PairDensityEngine engine(base, 0, 1);
    const auto f = GaloisField::make(q);
    const VectorSpace s(f, 2);
    std::vector<std::uint32_t> dirs;
    for (std::uint32_t d = 1; d < s.size(); ++d) {
      const std::uint32_t one[1] = {d};
      if (s.rref(one).front() == d) dirs.push_back(d);
    }
    for (std::size_t h = 0; h < base.size(); ++h) {
      const auto H = base.representative(h);
      std::map<std::tuple<std::size_t, std::size_t, std::size_t>, unsigned long> want;
      for (std::uint32_t x = 0; x < s.size(); ++x)
        for (auto d1 : dirs)
          for (auto d2 : dirs) {
            if (d1 == d2) continue;
            auto line = [&](std::uint32_t d) {
              std::vector<std::uint8_t> col;
              for (int a = 0; a < q; ++a) col.push_back(H.colors[s.add(x, s.scale(f.element(a), d))]);
              return canonicalize(Coloring(q, 1, c, col), 0).colors;
            };
            const auto la = engine.locate(line(d1));
            const auto lb = engine.locate(line(d2));
            REQUIRE(la);
            REQUIRE(lb);
            CHECK(la->first == lb->first);
            ++want[{la->first, la->second, lb->second}];
          }
      std::map<std::tuple<std::size_t, std::size_t, std::size_t>, unsigned long> got;
      for (const auto& pc : engine.counts(h)) got[{pc.block, pc.a, pc.b}] = pc.count;
      CHECK(got == want);
    }
    CHECK(engine.denominator() == static_cast<unsigned long>(s.size() * dirs.size() * (dirs.size() - 1)));
  }
}

TEST_CASE("expansion and placement routes agree on small cases") {
  for (auto [q, c, N] : std::vector<std::tuple<int, int, int>>{{2, 2, 2}, {2, 2, 3}, {3, 2, 2}, {2, 3, 2}}) {
    for (int tl = -1; tl <= 0; ++tl) {
      const auto base = enumerate_colorings(q, N, c, tl);
      for (int t = tl; t <= N - 1; ++t) {
        const int k = t < 0 ? N - 1 : (N - t) / 2 + t;
        if (t >= 0 && 2 * (k - t) > N - t) continue;
        const PairDensityEngine engine(base, t, k);
        CAPTURE(q);
        CAPTURE(c);
        CAPTURE(N);
        CAPTURE(tl);
        CAPTURE(t);
        CHECK(placement_route_matrices(engine) == expansion_route_matrices(engine));
      }
    }
  }
}
