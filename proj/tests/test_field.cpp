#include "doctest.h"

#include <set>
#include <stdexcept>

#include "radomult/field.hpp"
#include "radomult/rational.hpp"

using namespace radomult;

TEST_CASE("prime field arithmetic") {
  const auto f = GaloisField::make(5);
  CHECK(f.add(f.element(2), f.element(4)) == f.element(1));
  CHECK(f.mul(f.element(3), f.element(4)) == f.element(2));
  CHECK(f.neg(f.element(2)) == f.element(3));
  CHECK(f.inv(f.element(2)) == f.element(3));
  CHECK_THROWS_AS(f.inv(f.zero()), std::domain_error);
}

TEST_CASE("GF(4) multiplication of omega and omega + 1") {
  const auto f = GaloisField::make(4);
  // index 2 = x, index 3 = x + 1
  CHECK(f.mul(f.element(2), f.element(3)) == f.one());
  CHECK(f.add(f.element(2), f.element(2)) == f.zero());
  CHECK(f.characteristic() == 2);
  CHECK(f.degree() == 2);
}

TEST_CASE("unsupported orders are rejected") {
  for (int q : {0, 1, 6, 10, 11, 16}) CHECK_THROWS_AS(GaloisField::make(q), std::invalid_argument);
  CHECK(is_supported_field_order(9));
  CHECK_FALSE(is_supported_field_order(6));
}

TEST_CASE("field axioms hold for every supported order") {
  for (int q : {2, 3, 4, 5, 7, 8, 9}) {
    CAPTURE(q);
    const auto f = GaloisField::make(q);
    for (int a = 0; a < q; ++a) {
      const auto x = f.element(a);
      CHECK(f.add(x, f.zero()) == x);
      CHECK(f.mul(x, f.one()) == x);
      CHECK(f.add(x, f.neg(x)) == f.zero());
      if (a != 0) CHECK(f.mul(x, f.inv(x)) == f.one());
      for (int b = 0; b < q; ++b) {
        const auto y = f.element(b);
        CHECK(f.add(x, y) == f.add(y, x));
        CHECK(f.mul(x, y) == f.mul(y, x));
        for (int c = 0; c < q; ++c) {
          const auto z = f.element(c);
          CHECK(f.mul(x, f.add(y, z)) == f.add(f.mul(x, y), f.mul(x, z)));
          CHECK(f.mul(x, f.mul(y, z)) == f.mul(f.mul(x, y), z));
        }
      }
    }
    // The primitive element generates all nonzero elements.
    std::set<int> seen;
    auto g = f.one();
    for (int i = 0; i < q - 1; ++i) {
      seen.insert(g.index);
      g = f.mul(g, f.primitive());
    }
    CHECK(seen.size() == static_cast<std::size_t>(q - 1));
    CHECK(f.embed_integer(f.characteristic()) == f.zero());
    CHECK(f.embed_integer(-1) == f.neg(f.one()));
  }
}

TEST_CASE("rational parsing and decimal output") {
  CHECK(parse_rational("13/126") == Rational(13, 126));
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK(parse_rational("7") == Rational(7));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("abc"));
  CHECK_THROWS(parse_rational("1/2/3"));
  CHECK(to_string(Rational(1, 27)) == "1/27");
  CHECK(to_decimal(Rational(1, 4)) == "0.25");
  CHECK(to_decimal(Rational(-3)) == "-3");
  CHECK(parse_decimal("0.25") == Rational(1, 4));
  CHECK(parse_decimal("-1.5e-2") == Rational(-3, 200));
  const Rational third(1, 3);
  CHECK(parse_decimal(to_decimal(third)) != third);
  CHECK(abs(parse_decimal(to_decimal(third)) - third) < Rational(1, BigInt("1000000000000000000000000")));
  CHECK(approximate(0.3333333333333, 1000) == Rational(1, 3));
  CHECK(approximate(0.1, 100) == Rational(1, 10));
}
