#include "doctest.h"
#include "matnet/rational.hpp"

using matnet::Rational;

TEST_CASE("construction and canonical form") {
  CHECK(Rational{}.is_zero());
  CHECK(Rational{5}.str() == "5");
  CHECK(Rational(4, 6).str() == "2/3");
  CHECK(Rational(-4, 6).str() == "-2/3");
  CHECK(Rational(4, -6).str() == "-2/3");
  CHECK(Rational(0, 7).is_zero());
  CHECK_THROWS_AS(Rational(1, 0), std::invalid_argument);
}

TEST_CASE("parsing") {
  CHECK(Rational::from_string("42").str() == "42");
  CHECK(Rational::from_string("-7").str() == "-7");
  CHECK(Rational::from_string("3/4").str() == "3/4");
  CHECK(Rational::from_string("-6/8").str() == "-3/4");
  CHECK(Rational::from_string("0.25") == Rational(1, 4));
  CHECK(Rational::from_string("-1.5") == Rational(-3, 2));
  CHECK(Rational::from_string(".5") == Rational(1, 2));
  CHECK_THROWS_AS(Rational::from_string("2."), std::invalid_argument);
  CHECK_THROWS_AS(Rational::from_string(""), std::invalid_argument);
  CHECK_THROWS_AS(Rational::from_string("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::from_string("a/b"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::from_string("1.2.3"), std::invalid_argument);
}

TEST_CASE("arithmetic is exact") {
  const Rational third(1, 3);
  CHECK(third + third + third == Rational{1});
  CHECK(Rational(1, 10) * Rational{10} == Rational{1});
  CHECK(Rational(7, 2) - Rational(3, 2) == Rational{2});
  CHECK(Rational(5, 6) / Rational(5, 3) == Rational(1, 2));
  CHECK_THROWS_AS(Rational{1} / Rational{0}, std::invalid_argument);
  CHECK((-Rational(2, 5)).str() == "-2/5");
  CHECK(Rational(-9, 4).abs() == Rational(9, 4));
}

TEST_CASE("ordering and signs") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational{0});
  CHECK(Rational{3}.sign() == 1);
  CHECK(Rational{-3}.sign() == -1);
  CHECK(Rational{0}.sign() == 0);
}

TEST_CASE("double conversion") {
  CHECK(Rational(1, 2).to_double() == 0.5);
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
}
