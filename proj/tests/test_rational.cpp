#include "bplan/rational.hpp"
#include "doctest.h"

using bplan::Rational;

TEST_CASE("rational arithmetic and normalisation") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
    CHECK(Rational(1, 2) * Rational(2, 3) == Rational(1, 3));
    CHECK(Rational(1) / Rational(3) == Rational(1, 3));
    CHECK(Rational(7, 2) - Rational(1, 2) == Rational(3));
    CHECK(Rational(3).is_integer());
    CHECK_FALSE(Rational(1, 3).is_integer());
    CHECK(Rational(-7, 3) < Rational(-2));
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("floor, ceil and half-away rounding") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(5, 2).round_half_away() == 3);
    CHECK(Rational(-5, 2).round_half_away() == -3);
    CHECK(Rational(49, 20).round_half_away() == 2);  // 2.45
    CHECK(Rational(10).round_half_away() == 10);
}

TEST_CASE("parse and from_double") {
    CHECK(Rational::parse("3") == Rational(3));
    CHECK(Rational::parse("-3/6") == Rational(-1, 2));
    CHECK(Rational::parse("2.5") == Rational(5, 2));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::from_double(0.25) == Rational(1, 4));
    CHECK(Rational::from_double(2.0) == Rational(2));
    CHECK(Rational::from_double(-1.5) == Rational(-3, 2));
    CHECK_THROWS(Rational::parse("abc"));
}
