#include <catch2/catch.hpp>

#include "hartigan/rational.hpp"

using hartigan::Rational;

TEST_CASE("rationals stay canonical") {
    CHECK(Rational(2, 4).str() == "1/2");
    CHECK(Rational(-2, 4).str() == "-1/2");
    CHECK(Rational(2, -4).str() == "-1/2");  // sign moves to the numerator
    CHECK(Rational(0, 7).str() == "0");
    CHECK(Rational(6, 3).str() == "2");
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) * Rational(3, 7) == Rational(1, 7));
    CHECK(Rational(1, 3) - Rational(1, 3) == Rational(0));
    CHECK(Rational(5) / Rational(10) == Rational(1, 2));
    CHECK_THROWS_AS(Rational(1, 0), hartigan::InvariantViolation);
    CHECK_THROWS_AS(Rational(1) / Rational(0), hartigan::InvariantViolation);
}

TEST_CASE("decimal literals parse exactly") {
    CHECK(Rational::parse("0.2") == Rational(1, 5));
    CHECK(Rational::parse("-0.25") == Rational(-1, 4));
    CHECK(Rational::parse("13") == Rational(13));
    CHECK(Rational::parse("+4.50") == Rational(9, 2));
    CHECK(Rational::parse("1e-3") == Rational(1, 1000));
    CHECK(Rational::parse("2.5e2") == Rational(250));
    CHECK(Rational::parse("22/7") == Rational(22, 7));
    CHECK(Rational::parse("-6/4") == Rational(-3, 2));
    CHECK_THROWS_AS(Rational::parse("abc"), hartigan::ParseError);
    CHECK_THROWS_AS(Rational::parse("1.2.3"), hartigan::ParseError);
    CHECK_THROWS_AS(Rational::parse(""), hartigan::ParseError);
    CHECK_THROWS_AS(Rational::parse("1/0"), hartigan::ParseError);
}

TEST_CASE("ordering and conversions") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-5) < Rational(0));
    CHECK(abs(Rational(-3, 4)) == Rational(3, 4));
    CHECK(Rational(1, 2).to_double() == 0.5);
    CHECK(Rational(1, 3).sign() == 1);
    CHECK(Rational(-1, 3).sign() == -1);
    CHECK(Rational(0).sign() == 0);
    // big growth stays exact: 5^40 back and forth
    Rational big(1);
    for (int i = 0; i < 40; ++i) big *= Rational(5);
    for (int i = 0; i < 40; ++i) big /= Rational(5);
    CHECK(big == Rational(1));
}
