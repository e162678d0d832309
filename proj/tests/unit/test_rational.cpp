#include <doctest.h>

#include <limits>

#include "cpz/error.hpp"
#include "cpz/rational.hpp"

using namespace cpz;

TEST_CASE("parse") {
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("-3/2") == Rational(-3, 2));
    CHECK(Rational::parse("0.125") == Rational(1, 8));
    CHECK(Rational::parse("+2.5e-1") == Rational(1, 4));
    CHECK(Rational::parse("1.5E2") == Rational(150));
    CHECK(Rational::parse("6/-4") == Rational(-3, 2));
    CHECK_THROWS_AS(Rational::parse("x"), ParseError);
    CHECK_THROWS_AS(Rational::parse("1/0"), DomainError);
    CHECK_THROWS_AS(Rational::parse(""), ParseError);
}

TEST_CASE("lowest terms and arithmetic") {
    const Rational a(6, -4);
    CHECK(a.num() == -3);
    CHECK(a.den() == 2);
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(2, 3) / Rational(4, 9) == Rational(3, 2));
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(-1, 2) < Rational(0));
    CHECK(Rational(5, 10).str() == "1/2");
    CHECK(Rational(-4).str() == "-4");
    CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
}

TEST_CASE("overflow is reported") {
    const Rational big(std::numeric_limits<std::int64_t>::max() / 2);
    CHECK_THROWS_AS(big * Rational(4), DomainError);
    CHECK_NOTHROW(big + Rational(1));
}

TEST_CASE("rank and multiples") {
    using V = RationalVector;
    CHECK(rank({V{1, 0}, V{1, 1}}) == 2);
    CHECK(rank({V{1, 2}, V{2, 4}}) == 1);
    CHECK(rank({V{1, 0, 0}, V{0, 1, 0}, V{1, 1, 0}}) == 2);
    CHECK(rank({V{0, 0}}) == 0);
    Rational c;
    CHECK(rational_multiple(V{1, 2}, V{Rational(1, 2), 1}, c));
    CHECK(c == Rational(1, 2));
    CHECK_FALSE(rational_multiple(V{1, 2}, V{1, 1}, c));
    CHECK(dot(V{1, 2}, V{3, Rational(1, 2)}) == Rational(4));
}

TEST_CASE("exact inverse") {
    using V = RationalVector;
    const auto inv = inverse({V{1, 1}, V{1, 2}});
    CHECK(inv[0][0] == Rational(2));
    CHECK(inv[0][1] == Rational(-1));
    CHECK(inv[1][0] == Rational(-1));
    CHECK(inv[1][1] == Rational(1));
    CHECK_THROWS_AS(inverse({V{1, 2}, V{2, 4}}), DomainError);
}
