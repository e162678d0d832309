#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cpz/catalog.hpp"
#include "cpz/product.hpp"
#include "oracles.hpp"

using namespace cpz;
using S = CoefficientScheme;

namespace {

ProductSpec riemann_spec() { return catalog::get("riemann").spec; }

ProductSpec two_dir(std::vector<std::vector<S>> rows) {
    ProductSpec s;
    s.d = 2;
    s.directions = {{1, 0}, {1, 1}};
    s.tuple_size = rows.front().size();
    s.coefficients = std::move(rows);
    return s;
}

}  // namespace

TEST_CASE("validation reports each violation") {
    CHECK_NOTHROW(validate(riemann_spec()));

    auto bad = riemann_spec();
    bad.coefficients[0][0] = S::constant(1.5);
    try {
        validate(bad);
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        REQUIRE(e.violations().size() == 1);
        CHECK(e.violations()[0].field.find("coefficients") != std::string::npos);
    }

    auto zero = riemann_spec();
    zero.directions[0] = {Rational(0)};
    CHECK_THROWS_AS(validate(zero), ValidationError);

    auto shape = two_dir({{S::constant(1)}, {S::constant(1)}});
    shape.directions[1] = {Rational(1)};
    CHECK_THROWS_AS(validate(shape), ValidationError);

    auto table = riemann_spec();
    table.coefficients[0][0] = S::table(1.0, {{4, -1.0}});  // 4 is not prime
    CHECK_THROWS_AS(validate(table), ValidationError);
}

TEST_CASE("convergence margin") {
    const auto r = validate(riemann_spec());
    const std::vector<double> two{2.0};
    CHECK(convergence_margin(r, two) == 2.0);
    const auto md = validate(two_dir({{S::constant(1)}, {S::constant(1)}}));
    const std::vector<double> a{2.0, -0.5}, b{1.0, 3.0};
    CHECK(convergence_margin(md, a) == doctest::Approx(1.5));
    CHECK(convergence_margin(md, b) == 1.0);
    CHECK_THROWS_AS(require_convergent(md, b), DomainError);
    CHECK_THROWS_AS(require_convergent(md, two), DomainError);
}

TEST_CASE("tail bound dominates brute-force omitted sums") {
    TruncationPolicy pol;
    pol.prime_limit = 100000;
    pol.power_limit = 40;
    CHECK(tail_bound(pol, 2.0, 1) < 1e-4);

    pol.prime_limit = 10;
    pol.power_limit = 2;
    const double omitted = oracle::prime_power_sum_above(10, 1000000, 2.0) +
                           oracle::high_power_sum(10, 2, 2.0);
    CHECK(tail_bound(pol, 2.0, 1) >= omitted);

    for (double v : {1.5, 2.0, 3.0}) {
        pol.prime_limit = 1000;
        pol.power_limit = 3;
        const double brute = oracle::prime_power_sum_above(1000, 2000000, v) +
                             oracle::high_power_sum(1000, 3, v);
        CHECK(tail_bound(pol, v, 1) >= brute);
    }
    CHECK_THROWS_AS(tail_bound(pol, 1.0, 1), DomainError);
}

TEST_CASE("tail bound is monotone") {
    TruncationPolicy a, b;
    a.prime_limit = 1000;
    b.prime_limit = 10000;
    CHECK(tail_bound(b, 2.0, 1) < tail_bound(a, 2.0, 1));
    a.power_limit = 10;
    b = a;
    b.power_limit = 20;
    CHECK(tail_bound(b, 2.0, 1) <= tail_bound(a, 2.0, 1));
    CHECK(tail_bound(a, 3.0, 1) < tail_bound(a, 2.0, 1));
    CHECK(tail_bound(a, 2.0, 3) == doctest::Approx(3 * tail_bound(a, 2.0, 1)));
}

TEST_CASE("default policy") {
    const auto p = TruncationPolicy::defaults_for(2.0);
    CHECK(p.prime_limit == 100000);
    CHECK(p.power_limit == 20);
    CHECK(TruncationPolicy::defaults_for(100.0).power_limit == 2);
    CHECK(p.doubled().prime_limit == 200000);
    CHECK(p.doubled().power_limit == 40);
}

TEST_CASE("riemann zeta at 2") {
    const auto r = validate(riemann_spec());
    const auto pol = TruncationPolicy::defaults_for(2.0);
    const auto L = eval_log(r, {{2.0}, {0.0}}, pol);
    const double z2 = oracle::zeta(2.0).real();
    CHECK(z2 == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-14));
    CHECK(std::abs(std::exp(L.value.real()) - z2) <= z2 * std::expm1(L.tail));
    CHECK(L.value.imag() == 0.0);
    const auto z = eval(r, {{2.0}, {0.0}}, pol);
    CHECK(std::abs(z - std::exp(L.value)) < 1e-12);
}

TEST_CASE("L(2, chi_4) is Catalan's constant") {
    const auto r = validate(catalog::get("L_chi4").spec);
    const auto L = eval_log(r, {{2.0}, {0.0}}, TruncationPolicy::defaults_for(2.0));
    const double G = oracle::catalan();
    CHECK(G == doctest::Approx(0.915965594177219).epsilon(1e-13));
    CHECK(std::abs(std::exp(L.value.real()) - G) <= G * std::expm1(L.tail));
}

TEST_CASE("complex point against the series oracle") {
    const auto r = validate(riemann_spec());
    TruncationPolicy pol;
    pol.prime_limit = 1000000;
    pol.power_limit = 30;
    const std::complex<double> s(3.0, 7.0);
    const auto z = eval(r, {{3.0}, {7.0}}, pol);
    const auto ref = oracle::zeta(s);
    CHECK(std::abs(z - ref) < 1e-10);
}

TEST_CASE("all-zero coefficients give exactly zero") {
    auto s = riemann_spec();
    s.coefficients[0][0] = S::constant(0.0);
    const auto r = validate(s);
    const auto L = eval_log(r, {{2.0}, {3.0}}, {});
    CHECK(L.value == std::complex<double>(0.0, 0.0));
    CHECK(eval(r, {{2.0}, {3.0}}, {}) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("conjugation symmetry") {
    const auto r = validate(catalog::get("md_iv").spec);
    const std::vector<double> sig{2.0, 0.5};
    for (double t : {0.3, 4.0, 77.7}) {
        const auto a = eval_log(r, {sig, {t, -0.4 * t}}, {});
        const auto b = eval_log(r, {sig, {-t, 0.4 * t}}, {});
        CHECK(std::abs(a.value - std::conj(b.value)) <= 1e-14);
    }
}

TEST_CASE("thread count does not change results") {
    const auto r = validate(catalog::get("zeta2_L2s").spec);
    TruncationPolicy pol;
    pol.prime_limit = 300000;
    const EvalPoint pt{{2.0}, {13.25}};
    const auto one = eval_log(r, pt, pol, {1});
    const auto four = eval_log(r, pt, pol, {4});
    CHECK(one.value == four.value);
    CHECK(eval(r, pt, pol, {1}) == eval(r, pt, pol, {3}));
}

TEST_CASE("normalized cf") {
    const auto r = validate(riemann_spec());
    const std::vector<double> sig{2.0}, zero{0.0}, t{1.0};
    CHECK(normalized_cf(r, sig, zero, {}) == std::complex<double>(1.0, 0.0));
    const auto f = normalized_cf(r, sig, t, {});
    CHECK(std::abs(f) < 1.0);
    TruncationPolicy big;
    big.prime_limit = 1000000;
    big.power_limit = 30;
    const auto ref = oracle::zeta({2.0, 1.0}) / oracle::zeta(2.0);
    const auto fb = normalized_cf(r, sig, t, big);
    CHECK(std::abs(fb - ref) < 1e-6);
}

TEST_CASE("power scheme") {
    const auto s = S::power(1.0, 0.5);
    CHECK(s.value(4) == doctest::Approx(0.5));
    CHECK_FALSE(s.is_strict());
    CHECK(S::power(-1.0, 0.0).is_strict());
    CHECK_FALSE(S::power(1.0, -1.0).check("c").empty());
}
