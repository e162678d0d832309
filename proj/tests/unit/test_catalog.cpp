#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cpz/catalog.hpp"
#include "cpz/levy.hpp"

using namespace cpz;

TEST_CASE("every entry validates and converges at its default point") {
    const auto names = catalog::list();
    CHECK(names.size() == 18);
    for (const auto& n : names) {
        CAPTURE(n);
        const auto e = catalog::get(n);
        CHECK(e.name == n);
        const auto v = validate(e.spec);
        if (n == "md_iv")
            CHECK(convergence_margin(v, e.sigma) == doctest::Approx(2.0));
        else
            CHECK(convergence_margin(v, e.sigma) == 2.0);
    }
}

TEST_CASE("lookup errors and parameters") {
    CHECK_THROWS_AS(catalog::get("zeta_3s"), LookupError);
    CHECK_THROWS_AS(catalog::get("rank_shift", {0.0, 1}), DomainError);
    CHECK_THROWS_AS(catalog::get("tuple_rank_i", {0.5, 3}), DomainError);
    const auto e = catalog::get("rank_shift", {2.0, 1});
    CHECK(e.spec.coefficients[0][0].value(2) == doctest::Approx(0.25));
    const auto t = catalog::get("tuple_rank_i", {0.5, 2});
    CHECK(t.spec.coefficients[0][1].value(3) == -1.0);
}

TEST_CASE("expected classification matches classify") {
    for (const auto& n : catalog::list()) {
        CAPTURE(n);
        const auto e = catalog::get(n);
        const auto v = validate(e.spec);
        const auto r = classify(v, e.sigma);
        CHECK(r.verdict == e.expected.verdict);
        if (e.expected.theorem != Theorem::None) CHECK(r.theorem_used == e.expected.theorem);
        if (e.expected.atoms)
            CHECK(certify_by_atoms(v, e.sigma, TruncationPolicy::defaults_for(2.0)).outcome ==
                  *e.expected.atoms);
    }
}

TEST_CASE("closed forms") {
    const auto d = catalog::get("dedekind_qi");
    REQUIRE(d.closed_form);
    CHECK((*d.closed_form)(5, 1) == Rational(2));
    CHECK((*d.closed_form)(3, 1) == Rational(0));
    CHECK((*d.closed_form)(3, 2) == Rational(1));
    CHECK((*d.closed_form)(2, 3) == Rational(1, 3));
    CHECK(catalog::closed_form_mass(d, 5, 1, 2.0) == doctest::Approx(2.0 / 25.0));

    const auto z = catalog::get("zeta2_L2s");
    CHECK((*z.closed_form)(3, 1) == Rational(2));
    CHECK((*z.closed_form)(3, 2) == Rational(0));
    CHECK((*z.closed_form)(5, 2) == Rational(2));
    CHECK((*z.closed_form)(3, 4) == Rational(1));
    CHECK_THROWS_AS(catalog::closed_form_mass(catalog::get("riemann"), 2, 1, 2.0), LookupError);
}

TEST_CASE("closed forms reproduce enumerated atoms") {
    for (const char* name : {"dedekind_qi", "zeta2_L2s"}) {
        CAPTURE(name);
        const auto e = catalog::get(name);
        TruncationPolicy pol;
        pol.prime_limit = 100;
        pol.power_limit = 10;
        const auto m = enumerate_atoms(validate(e.spec), e.sigma, pol, {0.0});
        for (const auto& a : m.atoms) {
            const auto n = static_cast<unsigned>(a.multiple[0].num());
            if (n > 10) continue;
            REQUIRE(a.exact_coefficient);
            CHECK(*a.exact_coefficient == (*e.closed_form)(a.p, n));
            CHECK(a.mass == catalog::closed_form_mass(e, a.p, n, 2.0));
        }
    }
}
