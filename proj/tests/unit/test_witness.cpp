#include <doctest.h>

#include <cmath>
#include <random>

#include "cpz/catalog.hpp"
#include "cpz/witness.hpp"

using namespace cpz;

namespace {

struct Loaded {
    catalog::Entry entry;
    ValidatedSpec spec;
};

Loaded load(const std::string& name) {
    auto e = catalog::get(name);
    auto v = validate(e.spec);
    return {std::move(e), std::move(v)};
}

}  // namespace

TEST_CASE("objective vanishes at the origin") {
    auto [e, v] = load("L1");
    const std::vector<double> zero{0.0};
    const auto o = objective_D(v, e.sigma, zero, TruncationPolicy::defaults_for(2.0));
    CHECK(o.D == 0.0);
    CHECK(o.tail > 0.0);
}

TEST_CASE("objective is nonpositive for riemann") {
    auto [e, v] = load("riemann");
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-200.0, 200.0);
    TruncationPolicy pol;
    pol.prime_limit = 20000;
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> t{u(rng)};
        const auto o = objective_D(v, e.sigma, t, pol);
        CHECK(o.D <= o.tail);
    }
}

TEST_CASE("reduction for independent directions") {
    auto [e, v] = load("md_iii");
    const auto red = reduce_direction(v, direction_condition(v));
    REQUIRE(red.v0.size() == 2);
    CHECK(red.v0[0] == doctest::Approx(1.0));
    CHECK(red.v0[1] == doctest::Approx(std::sqrt(2.0) - 1.0));
    CHECK(red.omegas[0] == doctest::Approx(1.0));
    CHECK(red.omegas[1] == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(red.scalar);
}

TEST_CASE("reduction for collinear and declared LR directions") {
    auto [e, v] = load("zeta2_L2s");
    const auto red = reduce_direction(v, direction_condition(v));
    CHECK(red.scalar);
    CHECK(red.group_multiples == std::vector<unsigned>{1, 2});
    CHECK(red.omegas[1] == doctest::Approx(2.0));

    ProductSpec lr;
    lr.d = 1;
    lr.directions = {{Rational(2)}, {Rational(2)}};
    lr.tuple_size = 1;
    lr.coefficients = {{CoefficientScheme::constant(1)}, {CoefficientScheme::constant(-1)}};
    lr.direction_mode_hint = DirectionModeHint{HintMode::LR, {"1", "1.4142135623730951"}, ""};
    const auto lv = validate(lr);
    const auto lred = reduce_direction(lv, direction_condition(lv));
    CHECK(lred.mode == DirectionMode::LR);
    CHECK(lred.omegas[0] == doctest::Approx(1.0));
    CHECK(lred.omegas[1] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("phase targets") {
    {
        auto [e, v] = load("L1");
        const auto t = derive_targets(v, e.sigma);
        CHECK(t.minus_primes() == std::vector<std::uint64_t>{2});
        CHECK(t.plus_primes() == std::vector<std::uint64_t>{3, 5, 7});
    }
    {
        auto [e, v] = load("md_iv");
        const auto t = derive_targets(v, e.sigma);
        CHECK(t.minus_primes() == std::vector<std::uint64_t>{3, 7});
    }
    {
        auto [e, v] = load("L_zeta2s");
        const auto t = derive_targets(v, e.sigma);
        CHECK(t.minus_primes() == std::vector<std::uint64_t>{3, 7});
    }
    auto [e, v] = load("riemann");
    CHECK_THROWS_AS(derive_targets(v, e.sigma), DomainError);
}

TEST_CASE("residuals") {
    const PhaseTarget plus{2, 0, 1.0, 1, 1};
    const PhaseTarget minus{2, 0, 1.0, 1, -1};
    const double T = std::numbers::pi / std::log(2.0);
    CHECK(plus.residual(0.0) == 0.0);
    CHECK(minus.residual(T) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(plus.residual(T) == doctest::Approx(2.0));
}

TEST_CASE("direct search certifies L1") {
    auto [e, v] = load("L1");
    const auto res = search(v, e.sigma);
    REQUIRE(res.witness);
    CHECK(res.witness->certified_margin > 0.0);
    CHECK(res.witness->D == doctest::Approx(res.witness->certified_margin + res.omitted_tail));
    const auto re = reevaluate(v, e.sigma, *res.witness, res.witness->policy.doubled());
    CHECK(re.D - re.tail > 0.0);
}

TEST_CASE("search is independent of the thread count") {
    auto [e, v] = load("md_iv");
    const std::vector<double> sigma{2.0, 0.5};
    SearchOptions a, b;
    a.strategy = b.strategy = Strategy::KroneckerTargets;
    a.par = {1};
    b.par = {4};
    const auto ra = search(v, sigma, a);
    const auto rb = search(v, sigma, b);
    REQUIRE(ra.witness);
    REQUIRE(rb.witness);
    CHECK(ra.witness->T == rb.witness->T);
    CHECK(ra.witness->D == rb.witness->D);
    CHECK(ra.evaluations == rb.evaluations);
}

TEST_CASE("small budget on riemann finds nothing") {
    auto [e, v] = load("riemann");
    SearchOptions o;
    o.budget = 50000;
    const auto res = search(v, e.sigma, o);
    CHECK_FALSE(res.witness);
    CHECK(res.evaluations <= o.budget);
    CHECK(res.max_D_observed <= res.omitted_tail);
}
