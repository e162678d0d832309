#include <doctest.h>

#include <cmath>
#include <random>

#include "cpz/classify.hpp"
#include "cpz/levy.hpp"
#include "cpz/product.hpp"
#include "oracles.hpp"
#include "random_specs.hpp"

using namespace cpz;

TEST_CASE("random specs: product and series paths agree") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> ut(-30.0, 30.0);
    TruncationPolicy pol;
    pol.prime_limit = 20000;
    pol.power_limit = 20;
    for (int i = 0; i < 25; ++i) {
        auto c = testing_support::random_case(rng);
        const auto v = validate(c.spec);
        REQUIRE(convergence_margin(v, c.sigma) == 2.0);
        std::vector<double> t(v.d());
        for (auto& x : t) x = ut(rng);
        std::vector<double> neg(t);
        for (auto& x : neg) x = -x;

        const auto L = eval_log(v, {c.sigma, t}, pol);
        const auto Lc = eval_log(v, {c.sigma, neg}, pol);
        CHECK(std::abs(L.value - std::conj(Lc.value)) <= 1e-14 * std::max(1.0, std::abs(L.value)));

        const auto Z = eval(v, {c.sigma, t}, pol);
        CHECK(std::abs(Z - std::exp(L.value)) <= std::abs(Z) * (std::expm1(L.tail) + 1e-12));

        const auto m = enumerate_atoms(v, c.sigma, pol);
        const auto L0 = eval_log(v, {c.sigma, std::vector<double>(v.d(), 0.0)}, pol);
        CHECK(std::abs(total_mass(m) - L0.value.real()) <= 2 * m.omitted_tail);
        CHECK(std::abs(cf_from_atoms(m, t) - normalized_cf(v, c.sigma, t, pol)) <=
              4 * m.omitted_tail * std::max(1.0, std::abs(cf_from_atoms(m, t))));
    }
}

TEST_CASE("sign lemma: tuple classification follows the coefficient sum") {
    for (unsigned m = 1; m <= 5; ++m) {
        std::vector<int> a(m, -1);
        for (;;) {
            REQUIRE(oracle::sign_lemma_instance(a, 15));
            ProductSpec s;
            s.d = 1;
            s.directions = {{Rational(1)}};
            s.tuple_size = m;
            s.coefficients.emplace_back();
            int sum = 0;
            for (int x : a) {
                s.coefficients[0].push_back(CoefficientScheme::constant(x));
                sum += x;
            }
            const auto r = classify(validate(s), std::vector<double>{2.0});
            CHECK(r.verdict == (sum >= 0 ? Verdict::CompoundPoisson : Verdict::NotCharacteristic));
            std::size_t i = 0;
            while (i < m && a[i] == 1) a[i++] = -1;
            if (i == m) break;
            ++a[i];
        }
    }
}

TEST_CASE("random compound Poisson specs have |f| <= 1") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ut(-50.0, 50.0);
    int tested = 0;
    for (int i = 0; i < 60 && tested < 10; ++i) {
        auto c = testing_support::random_case(rng);
        const auto v = validate(c.spec);
        if (!v.strict()) continue;
        const auto r = classify(v, c.sigma);
        if (r.verdict != Verdict::CompoundPoisson) continue;
        ++tested;
        TruncationPolicy pol;
        pol.prime_limit = 20000;
        const double tail = tail_bound(pol, 2.0, v.m());
        for (int k = 0; k < 10; ++k) {
            std::vector<double> t(v.d());
            for (auto& x : t) x = ut(rng);
            CHECK(std::abs(normalized_cf(v, c.sigma, t, pol)) <= 1.0 + 4 * tail);
        }
    }
    CHECK(tested > 0);
}
