#include <doctest.h>

#include "cpz/catalog.hpp"
#include "cpz/classify.hpp"

using namespace cpz;
using S = CoefficientScheme;

namespace {

ProductSpec spec_with(std::size_t d, std::vector<RationalVector> dirs,
                      std::vector<std::vector<S>> rows) {
    ProductSpec s;
    s.d = d;
    s.directions = std::move(dirs);
    s.tuple_size = rows.front().size();
    s.coefficients = std::move(rows);
    return s;
}

ClassificationResult classify_entry(const std::string& name) {
    const auto e = catalog::get(name);
    return classify(validate(e.spec), e.sigma);
}

}  // namespace

TEST_CASE("identical directions are grouped") {
    const auto v = validate(spec_with(2, {{1, 0}, {1, 1}, {1, 0}},
                                      {{S::constant(1)}, {S::constant(1)}, {S::constant(-1)}}));
    const auto g = group_directions(v);
    REQUIRE(g.size() == 2);
    CHECK(g[0].source_directions == std::vector<std::size_t>{0, 2});
    CHECK(g[0].schemes.size() == 2);
}

TEST_CASE("direction modes") {
    using V = RationalVector;
    auto mode = [](std::size_t d, std::vector<RationalVector> dirs) {
        std::vector<std::vector<S>> rows(dirs.size(), {S::constant(1)});
        return direction_condition(validate(spec_with(d, std::move(dirs), std::move(rows)))).mode;
    };
    CHECK(mode(2, {V{1, 0}, V{1, 1}}) == DirectionMode::LI);
    CHECK(mode(1, {V{1}, V{2}}) == DirectionMode::CollinearRational);
    CHECK(mode(2, {V{1, 0}, V{0, 1}, V{1, 1}}) == DirectionMode::Mixed);
    CHECK(mode(1, {V{1}, V{1}}) == DirectionMode::LI);

    auto lr = spec_with(1, {V{1}, V{1}}, {{S::constant(1)}, {S::constant(-1)}});
    lr.direction_mode_hint = DirectionModeHint{HintMode::LR, {"1", "1.4142135623730951"}, ""};
    const auto dc = direction_condition(validate(lr));
    CHECK(dc.mode == DirectionMode::LR);
    CHECK(dc.evidence.find("not proved") != std::string::npos);

    // Declared LR with a shared multiplier falls back to Mixed.
    auto shared = lr;
    shared.direction_mode_hint->psi = {"1", "1"};
    shared.directions[1] = {Rational(2)};
    CHECK(direction_condition(validate(shared)).mode == DirectionMode::Mixed);

    const auto col = direction_condition(validate(catalog::get("zeta2_L2s").spec));
    REQUIRE(col.ratios.size() == 2);
    CHECK(col.ratios[1] == Rational(2));
}

TEST_CASE("tuple theorem examples") {
    auto r = classify_entry("riemann");
    CHECK(r.verdict == Verdict::CompoundPoisson);
    CHECK(r.theorem_used == Theorem::Tuple);

    r = classify_entry("L1");
    CHECK(r.verdict == Verdict::NotCharacteristic);
    REQUIRE(r.offending_primes.size() == 1);
    CHECK(r.offending_primes[0] == std::pair<std::size_t, std::uint64_t>{1, 2});
    CHECK_FALSE(r.offending_infinite);

    r = classify_entry("L_chi4");
    CHECK(r.verdict == Verdict::NotCharacteristic);
    CHECK(r.offending_infinite);
    CHECK(r.offending_primes.front().second == 3);
    for (const auto& [l, p] : r.offending_primes) CHECK(p % 4 == 3);

    CHECK(classify_entry("L1L2").verdict == Verdict::CompoundPoisson);
    CHECK(classify_entry("zeta2s_over_zeta").verdict == Verdict::NotCharacteristic);
    CHECK(classify_entry("zeta_2s_split").verdict == Verdict::CompoundPoisson);
}

TEST_CASE("rank and main theorems") {
    auto r = classify_entry("md_iv");
    CHECK(r.verdict == Verdict::NotCharacteristic);
    CHECK(r.theorem_used == Theorem::Rank);
    CHECK(r.offending_primes.front() == std::pair<std::size_t, std::uint64_t>{2, 3});

    r = classify_entry("rank_shift");
    CHECK(r.verdict == Verdict::CompoundPoisson);
    CHECK(r.theorem_used == Theorem::Rank);

    r = classify_entry("tuple_rank_ii");
    CHECK(r.verdict == Verdict::NotCharacteristic);
    CHECK(r.theorem_used == Theorem::Main);
}

TEST_CASE("sign profile uses residue classes") {
    // A row that is negative only at the exceptional prime 2.
    const auto v = validate(catalog::get("L1").spec);
    const auto prof = sign_profile(v, 50);
    REQUIRE(prof.rows.size() == 1);
    CHECK(prof.rows[0].negative_somewhere);
    CHECK_FALSE(prof.rows[0].negative_infinitely_often);
    CHECK(prof.rows[0].exceptional_negative == std::vector<std::uint64_t>{2});
    CHECK(prof.rows[0].beta.size() == 15);
}

TEST_CASE("first offending prime beyond the report window") {
    auto s = spec_with(1, {{1}}, {{S::table(1.0, {{1009, -1.0}})}});
    const auto r = classify(validate(s), std::vector<double>{2.0});
    CHECK(r.verdict == Verdict::NotCharacteristic);
    REQUIRE(r.offending_primes.size() == 1);
    CHECK(r.offending_primes[0].second == 1009);
}

TEST_CASE("non-strict coefficients are rejected on the tuple path") {
    auto s = spec_with(1, {{1}}, {{S::constant(1.0 / 3), S::constant(1.0 / 3), S::constant(-2.0 / 3)}});
    CHECK_THROWS_AS(classify(validate(s), std::vector<double>{2.0}), UnsupportedError);
}

TEST_CASE("collinear entries go to the atom path") {
    for (const char* name : {"zeta2_L2s", "L_zeta2s"}) {
        const auto e = catalog::get(name);
        const auto v = validate(e.spec);
        const auto r = classify(v, e.sigma);
        CHECK(r.verdict == Verdict::OutOfTheoremScope);
        const auto cert = certify_by_atoms(v, e.sigma, TruncationPolicy::defaults_for(2.0));
        CHECK(cert.outcome == *e.expected.atoms);
    }
    const auto e = catalog::get("L_zeta2s");
    const auto cert = certify_by_atoms(validate(e.spec), e.sigma, TruncationPolicy::defaults_for(2.0));
    REQUIRE(cert.negative_atom);
    CHECK(cert.negative_atom->p == 3);
    CHECK(cert.negative_atom->location[0] == doctest::Approx(std::log(3.0)));
    CHECK(cert.negative_atom->mass == doctest::Approx(-1.0 / 9.0));
}

TEST_CASE("classify rejects points outside the region") {
    const auto v = validate(catalog::get("riemann").spec);
    CHECK_THROWS_AS(classify(v, std::vector<double>{1.0}), DomainError);
}
