#include "cpz/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace cpz {

const char* to_string(DirectionMode mode) {
    switch (mode) {
        case DirectionMode::LI: return "LI";
        case DirectionMode::LR: return "LR";
        case DirectionMode::CollinearRational: return "CollinearRational";
        case DirectionMode::Mixed: return "Mixed";
    }
    return "?";
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::CompoundPoisson: return "CompoundPoisson";
        case Verdict::NotCharacteristic: return "NotCharacteristic";
        case Verdict::OutOfTheoremScope: return "OutOfTheoremScope";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

const char* to_string(Theorem t) {
    switch (t) {
        case Theorem::Tuple: return "Tuple";
        case Theorem::Rank: return "Rank";
        case Theorem::Main: return "Main";
        case Theorem::AtomCertificate: return "AtomCertificate";
        case Theorem::None: return "None";
    }
    return "?";
}

const char* to_string(AtomOutcome o) {
    switch (o) {
        case AtomOutcome::CertifiedUpToTruncation: return "CertifiedUpToTruncation";
        case AtomOutcome::NegativeAtomFound: return "NegativeAtomFound";
        case AtomOutcome::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::vector<DirectionGroup> group_directions(const ValidatedSpec& spec) {
    std::vector<DirectionGroup> groups;
    for (std::size_t l = 0; l < spec.phi(); ++l) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const DirectionGroup& g) {
            return g.psi_class == spec.psi_class(l) && g.direction == spec.direction(l);
        });
        if (it == groups.end()) {
            groups.push_back({spec.direction(l), spec.psi_class(l), spec.psi(l), {}, {}});
            it = std::prev(groups.end());
        }
        it->source_directions.push_back(l);
        for (std::size_t k = 0; k < spec.eta(); ++k)
            if (!spec.scheme(l, k).is_zero()) it->schemes.emplace_back(l, k);
    }
    return groups;
}

DirectionCondition direction_condition(const ValidatedSpec& spec) {
    const auto groups = group_directions(spec);
    DirectionCondition dc;
    dc.groups = groups.size();
    std::vector<RationalVector> rows;
    for (const auto& g : groups) rows.push_back(g.direction);
    dc.rank = rank(rows);

    if (groups.size() == 1) {
        dc.mode = DirectionMode::LI;
        dc.evidence = "single direction after merging identical directions";
        return dc;
    }

    bool collinear = true;
    for (const auto& g : groups) {
        Rational c;
        if (!rational_multiple(groups.front().direction, g.direction, c)) {
            collinear = false;
            break;
        }
        dc.ratios.push_back(c);
    }
    if (!collinear) dc.ratios.clear();

    if (spec.lr_declared()) {
        dc.declared_psi = spec.spec().direction_mode_hint->psi;
        std::set<std::size_t> classes;
        for (const auto& g : groups) classes.insert(g.psi_class);
        if (dc.rank == 1 && classes.size() == groups.size()) {
            dc.mode = DirectionMode::LR;
            dc.evidence =
                "directions collinear; multipliers psi declared linearly independent over Q "
                "(declaration accepted, not proved)";
            if (!spec.spec().direction_mode_hint->note.empty())
                dc.evidence += "; note: " + spec.spec().direction_mode_hint->note;
            return dc;
        }
        dc.evidence = "LR declared but ";
        dc.evidence += dc.rank != 1 ? "rational directions are not collinear"
                                    : "two collinear directions share a multiplier";
        dc.mode = DirectionMode::Mixed;
        return dc;
    }

    if (dc.rank == groups.size()) {
        dc.mode = DirectionMode::LI;
        dc.evidence = "exact rank " + std::to_string(dc.rank) + " over Q equals the number of directions";
    } else if (collinear) {
        dc.mode = DirectionMode::CollinearRational;
        dc.evidence = "directions are rational multiples of one vector";
    } else {
        dc.mode = DirectionMode::Mixed;
        dc.evidence = "exact rank " + std::to_string(dc.rank) + " below the number of directions " +
                      std::to_string(groups.size());
    }
    if (spec.spec().direction_mode_hint &&
        spec.spec().direction_mode_hint->mode == HintMode::LI && dc.mode != DirectionMode::LI)
        dc.evidence += " (LI declared, overridden by the rank computation)";
    return dc;
}

namespace {

constexpr std::uint64_t kMaxResidueModulus = 1'000'000;

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q) continue;
        out.push_back(q);
        while (n % q == 0) n /= q;
    }
    if (n > 1) out.push_back(n);
    return out;
}

double group_value(const ValidatedSpec& spec, const DirectionGroup& g, std::uint64_t p) {
    double s = 0.0;
    for (auto [l, k] : g.schemes) s += spec.scheme(l, k).value(p);
    return s;
}

// Decides over all primes whether beta_g(p) < 0 can occur. The row is a sum of
// constant, character, table and power schemes; off a finite exceptional set of
// primes it depends only on p mod Q, and every unit class mod Q holds infinitely
// many primes. Power schemes are only accepted alone (their sign is fixed).
void structural_sign(const ValidatedSpec& spec, const DirectionGroup& g, SignRow& row) {
    std::uint64_t Q = 1;
    std::set<std::uint64_t> exceptional;
    bool has_power = false;
    for (auto [l, k] : g.schemes) {
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, CharacterScheme>) {
                    Q = std::lcm(Q, s.chi.modulus());
                    if (Q > kMaxResidueModulus)
                        throw UnsupportedError("character moduli too large for exact sign analysis");
                } else if constexpr (std::is_same_v<S, TableScheme>) {
                    for (const auto& kv : s.overrides) exceptional.insert(kv.first);
                } else if constexpr (std::is_same_v<S, PowerScheme>) {
                    has_power = true;
                }
            },
            spec.scheme(l, k).variant());
    }
    if (has_power && g.schemes.size() > 1)
        throw UnsupportedError("sign analysis of a power scheme pooled with other schemes");
    for (auto q : prime_divisors(Q)) exceptional.insert(q);

    row.negative_infinitely_often = false;
    if (has_power) {
        const auto& s = std::get<PowerScheme>(spec.scheme(g.schemes[0].first, g.schemes[0].second).variant());
        row.negative_infinitely_often = s.scale < 0.0;
    } else {
        // Generic value on the unit class a mod Q, evaluated through a
        // representative that avoids every override: value(p) for a prime
        // p = a (mod Q) outside `exceptional` depends only on a.
        for (std::uint64_t a = 1; a <= Q && !row.negative_infinitely_often; ++a) {
            if (arith::gcd(a % Q, Q) != 1) continue;
            double s = 0.0;
            for (auto [l, k] : g.schemes) {
                const auto& sch = spec.scheme(l, k).variant();
                if (const auto* c = std::get_if<ConstantScheme>(&sch)) s += c->value;
                else if (const auto* ch = std::get_if<CharacterScheme>(&sch)) s += ch->chi(a);
                else if (const auto* t = std::get_if<TableScheme>(&sch)) s += t->default_value;
            }
            if (s < 0.0) row.negative_infinitely_often = true;
        }
    }
    for (auto p : exceptional)
        if (group_value(spec, g, p) < 0.0) row.exceptional_negative.push_back(p);
    row.negative_somewhere = row.negative_infinitely_often || !row.exceptional_negative.empty();
}

SignRow make_row(const ValidatedSpec& spec, const DirectionGroup& g, std::size_t index,
                 std::uint64_t prime_limit) {
    SignRow row;
    row.group = index + 1;
    const auto table = arith::shared_primes(std::max<std::uint64_t>(prime_limit, 2));
    for (auto p : table->primes()) row.beta.emplace_back(p, group_value(spec, g, p));
    structural_sign(spec, g, row);
    return row;
}

void collect_offending(const SignRow& row, const DirectionGroup& g, const ValidatedSpec& spec,
                       ClassificationResult& out) {
    std::set<std::uint64_t> primes;
    for (const auto& [p, b] : row.beta)
        if (b < 0.0) primes.insert(p);
    primes.insert(row.exceptional_negative.begin(), row.exceptional_negative.end());
    if (primes.empty() && row.negative_infinitely_often) {
        // First negative prime lies beyond the report limit; scan further.
        const auto table = arith::shared_primes(10'000'000);
        for (auto p : table->primes())
            if (group_value(spec, g, p) < 0.0) {
                primes.insert(p);
                break;
            }
    }
    for (auto p : primes) out.offending_primes.emplace_back(row.group, p);
    out.offending_infinite = out.offending_infinite || row.negative_infinitely_often;
}

bool single_scheme_groups(const std::vector<DirectionGroup>& groups) {
    return std::all_of(groups.begin(), groups.end(),
                       [](const DirectionGroup& g) { return g.schemes.size() <= 1; });
}

}  // namespace

SignProfile sign_profile(const ValidatedSpec& spec, std::uint64_t prime_limit) {
    if (!spec.strict())
        throw UnsupportedError("sign_profile requires strict coefficients in {-1, 0, 1}");
    SignProfile out;
    const auto groups = group_directions(spec);
    for (std::size_t i = 0; i < groups.size(); ++i)
        out.rows.push_back(make_row(spec, groups[i], i, prime_limit));
    return out;
}

ClassificationResult classify(const ValidatedSpec& spec, std::span<const double> sigma,
                              ClassifyOptions options) {
    require_convergent(spec, sigma);
    ClassificationResult out;
    out.directions = direction_condition(spec);
    const auto groups = group_directions(spec);

    if (groups.size() > 1 && out.directions.mode != DirectionMode::LI &&
        out.directions.mode != DirectionMode::LR) {
        out.verdict = Verdict::OutOfTheoremScope;
        out.theorem_used = Theorem::None;
        out.notes.push_back(std::string("direction condition ") + to_string(out.directions.mode) +
                            " is covered by neither LI nor LR; run certify_by_atoms");
        return out;
    }

    if (groups.size() == 1) {
        out.theorem_used = Theorem::Tuple;
        if (spec.phi() > 1)
            out.notes.push_back("identical directions merged into one " +
                                std::to_string(groups[0].schemes.size()) + "-tuple row");
    } else if (single_scheme_groups(groups)) {
        out.theorem_used = Theorem::Rank;
    } else {
        out.theorem_used = Theorem::Main;
    }

    // The rank theorem is a per-direction sign condition valid for alpha in [-1, 1];
    // tuple and main rely on the sign lemma, which needs alpha in {-1, 0, 1}.
    if (out.theorem_used != Theorem::Rank && !spec.strict())
        throw UnsupportedError(
            "classification by sign sums requires coefficients in {-1, 0, 1}; for general "
            "alpha the sign of sum alpha does not control sum alpha^r");
    if (out.theorem_used == Theorem::Rank && !spec.strict())
        out.notes.push_back("non-strict coefficients accepted: rank condition is alpha_l(p) >= 0");
    if (out.directions.mode == DirectionMode::LR)
        out.notes.push_back("LR accepted by declaration: " + out.directions.evidence);

    bool negative = false;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        auto row = make_row(spec, groups[i], i, options.report_limit);
        if (!row.negative_somewhere) continue;
        negative = true;
        collect_offending(row, groups[i], spec, out);
    }
    out.verdict = negative ? Verdict::NotCharacteristic : Verdict::CompoundPoisson;
    return out;
}

AtomCertificate certify_by_atoms(const ValidatedSpec& spec, std::span<const double> sigma,
                                 const TruncationPolicy& policy, Parallelism par) {
    const auto measure = enumerate_atoms(spec, sigma, policy, {}, par);
    AtomCertificate out;
    out.atoms_checked = measure.atoms.size();
    out.omitted_tail = measure.omitted_tail;
    out.min_mass = measure.atoms.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    bool rounding_only = true;
    for (const auto& a : measure.atoms) {
        out.min_mass = std::min(out.min_mass, a.mass);
        if (a.mass >= 0.0) continue;
        // An inexact coefficient that is negative only at rounding level proves nothing.
        double scale = 0.0;
        for (const auto& c : a.contributions) scale += 1.0 / c.r;
        const bool noise = !a.exact_coefficient &&
                           std::abs(a.mass) <= 64 * std::numeric_limits<double>::epsilon() * scale;
        if (!noise) rounding_only = false;
        if (!out.negative_atom && !noise) out.negative_atom = a;
    }
    if (out.negative_atom) {
        out.outcome = AtomOutcome::NegativeAtomFound;
        out.note = "negative merged mass at p = " + std::to_string(out.negative_atom->p) +
                   "; hand to witness search for a disproof";
    } else if (out.min_mass < 0.0 && rounding_only) {
        out.outcome = AtomOutcome::Inconclusive;
        out.note = "only rounding-level negative masses found";
    } else {
        out.outcome = AtomOutcome::CertifiedUpToTruncation;
        out.note = "all merged masses >= 0 for p <= " + std::to_string(policy.prime_limit) +
                   ", r <= " + std::to_string(policy.power_limit);
    }
    return out;
}

}  // namespace cpz
