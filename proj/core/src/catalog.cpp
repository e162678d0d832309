#include "cpz/catalog.hpp"

#include <cmath>
#include <map>

#include "cpz/levy.hpp"

namespace cpz::catalog {

namespace {

using S = CoefficientScheme;

RationalVector dir(std::initializer_list<std::int64_t> xs) {
    RationalVector v;
    for (auto x : xs) v.emplace_back(x);
    return v;
}

ProductSpec one_d(std::vector<RationalVector> dirs, std::vector<std::vector<S>> rows) {
    ProductSpec s;
    s.d = dirs.front().size();
    s.directions = std::move(dirs);
    s.tuple_size = rows.front().size();
    s.coefficients = std::move(rows);
    return s;
}

S L1() { return S::table(1.0, {{2, -1.0}}); }
S L2() { return S::table(1.0, {{3, -1.0}}); }
S chi4() { return S::character(arith::RealCharacter::mod4()); }

Expected cp(Theorem t) { return {true, Verdict::CompoundPoisson, t, std::nullopt}; }
Expected notcf(Theorem t) { return {false, Verdict::NotCharacteristic, t, std::nullopt}; }

int chi4_pow(std::uint64_t p, unsigned k) {
    const int c = arith::RealCharacter::mod4()(p);
    if (c == 0) return 0;
    return (c < 0 && (k % 2 == 1)) ? -1 : 1;
}

using Builder = std::function<Entry(const Params&)>;

const std::map<std::string, Builder>& registry() {
    static const std::map<std::string, Builder> r = {
        {"riemann",
         [](const Params&) {
             return Entry{"riemann", "Riemann zeta function",
                          one_d({dir({1})}, {{S::constant(1)}}), {2.0}, cp(Theorem::Tuple), {}};
         }},
        {"zeta_2s",
         [](const Params&) {
             return Entry{"zeta_2s", "zeta(2s) with direction 2",
                          one_d({dir({2})}, {{S::constant(1)}}), {1.0}, cp(Theorem::Tuple), {}};
         }},
        {"zeta_2s_split",
         [](const Params&) {
             return Entry{"zeta_2s_split", "zeta(2s) written as a 2-tuple (1 - p^-s)(1 + p^-s)",
                          one_d({dir({1})}, {{S::constant(1), S::constant(-1)}}), {2.0},
                          cp(Theorem::Tuple), {}};
         }},
        {"zeta2s_over_zeta",
         [](const Params&) {
             return Entry{"zeta2s_over_zeta", "zeta(2s)/zeta(s), alpha = -1",
                          one_d({dir({1})}, {{S::constant(-1)}}), {2.0}, notcf(Theorem::Tuple), {}};
         }},
        {"L_chi4",
         [](const Params&) {
             return Entry{"L_chi4", "L(s, chi) for the character mod 4",
                          one_d({dir({1})}, {{chi4()}}), {2.0}, notcf(Theorem::Tuple), {}};
         }},
        {"L1",
         [](const Params&) {
             return Entry{"L1", "alpha(2) = -1, alpha(p) = 1 otherwise",
                          one_d({dir({1})}, {{L1()}}), {2.0}, notcf(Theorem::Tuple), {}};
         }},
        {"L2",
         [](const Params&) {
             return Entry{"L2", "alpha(3) = -1, alpha(p) = 1 otherwise",
                          one_d({dir({1})}, {{L2()}}), {2.0}, notcf(Theorem::Tuple), {}};
         }},
        {"L1L2",
         [](const Params&) {
             return Entry{"L1L2", "product L1(s) L2(s) as a 2-tuple",
                          one_d({dir({1})}, {{L1(), L2()}}), {2.0}, cp(Theorem::Tuple), {}};
         }},
        {"zeta_L_chi",
         [](const Params&) {
             return Entry{"zeta_L_chi", "zeta(s) L(s, chi mod 4)",
                          one_d({dir({1})}, {{S::constant(1), chi4()}}), {2.0}, cp(Theorem::Tuple),
                          {}};
         }},
        {"dedekind_qi",
         [](const Params&) {
             ClosedForm cf = [](std::uint64_t p, unsigned r) {
                 if (p == 2) return Rational(1, r);
                 return Rational(1 + chi4_pow(p, r), r);
             };
             return Entry{"dedekind_qi", "Dedekind zeta of Q(i) = zeta(s) L(s, chi mod 4)",
                          one_d({dir({1})}, {{S::constant(1), chi4()}}), {2.0}, cp(Theorem::Tuple),
                          cf};
         }},
        {"zeta2_L2s",
         [](const Params&) {
             ClosedForm cf = [](std::uint64_t p, unsigned n) {
                 if (n % 2 == 1 || p == 2) return Rational(2, n);
                 const unsigned k = n / 2;
                 return Rational(1 + chi4_pow(p, k), k);
             };
             Expected e{true, Verdict::OutOfTheoremScope, Theorem::None,
                        AtomOutcome::CertifiedUpToTruncation};
             return Entry{"zeta2_L2s", "zeta(s)^2 L(2s, chi mod 4)",
                          one_d({dir({1}), dir({2})},
                                {{S::constant(1), S::constant(1)}, {chi4(), S::constant(0)}}),
                          {2.0}, e, cf};
         }},
        {"L_zeta2s",
         [](const Params&) {
             Expected e{false, Verdict::OutOfTheoremScope, Theorem::None,
                        AtomOutcome::NegativeAtomFound};
             return Entry{"L_zeta2s", "L(s, chi mod 4) zeta(2s)",
                          one_d({dir({1}), dir({2})}, {{chi4()}, {S::constant(1)}}), {2.0}, e, {}};
         }},
        {"odd_riemann",
         [](const Params&) {
             return Entry{"odd_riemann", "zeta(s) with the factor at 2 removed",
                          one_d({dir({1})}, {{S::table(1.0, {{2, 0.0}})}}), {2.0},
                          cp(Theorem::Tuple), {}};
         }},
        {"md_iii",
         [](const Params&) {
             return Entry{"md_iii", "zeta(s1) zeta(s1 + s2)",
                          one_d({dir({1, 0}), dir({1, 1})}, {{S::constant(1)}, {S::constant(1)}}),
                          {2.0, 0.0}, cp(Theorem::Rank), {}};
         }},
        {"md_iv",
         [](const Params&) {
             return Entry{"md_iv", "zeta(s1) L(s1 + 2 s2, chi mod 4)",
                          one_d({dir({1, 0}), dir({1, 2})}, {{S::constant(1)}, {chi4()}}),
                          {2.0, 0.5}, notcf(Theorem::Rank), {}};
         }},
        {"rank_shift",
         [](const Params& prm) {
             if (!(prm.alpha > 0.0) || !std::isfinite(prm.alpha))
                 throw DomainError("rank_shift: alpha must be a positive finite number");
             return Entry{"rank_shift", "zeta(s1 + alpha) zeta(s1 + s2)",
                          one_d({dir({1, 0}), dir({1, 1})},
                                {{S::power(1.0, prm.alpha)}, {S::constant(1)}}),
                          {2.0, 0.0}, cp(Theorem::Rank), {}};
         }},
        {"tuple_rank_i",
         [](const Params& prm) {
             if (prm.lm != 1 && prm.lm != 2) throw DomainError("tuple_rank_i: lm must be 1 or 2");
             const S L = prm.lm == 1 ? L1() : L2();
             return Entry{"tuple_rank_i", "zeta(s1) L(s1) zeta(s1 + s2) L(s1 + s2)",
                          one_d({dir({1, 0}), dir({1, 1})},
                                {{S::constant(1), L}, {S::constant(1), L}}),
                          {2.0, 0.0}, cp(Theorem::Main), {}};
         }},
        {"tuple_rank_ii",
         [](const Params& prm) {
             if (prm.lm != 1 && prm.lm != 2) throw DomainError("tuple_rank_ii: lm must be 1 or 2");
             const S L = prm.lm == 1 ? L1() : L2();
             return Entry{"tuple_rank_ii", "L(s1) zeta(s1 + s2) L(s1 + s2)",
                          one_d({dir({1, 0}), dir({1, 1})},
                                {{L, S::constant(0)}, {S::constant(1), L}}),
                          {2.0, 0.0}, notcf(Theorem::Main), {}};
         }},
    };
    return r;
}

}  // namespace

std::vector<std::string> list() {
    std::vector<std::string> out;
    for (const auto& [k, _] : registry()) out.push_back(k);
    return out;
}

Entry get(const std::string& name, const Params& params) {
    const auto& r = registry();
    auto it = r.find(name);
    if (it == r.end()) throw LookupError("unknown catalog entry '" + name + "'");
    return it->second(params);
}

double closed_form_mass(const Entry& entry, std::uint64_t p, unsigned n, double sigma) {
    if (!entry.closed_form) throw LookupError(entry.name + " has no closed-form atoms");
    if (entry.spec.d != 1) throw DomainError("closed forms exist only for one-dimensional entries");
    const Rational c = (*entry.closed_form)(p, n);
    if (c.is_zero()) return 0.0;
    return c.to_double() * atom_weight(p, location_exponent(1.0, {Rational(n)}, std::span<const double>(&sigma, 1)));
}

}  // namespace cpz::catalog
