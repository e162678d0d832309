#include "cpz/io.hpp"

#include <charconv>
#include <cmath>

namespace cpz::io {

namespace {

nlohmann::json finite_or_null(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

nlohmann::json to_json(std::complex<double> z) {
    return {{"re", finite_or_null(z.real())}, {"im", finite_or_null(z.imag())}};
}

nlohmann::json to_json(const TruncationPolicy& p) {
    return {{"prime_limit", p.prime_limit}, {"power_limit", p.power_limit}, {"tail_tol", p.tail_tol}};
}

nlohmann::json to_json(const ClassificationResult& r) {
    nlohmann::json offending = nlohmann::json::array();
    for (const auto& [l, p] : r.offending_primes) offending.push_back({l, p});
    nlohmann::json dirs = {{"mode", to_string(r.directions.mode)},
                           {"groups", r.directions.groups},
                           {"rank", r.directions.rank},
                           {"evidence", r.directions.evidence}};
    if (!r.directions.ratios.empty()) {
        nlohmann::json ratios = nlohmann::json::array();
        for (const auto& c : r.directions.ratios) ratios.push_back(c.str());
        dirs["ratios"] = ratios;
    }
    if (!r.directions.declared_psi.empty()) dirs["declared_psi"] = r.directions.declared_psi;
    return {{"verdict", to_string(r.verdict)},
            {"theorem_used", to_string(r.theorem_used)},
            {"offending", offending},
            {"offending_infinite", r.offending_infinite},
            {"direction_condition", dirs},
            {"notes", r.notes}};
}

nlohmann::json to_json(const AtomCertificate& c) {
    nlohmann::json j = {{"outcome", to_string(c.outcome)},
                        {"min_mass", finite_or_null(c.min_mass)},
                        {"atoms_checked", c.atoms_checked},
                        {"omitted_tail", c.omitted_tail},
                        {"note", c.note}};
    if (c.negative_atom) {
        const auto& a = *c.negative_atom;
        nlohmann::json mult = nlohmann::json::array();
        for (const auto& x : a.multiple) mult.push_back(x.str());
        j["negative_atom"] = {{"p", a.p}, {"multiple", mult}, {"location", a.location},
                              {"mass", a.mass}};
    }
    return j;
}

nlohmann::json to_json(const Witness& w) {
    return {{"t0", w.t0},
            {"T", w.T},
            {"v0", w.v0},
            {"D", w.D},
            {"certified_margin", w.certified_margin},
            {"policy", to_json(w.policy)},
            {"strategy", to_string(w.strategy)},
            {"budget_used", w.budget_used},
            {"note", w.note}};
}

nlohmann::json to_json(const SearchResult& r) {
    nlohmann::json j = {{"found", r.witness.has_value()},
                        {"max_D_observed", r.max_D_observed},
                        {"max_certified_D", r.max_certified_D},
                        {"omitted_tail", r.omitted_tail},
                        {"evaluations", r.evaluations},
                        {"T_reached", r.T_reached},
                        {"grid_step", r.grid_step},
                        {"lipschitz", r.lipschitz},
                        {"direction_mode", to_string(r.reduction.mode)},
                        {"v0", r.reduction.v0},
                        {"omegas", r.reduction.omegas}};
    if (r.witness) j["witness"] = to_json(*r.witness);
    return j;
}

nlohmann::json to_json(const PhaseTargets& t) {
    auto one = [](const PhaseTarget& x) {
        return nlohmann::json{{"p", x.p}, {"line", x.line + 1}, {"omega", x.omega},
                              {"multiple", x.multiple}, {"sign", x.sign}};
    };
    nlohmann::json plus = nlohmann::json::array(), minus = nlohmann::json::array();
    for (const auto& x : t.plus) plus.push_back(one(x));
    for (const auto& x : t.minus) minus.push_back(one(x));
    return {{"K", t.K}, {"plus", plus}, {"minus", minus}};
}

void write_atoms_csv(std::ostream& out, const LevyMeasure& m) {
    out << "p,r,l,mass";
    for (std::size_t j = 1; j <= m.d; ++j) out << ",x_" << j;
    out << '\n';
    for (const auto& a : m.atoms) {
        const auto& c = a.contributions.front();
        out << a.p << ',' << c.r << ',' << (c.l + 1) << ',' << format_double(a.mass);
        for (double x : a.location) out << ',' << format_double(x);
        out << '\n';
    }
}

nlohmann::json measure_summary(const LevyMeasure& m) {
    return {{"d", m.d},
            {"atoms", m.atoms.size()},
            {"total_mass", total_mass(m)},
            {"nonnegative", m.nonnegative()},
            {"truncation_tail", m.truncation_tail},
            {"dropped_mass", m.dropped_mass},
            {"omitted_tail", m.omitted_tail},
            {"margin", m.margin},
            {"sigma", m.sigma},
            {"policy", to_json(m.policy)}};
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
    for (std::size_t j = 1; j <= s.d; ++j) out << (j > 1 ? "," : "") << "x_" << j;
    out << '\n';
    for (std::size_t i = 0; i < s.n; ++i) {
        const auto row = s.row(i);
        for (std::size_t j = 0; j < s.d; ++j) out << (j ? "," : "") << format_double(row[j]);
        out << '\n';
    }
}

nlohmann::json samples_summary(const SampleSet& s) {
    return {{"seed", s.seed},
            {"n", s.n},
            {"c", s.total_mass},
            {"bias_bound", s.total_mass > 0 ? s.omitted_tail / s.total_mass : 0.0},
            {"omitted_tail", s.omitted_tail},
            {"rng", "philox4x32-10; key = seed, counter = (draw index, block)"}};
}

}  // namespace cpz::io
