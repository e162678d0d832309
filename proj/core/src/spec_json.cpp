#include "cpz/spec_json.hpp"

#include <charconv>

namespace cpz {

namespace {

using nlohmann::json;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const json& need(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(where + ": missing field '" + key + "'");
    return obj.at(key);
}

double need_number(const json& obj, const char* key, const std::string& where) {
    const auto& v = need(obj, key, where);
    if (!v.is_number()) throw ParseError(where + "." + key + ": expected a number");
    return v.get<double>();
}

std::string shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Rational rational_from(const json& v, const std::string& where) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_float()) return Rational::parse(shortest(v.get<double>()));
    throw ParseError(where + ": expected an integer or a rational string like \"3/2\"");
}

json rational_to(const Rational& r) {
    if (r.is_integer()) return r.num();
    return r.str();
}

CoefficientScheme scheme_from(const json& v, const std::string& where) {
    const auto& kind_v = need(v, "kind", where);
    if (!kind_v.is_string()) throw ParseError(where + ".kind: expected a string");
    const auto kind = kind_v.get<std::string>();
    if (kind == "constant") return CoefficientScheme::constant(need_number(v, "value", where));
    if (kind == "character") {
        const auto& mod = need(v, "modulus", where);
        const auto& vals = need(v, "values", where);
        if (!mod.is_number_integer() || mod.get<std::int64_t>() < 1)
            throw ParseError(where + ".modulus: expected a positive integer");
        if (!vals.is_array()) throw ParseError(where + ".values: expected an array");
        std::vector<int> table;
        for (const auto& x : vals) {
            if (!x.is_number_integer())
                throw ParseError(where + ".values: real characters take integer values -1, 0, 1");
            table.push_back(x.get<int>());
        }
        return CoefficientScheme::character(
            arith::RealCharacter(mod.get<std::uint64_t>(), std::move(table)));
    }
    if (kind == "table") {
        std::map<std::uint64_t, double> overrides;
        if (v.contains("overrides")) {
            const auto& ov = v.at("overrides");
            if (!ov.is_object()) throw ParseError(where + ".overrides: expected an object");
            for (const auto& [key, val] : ov.items()) {
                std::uint64_t p = 0;
                auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), p);
                if (ec != std::errc{} || ptr != key.data() + key.size())
                    throw ParseError(where + ".overrides: key '" + key + "' is not an integer");
                if (!val.is_number())
                    throw ParseError(where + ".overrides." + key + ": expected a number");
                overrides[p] = val.get<double>();
            }
        }
        return CoefficientScheme::table(need_number(v, "default", where), std::move(overrides));
    }
    if (kind == "power")
        return CoefficientScheme::power(need_number(v, "scale", where),
                                        need_number(v, "exponent", where));
    throw ParseError(where + ".kind: unknown scheme kind '" + kind + "'");
}

}  // namespace

json to_json(const CoefficientScheme& scheme) {
    return std::visit(Overloaded{
                          [](const ConstantScheme& s) {
                              return json{{"kind", "constant"}, {"value", s.value}};
                          },
                          [](const CharacterScheme& s) {
                              json values = json::array();
                              for (auto x : s.chi.values()) values.push_back(static_cast<int>(x));
                              return json{{"kind", "character"},
                                          {"modulus", s.chi.modulus()},
                                          {"values", values}};
                          },
                          [](const TableScheme& s) {
                              json ov = json::object();
                              for (const auto& [p, v] : s.overrides) ov[std::to_string(p)] = v;
                              return json{{"kind", "table"},
                                          {"default", s.default_value},
                                          {"overrides", ov}};
                          },
                          [](const PowerScheme& s) {
                              return json{{"kind", "power"},
                                          {"scale", s.scale},
                                          {"exponent", s.exponent}};
                          },
                      },
                      scheme.variant());
}

json to_json(const ProductSpec& spec) {
    json dirs = json::array();
    for (const auto& a : spec.directions) {
        json row = json::array();
        for (const auto& x : a) row.push_back(rational_to(x));
        dirs.push_back(row);
    }
    json coeffs = json::array();
    for (const auto& row : spec.coefficients) {
        json r = json::array();
        for (const auto& s : row) r.push_back(to_json(s));
        coeffs.push_back(r);
    }
    json doc{{"d", spec.d},
             {"directions", dirs},
             {"tuple_size", spec.tuple_size},
             {"coefficients", coeffs}};
    if (spec.direction_mode_hint) {
        const auto& h = *spec.direction_mode_hint;
        const char* mode = h.mode == HintMode::LI ? "LI" : h.mode == HintMode::LR ? "LR" : "none";
        json hint{{"mode", mode}};
        if (!h.psi.empty()) hint["psi"] = h.psi;
        if (!h.note.empty()) hint["note"] = h.note;
        doc["direction_mode_hint"] = hint;
    }
    return doc;
}

ProductSpec spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("spec: expected a JSON object");
    ProductSpec spec;
    const auto& d = need(doc, "d", "spec");
    if (!d.is_number_integer() || d.get<std::int64_t>() < 1)
        throw ParseError("spec.d: expected a positive integer");
    spec.d = d.get<std::size_t>();

    const auto& dirs = need(doc, "directions", "spec");
    if (!dirs.is_array()) throw ParseError("spec.directions: expected an array of arrays");
    for (std::size_t l = 0; l < dirs.size(); ++l) {
        const auto where = "spec.directions[" + std::to_string(l) + "]";
        if (!dirs[l].is_array()) throw ParseError(where + ": expected an array");
        RationalVector a;
        for (const auto& x : dirs[l]) a.push_back(rational_from(x, where));
        spec.directions.push_back(std::move(a));
    }

    const auto& eta = need(doc, "tuple_size", "spec");
    if (!eta.is_number_integer() || eta.get<std::int64_t>() < 1)
        throw ParseError("spec.tuple_size: expected a positive integer");
    spec.tuple_size = eta.get<std::size_t>();

    const auto& coeffs = need(doc, "coefficients", "spec");
    if (!coeffs.is_array()) throw ParseError("spec.coefficients: expected a phi x eta array");
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        const auto where = "spec.coefficients[" + std::to_string(l) + "]";
        if (!coeffs[l].is_array()) throw ParseError(where + ": expected an array");
        std::vector<CoefficientScheme> row;
        for (std::size_t k = 0; k < coeffs[l].size(); ++k)
            row.push_back(scheme_from(coeffs[l][k], where + "[" + std::to_string(k) + "]"));
        spec.coefficients.push_back(std::move(row));
    }

    if (doc.contains("direction_mode_hint") && !doc.at("direction_mode_hint").is_null()) {
        const auto& h = doc.at("direction_mode_hint");
        DirectionModeHint hint;
        const auto& mode = need(h, "mode", "spec.direction_mode_hint");
        const auto m = mode.is_string() ? mode.get<std::string>() : std::string();
        if (m == "LI")
            hint.mode = HintMode::LI;
        else if (m == "LR")
            hint.mode = HintMode::LR;
        else if (m == "none" || m == "None")
            hint.mode = HintMode::None;
        else
            throw ParseError("spec.direction_mode_hint.mode: expected LI, LR or none");
        if (h.contains("psi")) {
            for (const auto& x : h.at("psi")) {
                if (x.is_string())
                    hint.psi.push_back(x.get<std::string>());
                else if (x.is_number())
                    hint.psi.push_back(shortest(x.get<double>()));
                else
                    throw ParseError("spec.direction_mode_hint.psi: expected decimal literals");
            }
        }
        if (h.contains("note") && h.at("note").is_string()) hint.note = h.at("note").get<std::string>();
        spec.direction_mode_hint = std::move(hint);
    }
    return spec;
}

ProductSpec parse_spec(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("spec is not valid JSON: ") + e.what());
    }
    return spec_from_json(doc);
}

}  // namespace cpz
