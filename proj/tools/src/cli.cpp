#include "cpz/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "cpz/catalog.hpp"
#include "cpz/classify.hpp"
#include "cpz/io.hpp"
#include "cpz/levy.hpp"
#include "cpz/product.hpp"
#include "cpz/sampler.hpp"
#include "cpz/spec_json.hpp"
#include "cpz/witness.hpp"

namespace cpz::cli {

namespace {

using nlohmann::json;

ValidationError invalid(const std::string& field, const std::string& message) {
    return ValidationError(std::vector<Violation>{{field, message}});
}

struct RunConfig {
    std::string command;
    std::string catalog_action;
    std::string entry_name;
    std::string spec_file;
    std::string catalog;
    std::string sigma;
    std::vector<std::string> t;
    std::optional<std::uint64_t> prime_limit;
    std::optional<unsigned> power_limit;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    std::size_t n = 1000;
    std::uint64_t budget = 1'000'000;
    std::string strategy = "direct";
    std::string out;
    unsigned threads = 1;
    double alpha = 0.5;
    int lm = 1;
};

// Parsed spec plus every resolved setting.
struct Resolved {
    std::optional<ValidatedSpec> spec;
    std::vector<double> sigma;
    std::vector<std::vector<double>> ts;
    TruncationPolicy policy;
    double margin = 0.0;
    std::vector<std::string> warnings;
};

std::vector<double> parse_vector(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = std::min(text.find(',', pos), text.size());
        std::string item = text.substr(pos, comma - pos);
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        const char* b = item.data();
        if (!item.empty() && *b == '+') ++b;
        double v = 0.0;
        auto res = std::from_chars(b, item.data() + item.size(), v);
        if (item.empty() || res.ec != std::errc() || res.ptr != item.data() + item.size() ||
            !std::isfinite(v))
            throw ParseError(flag + ": '" + text + "' is not a comma-separated list of decimals");
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

json config_json(const RunConfig& c, const Resolved& r) {
    json j;
    j["command"] = c.command;
    if (!c.catalog_action.empty()) j["action"] = c.catalog_action;
    if (!c.catalog.empty())
        j["spec_source"] = {{"catalog", c.catalog}, {"alpha", c.alpha}, {"lm", c.lm}};
    else if (!c.spec_file.empty())
        j["spec_source"] = {{"file", c.spec_file}};
    if (!r.sigma.empty()) j["sigma"] = r.sigma;
    if (!r.ts.empty()) j["t"] = r.ts;
    if (r.spec) {
        j["policy"] = io::to_json(r.policy);
        j["convergence_margin"] = r.margin;
    }
    j["seed"] = c.seed;
    j["n"] = c.n;
    j["budget"] = c.budget;
    j["strategy"] = c.strategy;
    j["out"] = c.out;
    j["threads"] = c.threads;
    return j;
}

Resolved resolve(const RunConfig& c, bool need_t_default) {
    Resolved r;
    if (c.catalog.empty() == c.spec_file.empty())
        throw invalid("spec_source", "give exactly one of --spec FILE or --catalog NAME");
    std::vector<double> default_sigma;
    if (!c.catalog.empty()) {
        auto entry = catalog::get(c.catalog, {c.alpha, c.lm});
        default_sigma = entry.sigma;
        r.spec.emplace(validate(std::move(entry.spec)));
    } else {
        std::ifstream in(c.spec_file);
        if (!in) throw LookupError("cannot open spec file '" + c.spec_file + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        r.spec.emplace(validate(parse_spec(ss.str())));
    }
    if (!c.sigma.empty())
        r.sigma = parse_vector(c.sigma, "--sigma");
    else if (!default_sigma.empty())
        r.sigma = default_sigma;
    else
        throw invalid("sigma", "--sigma is required with --spec");
    if (r.sigma.size() != r.spec->d())
        throw invalid("sigma", "expected " + std::to_string(r.spec->d()) + " components, got " +
                                             std::to_string(r.sigma.size()));
    for (const auto& t : c.t) {
        r.ts.push_back(parse_vector(t, "--t"));
        if (r.ts.back().size() != r.spec->d())
            throw invalid("t", "expected " + std::to_string(r.spec->d()) + " components");
    }
    if (r.ts.empty() && need_t_default) r.ts.push_back(std::vector<double>(r.spec->d(), 0.0));

    r.margin = require_convergent(*r.spec, r.sigma);
    r.policy = TruncationPolicy::defaults_for(r.margin);
    if (c.prime_limit) r.policy.prime_limit = *c.prime_limit;
    if (c.power_limit) r.policy.power_limit = *c.power_limit;
    if (c.tol) r.policy.tail_tol = *c.tol;
    if (r.policy.prime_limit < 2 || r.policy.prime_limit > arith::kMaxSieveLimit)
        throw invalid("prime_limit", "must lie in [2, 2^31]");
    if (r.policy.power_limit < 1) throw invalid("power_limit", "must be at least 1");
    if (!(r.policy.tail_tol > 0.0)) throw invalid("tol", "must be positive");
    const double tail = tail_bound(r.policy, r.margin, r.spec->m());
    if (tail > r.policy.tail_tol)
        r.warnings.push_back("tail bound " + io::format_double(tail) + " exceeds --tol " +
                             io::format_double(r.policy.tail_tol));
    return r;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw LookupError("cannot write '" + path + "'");
    f << content;
}

void emit(std::ostream& out, json j, const RunConfig& c, const Resolved& r) {
    j["config"] = config_json(c, r);
    if (!r.warnings.empty()) j["warnings"] = r.warnings;
    out << j.dump(2) << '\n';
}

int cmd_eval(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, true);
    Parallelism par{c.threads};
    json results = json::array();
    for (const auto& t : r.ts) {
        const EvalPoint pt{r.sigma, t};
        const auto z = eval(*r.spec, pt, r.policy, par);
        const auto lz = eval_log(*r.spec, pt, r.policy, par);
        results.push_back({{"t", t}, {"value", io::to_json(z)}, {"log_value", io::to_json(lz.value)},
                           {"tail", lz.tail}});
    }
    json j = results.size() == 1 ? results[0] : json{{"values", results}};
    emit(out, j, c, r);
    return 0;
}

int cmd_cf(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, true);
    Parallelism par{c.threads};
    json values = json::array();
    std::ostringstream csv;
    for (std::size_t j = 1; j <= r.spec->d(); ++j) csv << "t_" << j << ',';
    csv << "re,im\n";
    const double tail = tail_bound(r.policy, r.margin, r.spec->m());
    for (const auto& t : r.ts) {
        const auto f = normalized_cf(*r.spec, r.sigma, t, r.policy, par);
        values.push_back({{"t", t}, {"re", f.real()}, {"im", f.imag()}});
        for (double x : t) csv << io::format_double(x) << ',';
        csv << io::format_double(f.real()) << ',' << io::format_double(f.imag()) << '\n';
    }
    json j;
    if (values.size() == 1) {
        j["re"] = values[0]["re"];
        j["im"] = values[0]["im"];
    }
    j["values"] = values;
    j["tail"] = 2.0 * tail;
    if (!c.out.empty()) write_file(c.out, csv.str());
    emit(out, j, c, r);
    return 0;
}

int cmd_classify(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, false);
    const auto res = classify(*r.spec, r.sigma);
    json j = io::to_json(res);
    if (res.verdict == Verdict::OutOfTheoremScope)
        j["atom_certificate"] =
            io::to_json(certify_by_atoms(*r.spec, r.sigma, r.policy, Parallelism{c.threads}));
    emit(out, j, c, r);
    return 0;
}

int cmd_levy(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, false);
    const auto m = enumerate_atoms(*r.spec, r.sigma, r.policy, {}, Parallelism{c.threads});
    json j = io::measure_summary(m);
    if (!c.out.empty()) {
        std::ostringstream csv;
        io::write_atoms_csv(csv, m);
        write_file(c.out, csv.str());
        json side = j;
        side["config"] = config_json(c, r);
        write_file(c.out + ".json", side.dump(2) + "\n");
    }
    emit(out, j, c, r);
    return 0;
}

int cmd_witness(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, false);
    SearchOptions opt;
    if (c.strategy == "direct")
        opt.strategy = Strategy::DirectMax;
    else if (c.strategy == "kronecker")
        opt.strategy = Strategy::KroneckerTargets;
    else
        throw invalid("strategy", "expected 'direct' or 'kronecker'");
    opt.budget = c.budget;
    opt.policy = r.policy;
    opt.par = Parallelism{c.threads};
    const auto res = search(*r.spec, r.sigma, opt);
    json j = io::to_json(res);
    if (res.witness) {
        const auto pol = r.policy.doubled();
        const auto re = reevaluate(*r.spec, r.sigma, *res.witness, pol, opt.par);
        j["recheck"] = {{"policy", io::to_json(pol)}, {"D", re.D}, {"tail", re.tail},
                        {"certified_margin", re.D - re.tail}, {"survives", re.D - re.tail > 0.0}};
    }
    if (!c.out.empty()) write_file(c.out, j.dump(2) + "\n");
    emit(out, j, c, r);
    return res.witness ? 0 : 1;
}

int cmd_sample(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, false);
    Parallelism par{c.threads};
    const auto m = enumerate_atoms(*r.spec, r.sigma, r.policy, {}, par);
    SampleOptions so;
    so.seed = c.seed;
    so.n = c.n;
    so.par = par;
    const auto s = sample(m, so);
    json j = io::samples_summary(s);
    std::vector<double> mean(s.d, 0.0);
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t k = 0; k < s.d; ++k) mean[k] += s.row(i)[k];
    for (auto& x : mean) x /= static_cast<double>(s.n);
    j["mean"] = mean;
    if (!r.ts.empty()) {
        json cfs = json::array();
        for (const auto& t : r.ts) {
            const auto e = empirical_cf(s, t);
            cfs.push_back({{"t", t}, {"re", e.real()}, {"im", e.imag()}});
        }
        j["empirical_cf"] = cfs;
    }
    if (!c.out.empty()) {
        std::ostringstream csv;
        io::write_samples_csv(csv, s);
        write_file(c.out, csv.str());
        json side = io::samples_summary(s);
        side["provenance"] = config_json(c, r);
        write_file(c.out + ".json", side.dump(2) + "\n");
    }
    emit(out, j, c, r);
    return 0;
}

void multi_indices(std::size_t d, unsigned total, std::vector<unsigned>& cur,
                   std::vector<std::vector<unsigned>>& out) {
    if (cur.size() + 1 == d) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (unsigned k = total + 1; k-- > 0;) {
        cur.push_back(k);
        multi_indices(d, total - k, cur, out);
        cur.pop_back();
    }
}

int cmd_moments(const RunConfig& c, std::ostream& out) {
    auto r = resolve(c, false);
    const auto m = enumerate_atoms(*r.spec, r.sigma, r.policy, {}, Parallelism{c.threads});
    json cumulants = json::array();
    for (unsigned total = 1; total <= 4; ++total) {
        std::vector<std::vector<unsigned>> orders;
        std::vector<unsigned> cur;
        multi_indices(m.d, total, cur, orders);
        for (const auto& o : orders) {
            const auto e = cumulant(m, o);
            cumulants.push_back({{"order", o}, {"value", e.value}, {"error_bound", e.error_bound}});
        }
    }
    json abs = json::array();
    for (unsigned k = 0; k <= kMaxMomentOrder; ++k) {
        const auto e = absolute_moment(m, k);
        abs.push_back({{"k", k}, {"value", e.value}, {"error_bound", e.error_bound}});
    }
    emit(out, {{"cumulants", cumulants}, {"absolute_moments", abs}, {"nonnegative", m.nonnegative()}},
         c, r);
    return 0;
}

json expected_json(const catalog::Expected& e) {
    json j = {{"infinitely_divisible", e.infinitely_divisible},
              {"verdict", to_string(e.verdict)},
              {"theorem", to_string(e.theorem)}};
    if (e.atoms) j["atom_outcome"] = to_string(*e.atoms);
    return j;
}

int cmd_catalog(const RunConfig& c, std::ostream& out) {
    Resolved none;
    if (c.catalog_action == "list") {
        json names = json::array();
        for (const auto& n : catalog::list()) {
            const auto e = catalog::get(n, {c.alpha, c.lm});
            names.push_back({{"name", n}, {"description", e.description}, {"d", e.spec.d}});
        }
        emit(out, {{"entries", names}}, c, none);
        return 0;
    }
    const auto e = catalog::get(c.entry_name, {c.alpha, c.lm});
    validate(e.spec);
    if (c.catalog_action == "export") {
        const std::string text = to_json(e.spec).dump(2) + "\n";
        if (!c.out.empty())
            write_file(c.out, text);
        else
            out << text;
        return 0;
    }
    emit(out,
         {{"name", e.name},
          {"description", e.description},
          {"spec", to_json(e.spec)},
          {"sigma", e.sigma},
          {"expected", expected_json(e.expected)},
          {"closed_form_atoms", e.closed_form.has_value()}},
         c, none);
    return 0;
}

json error_json(const std::string& kind, const std::string& message,
                const std::vector<Violation>& violations = {}) {
    json j = {{"kind", kind}, {"message", message}};
    if (!violations.empty()) {
        json vs = json::array();
        for (const auto& v : violations) vs.push_back({{"field", v.field}, {"message", v.message}});
        j["violations"] = vs;
    }
    return {{"error", j}};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Polynomial Euler products: evaluation, classification, Levy measures, witnesses, sampling"};
    app.require_subcommand(1);

    auto add_source = [&](CLI::App* s) {
        s->add_option("--spec", c.spec_file, "ProductSpec JSON file");
        s->add_option("--catalog", c.catalog, "catalog entry name");
        s->add_option("--alpha", c.alpha, "rank_shift parameter (> 0)");
        s->add_option("--lm", c.lm, "tuple_rank_* choice of L1 or L2");
        s->add_option("--sigma", c.sigma, "real part, comma-separated");
        s->add_option("--prime-limit", c.prime_limit, "truncation P");
        s->add_option("--power-limit", c.power_limit, "truncation R");
        s->add_option("--tol", c.tol, "target tail tolerance");
        s->add_option("--threads", c.threads, "worker threads (results do not depend on it)");
        s->add_option("--out", c.out, "output path");
    };

    auto* ev = app.add_subcommand("eval", "Z and log Z at s = sigma + i t");
    add_source(ev);
    ev->add_option("--t", c.t, "imaginary part, comma-separated; repeatable");
    auto* cf = app.add_subcommand("cf", "normalized characteristic function over t points");
    add_source(cf);
    cf->add_option("--t", c.t, "t point, comma-separated; repeatable");
    auto* cl = app.add_subcommand("classify", "compound Poisson classification");
    add_source(cl);
    auto* lv = app.add_subcommand("levy", "Levy measure atoms (CSV to --out, JSON summary)");
    add_source(lv);
    auto* wi = app.add_subcommand("witness", "search t0 with |f(t0)| > 1");
    add_source(wi);
    wi->add_option("--budget", c.budget, "objective evaluations");
    wi->add_option("--strategy", c.strategy, "direct or kronecker");
    auto* sa = app.add_subcommand("sample", "compound Poisson samples (CSV to --out)");
    add_source(sa);
    sa->add_option("--seed", c.seed, "RNG seed");
    sa->add_option("--n", c.n, "number of draws");
    sa->add_option("--t", c.t, "evaluate the empirical CF here; repeatable");
    auto* mo = app.add_subcommand("moments", "cumulants up to order 4 and absolute moments");
    add_source(mo);

    auto* ca = app.add_subcommand("catalog", "built-in specs");
    ca->require_subcommand(1);
    auto* ca_list = ca->add_subcommand("list", "entry names");
    auto* ca_show = ca->add_subcommand("show", "entry details");
    ca_show->add_option("name", c.entry_name)->required();
    auto* ca_export = ca->add_subcommand("export", "entry spec as JSON");
    ca_export->add_option("name", c.entry_name)->required();
    ca_export->add_option("--out", c.out, "output path");
    for (auto* s : {ca_list, ca_show, ca_export}) {
        s->add_option("--alpha", c.alpha, "rank_shift parameter (> 0)");
        s->add_option("--lm", c.lm, "tuple_rank_* choice of L1 or L2");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage_error", e.what()).dump() << '\n';
        return 2;
    }

    for (auto* s : app.get_subcommands()) c.command = s->get_name();
    if (c.command == "catalog")
        for (auto* s : ca->get_subcommands()) c.catalog_action = s->get_name();

    try {
        if (c.threads == 0) throw invalid("threads", "must be at least 1");
        if (c.command == "eval") return cmd_eval(c, out);
        if (c.command == "cf") return cmd_cf(c, out);
        if (c.command == "classify") return cmd_classify(c, out);
        if (c.command == "levy") return cmd_levy(c, out);
        if (c.command == "witness") return cmd_witness(c, out);
        if (c.command == "sample") return cmd_sample(c, out);
        if (c.command == "moments") return cmd_moments(c, out);
        if (c.command == "catalog") return cmd_catalog(c, out);
        throw invalid("command", "unknown command");
    } catch (const ValidationError& e) {
        err << error_json(e.kind(), e.what(), e.violations()).dump() << '\n';
    } catch (const Error& e) {
        err << error_json(e.kind(), e.what()).dump() << '\n';
    } catch (const std::exception& e) {
        err << error_json("internal_error", e.what()).dump() << '\n';
    }
    return 2;
}

}  // namespace cpz::cli
