#include "cpz/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cpz/levy.hpp"

namespace cpz {

namespace {

constexpr std::size_t kBlock = 8192;
constexpr int kGoldenIterations = 30;

std::vector<std::uint64_t> first_primes(std::size_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t c = 2; out.size() < n; ++c) {
        bool prime = true;
        for (std::uint64_t q = 2; q * q <= c; ++q)
            if (c % q == 0) {
                prime = false;
                break;
            }
        if (prime) out.push_back(c);
    }
    return out;
}

// (1, sqrt 2, sqrt 3, sqrt 5, ...)
std::vector<double> generic_frequencies(std::size_t n) {
    std::vector<double> out{1.0};
    if (n > 1)
        for (auto p : first_primes(n - 1)) out.push_back(std::sqrt(static_cast<double>(p)));
    out.resize(n);
    return out;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    return a / static_cast<std::int64_t>(arith::gcd(static_cast<std::uint64_t>(a),
                                                     static_cast<std::uint64_t>(b))) * b;
}


// Re log of one Euler factor, summed over r exactly: -log|1 - w e^{-i f T}|.
struct ScreenTerm {
    double base;   // log |1 - w|
    double b;      // 1 + w^2
    double c;      // 2 w
    double f;      // omega_l log p
};

struct Screen {
    std::vector<ScreenTerm> terms;
    double lipschitz = 0.0;

    double operator()(double T) const {
        double s = 0.0;
        for (const auto& t : terms) s += t.base - 0.5 * std::log(t.b - t.c * std::cos(t.f * T));
        return s;
    }
};

Screen build_screen(const ValidatedSpec& spec, std::span<const double> sigma,
                    const DirectionReduction& red, std::uint64_t limit) {
    Screen s;
    const auto table = arith::shared_primes(std::max<std::uint64_t>(limit, 2));
    for (std::size_t i = 0; i < table->size(); ++i) {
        const std::uint64_t p = (*table)[i];
        const double lp = table->logs()[i];
        for (std::size_t l = 0; l < spec.phi(); ++l) {
            const double margin = spec.inner(l, sigma);
            const double f = red.omegas[l] * lp;
            for (std::size_t k = 0; k < spec.eta(); ++k) {
                const double alpha = spec.scheme(l, k).value(p);
                if (alpha == 0.0) continue;
                const double w = alpha * std::exp(-margin * lp);
                s.terms.push_back({std::log1p(-w), 1.0 + w * w, 2.0 * w, f});
                s.lipschitz += std::abs(f) * std::abs(w) / (1.0 - std::abs(w));
            }
        }
    }
    return s;
}

template <class F>
double golden_max(F&& f, double lo, double hi, std::uint64_t& evals) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    evals += 2;
    for (int it = 0; it < kGoldenIterations; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
        ++evals;
    }
    return f1 >= f2 ? x1 : x2;
}

}  // namespace

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::DirectMax: return "direct";
        case Strategy::KroneckerTargets: return "kronecker";
    }
    return "?";
}

DirectionReduction reduce_direction(const ValidatedSpec& spec, const DirectionCondition& mode) {
    const auto groups = group_directions(spec);
    DirectionReduction red;
    red.mode = mode.mode;
    const std::size_t d = spec.d();
    const std::size_t G = groups.size();
    red.v0.assign(d, 0.0);

    switch (mode.mode) {
        case DirectionMode::LI: {
            // v0 = A^T (A A^T)^{-1} (omega / psi), with AA^T inverted exactly.
            std::vector<RationalVector> gram(G, RationalVector(G));
            for (std::size_t a = 0; a < G; ++a)
                for (std::size_t b = 0; b < G; ++b)
                    gram[a][b] = cpz::dot(groups[a].direction, groups[b].direction);
            const auto inv = inverse(gram);
            const auto omega = generic_frequencies(G);
            std::vector<double> y(G, 0.0);
            for (std::size_t a = 0; a < G; ++a)
                for (std::size_t b = 0; b < G; ++b)
                    y[a] += inv[a][b].to_double() * omega[b] / groups[b].psi;
            for (std::size_t a = 0; a < G; ++a) {
                const auto dir = to_doubles(groups[a].direction);
                for (std::size_t j = 0; j < d; ++j) red.v0[j] += y[a] * dir[j];
            }
            red.note = "omega = (1, sqrt 2, sqrt 3, ...) on the independent directions";
            break;
        }
        case DirectionMode::LR: {
            const auto a = groups.front().direction;
            const double aa = cpz::dot(a, a).to_double();
            const auto ad = to_doubles(a);
            for (std::size_t j = 0; j < d; ++j) red.v0[j] = ad[j] / aa;
            red.note = "omega_l = psi_l * c_l along the common direction";
            break;
        }
        case DirectionMode::CollinearRational: {
            // a_g = n_g * base with coprime integers n_g.
            std::int64_t L = 1;
            for (const auto& c : mode.ratios) L = lcm64(L, c.den());
            std::vector<std::int64_t> n;
            std::uint64_t G0 = 0;
            for (const auto& c : mode.ratios) {
                n.push_back(c.num() * (L / c.den()));
                G0 = arith::gcd(G0, static_cast<std::uint64_t>(std::abs(n.back())));
            }
            const auto base = scaled(groups.front().direction,
                                     Rational(static_cast<std::int64_t>(G0), L));
            const double bb = cpz::dot(base, base).to_double();
            const auto bd = to_doubles(base);
            for (std::size_t j = 0; j < d; ++j) red.v0[j] = bd[j] / bb;
            for (auto x : n)
                red.group_multiples.push_back(
                    static_cast<unsigned>(std::abs(x) / static_cast<std::int64_t>(G0)));
            red.scalar = true;
            red.note = "collinear directions: scalar search on the primitive common direction";
            break;
        }
        case DirectionMode::Mixed: {
            red.v0 = generic_frequencies(d);
            red.scalar = true;
            red.note = "mixed directions: scalar search along a generic direction";
            break;
        }
    }

    for (std::size_t l = 0; l < spec.phi(); ++l) red.omegas.push_back(spec.inner(l, red.v0));
    for (const auto& g : groups) red.group_omegas.push_back(red.omegas[g.source_directions.front()]);
    return red;
}

Objective objective_D(const ValidatedSpec& spec, std::span<const double> sigma,
                      std::span<const double> t, const TruncationPolicy& policy, Parallelism par) {
    const double v = require_convergent(spec, sigma);
    Objective o;
    o.tail = 2.0 * tail_bound(policy, v, spec.m());
    if (std::all_of(t.begin(), t.end(), [](double x) { return x == 0.0; })) return o;
    const std::vector<double> sig(sigma.begin(), sigma.end());
    const auto at_t = eval_log(spec, {sig, {t.begin(), t.end()}}, policy, par);
    const auto at_0 = eval_log(spec, {sig, std::vector<double>(spec.d(), 0.0)}, policy, par);
    o.D = at_t.value.real() - at_0.value.real();
    return o;
}

double PhaseTarget::residual(double T) const {
    const double half = 0.5 * T * omega * multiple * std::log(static_cast<double>(p));
    return sign > 0 ? 2.0 * std::abs(std::sin(half)) : 2.0 * std::abs(std::cos(half));
}

std::vector<std::uint64_t> PhaseTargets::plus_primes() const {
    std::vector<std::uint64_t> out;
    for (const auto& t : plus) out.push_back(t.p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> PhaseTargets::minus_primes() const {
    std::vector<std::uint64_t> out;
    for (const auto& t : minus) out.push_back(t.p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

PhaseTargets derive_targets(const ValidatedSpec& spec, std::span<const double> sigma, unsigned K) {
    require_convergent(spec, sigma);
    if (K == 0) throw DomainError("derive_targets: K must be positive");
    const auto dc = direction_condition(spec);
    const auto red = reduce_direction(spec, dc);
    const auto groups = group_directions(spec);

    TruncationPolicy pol;
    pol.prime_limit = std::max<std::uint64_t>(2, 2 * static_cast<std::uint64_t>(K));
    pol.power_limit = std::max(8u, 4 * K);
    AtomOptions ao;
    ao.relative_drop = 0.0;
    const auto measure = enumerate_atoms(spec, sigma, pol, ao);

    // line -> (p -> lowest multiple atom), lines being groups, or one line when collinear.
    struct Lowest {
        Rational c;
        double mass;
        double omega;
    };
    std::map<std::pair<std::size_t, std::uint64_t>, Lowest> lowest;
    for (const auto& atom : measure.atoms) {
        if (atom.mass == 0.0) continue;
        std::size_t line = 0;
        Rational c;
        bool found = false;
        for (std::size_t g = 0; g < groups.size() && !found; ++g) {
            if (groups[g].psi_class != atom.psi_class) continue;
            if (rational_multiple(groups[g].direction, atom.multiple, c) && c.sign() > 0) {
                found = true;
                line = g;
            }
        }
        if (!found) continue;
        double omega = red.group_omegas[line];
        if (dc.mode == DirectionMode::CollinearRational) {
            c = c * Rational(red.group_multiples[line]);
            omega = red.group_omegas[line] / red.group_multiples[line];
            line = 0;
        }
        const auto key = std::make_pair(line, static_cast<std::uint64_t>(atom.p));
        auto it = lowest.find(key);
        if (it == lowest.end() || c < it->second.c) lowest[key] = {c, atom.mass, omega};
    }

    PhaseTargets out;
    out.K = K;
    for (const auto& [key, low] : lowest) {
        PhaseTarget t;
        t.line = key.first;
        t.p = key.second;
        if (low.c.is_integer()) {
            t.omega = low.omega;
            t.multiple = static_cast<unsigned>(low.c.num());
        } else {
            t.omega = low.omega * low.c.to_double();
        }
        t.sign = low.mass < 0.0 ? -1 : 1;
        (t.sign < 0 ? out.minus : out.plus).push_back(t);
    }
    if (out.minus.empty())
        throw DomainError("derive_targets: no negative contribution at primes p <= " +
                          std::to_string(2 * K) + "; nothing to witness");
    return out;
}

SearchResult search(const ValidatedSpec& spec, std::span<const double> sigma,
                    const SearchOptions& opt) {
    const double v = require_convergent(spec, sigma);
    const TruncationPolicy policy = opt.policy.value_or(TruncationPolicy::defaults_for(v));
    if (!(opt.step_tolerance > 0.0)) throw DomainError("search: step tolerance must be positive");

    SearchResult res;
    const auto dc = direction_condition(spec);
    res.reduction = reduce_direction(spec, dc);
    res.omitted_tail = 2.0 * tail_bound(policy, v, spec.m());
    res.max_D_observed = -std::numeric_limits<double>::infinity();
    res.max_certified_D = -std::numeric_limits<double>::infinity();

    PhaseTargets targets;
    if (opt.strategy == Strategy::KroneckerTargets) targets = derive_targets(spec, sigma, opt.K);
    std::vector<PhaseTarget> all_targets = targets.plus;
    all_targets.insert(all_targets.end(), targets.minus.begin(), targets.minus.end());

    const Screen screen = build_screen(spec, sigma, res.reduction, opt.screen_prime_limit);
    res.lipschitz = screen.lipschitz;
    if (screen.terms.empty() || screen.lipschitz == 0.0) {
        res.max_D_observed = 0.0;
        return res;
    }
    const double h = opt.step_tolerance / screen.lipschitz;
    res.grid_step = h;

    const std::vector<double> sig(sigma.begin(), sigma.end());
    const double base =
        eval_log(spec, {sig, std::vector<double>(spec.d(), 0.0)}, policy, opt.par).value.real();
    std::uint64_t evals = 1;

    auto certify = [&](double T) -> std::optional<Witness> {
        std::vector<double> t(spec.d());
        for (std::size_t j = 0; j < t.size(); ++j) t[j] = T * res.reduction.v0[j];
        const double D = eval_log(spec, {sig, t}, policy, opt.par).value.real() - base;
        ++evals;
        res.max_D_observed = std::max(res.max_D_observed, D);
        res.max_certified_D = std::max(res.max_certified_D, D);
        if (!(D - res.omitted_tail > 0.0)) return std::nullopt;
        Witness w;
        w.t0 = std::move(t);
        w.T = T;
        w.v0 = res.reduction.v0;
        w.D = D;
        w.certified_margin = D - res.omitted_tail;
        w.policy = policy;
        w.strategy = opt.strategy;
        w.note = std::string(to_string(dc.mode)) + "; " + res.reduction.note;
        return w;
    };

    auto rho = [&](double T) {
        double s = 0.0;
        for (const auto& t : all_targets) {
            const double r = t.residual(T);
            s += r * r;
        }
        return s;
    };
    const double rho_threshold = 0.25 * static_cast<double>(all_targets.size());

    const double max_index_d = std::floor(opt.T_max / h);
    const std::uint64_t max_index =
        max_index_d >= 9e18 ? std::numeric_limits<std::uint64_t>::max()
                            : static_cast<std::uint64_t>(max_index_d);
    // Value at T = 0: D vanishes, rho counts only the minus targets.
    double prev = opt.strategy == Strategy::DirectMax ? 0.0 : rho(0.0);
    std::vector<double> vals;
    std::uint64_t j = 1;
    while (j <= max_index && evals + 2 < opt.budget) {
        const std::uint64_t n =
            std::min<std::uint64_t>({kBlock, max_index - j + 1, opt.budget - evals - 1});
        vals.assign(n + 1, 0.0);
        parallel_for(n + 1, opt.par, [&](std::size_t i) {
            const double T = static_cast<double>(j + i) * h;
            vals[i] = opt.strategy == Strategy::DirectMax ? screen(T) : rho(T);
        });
        evals += n + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double cur = vals[i];
            const double next = vals[i + 1];
            const double T = static_cast<double>(j + i) * h;
            if (opt.strategy == Strategy::DirectMax) {
                res.max_D_observed = std::max(res.max_D_observed, cur);
                if (cur >= prev && cur >= next && cur + screen.lipschitz * h > 0.0) {
                    const double Tstar = golden_max(screen, T - h, T + h, evals);
                    const double Ds = screen(Tstar);
                    ++evals;
                    res.max_D_observed = std::max(res.max_D_observed, Ds);
                    if (Ds > 0.0) {
                        if (auto w = certify(Tstar)) {
                            w->budget_used = evals;
                            res.witness = std::move(w);
                            res.evaluations = evals;
                            res.T_reached = Tstar;
                            return res;
                        }
                    }
                }
            } else if (cur <= prev && cur <= next && cur < rho_threshold) {
                const double Ds = screen(T);
                ++evals;
                res.max_D_observed = std::max(res.max_D_observed, Ds);
                if (Ds > 0.0) {
                    if (auto w = certify(T)) {
                        w->budget_used = evals;
                        res.witness = std::move(w);
                        res.evaluations = evals;
                        res.T_reached = T;
                        return res;
                    }
                }
            }
            prev = cur;
            if (evals >= opt.budget) break;
        }
        j += n;
        res.T_reached = static_cast<double>(j - 1) * h;
    }
    res.evaluations = evals;
    if (!std::isfinite(res.max_D_observed)) res.max_D_observed = 0.0;
    if (!std::isfinite(res.max_certified_D)) res.max_certified_D = 0.0;
    return res;
}

Objective reevaluate(const ValidatedSpec& spec, std::span<const double> sigma, const Witness& w,
                     const TruncationPolicy& policy, Parallelism par) {
    return objective_D(spec, sigma, w.t0, policy, par);
}

}  // namespace cpz
