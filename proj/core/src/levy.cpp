#include "cpz/levy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cpz/numeric.hpp"

namespace cpz {

namespace {

constexpr std::size_t kChunk = 1024;

bool key_less(const LevyAtom& a, const LevyAtom& b) {
    if (a.p != b.p) return a.p < b.p;
    if (a.psi_class != b.psi_class) return a.psi_class < b.psi_class;
    return std::lexicographical_compare(a.multiple.begin(), a.multiple.end(), b.multiple.begin(),
                                        b.multiple.end());
}

double norm2(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

struct PendingAtom {
    LevyAtom atom;
    double inexact_coefficient = 0.0;
    bool exact = true;
};

// Upper incomplete gamma Gamma(n + 1, z) for integer n >= 0.
double upper_gamma_int(unsigned n, double z) {
    double term = 1.0;
    double sum = 1.0;
    for (unsigned j = 1; j <= n; ++j) {
        term *= z / j;
        sum += term;
    }
    double fact = 1.0;
    for (unsigned j = 2; j <= n; ++j) fact *= j;
    return fact * std::exp(-z) * sum;
}

}  // namespace

bool LevyMeasure::nonnegative() const noexcept {
    return std::all_of(atoms.begin(), atoms.end(), [](const LevyAtom& a) { return a.mass >= 0.0; });
}

double location_exponent(double psi, const RationalVector& multiple, std::span<const double> sigma) {
    double s = 0.0;
    for (std::size_t j = 0; j < multiple.size(); ++j) s += multiple[j].to_double() * sigma[j];
    return psi * s;
}

double atom_weight(std::uint64_t p, double exponent) {
    return std::exp(-exponent * std::log(static_cast<double>(p)));
}

LevyMeasure enumerate_atoms(const ValidatedSpec& spec, std::span<const double> sigma,
                            const TruncationPolicy& policy, AtomOptions options, Parallelism par) {
    const double v = require_convergent(spec, sigma);
    const auto table = arith::shared_primes(policy.prime_limit);
    const auto primes = table->primes();
    const unsigned R = policy.power_limit;

    LevyMeasure out;
    out.d = spec.d();
    out.sigma.assign(sigma.begin(), sigma.end());
    out.policy = policy;
    out.margin = v;
    out.m = spec.m();
    out.truncation_tail = tail_bound(policy, v, spec.m());
    for (std::size_t l = 0; l < spec.phi(); ++l)
        for (std::size_t k = 0; k < spec.eta(); ++k)
            if (!spec.scheme(l, k).is_zero())
                out.rows.push_back({spec.inner(l, sigma), norm2(spec.effective_direction(l))});

    const std::size_t chunks = (primes.size() + kChunk - 1) / kChunk;
    std::vector<std::vector<LevyAtom>> per_chunk(chunks);
    std::vector<double> chunk_abs(chunks, 0.0);

    parallel_for(chunks, par, [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(primes.size(), lo + kChunk);
        std::vector<PendingAtom> pending;
        CompensatedSum abs_sum;
        for (std::size_t i = lo; i < hi; ++i) {
            const std::uint32_t p = primes[i];
            pending.clear();
            for (std::size_t l = 0; l < spec.phi(); ++l) {
                for (std::size_t k = 0; k < spec.eta(); ++k) {
                    const auto& scheme = spec.scheme(l, k);
                    const double alpha = scheme.value(p);
                    if (alpha == 0.0) continue;
                    const bool strict = scheme.is_strict();
                    double alpha_pow = 1.0;
                    int sign_pow = 1;
                    for (unsigned r = 1; r <= R; ++r) {
                        alpha_pow *= alpha;
                        sign_pow *= strict ? static_cast<int>(alpha) : 1;
                        auto multiple = scaled(spec.direction(l), Rational(r));
                        const std::size_t cls = spec.psi_class(l);
                        auto it = std::find_if(pending.begin(), pending.end(), [&](const PendingAtom& a) {
                            return a.atom.psi_class == cls && a.atom.multiple == multiple;
                        });
                        if (it == pending.end()) {
                            PendingAtom fresh;
                            fresh.atom.p = p;
                            fresh.atom.psi_class = cls;
                            fresh.atom.psi = spec.psi(l);
                            fresh.atom.multiple = std::move(multiple);
                            fresh.atom.exact_coefficient = Rational(0);
                            pending.push_back(std::move(fresh));
                            it = std::prev(pending.end());
                        }
                        it->atom.contributions.push_back({l, r});
                        if (strict && it->exact) {
                            *it->atom.exact_coefficient += Rational(sign_pow, r);
                        } else {
                            it->exact = false;
                        }
                        it->inexact_coefficient += alpha_pow / static_cast<double>(r);
                    }
                }
            }
            const double log_p = table->logs()[i];
            for (auto& pa : pending) {
                auto& atom = pa.atom;
                double coefficient = 0.0;
                if (pa.exact) {
                    if (atom.exact_coefficient->is_zero()) continue;
                    coefficient = atom.exact_coefficient->to_double();
                } else {
                    atom.exact_coefficient.reset();
                    coefficient = pa.inexact_coefficient;
                    if (coefficient == 0.0) continue;
                }
                atom.mass = coefficient * atom_weight(p, location_exponent(atom.psi, atom.multiple, sigma));
                atom.location.resize(atom.multiple.size());
                for (std::size_t j = 0; j < atom.multiple.size(); ++j)
                    atom.location[j] = atom.psi * atom.multiple[j].to_double() * log_p;
                abs_sum.add(std::abs(atom.mass));
                per_chunk[c].push_back(std::move(atom));
            }
        }
        std::sort(per_chunk[c].begin(), per_chunk[c].end(), key_less);
        chunk_abs[c] = abs_sum.value();
    });

    CompensatedSum total_abs;
    for (double x : chunk_abs) total_abs.add(x);
    const double threshold = options.relative_drop * total_abs.value();

    std::array<CompensatedSum, kMaxMomentOrder + 1> dropped;
    for (auto& chunk : per_chunk) {
        for (auto& atom : chunk) {
            if (std::abs(atom.mass) < threshold) {
                const double r = norm2(atom.location);
                double rk = 1.0;
                for (unsigned k = 0; k <= kMaxMomentOrder; ++k) {
                    dropped[k].add(std::abs(atom.mass) * rk);
                    rk *= r;
                }
                continue;
            }
            out.atoms.push_back(std::move(atom));
        }
        chunk.clear();
        chunk.shrink_to_fit();
    }
    for (unsigned k = 0; k <= kMaxMomentOrder; ++k) out.dropped_abs_moments[k] = dropped[k].value();
    out.dropped_mass = out.dropped_abs_moments[0];
    out.omitted_tail = out.truncation_tail + out.dropped_mass;
    return out;
}

double total_mass(const LevyMeasure& measure) {
    CompensatedSum s;
    for (auto it = measure.atoms.rbegin(); it != measure.atoms.rend(); ++it) s.add(it->mass);
    return s.value();
}

std::complex<double> cf_from_atoms(const LevyMeasure& measure, std::span<const double> t) {
    if (t.size() != measure.d) throw DomainError("t dimension does not match measure dimension");
    CompensatedComplexSum s;
    for (auto it = measure.atoms.rbegin(); it != measure.atoms.rend(); ++it) {
        double theta = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) theta += t[j] * it->location[j];
        const double h = std::sin(0.5 * theta);
        // e^{-i theta} - 1 = -2 sin^2(theta/2) - i sin(theta)
        s.add(it->mass * std::complex<double>(-2.0 * h * h, -std::sin(theta)));
    }
    return std::exp(s.value());
}

double omitted_moment_bound(const LevyMeasure& measure, unsigned k) {
    if (k > kMaxMomentOrder) throw DomainError("moment order above 8 is not supported");
    if (k == 0) return measure.omitted_tail;
    const auto table = arith::shared_primes(measure.policy.prime_limit);
    const double log_P = std::log(static_cast<double>(measure.policy.prime_limit));
    const unsigned R = measure.policy.power_limit;
    double bound = measure.dropped_abs_moments[k];
    for (const auto& row : measure.rows) {
        const double v = row.margin;
        if (log_P <= k / v) return std::numeric_limits<double>::infinity();
        // p > P: sum_r r^{k-1} (log p)^k p^{-rv} <= C_k(v) (log p)^k p^{-v}.
        double c_k = 0.0;
        for (unsigned r = 1; r < 2000; ++r) {
            const double term = std::pow(r, k - 1.0) * std::exp2(-(r - 1.0) * v);
            c_k += term;
            if (term < 1e-18 * c_k) break;
        }
        const double large = c_k * upper_gamma_int(k, (v - 1.0) * log_P) / std::pow(v - 1.0, k + 1.0);
        // p <= P, r > R: geometric majorant of sum_{r>R} r^{k-1} q^r, q = p^-v.
        CompensatedSum high;
        const double growth = std::pow((R + 2.0) / (R + 1.0), k - 1.0);
        for (std::size_t i = 0; i < table->size(); ++i) {
            const double lp = table->logs()[i];
            const double q = std::exp(-v * lp);
            const double ratio = growth * q;
            const double first = std::pow(R + 1.0, k - 1.0) * std::exp(-(R + 1.0) * v * lp);
            const double term = std::pow(lp, k) * first / (1.0 - ratio);
            high.add(term);
            if (term < 1e-30) break;
        }
        bound += std::pow(row.norm, k) * (large + high.value());
    }
    return bound;
}

MomentEstimate cumulant(const LevyMeasure& measure, std::span<const unsigned> order) {
    if (order.size() != measure.d) throw DomainError("cumulant order has wrong dimension");
    unsigned total = 0;
    for (auto o : order) total += o;
    if (total == 0) throw DomainError("cumulant order must satisfy |kappa| >= 1");
    if (total > 4) throw DomainError("cumulant order must satisfy |kappa| <= 4");
    CompensatedSum s;
    for (auto it = measure.atoms.rbegin(); it != measure.atoms.rend(); ++it) {
        double term = it->mass;
        for (std::size_t j = 0; j < order.size(); ++j)
            for (unsigned e = 0; e < order[j]; ++e) term *= -it->location[j];
        s.add(term);
    }
    return {s.value(), omitted_moment_bound(measure, total)};
}

MomentEstimate absolute_moment(const LevyMeasure& measure, unsigned k) {
    if (k > kMaxMomentOrder) throw DomainError("moment order above 8 is not supported");
    CompensatedSum s;
    for (auto it = measure.atoms.rbegin(); it != measure.atoms.rend(); ++it)
        s.add(std::abs(it->mass) * std::pow(norm2(it->location), k));
    return {s.value(), omitted_moment_bound(measure, k)};
}

LKTriplet lk_triplet(const LevyMeasure& measure) {
    for (const auto& a : measure.atoms)
        if (a.mass < 0.0)
            throw NotADistributionError("negative Levy atom at p = " + std::to_string(a.p) +
                                        ": no compound Poisson representation");
    LKTriplet out;
    out.gaussian.assign(measure.d, std::vector<double>(measure.d, 0.0));
    out.levy = measure;
    out.drift.assign(measure.d, 0.0);
    return out;
}

}  // namespace cpz
