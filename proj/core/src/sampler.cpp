#include "cpz/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "cpz/error.hpp"
#include "cpz/numeric.hpp"

namespace cpz {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t prod = std::uint64_t{a} * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

std::uint64_t poisson_inversion(double mean, DrawStream& s) {
    const double u = s.uniform();
    double p = std::exp(-mean);
    double F = p;
    std::uint64_t k = 0;
    while (u > F) {
        ++k;
        p *= mean / static_cast<double>(k);
        F += p;
        if (p == 0.0 && F < u) break;  // rounding left u above the attainable maximum
    }
    return k;
}

std::uint64_t poisson_ptrs(double lam, DrawStream& s) {
    const double slam = std::sqrt(lam);
    const double loglam = std::log(lam);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double U = s.uniform() - 0.5;
        const double V = s.uniform();
        const double us = 0.5 - std::abs(U);
        const double k = std::floor((2.0 * a / us + b) * U + lam + 0.43);
        if (us >= 0.07 && V <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && V > us)) continue;
        if (std::log(V) + std::log(invalpha) - std::log(a / (us * us) + b) <=
            -lam + k * loglam - std::lgamma(k + 1.0))
            return static_cast<std::uint64_t>(k);
    }
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

DrawStream::DrawStream(std::uint64_t seed, std::uint64_t draw) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      ctr_{static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32), 0, 0} {}

double DrawStream::uniform() noexcept {
    if (used_ + 2 > 4) {
        buf_ = Philox4x32::block(ctr_, key_);
        ++ctr_[2];
        if (ctr_[2] == 0) ++ctr_[3];
        used_ = 0;
    }
    const std::uint64_t hi = buf_[used_] >> 5;   // 27 bits
    const std::uint64_t lo = buf_[used_ + 1] >> 6;  // 26 bits
    used_ += 2;
    // (k + 0.5) / 2^53 lies strictly inside (0, 1).
    return (static_cast<double>((hi << 26) | lo) + 0.5) * 0x1p-53;
}

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t poisson(double mean, DrawStream& s) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    return mean <= 50.0 ? poisson_inversion(mean, s) : poisson_ptrs(mean, s);
}

SampleSet sample(const LevyMeasure& measure, const SampleOptions& options) {
    if (options.n == 0) throw DomainError("sample: n must be at least 1");
    for (const auto& a : measure.atoms)
        if (a.mass < 0.0)
            throw NotADistributionError("sample: the Levy measure has a negative atom at p = " +
                                        std::to_string(a.p) + "; no compound Poisson law exists");

    // Atoms by descending mass; cumulative weights for inverse-CDF jump selection.
    std::vector<std::uint32_t> order(measure.atoms.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return measure.atoms[a].mass > measure.atoms[b].mass;
    });
    std::vector<double> cum(order.size());
    CompensatedSum acc;
    for (std::size_t i = 0; i < order.size(); ++i) {
        acc.add(measure.atoms[order[i]].mass);
        cum[i] = acc.value();
    }
    const double c = order.empty() ? 0.0 : cum.back();

    SampleSet out;
    out.d = measure.d;
    out.n = options.n;
    out.seed = options.seed;
    out.total_mass = c;
    out.omitted_tail = measure.omitted_tail;
    out.values.assign(options.n * measure.d, 0.0);
    out.jump_counts.assign(options.n, 0);
    if (options.record_jumps) out.jumps.resize(options.n);

    parallel_for(options.n, options.par, [&](std::size_t i) {
        DrawStream s(options.seed, i);
        const std::uint64_t K = poisson(c, s);
        out.jump_counts[i] = static_cast<std::uint32_t>(K);
        double* x = out.values.data() + i * measure.d;
        for (std::uint64_t q = 0; q < K; ++q) {
            const double u = s.uniform() * c;
            auto it = std::upper_bound(cum.begin(), cum.end(), u);
            if (it == cum.end()) --it;
            const std::uint32_t idx = order[static_cast<std::size_t>(it - cum.begin())];
            const auto& loc = measure.atoms[idx].location;
            for (std::size_t j = 0; j < measure.d; ++j) x[j] -= loc[j];
            if (options.record_jumps) out.jumps[i].push_back(idx);
        }
    });
    return out;
}

std::complex<double> empirical_cf(const SampleSet& samples, std::span<const double> t) {
    if (t.size() != samples.d) throw DomainError("empirical_cf: t has the wrong dimension");
    if (samples.n == 0) throw DomainError("empirical_cf: no samples");
    CompensatedComplexSum acc;
    for (std::size_t i = 0; i < samples.n; ++i) {
        double th = 0.0;
        const auto x = samples.row(i);
        for (std::size_t j = 0; j < samples.d; ++j) th += t[j] * x[j];
        acc.add({std::cos(th), std::sin(th)});
    }
    return acc.value() / static_cast<double>(samples.n);
}

}  // namespace cpz
