#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "cpz/levy.hpp"
#include "cpz/parallel.hpp"

namespace cpz {

// Philox4x32-10 (Salmon et al.), counter-based: output depends only on (key, counter).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept;
};

// Uniform stream for one draw: counter = (draw lo, draw hi, block, 0).
class DrawStream {
public:
    DrawStream(std::uint64_t seed, std::uint64_t draw) noexcept;
    // Uniform on (0, 1) with 53 random bits.
    double uniform() noexcept;

private:
    Philox4x32::Key key_;
    Philox4x32::Counter ctr_;
    Philox4x32::Counter buf_{};
    unsigned used_ = 4;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

// Poisson(mean): sequential inversion for mean <= 50, PTRS transformed rejection above.
std::uint64_t poisson(double mean, DrawStream& s);

struct SampleOptions {
    std::uint64_t seed = 0;
    std::size_t n = 1000;
    bool record_jumps = false;
    Parallelism par;
};

struct SampleSet {
    std::size_t d = 1;
    std::size_t n = 0;
    std::vector<double> values;              // row-major n x d
    std::vector<std::uint32_t> jump_counts;  // Poisson K per draw
    // With record_jumps: atom indices (into the measure) of each draw's jumps.
    std::vector<std::vector<std::uint32_t>> jumps;
    std::uint64_t seed = 0;
    double total_mass = 0.0;
    double omitted_tail = 0.0;

    std::span<const double> row(std::size_t i) const { return {values.data() + i * d, d}; }
};

// X = -sum of K jump locations, K ~ Poisson(total mass), jumps ~ mass / total mass.
// Draw i depends only on (seed, i), never on the thread count.
// Throws NotADistributionError if the measure has a negative atom.
SampleSet sample(const LevyMeasure& measure, const SampleOptions& options);

// (1/n) sum_i exp(i <t, X_i>).  Same sign convention as normalized_cf.
std::complex<double> empirical_cf(const SampleSet& samples, std::span<const double> t);

}  // namespace cpz
