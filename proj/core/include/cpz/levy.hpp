#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cpz/parallel.hpp"
#include "cpz/product.hpp"
#include "cpz/rational.hpp"

namespace cpz {

// One (l, r) term that landed on an atom.
struct AtomContribution {
    std::size_t l = 0;
    unsigned r = 0;
};

// Point mass at x = (log p) * psi * multiple, with multiple = r * a_l exact.
// Atoms with equal (p, psi class, multiple) are merged.
struct LevyAtom {
    std::uint32_t p = 0;
    std::size_t psi_class = 0;
    double psi = 1.0;
    RationalVector multiple;
    std::vector<double> location;
    double mass = 0.0;
    // sum over contributions of alpha^r / r, exact when all contributing schemes are strict.
    std::optional<Rational> exact_coefficient;
    std::vector<AtomContribution> contributions;
};

struct AtomOptions {
    // Atoms with |mass| < relative_drop * sum|mass| are dropped into omitted_tail.
    double relative_drop = 1e-16;
};

// Envelope data of one nonzero coefficient row, used by moment tail bounds.
struct RowEnvelope {
    double margin = 0.0;   // psi_l <a_l, sigma>
    double norm = 0.0;     // Euclidean norm of psi_l a_l
};

inline constexpr unsigned kMaxMomentOrder = 8;

struct LevyMeasure {
    std::size_t d = 1;
    std::vector<LevyAtom> atoms;
    double truncation_tail = 0.0;  // tail_bound(policy, v, m)
    double dropped_mass = 0.0;
    double omitted_tail = 0.0;     // truncation_tail + dropped_mass
    // sum over dropped atoms of |mass| * |x|^k, k = 0..8.
    std::array<double, kMaxMomentOrder + 1> dropped_abs_moments{};
    std::vector<double> sigma;
    TruncationPolicy policy;
    double margin = 0.0;
    std::size_t m = 0;
    std::vector<RowEnvelope> rows;

    bool nonnegative() const noexcept;
};

// Exponent e such that an atom's mass is coefficient * p^-e.
double location_exponent(double psi, const RationalVector& multiple, std::span<const double> sigma);
// p^-e as computed everywhere in the library.
double atom_weight(std::uint64_t p, double exponent);

LevyMeasure enumerate_atoms(const ValidatedSpec& spec, std::span<const double> sigma,
                            const TruncationPolicy& policy, AtomOptions options = {},
                            Parallelism par = {});

double total_mass(const LevyMeasure& measure);

// exp( sum mass * (e^{-i<t,x>} - 1) ).
std::complex<double> cf_from_atoms(const LevyMeasure& measure, std::span<const double> t);

struct MomentEstimate {
    double value = 0.0;
    double error_bound = 0.0;
};

// Mixed cumulant sum mass * prod_j (-x_j)^kappa_j, for 1 <= |kappa| <= 4.
MomentEstimate cumulant(const LevyMeasure& measure, std::span<const unsigned> order);

// sum |mass| * |x|^k (Euclidean norm), 0 <= k <= 8.
MomentEstimate absolute_moment(const LevyMeasure& measure, unsigned k);

// Bound on sum over omitted atoms of |mass| |x|^k.
double omitted_moment_bound(const LevyMeasure& measure, unsigned k);

struct LKTriplet {
    std::vector<std::vector<double>> gaussian;  // A
    LevyMeasure levy;                            // nu
    std::vector<double> drift;                   // gamma_0
};

// Compound Poisson normal form (A = 0, nu = N, gamma_0 = 0).
// Throws NotADistributionError on a negative atom.
LKTriplet lk_triplet(const LevyMeasure& measure);

}  // namespace cpz
