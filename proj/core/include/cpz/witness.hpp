#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpz/classify.hpp"
#include "cpz/parallel.hpp"
#include "cpz/product.hpp"

namespace cpz {

// One-dimensional reduction t = T * v0, with <a_l, t> = T * omegas[l].
struct DirectionReduction {
    DirectionMode mode = DirectionMode::LI;
    std::vector<double> v0;
    std::vector<double> omegas;        // one per spec direction (effective, psi included)
    std::vector<double> group_omegas;  // one per direction group
    // Collinear case: group g sits at integer multiple group_multiples[g] of the base line.
    std::vector<unsigned> group_multiples;
    bool scalar = false;               // collinear or mixed: phases of different groups are coupled
    std::string note;
};

// LI: solves A v0 = omega exactly for omega = (1, sqrt 2, sqrt 3, sqrt 5, ...),
//     using the minimum-norm solution when phi < d.
// LR: v0 = a / <a, a>, omega_l = declared psi_l times the rational ratio.
// Collinear or mixed: scalar search along one fixed direction.
DirectionReduction reduce_direction(const ValidatedSpec& spec, const DirectionCondition& mode);

struct Objective {
    double D = 0.0;     // log |f_sigma(t)|
    double tail = 0.0;  // 2 * tail_bound
};

Objective objective_D(const ValidatedSpec& spec, std::span<const double> sigma,
                      std::span<const double> t, const TruncationPolicy& policy,
                      Parallelism par = {});

// Wants e^{i T omega multiple log p} close to `sign`.
struct PhaseTarget {
    std::uint64_t p = 0;
    std::size_t line = 0;
    double omega = 1.0;
    unsigned multiple = 1;
    int sign = 1;

    double residual(double T) const;
};

struct PhaseTargets {
    std::vector<PhaseTarget> plus;
    std::vector<PhaseTarget> minus;
    unsigned K = 4;

    std::vector<std::uint64_t> plus_primes() const;
    std::vector<std::uint64_t> minus_primes() const;
};

// Primes p <= 2K classified by the sign of their lowest merged mass on each line.
// Throws DomainError when no negative contribution exists.
PhaseTargets derive_targets(const ValidatedSpec& spec, std::span<const double> sigma, unsigned K = 4);

enum class Strategy { DirectMax, KroneckerTargets };
const char* to_string(Strategy s);

struct SearchOptions {
    Strategy strategy = Strategy::DirectMax;
    std::uint64_t budget = 1'000'000;   // objective evaluations (screening + certification)
    double T_max = 1e7;
    unsigned K = 4;
    std::optional<TruncationPolicy> policy;   // certification policy; default per margin
    std::uint64_t screen_prime_limit = 1000;
    double step_tolerance = 1e-2;             // grid step = step_tolerance / Lipschitz(D)
    Parallelism par;
};

struct Witness {
    std::vector<double> t0;
    double T = 0.0;
    std::vector<double> v0;
    double D = 0.0;
    double certified_margin = 0.0;
    TruncationPolicy policy;
    Strategy strategy = Strategy::DirectMax;
    std::uint64_t budget_used = 0;
    std::string note;
};

struct SearchResult {
    std::optional<Witness> witness;
    double max_D_observed = 0.0;
    double max_certified_D = 0.0;
    double omitted_tail = 0.0;   // 2 * tail_bound at the certification policy
    std::uint64_t evaluations = 0;
    double T_reached = 0.0;
    double grid_step = 0.0;
    double lipschitz = 0.0;
    DirectionReduction reduction;
};

SearchResult search(const ValidatedSpec& spec, std::span<const double> sigma,
                    const SearchOptions& options = {});

// D(t0) and its certified margin under another policy (e.g. doubled P and R).
Objective reevaluate(const ValidatedSpec& spec, std::span<const double> sigma, const Witness& w,
                     const TruncationPolicy& policy, Parallelism par = {});

}  // namespace cpz
