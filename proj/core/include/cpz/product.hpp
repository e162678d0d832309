#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cpz/arith.hpp"
#include "cpz/error.hpp"
#include "cpz/parallel.hpp"
#include "cpz/rational.hpp"

namespace cpz {

struct ConstantScheme {
    double value = 0.0;
};

struct CharacterScheme {
    arith::RealCharacter chi;
};

// `default_value` everywhere except the listed primes.
struct TableScheme {
    double default_value = 0.0;
    std::map<std::uint64_t, double> overrides;
};

// alpha(p) = scale * p^(-exponent); models shifted factors such as zeta(s + a).
struct PowerScheme {
    double scale = 1.0;
    double exponent = 0.0;
};

// A prime-indexed coefficient alpha(p) in [-1, 1].
class CoefficientScheme {
public:
    using Variant = std::variant<ConstantScheme, CharacterScheme, TableScheme, PowerScheme>;

    CoefficientScheme(Variant v) : v_(std::move(v)) {}  // NOLINT(implicit)

    static CoefficientScheme constant(double c) { return Variant(ConstantScheme{c}); }
    static CoefficientScheme character(arith::RealCharacter chi) {
        return Variant(CharacterScheme{std::move(chi)});
    }
    static CoefficientScheme table(double fallback, std::map<std::uint64_t, double> overrides) {
        return Variant(TableScheme{fallback, std::move(overrides)});
    }
    static CoefficientScheme power(double scale, double exponent) {
        return Variant(PowerScheme{scale, exponent});
    }

    double value(std::uint64_t p) const;

    // Every value lies in {-1, 0, 1}.
    bool is_strict() const;
    // Identically zero on all primes.
    bool is_zero() const;
    // Exact integer value for strict schemes.
    int strict_value(std::uint64_t p) const;

    const Variant& variant() const noexcept { return v_; }
    std::string kind() const;

    // Range violations of this scheme, reported under `field`.
    std::vector<Violation> check(const std::string& field) const;

private:
    Variant v_;
};

enum class HintMode { None, LI, LR };

// Optional user declaration about the directions. For LR the effective
// direction l is psi_l * directions[l]; psi are decimal literals whose
// Q-linear independence is taken on trust.
struct DirectionModeHint {
    HintMode mode = HintMode::None;
    std::vector<std::string> psi;
    std::string note;
};

struct ProductSpec {
    std::size_t d = 1;
    std::vector<RationalVector> directions;
    std::size_t tuple_size = 1;
    // phi x eta grid: coefficients[l][k].
    std::vector<std::vector<CoefficientScheme>> coefficients;
    std::optional<DirectionModeHint> direction_mode_hint;
};

std::vector<Violation> check(const ProductSpec& spec);

// A ProductSpec that passed `check`, with derived evaluation data.
class ValidatedSpec {
public:
    const ProductSpec& spec() const noexcept { return spec_; }
    std::size_t d() const noexcept { return spec_.d; }
    std::size_t phi() const noexcept { return spec_.directions.size(); }
    std::size_t eta() const noexcept { return spec_.tuple_size; }
    std::size_t m() const noexcept { return phi() * eta(); }

    const RationalVector& direction(std::size_t l) const { return spec_.directions[l]; }
    // psi_l * a_l in binary64.
    std::span<const double> effective_direction(std::size_t l) const { return effective_[l]; }
    double psi(std::size_t l) const { return psi_[l]; }
    // Directions with the same psi literal share a class; locations merge only within a class.
    std::size_t psi_class(std::size_t l) const { return psi_class_[l]; }
    const CoefficientScheme& scheme(std::size_t l, std::size_t k) const {
        return spec_.coefficients[l][k];
    }
    bool strict() const noexcept { return strict_; }
    bool lr_declared() const noexcept {
        return spec_.direction_mode_hint && spec_.direction_mode_hint->mode == HintMode::LR;
    }

    // psi_l <a_l, x>.
    double inner(std::size_t l, std::span<const double> x) const;

private:
    friend ValidatedSpec validate(ProductSpec spec);
    explicit ValidatedSpec(ProductSpec spec);

    ProductSpec spec_;
    std::vector<std::vector<double>> effective_;
    std::vector<double> psi_;
    std::vector<std::size_t> psi_class_;
    bool strict_ = true;
};

// Throws ValidationError listing every violation.
ValidatedSpec validate(ProductSpec spec);

struct EvalPoint {
    std::vector<double> sigma;
    std::vector<double> t;
};

struct TruncationPolicy {
    std::uint64_t prime_limit = 100000;
    unsigned power_limit = 20;
    double tail_tol = 1e-4;

    // P = 1e5, R = max(2, ceil(40 / v)).
    static TruncationPolicy defaults_for(double v);
    TruncationPolicy doubled() const;
};

// v = min_l psi_l <a_l, sigma>.
double convergence_margin(const ValidatedSpec& spec, std::span<const double> sigma);

// Bound on the absolute sum of all omitted log-series terms (p > P or r > R)
// over m coefficient rows with convergence margin v.
double tail_bound(const TruncationPolicy& policy, double v, std::size_t m);

struct LogValue {
    std::complex<double> value;
    double tail = 0.0;
};

// Truncated log-series; defines log Z_E (no principal-branch logs).
LogValue eval_log(const ValidatedSpec& spec, const EvalPoint& point,
                  const TruncationPolicy& policy, Parallelism par = {});

// Truncated Euler product over p <= P.
std::complex<double> eval(const ValidatedSpec& spec, const EvalPoint& point,
                          const TruncationPolicy& policy, Parallelism par = {});

// f_sigma(t) = exp(log Z(sigma + i t) - log Z(sigma)); exactly 1 at t = 0.
std::complex<double> normalized_cf(const ValidatedSpec& spec, std::span<const double> sigma,
                                   std::span<const double> t, const TruncationPolicy& policy,
                                   Parallelism par = {});

// Throws DomainError when sigma has the wrong dimension or v <= 1; returns v.
double require_convergent(const ValidatedSpec& spec, std::span<const double> sigma);

}  // namespace cpz
