#include "cpz/product.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "cpz/numeric.hpp"

namespace cpz {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

bool in_unit_range(double x) { return std::isfinite(x) && x >= -1.0 && x <= 1.0; }
bool is_sign(double x) { return x == -1.0 || x == 0.0 || x == 1.0; }

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q = 2; q * q <= n; ++q)
        if (n % q == 0) return false;
    return true;
}

constexpr std::size_t kChunk = 1024;

}  // namespace

double CoefficientScheme::value(std::uint64_t p) const {
    return std::visit(Overloaded{
                          [](const ConstantScheme& s) { return s.value; },
                          [p](const CharacterScheme& s) { return static_cast<double>(s.chi(p)); },
                          [p](const TableScheme& s) {
                              auto it = s.overrides.find(p);
                              return it == s.overrides.end() ? s.default_value : it->second;
                          },
                          [p](const PowerScheme& s) {
                              if (s.scale == 0.0) return 0.0;
                              return s.scale * std::exp(-s.exponent * std::log(static_cast<double>(p)));
                          },
                      },
                      v_);
}

bool CoefficientScheme::is_strict() const {
    return std::visit(Overloaded{
                          [](const ConstantScheme& s) { return is_sign(s.value); },
                          [](const CharacterScheme&) { return true; },
                          [](const TableScheme& s) {
                              if (!is_sign(s.default_value)) return false;
                              return std::all_of(s.overrides.begin(), s.overrides.end(),
                                                 [](const auto& kv) { return is_sign(kv.second); });
                          },
                          [](const PowerScheme& s) {
                              return s.scale == 0.0 || (s.exponent == 0.0 && is_sign(s.scale));
                          },
                      },
                      v_);
}

bool CoefficientScheme::is_zero() const {
    return std::visit(Overloaded{
                          [](const ConstantScheme& s) { return s.value == 0.0; },
                          [](const CharacterScheme&) { return false; },
                          [](const TableScheme& s) {
                              if (s.default_value != 0.0) return false;
                              return std::all_of(s.overrides.begin(), s.overrides.end(),
                                                 [](const auto& kv) { return kv.second == 0.0; });
                          },
                          [](const PowerScheme& s) { return s.scale == 0.0; },
                      },
                      v_);
}

int CoefficientScheme::strict_value(std::uint64_t p) const {
    if (!is_strict()) throw UnsupportedError("strict_value on a non-strict coefficient scheme");
    return static_cast<int>(value(p));
}

std::string CoefficientScheme::kind() const {
    return std::visit(Overloaded{
                          [](const ConstantScheme&) { return std::string("constant"); },
                          [](const CharacterScheme&) { return std::string("character"); },
                          [](const TableScheme&) { return std::string("table"); },
                          [](const PowerScheme&) { return std::string("power"); },
                      },
                      v_);
}

std::vector<Violation> CoefficientScheme::check(const std::string& field) const {
    std::vector<Violation> out;
    std::visit(Overloaded{
                   [&](const ConstantScheme& s) {
                       if (!in_unit_range(s.value))
                           out.push_back({field + ".value", "must lie in [-1, 1]"});
                   },
                   [](const CharacterScheme&) {},
                   [&](const TableScheme& s) {
                       if (!in_unit_range(s.default_value))
                           out.push_back({field + ".default", "must lie in [-1, 1]"});
                       for (const auto& [p, v] : s.overrides) {
                           const auto key = field + ".overrides." + std::to_string(p);
                           if (!is_prime(p)) out.push_back({key, "override key must be a prime"});
                           if (!in_unit_range(v)) out.push_back({key, "must lie in [-1, 1]"});
                       }
                   },
                   [&](const PowerScheme& s) {
                       if (!in_unit_range(s.scale))
                           out.push_back({field + ".scale", "must lie in [-1, 1]"});
                       if (!std::isfinite(s.exponent) || s.exponent < 0.0)
                           out.push_back({field + ".exponent", "must be finite and >= 0"});
                   },
               },
               v_);
    return out;
}

std::vector<Violation> check(const ProductSpec& spec) {
    std::vector<Violation> out;
    if (spec.d < 1) out.push_back({"d", "dimension must be >= 1"});
    if (spec.directions.empty()) out.push_back({"directions", "at least one direction required"});
    for (std::size_t l = 0; l < spec.directions.size(); ++l) {
        const auto field = "directions[" + std::to_string(l) + "]";
        if (spec.directions[l].size() != spec.d)
            out.push_back({field, "expected " + std::to_string(spec.d) + " entries"});
        else if (is_zero(spec.directions[l]))
            out.push_back({field, "direction vector must be nonzero"});
    }
    if (spec.tuple_size < 1) out.push_back({"tuple_size", "must be >= 1"});
    if (spec.coefficients.size() != spec.directions.size())
        out.push_back({"coefficients", "expected " + std::to_string(spec.directions.size()) +
                                           " rows (one per direction)"});
    for (std::size_t l = 0; l < spec.coefficients.size(); ++l) {
        const auto row = "coefficients[" + std::to_string(l) + "]";
        if (spec.coefficients[l].size() != spec.tuple_size)
            out.push_back({row, "expected " + std::to_string(spec.tuple_size) + " schemes"});
        for (std::size_t k = 0; k < spec.coefficients[l].size(); ++k) {
            auto v = spec.coefficients[l][k].check(row + "[" + std::to_string(k) + "]");
            out.insert(out.end(), v.begin(), v.end());
        }
    }
    if (spec.direction_mode_hint && spec.direction_mode_hint->mode == HintMode::LR) {
        const auto& psi = spec.direction_mode_hint->psi;
        if (psi.size() != spec.directions.size())
            out.push_back({"direction_mode_hint.psi", "expected one multiplier per direction"});
        for (std::size_t l = 0; l < psi.size(); ++l) {
            char* end = nullptr;
            const double x = std::strtod(psi[l].c_str(), &end);
            if (psi[l].empty() || end != psi[l].c_str() + psi[l].size() || !std::isfinite(x) ||
                x == 0.0)
                out.push_back({"direction_mode_hint.psi[" + std::to_string(l) + "]",
                               "must be a finite nonzero decimal literal"});
        }
    }
    return out;
}

ValidatedSpec::ValidatedSpec(ProductSpec spec) : spec_(std::move(spec)) {
    const bool lr = lr_declared();
    std::vector<std::string> literals;
    for (std::size_t l = 0; l < phi(); ++l) {
        const std::string lit = lr ? spec_.direction_mode_hint->psi[l] : std::string("1");
        const double psi = lr ? std::strtod(lit.c_str(), nullptr) : 1.0;
        auto it = std::find(literals.begin(), literals.end(), lit);
        psi_class_.push_back(static_cast<std::size_t>(it - literals.begin()));
        if (it == literals.end()) literals.push_back(lit);
        psi_.push_back(psi);
        auto a = to_doubles(spec_.directions[l]);
        for (auto& x : a) x *= psi;
        effective_.push_back(std::move(a));
    }
    for (const auto& row : spec_.coefficients)
        for (const auto& s : row) strict_ = strict_ && s.is_strict();
}

double ValidatedSpec::inner(std::size_t l, std::span<const double> x) const {
    if (x.size() != d()) throw DomainError("vector dimension does not match spec dimension d");
    const auto& a = spec_.directions[l];
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j].to_double() * x[j];
    return psi_[l] * s;
}

ValidatedSpec validate(ProductSpec spec) {
    auto bad = check(spec);
    if (!bad.empty()) throw ValidationError(std::move(bad));
    return ValidatedSpec(std::move(spec));
}

TruncationPolicy TruncationPolicy::defaults_for(double v) {
    TruncationPolicy p;
    p.power_limit = static_cast<unsigned>(std::max(2.0, std::ceil(40.0 / v)));
    return p;
}

TruncationPolicy TruncationPolicy::doubled() const {
    TruncationPolicy p = *this;
    p.prime_limit = std::min<std::uint64_t>(2 * prime_limit, arith::kMaxSieveLimit);
    p.power_limit = 2 * power_limit;
    return p;
}

double convergence_margin(const ValidatedSpec& spec, std::span<const double> sigma) {
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < spec.phi(); ++l) v = std::min(v, spec.inner(l, sigma));
    return v;
}

double require_convergent(const ValidatedSpec& spec, std::span<const double> sigma) {
    if (sigma.size() != spec.d())
        throw DomainError("sigma has dimension " + std::to_string(sigma.size()) + ", spec has d = " +
                          std::to_string(spec.d()));
    const double v = convergence_margin(spec, sigma);
    if (!(v > 1.0))
        throw DomainError("outside the region of absolute convergence: min_l <a_l, sigma> = " +
                          std::to_string(v) + " <= 1");
    return v;
}

double tail_bound(const TruncationPolicy& policy, double v, std::size_t m) {
    if (!(v > 1.0)) throw DomainError("tail_bound requires v > 1");
    if (policy.prime_limit < 2 || policy.power_limit < 1)
        throw DomainError("tail_bound requires P >= 2 and R >= 1");
    const double P = static_cast<double>(policy.prime_limit);
    const double R1 = static_cast<double>(policy.power_limit) + 1.0;
    const double pi_P = static_cast<double>(arith::shared_primes(policy.prime_limit)->size());
    const double large_primes = 2.0 * std::pow(P, 1.0 - v) / (v - 1.0);
    const double high_powers = pi_P * std::exp2(-R1 * v) / (R1 * (1.0 - std::exp2(-v)));
    return static_cast<double>(m) * (large_primes + high_powers);
}

namespace {

struct RowData {
    std::size_t l;
    std::size_t k;
};

// Per-direction complex exponent coefficient psi_l <a_l, s>.
std::vector<std::complex<double>> exponents(const ValidatedSpec& spec, const EvalPoint& pt) {
    std::vector<std::complex<double>> out;
    for (std::size_t l = 0; l < spec.phi(); ++l)
        out.emplace_back(spec.inner(l, pt.sigma), spec.inner(l, pt.t));
    return out;
}

std::vector<RowData> active_rows(const ValidatedSpec& spec) {
    std::vector<RowData> rows;
    for (std::size_t l = 0; l < spec.phi(); ++l)
        for (std::size_t k = 0; k < spec.eta(); ++k)
            if (!spec.scheme(l, k).is_zero()) rows.push_back({l, k});
    return rows;
}

// p^{-c} for complex c, via the cached log p.
std::complex<double> prime_power(double log_p, std::complex<double> c) {
    const double mag = std::exp(-c.real() * log_p);
    const double phase = c.imag() * log_p;
    return {mag * std::cos(phase), -mag * std::sin(phase)};
}

void check_point(const ValidatedSpec& spec, const EvalPoint& pt) {
    require_convergent(spec, pt.sigma);
    if (pt.t.size() != spec.d())
        throw DomainError("t has dimension " + std::to_string(pt.t.size()) + ", spec has d = " +
                          std::to_string(spec.d()));
}

}  // namespace

LogValue eval_log(const ValidatedSpec& spec, const EvalPoint& point, const TruncationPolicy& policy,
                  Parallelism par) {
    check_point(spec, point);
    const double v = convergence_margin(spec, point.sigma);
    const auto table = arith::shared_primes(policy.prime_limit);
    const auto primes = table->primes();
    const auto logs = table->logs();
    const auto expo = exponents(spec, point);
    const auto rows = active_rows(spec);
    const unsigned R = policy.power_limit;

    const std::size_t chunks = (primes.size() + kChunk - 1) / kChunk;
    std::vector<std::complex<double>> partial(chunks);
    parallel_for(chunks, par, [&](std::size_t c) {
        CompensatedComplexSum acc;
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(primes.size(), lo + kChunk);
        std::vector<std::complex<double>> z(spec.phi());
        for (std::size_t i = hi; i-- > lo;) {
            for (std::size_t l = 0; l < spec.phi(); ++l) z[l] = prime_power(logs[i], expo[l]);
            for (const auto& row : rows) {
                const double alpha = spec.scheme(row.l, row.k).value(primes[i]);
                if (alpha == 0.0) continue;
                const std::complex<double> w = alpha * z[row.l];
                std::complex<double> pw = w;
                std::complex<double> local = w;
                for (unsigned r = 2; r <= R; ++r) {
                    pw *= w;
                    local += pw / static_cast<double>(r);
                }
                acc.add(local);
            }
        }
        partial[c] = acc.value();
    });
    CompensatedComplexSum total;
    for (std::size_t c = chunks; c-- > 0;) total.add(partial[c]);
    return {total.value(), tail_bound(policy, v, spec.m())};
}

std::complex<double> eval(const ValidatedSpec& spec, const EvalPoint& point,
                          const TruncationPolicy& policy, Parallelism par) {
    check_point(spec, point);
    const auto table = arith::shared_primes(policy.prime_limit);
    const auto primes = table->primes();
    const auto logs = table->logs();
    const auto expo = exponents(spec, point);
    const auto rows = active_rows(spec);

    const std::size_t chunks = (primes.size() + kChunk - 1) / kChunk;
    std::vector<std::complex<double>> partial(chunks, 1.0);
    parallel_for(chunks, par, [&](std::size_t c) {
        std::complex<double> prod = 1.0;
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(primes.size(), lo + kChunk);
        for (std::size_t i = hi; i-- > lo;) {
            for (const auto& row : rows) {
                const double alpha = spec.scheme(row.l, row.k).value(primes[i]);
                if (alpha == 0.0) continue;
                prod *= 1.0 - alpha * prime_power(logs[i], expo[row.l]);
            }
        }
        partial[c] = prod;
    });
    std::complex<double> denom = 1.0;
    for (std::size_t c = chunks; c-- > 0;) denom *= partial[c];
    return 1.0 / denom;
}

std::complex<double> normalized_cf(const ValidatedSpec& spec, std::span<const double> sigma,
                                   std::span<const double> t, const TruncationPolicy& policy,
                                   Parallelism par) {
    require_convergent(spec, sigma);
    if (t.size() != spec.d()) throw DomainError("t dimension does not match spec dimension d");
    if (std::all_of(t.begin(), t.end(), [](double x) { return x == 0.0; })) return 1.0;
    const std::vector<double> sig(sigma.begin(), sigma.end());
    const auto at_t = eval_log(spec, {sig, {t.begin(), t.end()}}, policy, par);
    const auto at_0 = eval_log(spec, {sig, std::vector<double>(spec.d(), 0.0)}, policy, par);
    return std::exp(at_t.value - at_0.value);
}

}  // namespace cpz
