#include "cpz/arith.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "cpz/error.hpp"

namespace cpz::arith {

PrimeTable::PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes)
    : limit_(limit), primes_(std::move(primes)) {
    logs_.reserve(primes_.size());
    for (auto p : primes_) logs_.push_back(std::log(static_cast<double>(p)));
}

std::size_t PrimeTable::count_upto(std::uint64_t x) const {
    if (x > limit_) throw DomainError("count_upto: argument exceeds the sieve limit");
    return static_cast<std::size_t>(
        std::upper_bound(primes_.begin(), primes_.end(), x) - primes_.begin());
}

namespace {

// Odd-only base primes up to sqrt(limit) by a plain sieve.
std::vector<std::uint32_t> small_primes(std::uint32_t limit) {
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = std::uint64_t{i} * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

}  // namespace

PrimeTable sieve(std::uint64_t limit) {
    if (limit < 2) throw DomainError("sieve: limit must be >= 2, got " + std::to_string(limit));
    if (limit > kMaxSieveLimit)
        throw DomainError("sieve: limit exceeds 2^31, got " + std::to_string(limit));

    const auto root = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const auto base = small_primes(root);

    std::vector<std::uint32_t> primes;
    primes.reserve(static_cast<std::size_t>(
        1.3 * static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)))));
    primes.push_back(2);

    // Segment covers the odd numbers lo, lo+2, ..., one byte each.
    constexpr std::uint64_t kSegmentOdds = 1 << 15;
    std::vector<std::uint8_t> segment(kSegmentOdds);
    std::vector<std::uint64_t> next_multiple;
    next_multiple.reserve(base.size());
    for (auto p : base) {
        if (p == 2) {
            next_multiple.push_back(0);
            continue;
        }
        next_multiple.push_back(std::uint64_t{p} * p);
    }

    for (std::uint64_t lo = 3; lo <= limit; lo += 2 * kSegmentOdds) {
        const std::uint64_t hi = std::min(limit, lo + 2 * kSegmentOdds - 1);
        const std::uint64_t count = (hi - lo) / 2 + 1;
        std::fill(segment.begin(), segment.begin() + static_cast<std::ptrdiff_t>(count), 1);
        for (std::size_t i = 0; i < base.size(); ++i) {
            const std::uint64_t p = base[i];
            if (p == 2) continue;
            std::uint64_t m = next_multiple[i];
            if (m > hi) continue;
            for (; m <= hi; m += 2 * p) segment[(m - lo) / 2] = 0;
            next_multiple[i] = m;
        }
        for (std::uint64_t j = 0; j < count; ++j)
            if (segment[j]) primes.push_back(static_cast<std::uint32_t>(lo + 2 * j));
    }
    return PrimeTable(limit, std::move(primes));
}

std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit) {
    static std::mutex mutex;
    static std::map<std::uint64_t, std::shared_ptr<const PrimeTable>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(limit);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const PrimeTable>(sieve(limit));
    cache.emplace(limit, table);
    return table;
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept {
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

RealCharacter::RealCharacter(std::uint64_t modulus, std::vector<int> values)
    : modulus_(modulus) {
    std::vector<Violation> bad;
    if (modulus == 0) {
        bad.push_back({"modulus", "must be >= 1"});
        throw ValidationError(std::move(bad));
    }
    if (values.size() != modulus) {
        bad.push_back({"values", "expected " + std::to_string(modulus) + " residues, got " +
                                     std::to_string(values.size())});
        throw ValidationError(std::move(bad));
    }
    values_.reserve(values.size());
    for (std::uint64_t n = 0; n < modulus; ++n) {
        const int v = values[n];
        if (v < -1 || v > 1) {
            bad.push_back({"values[" + std::to_string(n) + "]",
                           "real characters take values in {-1,0,1}"});
            continue;
        }
        const bool unit = gcd(n, modulus) == 1;
        if (unit != (v != 0))
            bad.push_back({"values[" + std::to_string(n) + "]",
                           unit ? "must be nonzero on a unit" : "must vanish off the units"});
        values_.push_back(static_cast<std::int8_t>(v));
    }
    if (bad.empty()) {
        if (modulus > 1 && values_[1] != 1) bad.push_back({"values[1]", "chi(1) must be 1"});
        for (std::uint64_t a = 0; a < modulus && bad.empty(); ++a)
            for (std::uint64_t b = a; b < modulus; ++b)
                if (values_[(a * b) % modulus] != values_[a] * values_[b]) {
                    bad.push_back({"values", "not completely multiplicative at " +
                                                 std::to_string(a) + "*" + std::to_string(b)});
                    break;
                }
    }
    if (!bad.empty()) throw ValidationError(std::move(bad));
}

RealCharacter RealCharacter::principal(std::uint64_t modulus) {
    std::vector<int> v(modulus);
    for (std::uint64_t n = 0; n < modulus; ++n) v[n] = gcd(n, modulus) == 1 ? 1 : 0;
    return RealCharacter(modulus, std::move(v));
}

RealCharacter RealCharacter::mod4() { return RealCharacter(4, {0, 1, 0, -1}); }

bool RealCharacter::takes_negative_on_units() const noexcept {
    return std::find(values_.begin(), values_.end(), std::int8_t{-1}) != values_.end();
}

int char_value(const RealCharacter& chi, std::uint64_t n) { return chi(n); }

}  // namespace cpz::arith
