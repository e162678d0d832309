#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace cpz::arith {

inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 31;

// All primes <= limit in ascending order, with their natural logarithms.
class PrimeTable {
public:
    PrimeTable(std::uint64_t limit, std::vector<std::uint32_t> primes);

    std::uint64_t limit() const noexcept { return limit_; }
    std::size_t size() const noexcept { return primes_.size(); }
    std::span<const std::uint32_t> primes() const noexcept { return primes_; }
    std::span<const double> logs() const noexcept { return logs_; }
    std::uint32_t operator[](std::size_t i) const noexcept { return primes_[i]; }

    // pi(x) for x <= limit().
    std::size_t count_upto(std::uint64_t x) const;

private:
    std::uint64_t limit_;
    std::vector<std::uint32_t> primes_;
    std::vector<double> logs_;
};

// Segmented sieve of Eratosthenes. Throws DomainError unless 2 <= limit <= 2^31.
PrimeTable sieve(std::uint64_t limit);

// Process-wide memoized table for `limit`; safe to call from any thread.
std::shared_ptr<const PrimeTable> shared_primes(std::uint64_t limit);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) noexcept;

// Real Dirichlet character given by its residue table.
class RealCharacter {
public:
    // Throws ValidationError unless the table is a real character mod q:
    // zero exactly off the units, completely multiplicative, chi(1) = 1.
    RealCharacter(std::uint64_t modulus, std::vector<int> values);

    static RealCharacter principal(std::uint64_t modulus);
    // The non-principal character mod 4: chi(p) = (-1)^((p-1)/2) for odd p.
    static RealCharacter mod4();

    std::uint64_t modulus() const noexcept { return modulus_; }
    std::span<const std::int8_t> values() const noexcept { return values_; }

    int operator()(std::uint64_t n) const noexcept {
        return values_[static_cast<std::size_t>(n % modulus_)];
    }

    // True when some unit residue maps to -1, i.e. chi(p) = -1 for
    // infinitely many primes p.
    bool takes_negative_on_units() const noexcept;

    bool operator==(const RealCharacter&) const = default;

private:
    std::uint64_t modulus_;
    std::vector<std::int8_t> values_;
};

int char_value(const RealCharacter& chi, std::uint64_t n);

}  // namespace cpz::arith
