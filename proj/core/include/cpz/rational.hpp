#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cpz {

// Exact rational with 64-bit numerator/denominator in lowest terms
// (denominator > 0). Arithmetic throws DomainError on overflow.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    // Accepts "7", "-3/2", "0.125", "+2.5e-1" (finite decimals are exact).
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }
    int sign() const noexcept { return (num_ > 0) - (num_ < 0); }

    double to_double() const noexcept {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }
    std::string str() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using RationalVector = std::vector<Rational>;

Rational dot(const RationalVector& a, const RationalVector& b);
RationalVector scaled(const RationalVector& v, const Rational& c);
bool is_zero(const RationalVector& v);
std::vector<double> to_doubles(const RationalVector& v);

// Rank over Q by exact Gaussian elimination.
std::size_t rank(std::vector<RationalVector> rows);

// Returns c with b == c * a when b is a rational multiple of the nonzero vector a.
bool rational_multiple(const RationalVector& a, const RationalVector& b, Rational& c);

// Inverse of a square nonsingular matrix; throws DomainError if singular.
std::vector<RationalVector> inverse(std::vector<RationalVector> m);

}  // namespace cpz
