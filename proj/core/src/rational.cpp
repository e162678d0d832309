#include "cpz/rational.hpp"

#include <charconv>
#include <cstdlib>
#include <numeric>

#include "cpz/error.hpp"

namespace cpz {

namespace {

__extension__ typedef __int128 i128;

std::int64_t narrow(i128 x) {
    if (x > INT64_MAX || x < -static_cast<i128>(INT64_MAX))
        throw DomainError("rational arithmetic overflow");
    return static_cast<std::int64_t>(x);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(i128 num, i128 den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = gcd128(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num), narrow(den));
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        throw ParseError("not a rational literal: '" + std::string(whole) + "'");
    return v;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("rational with zero denominator");
    if (den < 0) {
        if (num == INT64_MIN || den == INT64_MIN) throw DomainError("rational arithmetic overflow");
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = g > 1 ? num / g : num;
    den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational literal");

    if (auto slash = text.find('/'); slash != std::string_view::npos)
        return make(parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text));

    // Decimal with optional exponent, converted exactly.
    std::string_view mant = text;
    std::int64_t exp10 = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mant = text.substr(0, e);
        exp10 = parse_int(text.substr(e + 1), text);
    }
    bool negative = false;
    if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
        negative = mant.front() == '-';
        mant.remove_prefix(1);
    }
    std::string digits;
    bool seen_dot = false;
    for (char c : mant) {
        if (c == '.') {
            if (seen_dot) throw ParseError("not a rational literal: '" + std::string(text) + "'");
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw ParseError("not a rational literal: '" + std::string(text) + "'");
        digits.push_back(c);
        if (seen_dot) --exp10;
    }
    if (digits.empty()) throw ParseError("not a rational literal: '" + std::string(text) + "'");
    i128 num = 0;
    for (char c : digits) {
        num = num * 10 + (c - '0');
        if (num > INT64_MAX) throw DomainError("rational literal too large: '" + std::string(text) + "'");
    }
    if (negative) num = -num;
    i128 den = 1;
    for (; exp10 > 0; --exp10) {
        num *= 10;
        narrow(num);
    }
    for (; exp10 < 0; ++exp10) {
        den *= 10;
        narrow(den);
    }
    return make(num, den);
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return make(-static_cast<i128>(num_), den_); }

Rational& Rational::operator+=(const Rational& o) {
    return *this = make(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                        static_cast<i128>(den_) * o.den_);
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
    return *this = make(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.num_ == 0) throw DomainError("rational division by zero");
    return *this = make(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<i128>(a.num_) * b.den_ <=> static_cast<i128>(b.num_) * a.den_;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
    if (a.size() != b.size()) throw DomainError("dot: dimension mismatch");
    Rational s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RationalVector scaled(const RationalVector& v, const Rational& c) {
    RationalVector out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x * c);
    return out;
}

bool is_zero(const RationalVector& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

std::vector<double> to_doubles(const RationalVector& v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(x.to_double());
    return out;
}

std::size_t rank(std::vector<RationalVector> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][c].is_zero()) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c].is_zero()) continue;
            const Rational f = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < cols; ++j) rows[i][j] -= f * rows[r][j];
        }
        ++r;
    }
    return r;
}

bool rational_multiple(const RationalVector& a, const RationalVector& b, Rational& c) {
    if (a.size() != b.size()) return false;
    std::size_t i = 0;
    while (i < a.size() && a[i].is_zero()) ++i;
    if (i == a.size()) return false;
    const Rational f = b[i] / a[i];
    for (std::size_t j = 0; j < a.size(); ++j)
        if (b[j] != f * a[j]) return false;
    c = f;
    return true;
}

std::vector<RationalVector> inverse(std::vector<RationalVector> m) {
    const std::size_t n = m.size();
    std::vector<RationalVector> inv(n, RationalVector(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rational(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t pivot = c;
        while (pivot < n && m[pivot][c].is_zero()) ++pivot;
        if (pivot == n) throw DomainError("inverse: singular matrix");
        std::swap(m[c], m[pivot]);
        std::swap(inv[c], inv[pivot]);
        const Rational d = m[c][c];
        for (std::size_t j = 0; j < n; ++j) {
            m[c][j] /= d;
            inv[c][j] /= d;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c].is_zero()) continue;
            const Rational f = m[i][c];
            for (std::size_t j = 0; j < n; ++j) {
                m[i][j] -= f * m[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

}  // namespace cpz
