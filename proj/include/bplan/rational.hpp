#ifndef BPLAN_RATIONAL_HPP
#define BPLAN_RATIONAL_HPP

#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace bplan {

// Exact rational arithmetic on 64-bit numerator/denominator. All state
// simulation, solver arithmetic and feature extraction run on these; any
// overflow throws instead of silently wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

    static Rational from_double(double x);
    static Rational parse(const std::string& text);

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    long long to_integer() const {
        if (!is_integer())
            throw std::domain_error("rational is not an integer: " + str());
        return num_;
    }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational operator-() const { return Rational(checked_neg(num_), den_, already_normal_tag{}); }
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return cmp(o) < 0; }
    bool operator<=(const Rational& o) const { return cmp(o) <= 0; }
    bool operator>(const Rational& o) const { return cmp(o) > 0; }
    bool operator>=(const Rational& o) const { return cmp(o) >= 0; }

    int sign() const { return num_ > 0 ? 1 : num_ < 0 ? -1 : 0; }

    // Largest integer <= value.
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }
    long long ceil() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ > 0) ++q;
        return q;
    }
    // Half-away-from-zero rounding (the only rounding rule used anywhere).
    long long round_half_away() const;

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    struct already_normal_tag {};
    Rational(long long n, long long d, already_normal_tag) : num_(n), den_(d) {}

    void normalize();
    int cmp(const Rational& o) const;

    static long long checked_neg(long long v) {
        if (v == INT64_MIN) throw std::overflow_error("rational overflow");
        return -v;
    }
    static long long checked(__int128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<long long>(v);
    }

    long long num_;
    long long den_;
};

inline void Rational::normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
        num_ = checked_neg(num_);
        den_ = checked_neg(den_);
    }
    unsigned long long mag = num_ < 0 ? 0ULL - static_cast<unsigned long long>(num_)
                                      : static_cast<unsigned long long>(num_);
    unsigned long long g = std::gcd(mag, static_cast<unsigned long long>(den_));
    if (g > 1) {
        num_ /= static_cast<long long>(g);
        den_ /= static_cast<long long>(g);
    }
}

inline int Rational::cmp(const Rational& o) const {
    __int128 lhs = static_cast<__int128>(num_) * o.den_;
    __int128 rhs = static_cast<__int128>(o.num_) * den_;
    return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

inline Rational Rational::operator+(const Rational& o) const {
    __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
    __int128 d = static_cast<__int128>(den_) * o.den_;
    __int128 g = 1;
    {
        __int128 a = n < 0 ? -n : n, b = d;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        g = a == 0 ? 1 : a;
    }
    return Rational(checked(n / g), checked(d / g), already_normal_tag{});
}

inline Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

inline Rational Rational::operator*(const Rational& o) const {
    long long g1 = std::gcd(std::abs(num_), o.den_);
    long long g2 = std::gcd(std::abs(o.num_), den_);
    __int128 n = static_cast<__int128>(num_ / g1) * (o.num_ / g2);
    __int128 d = static_cast<__int128>(den_ / g2) * (o.den_ / g1);
    return Rational(checked(n), checked(d), already_normal_tag{});
}

inline Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("rational division by zero");
    Rational inv(o.den_, o.num_);
    return *this * inv;
}

inline long long Rational::round_half_away() const {
    Rational mag = sign() < 0 ? -*this : *this;
    long long f = mag.floor();
    long long rounded = (mag - Rational(f)) >= Rational(1, 2) ? f + 1 : f;
    return sign() < 0 ? -rounded : rounded;
}

inline Rational Rational::from_double(double x) {
    // Every finite double is an exact rational m * 2^e.
    if (!(x == x) || x > 9.2e18 || x < -9.2e18)
        throw std::domain_error("value not representable as rational");
    if (x == static_cast<long long>(x)) return Rational(static_cast<long long>(x));
    Rational r(0);
    bool negative = x < 0;
    if (negative) x = -x;
    long long den = 1;
    while (x != static_cast<double>(static_cast<long long>(x))) {
        x *= 2;
        den *= 2;
        if (den > (1LL << 60)) throw std::overflow_error("rational overflow");
    }
    r = Rational(static_cast<long long>(x), den);
    return negative ? -r : r;
}

inline Rational Rational::parse(const std::string& text) {
    auto slash = text.find('/');
    auto dot = text.find('.');
    try {
        if (slash != std::string::npos) {
            return Rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        }
        if (dot != std::string::npos) {
            std::string whole = text.substr(0, dot);
            std::string frac = text.substr(dot + 1);
            bool neg = !whole.empty() && whole[0] == '-';
            long long w = whole.empty() || whole == "-" ? 0 : std::stoll(whole);
            long long den = 1;
            long long f = 0;
            for (char c : frac) {
                if (c < '0' || c > '9') throw std::invalid_argument(text);
                if (den > (1LL << 58)) throw std::overflow_error("rational overflow");
                f = f * 10 + (c - '0');
                den *= 10;
            }
            Rational r = Rational(std::llabs(w)) + Rational(f, den);
            return neg ? -r : r;
        }
        return Rational(std::stoll(text));
    } catch (const std::invalid_argument&) {
        throw std::domain_error("not a rational literal: " + text);
    } catch (const std::out_of_range&) {
        throw std::overflow_error("rational overflow");
    }
}

}  // namespace bplan

#endif
