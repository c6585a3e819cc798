#ifndef LIEODE_RATIONAL_HPP
#define LIEODE_RATIONAL_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lieode {

// Exact rational on 64-bit storage with 128-bit intermediates.
// Invariant: den > 0, gcd(|num|, den) == 1. Overflow throws, it never wraps.
class Rat {
  public:
    constexpr Rat() noexcept : n_(0), d_(1) {}
    constexpr Rat(long long n) noexcept : n_(n), d_(1) {}
    Rat(long long n, long long d) { *this = make(n, d); }

    long long num() const noexcept { return n_; }
    long long den() const noexcept { return d_; }

    bool is_zero() const noexcept { return n_ == 0; }
    bool is_integer() const noexcept { return d_ == 1; }
    int sign() const noexcept { return n_ > 0 ? 1 : n_ < 0 ? -1 : 0; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return make_i128(i128(a.n_) * b.d_ + i128(b.n_) * a.d_, i128(a.d_) * b.d_);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        return make_i128(i128(a.n_) * b.d_ - i128(b.n_) * a.d_, i128(a.d_) * b.d_);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return make_i128(i128(a.n_) * b.n_, i128(a.d_) * b.d_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.n_ == 0) throw std::domain_error("rational division by zero");
        return make_i128(i128(a.n_) * b.d_, i128(a.d_) * b.n_);
    }
    Rat operator-() const noexcept {
        Rat r;
        r.n_ = -n_;
        r.d_ = d_;
        return r;
    }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    Rat inv() const { return Rat(1) / *this; }

    // Integer exponent; negative allowed for nonzero values.
    Rat pow(long long e) const {
        if (e < 0) return inv().pow(-e);
        Rat acc(1), base(*this);
        while (e > 0) {
            if (e & 1) acc *= base;
            base = (e >>= 1) ? base * base : base;
        }
        return acc;
    }

    friend bool operator==(const Rat& a, const Rat& b) noexcept { return a.n_ == b.n_ && a.d_ == b.d_; }
    friend bool operator!=(const Rat& a, const Rat& b) noexcept { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) noexcept { return i128(a.n_) * b.d_ < i128(b.n_) * a.d_; }
    friend bool operator>(const Rat& a, const Rat& b) noexcept { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) noexcept { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) noexcept { return !(a < b); }

    double to_double() const noexcept { return double(n_) / double(d_); }

    std::string str() const {
        std::string s = std::to_string(n_);
        if (d_ != 1) s += "/" + std::to_string(d_);
        return s;
    }

    // Parses "n" or "n/d" with optional leading minus.
    static Rat parse(const std::string& s) {
        std::size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(std::stoll(s));
            return Rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("malformed rational literal: " + s);
        }
    }

  private:
    using i128 = __int128;

    static Rat make(long long n, long long d) { return make_i128(i128(n), i128(d)); }

    static Rat make_i128(i128 n, i128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 g = gcd_i128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        Rat r;
        r.n_ = narrow(n);
        r.d_ = narrow(d);
        return r;
    }

    static i128 gcd_i128(i128 a, i128 b) noexcept {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static long long narrow(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("rational overflow");
        return static_cast<long long>(v);
    }

    long long n_;
    long long d_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

} // namespace lieode

#endif
