#ifndef LIEODE_RATFN_HPP
#define LIEODE_RATFN_HPP

#include <string>
#include <vector>

#include "rational.hpp"

namespace lieode {

// Dense univariate polynomial over Rat. Used to carry one symbolic exponent
// (the power p of the nonlinearity) through coefficient arithmetic.
class Poly {
  public:
    Poly() = default;
    Poly(Rat c) : c_{c} { trim(); }
    explicit Poly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }

    static Poly var() { return Poly(std::vector<Rat>{Rat(0), Rat(1)}); }

    int degree() const { return int(c_.size()) - 1; } // -1 for zero
    bool is_zero() const { return c_.empty(); }
    Rat coeff(int i) const { return i >= 0 && i < int(c_.size()) ? c_[std::size_t(i)] : Rat(0); }
    Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(int(i)) + b.coeff(int(i));
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    Poly operator-() const {
        std::vector<Rat> c(c_);
        for (auto& v : c) v = -v;
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    Poly scaled(const Rat& s) const {
        std::vector<Rat> c(c_);
        for (auto& v : c) v *= s;
        return Poly(std::move(c));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    // Division with remainder; divisor must be nonzero.
    static void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r) {
        q = Poly();
        r = a;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int k = r.degree() - b.degree();
            Rat f = r.leading() / b.leading();
            std::vector<Rat> m(std::size_t(k) + 1);
            m.back() = f;
            Poly t(std::move(m));
            q = q + t;
            r = r - t * b;
        }
    }

    Rat eval(const Rat& x) const {
        Rat acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    std::string str(const std::string& sym) const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            if (!s.empty()) s += c_[i].sign() > 0 ? " + " : " - ";
            else if (c_[i].sign() < 0) s += "-";
            Rat a = abs(c_[i]);
            if (i == 0 || a != Rat(1)) s += a.str();
            if (i > 0) {
                if (a != Rat(1)) s += "*";
                s += sym;
                if (i > 1) s += "^" + std::to_string(i);
            }
        }
        return s.empty() ? "0" : s;
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Rat> c_;
};

// Reduced fraction of two Polys; denominator normalized monic.
class RatFn {
  public:
    RatFn() : num_(), den_(Rat(1)) {}
    RatFn(Rat c) : num_(c), den_(Rat(1)) {}
    RatFn(Poly n, Poly d) { assign(std::move(n), std::move(d)); }

    static RatFn var() { return RatFn(Poly::var(), Poly(Rat(1))); }

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    friend RatFn operator+(const RatFn& a, const RatFn& b) {
        return RatFn(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFn operator-(const RatFn& a, const RatFn& b) {
        return RatFn(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFn operator*(const RatFn& a, const RatFn& b) { return RatFn(a.num_ * b.num_, a.den_ * b.den_); }
    friend RatFn operator/(const RatFn& a, const RatFn& b) {
        if (b.is_zero()) throw std::domain_error("rational function division by zero");
        return RatFn(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFn operator-() const { return RatFn(-num_, den_); }
    friend bool operator==(const RatFn& a, const RatFn& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const RatFn& a, const RatFn& b) { return !(a == b); }

    Rat eval(const Rat& x) const {
        Rat d = den_.eval(x);
        if (d.is_zero()) throw std::domain_error("rational function pole");
        return num_.eval(x) / d;
    }

    std::string str(const std::string& sym) const {
        if (den_ == Poly(Rat(1))) return num_.str(sym);
        return "(" + num_.str(sym) + ")/(" + den_.str(sym) + ")";
    }

  private:
    static Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly q, r;
            Poly::divmod(a, b, q, r);
            a = b;
            b = r;
        }
        return a;
    }

    void assign(Poly n, Poly d) {
        if (d.is_zero()) throw std::domain_error("rational function with zero denominator");
        if (n.is_zero()) {
            num_ = Poly();
            den_ = Poly(Rat(1));
            return;
        }
        Poly g = gcd(n, d);
        if (g.degree() > 0) {
            Poly q, r;
            Poly::divmod(n, g, q, r);
            n = q;
            Poly::divmod(d, g, q, r);
            d = q;
        }
        Rat lead = d.leading();
        num_ = n.scaled(lead.inv());
        den_ = d.scaled(lead.inv());
    }

    Poly num_;
    Poly den_;
};

} // namespace lieode

#endif
