#ifndef LIEODE_PARSE_HPP
#define LIEODE_PARSE_HPP

#include <cctype>
#include <string>

#include "jet_expr.hpp"

namespace lieode {

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error("parse error at position " + std::to_string(pos) + ": " + msg), position(pos) {}
    std::size_t position;
};

// ---- printing ----------------------------------------------------------

namespace detail {

inline std::string exponent_str(const Rat& q) {
    if (q.is_integer() && q.sign() > 0) return "^" + q.str();
    return "^(" + q.str() + ")";
}

inline std::string jet_name(int k) {
    if (k <= 3) return "y" + std::string(std::size_t(k), '\'');
    return "y^(" + std::to_string(k) + ")";
}

inline std::string atom_arg_str(const AtomArg& a, const char* var) {
    std::string s;
    if (a.scale == Rat(-1))
        s += "-";
    else if (a.scale != Rat(1))
        s += a.scale.str() + "*";
    if (a.sym >= 0) s += std::string(sym_name(Sym(a.sym))) + "*";
    s += var;
    return s;
}

inline std::string atom_str(const Atom& a) {
    switch (a.kind) {
        case AtomKind::exp_x: return "exp(" + atom_arg_str(a.arg, "x") + ")";
        case AtomKind::exp_y: return "exp(" + atom_arg_str(a.arg, "y") + ")";
        case AtomKind::sin_x: return "sin(" + atom_arg_str(a.arg, "x") + ")";
        case AtomKind::cos_x: return "cos(" + atom_arg_str(a.arg, "x") + ")";
        case AtomKind::beta:
            if (a.beta_deriv <= 3) return "beta" + std::string(std::size_t(a.beta_deriv), '\'') + "(x)";
            return "beta^(" + std::to_string(a.beta_deriv) + ")(x)";
    }
    return "";
}

inline std::string term_magnitude_str(const Term& t) {
    std::string s;
    auto push = [&](const std::string& f) {
        if (!s.empty()) s += "*";
        s += f;
    };
    for (int i = 0; i < kSymCount; ++i) {
        int e = t.syms[std::size_t(i)];
        if (e == 0) continue;
        std::string f = sym_name(Sym(i));
        if (e != 1) f += exponent_str(Rat(e));
        push(f);
    }
    if (t.x_pow > 0) {
        std::string f = "x";
        if (t.x_pow != 1) f += "^" + std::to_string(t.x_pow);
        push(f);
    }
    if (!t.y_pow.is_zero()) {
        std::string f = "y";
        if (t.y_pow != Rat(1)) f += exponent_str(t.y_pow);
        push(f);
    }
    for (const auto& [k, m] : t.jets) {
        std::string f = jet_name(k);
        if (m != 1) f = "(" + f + ")^" + std::to_string(m);
        push(f);
    }
    if (t.atom) push(atom_str(*t.atom));
    Rat a = abs(t.coeff);
    if (s.empty()) return a.str();
    if (a != Rat(1)) s = a.str() + "*" + s;
    return s;
}

} // namespace detail

inline std::string to_string(const JetExpr& e) {
    if (e.is_zero()) return "0";
    std::string s;
    for (const Term& t : e.terms()) {
        if (s.empty())
            s += t.coeff.sign() < 0 ? "-" : "";
        else
            s += t.coeff.sign() < 0 ? " - " : " + ";
        s += detail::term_magnitude_str(t);
    }
    return s;
}

// ---- parsing -----------------------------------------------------------
//
// Grammar: jet variables x, y, y', y'', y''', y^(k) for k >= 4; parameters
// lambda, alpha, mu; rational literals p/q; operators + - * ^; atoms
// exp(...), sin(...), cos(...); the abstract function beta(x) and its
// derivatives. parse(to_string(e)) == e for every representable e.

namespace detail {

class Parser {
  public:
    explicit Parser(const std::string& src) : s_(src) {}

    JetExpr run() {
        JetExpr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }

    JetExpr expr() {
        JetExpr acc = eat('-') ? -term() : (eat('+'), term());
        while (true) {
            char c = peek();
            if (c == '+') {
                ++pos_;
                acc += term();
            } else if (c == '-') {
                ++pos_;
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    JetExpr term() {
        JetExpr acc = factor();
        while (eat('*')) acc *= factor();
        return acc;
    }

    JetExpr factor() {
        if (eat('-')) return -factor();
        JetExpr base = primary();
        if (peek() == '^') {
            ++pos_;
            Rat q = exponent();
            return apply_power(base, q);
        }
        return base;
    }

    JetExpr apply_power(const JetExpr& base, const Rat& q) {
        if (q.is_integer()) return base.pow(q.num());
        // Fractional exponents attach only to a bare power of y.
        if (base.terms().size() == 1) {
            const Term& t = base.terms().front();
            if (t.coeff == Rat(1) && t.x_pow == 0 && t.jets.empty() && !t.atom &&
                t.syms == std::array<int, kSymCount>{0, 0, 0} && !t.y_pow.is_zero())
                return JetExpr::y(t.y_pow * q);
        }
        fail("fractional exponents apply only to y");
    }

    Rat exponent() {
        if (eat('(')) {
            Rat q = signed_rational();
            expect(')');
            return q;
        }
        return signed_rational();
    }

    Rat signed_rational() {
        bool neg = eat('-');
        Rat r = unsigned_rational();
        return neg ? -r : r;
    }

    Rat unsigned_rational() {
        skip_ws();
        std::size_t start = pos_;
        long long num = integer_digits();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            long long den = integer_digits();
            if (den == 0) throw ParseError("zero denominator", start);
            return Rat(num, den);
        }
        return Rat(num);
    }

    long long integer_digits() {
        skip_ws();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected digits");
        long long v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v < 0) fail("integer literal overflow");
            ++pos_;
        }
        return v;
    }

    std::string identifier() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected identifier");
        return s_.substr(start, pos_ - start);
    }

    JetExpr primary() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            JetExpr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return JetExpr::constant(unsigned_rational());
        if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected a factor");
        std::size_t start = pos_;
        std::string id = identifier();
        if (id == "x") return JetExpr::x();
        if (id == "y") return after_y();
        if (id == "lambda") return JetExpr::sym(Sym::lambda);
        if (id == "alpha") return JetExpr::sym(Sym::alpha);
        if (id == "mu") return JetExpr::sym(Sym::mu);
        if (id == "exp" || id == "sin" || id == "cos") return atom(id);
        if (id == "beta") return beta();
        throw ParseError("unknown identifier '" + id + "'", start);
    }

    JetExpr after_y() {
        int primes = 0;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++primes;
            ++pos_;
        }
        if (primes > 0) return JetExpr::jet(primes);
        // y^(k) with unsigned integer k >= 4 names the k-th jet variable;
        // any other ^(...) is an ordinary power of y.
        std::size_t save = pos_;
        if (pos_ < s_.size() && s_[pos_] == '^' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '(') {
            pos_ += 2;
            skip_ws();
            if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                long long k = integer_digits();
                skip_ws();
                if (pos_ < s_.size() && s_[pos_] == ')' && k >= 4) {
                    ++pos_;
                    return JetExpr::jet(int(k));
                }
            }
            pos_ = save;
        }
        return JetExpr::y();
    }

    JetExpr atom(const std::string& name) {
        expect('(');
        JetExpr inner = expr();
        expect(')');
        if (inner.terms().size() != 1) fail("atom argument must be c*x or c*y");
        const Term& t = inner.terms().front();
        if (!t.jets.empty() || t.atom) fail("atom argument must be c*x or c*y");
        int sym = -1;
        int nsyms = 0;
        for (int i = 0; i < kSymCount; ++i) {
            if (t.syms[std::size_t(i)] == 0) continue;
            if (t.syms[std::size_t(i)] != 1) fail("atom argument parameter must be linear");
            sym = i;
            ++nsyms;
        }
        if (nsyms > 1) fail("atom argument must carry at most one parameter");
        AtomArg arg{t.coeff, t.coeff.is_zero() ? -1 : sym};
        bool on_x = t.x_pow == 1 && t.y_pow.is_zero();
        bool on_y = t.x_pow == 0 && t.y_pow == Rat(1);
        if (!on_x && !on_y) fail("atom argument must be c*x or c*y");
        if (name == "exp") return JetExpr::atom_term(on_x ? AtomKind::exp_x : AtomKind::exp_y, arg);
        if (on_y) fail("sin/cos atoms take arguments in x");
        return JetExpr::atom_term(name == "sin" ? AtomKind::sin_x : AtomKind::cos_x, arg);
    }

    JetExpr beta() {
        int deriv = 0;
        while (pos_ < s_.size() && s_[pos_] == '\'') {
            ++deriv;
            ++pos_;
        }
        if (deriv == 0 && pos_ + 1 < s_.size() && s_[pos_] == '^' && s_[pos_ + 1] == '(') {
            pos_ += 2;
            deriv = int(integer_digits());
            expect(')');
        }
        expect('(');
        if (identifier() != "x") fail("beta takes the argument x");
        expect(')');
        return JetExpr::beta_fn(deriv);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline JetExpr parse(const std::string& src) { return detail::Parser(src).run(); }

} // namespace lieode

#endif
