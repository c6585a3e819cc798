#ifndef LIEODE_EQUATION_HPP
#define LIEODE_EQUATION_HPP

#include <optional>
#include <string>

#include "jet_expr.hpp"

namespace lieode {

enum class FKind { power, exponential, constant, linear, symbolic };

// The ODE instance y^(2n) + f(y) = 0. lambda and alpha stay symbolic in the
// algebra; numeric values are attached only for the numeric layer.
struct EquationSpec {
    int n = 1;
    FKind kind = FKind::constant;
    Rat p;          // power only
    JetExpr f_sym;  // symbolic only, expression in y
    std::optional<double> lambda_value;
    std::optional<double> alpha_value;

    static EquationSpec power(int n, Rat p) {
        check_n(n);
        if (p == Rat(0))
            throw std::invalid_argument("p = 0 is the constant nonlinearity; use EquationSpec::constant");
        if (p == Rat(1))
            throw std::invalid_argument("p = 1 is the linear nonlinearity; use EquationSpec::linear");
        EquationSpec e;
        e.n = n;
        e.kind = FKind::power;
        e.p = p;
        return e;
    }
    static EquationSpec exponential(int n) {
        check_n(n);
        EquationSpec e;
        e.n = n;
        e.kind = FKind::exponential;
        return e;
    }
    static EquationSpec constant(int n) {
        check_n(n);
        EquationSpec e;
        e.n = n;
        e.kind = FKind::constant;
        return e;
    }
    static EquationSpec linear(int n) {
        check_n(n);
        EquationSpec e;
        e.n = n;
        e.kind = FKind::linear;
        return e;
    }
    static EquationSpec symbolic(int n, JetExpr f) {
        check_n(n);
        if (f.order() > 0)
            throw std::invalid_argument("symbolic nonlinearity must depend on y only");
        for (const Term& t : f.terms())
            if (t.x_pow != 0 || (t.atom && t.atom->kind != AtomKind::exp_y))
                throw std::invalid_argument("symbolic nonlinearity must depend on y only");
        EquationSpec e;
        e.n = n;
        e.kind = FKind::symbolic;
        e.f_sym = std::move(f);
        return e;
    }

    int order() const { return 2 * n; }

    JetExpr f_expr() const {
        switch (kind) {
            case FKind::power: return JetExpr::sym(Sym::lambda) * JetExpr::y(p);
            case FKind::exponential:
                return JetExpr::sym(Sym::lambda) * JetExpr::atom_term(AtomKind::exp_y, AtomArg{Rat(1), int(Sym::alpha)});
            case FKind::constant: return JetExpr::sym(Sym::lambda);
            case FKind::linear: return JetExpr::sym(Sym::lambda) * JetExpr::y();
            case FKind::symbolic: return f_sym;
        }
        return JetExpr::zero();
    }

    JetExpr f_prime_expr() const { return partial_y(f_expr()); }

    // Left side y^(2n) + f(y).
    JetExpr lhs() const { return JetExpr::jet(order()) + f_expr(); }

    double f_eval(double y) const {
        EvalParams ps;
        ps.lambda = lambda_value;
        ps.alpha = alpha_value;
        if (kind != FKind::symbolic && !lambda_value)
            throw std::invalid_argument("numeric lambda required to evaluate f");
        return evaluate(f_expr(), 0.0, {y}, ps);
    }

    std::string fspec() const {
        switch (kind) {
            case FKind::power: return "power:p=" + p.str() + ",lambda=sym";
            case FKind::exponential: return "exp:lambda=sym,alpha=sym";
            case FKind::constant: return "const";
            case FKind::linear: return "linear";
            case FKind::symbolic: return "expr";
        }
        return "";
    }

  private:
    static void check_n(int n) {
        if (n < 1) throw std::invalid_argument("equation order parameter n must be >= 1");
    }
};

// Restriction to the solution manifold: every y^(m) with m >= 2n is replaced
// by D^(m-2n)(-f(y)), iterated to a fixed point; beta atoms reduce by the
// linear-case rule when f is linear. Result order < 2n.
inline JetExpr substitute_on_solutions(const JetExpr& e, const EquationSpec& eq) {
    JetExpr rhs = -eq.f_expr(); // y^(2n) = -f(y) on solutions
    JetExpr work = e;
    int m;
    while ((m = work.order()) >= eq.order()) {
        JetExpr replacement = total_derivative(rhs, m - eq.order());
        work = substitute_jet(work, m, replacement);
    }
    if (eq.kind == FKind::linear) work = reduce_beta(work, eq.order());
    return work;
}

} // namespace lieode

#endif
