#ifndef LIEODE_SYMMETRY_HPP
#define LIEODE_SYMMETRY_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "equation.hpp"
#include "jet_expr.hpp"
#include "parse.hpp"

namespace lieode {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline Rat binom(int n, int k) {
    if (k < 0 || k > n) return Rat(0);
    Rat acc(1);
    for (int i = 1; i <= k; ++i) acc = acc * Rat(n - i + 1) / Rat(i);
    return acc;
}

inline long long factorial(int n) {
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// Point generator xi(x,y) d/dx + eta(x,y) d/dy.
struct VectorField {
    JetExpr xi;
    JetExpr eta;
    std::string label;

    VectorField() = default;
    VectorField(JetExpr xi_, JetExpr eta_, std::string label_ = "")
        : xi(std::move(xi_)), eta(std::move(eta_)), label(std::move(label_)) {
        if (xi.order() > 0 || eta.order() > 0)
            throw std::invalid_argument("vector field components must not contain jet variables");
    }
};

inline std::string to_text(const VectorField& vf) {
    return "xi = " + to_string(vf.xi) + "; eta = " + to_string(vf.eta);
}

// Accepts the serialized form "xi = <expr>; eta = <expr>".
inline VectorField parse_generator(const std::string& text) {
    auto semi = text.find(';');
    if (semi == std::string::npos) throw ParseError("expected 'xi = ...; eta = ...'", 0);
    auto side = [&](std::string part, const std::string& name, std::size_t base) {
        auto eq = part.find('=');
        if (eq == std::string::npos) throw ParseError("missing '=' in generator component", base);
        std::string head = part.substr(0, eq);
        head.erase(std::remove_if(head.begin(), head.end(), ::isspace), head.end());
        if (head != name) throw ParseError("expected component '" + name + "'", base);
        return parse(part.substr(eq + 1));
    };
    return VectorField(side(text.substr(0, semi), "xi", 0), side(text.substr(semi + 1), "eta", semi + 1));
}

// Generator with its prolongation coefficients zeta_1..zeta_m attached.
struct ProlongedField {
    VectorField base;
    std::vector<JetExpr> zetas;

    const JetExpr& zeta(int k) const {
        if (k < 1 || k > int(zetas.size())) throw std::invalid_argument("prolongation order out of range");
        return zetas[std::size_t(k) - 1];
    }
};

// zeta_k = D(zeta_{k-1}) - y^(k) D(xi), zeta_0 = eta. Works for xi, eta
// depending on both x and y.
inline ProlongedField prolong(const VectorField& vf, int order) {
    if (order < 1) throw std::invalid_argument("prolongation order must be >= 1");
    ProlongedField out{vf, {}};
    out.zetas.reserve(std::size_t(order));
    JetExpr dxi = total_derivative(vf.xi);
    JetExpr prev = vf.eta;
    for (int k = 1; k <= order; ++k) {
        JetExpr zk = total_derivative(prev) - JetExpr::jet(k) * dxi;
        out.zetas.push_back(zk);
        prev = zk;
    }
    return out;
}

// X(F) for the prolonged operator; zetas must reach order(F).
inline JetExpr apply_prolonged(const ProlongedField& X, const JetExpr& F) {
    if (F.order() > int(X.zetas.size()))
        throw std::invalid_argument("prolongation shorter than the expression order");
    JetExpr acc = X.base.xi * partial_x(F) + X.base.eta * partial_y(F);
    for (int k = 1; k <= F.order(); ++k) {
        JetExpr p = partial_jet(F, k);
        if (!p.is_zero()) acc += X.zeta(k) * p;
    }
    return acc;
}

namespace detail {
inline void require_x_only(const JetExpr& e, const char* what) {
    for (const Term& t : e.terms())
        if (!t.y_pow.is_zero() || !t.jets.empty() || (t.atom && t.atom->kind == AtomKind::exp_y))
            throw std::invalid_argument(std::string(what) + " must be a function of x alone");
}
} // namespace detail

// Closed form of the p-th prolongation coefficient for the linear ansatz
// xi = xi(x), eta = alpha(x) y + beta(x):
//   zeta_p = beta^(p) + alpha^(p) y
//          + sum_{j=1}^{p} [C(p,j) alpha^(p-j) - C(p,j-1) xi^(p-j+1)] y^(j)
inline JetExpr prolong_closed_form(const JetExpr& xi, const JetExpr& alpha, const JetExpr& beta, int p) {
    if (p < 1) throw std::invalid_argument("prolongation order must be >= 1");
    detail::require_x_only(xi, "xi");
    detail::require_x_only(alpha, "alpha");
    detail::require_x_only(beta, "beta");
    JetExpr acc = total_derivative(beta, p) + total_derivative(alpha, p) * JetExpr::y();
    for (int j = 1; j <= p; ++j) {
        JetExpr coeff = binom(p, j) * total_derivative(alpha, p - j) -
                        binom(p, j - 1) * total_derivative(xi, p - j + 1);
        if (!coeff.is_zero()) acc += coeff * JetExpr::jet(j);
    }
    return acc;
}

struct InvarianceResult {
    bool invariant;
    JetExpr residual; // zero when invariant; the witness otherwise
    explicit operator bool() const { return invariant; }
};

// X^(2n)(y^(2n) + f(y)) restricted to the solution manifold.
inline InvarianceResult invariance_check(const VectorField& vf, const EquationSpec& eq) {
    ProlongedField X = prolong(vf, eq.order());
    JetExpr r = apply_prolonged(X, eq.lhs());
    r = substitute_on_solutions(r, eq);
    return {r.is_zero(), r};
}

// p = (1+2n)/(1-2n), the power at which the Lie and Noether groups coincide.
inline Rat critical_power(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    return Rat(1 + 2 * n, 1 - 2 * n);
}

// Basis of Lie point symmetry generators for the classified nonlinearities.
inline std::vector<VectorField> catalog(const EquationSpec& eq) {
    const int n = eq.n;
    const JetExpr x = JetExpr::x();
    const JetExpr y = JetExpr::y();
    std::vector<VectorField> out;
    out.emplace_back(JetExpr::one(), JetExpr::zero(), "X1");
    switch (eq.kind) {
        case FKind::exponential:
            // D1 = x d/dx - (2n/alpha) d/dy
            out.emplace_back(x, JetExpr::sym(Sym::alpha, -1).scaled(Rat(-2 * n)), "D1");
            break;
        case FKind::power: {
            if (eq.p == critical_power(n)) {
                out.emplace_back(x, y.scaled(Rat(2 * n - 1, 2)), "X2");
                out.emplace_back(x * x, (x * y).scaled(Rat(2 * n - 1)), "X3");
            } else {
                out.emplace_back(x, y.scaled(Rat(2 * n) / (Rat(1) - eq.p)), "Dp");
            }
            break;
        }
        case FKind::constant: {
            const JetExpr lam = JetExpr::sym(Sym::lambda);
            const JetExpr x2n = JetExpr::x(2 * n).scaled(Rat(1, factorial(2 * n)));
            // Y1 = x d/dx + (2n-1)/2 [y - lambda (2n+1)/(2n-1) x^(2n)/(2n)!] d/dy
            out.emplace_back(x, y.scaled(Rat(2 * n - 1, 2)) - (lam * x2n).scaled(Rat(2 * n + 1, 2)), "Y1");
            // Y2 = x^2 d/dx + x[(2n-1)y - lambda x^(2n)/(2n)!] d/dy
            out.emplace_back(x * x, (x * y).scaled(Rat(2 * n - 1)) - x * lam * x2n, "Y2");
            // Y3 = (y + lambda x^(2n)/(2n)!) d/dy
            out.emplace_back(JetExpr::zero(), y + lam * x2n, "Y3");
            for (int j = 0; j <= 2 * n - 1; ++j)
                out.emplace_back(JetExpr::zero(), JetExpr::x(j).scaled(Rat(1, factorial(j))),
                                 "Z" + std::to_string(j));
            if (n == 1) {
                const JetExpr lam2 = lam * lam;
                // Y4 = (xy + lambda/2 x^3) d/dx + (y^2 - lambda^2/4 x^4) d/dy
                out.emplace_back(x * y + (lam * JetExpr::x(3)).scaled(Rat(1, 2)),
                                 y * y - (lam2 * JetExpr::x(4)).scaled(Rat(1, 4)), "Y4");
                // Y5 = (y + 3/2 lambda x^2) d/dx - lambda^2 x^3 d/dy
                out.emplace_back(y + (lam * JetExpr::x(2)).scaled(Rat(3, 2)),
                                 (lam2 * JetExpr::x(3)).scaled(Rat(-1)), "Y5");
            }
            break;
        }
        case FKind::linear: {
            out.emplace_back(JetExpr::zero(), y, "V1");
            out.emplace_back(JetExpr::zero(), JetExpr::beta_fn(), "Vbeta");
            if (n == 1) {
                const JetExpr mu = JetExpr::sym(Sym::mu);
                auto sin2 = JetExpr::atom_term(AtomKind::sin_x, AtomArg{Rat(2), int(Sym::mu)});
                auto cos2 = JetExpr::atom_term(AtomKind::cos_x, AtomArg{Rat(2), int(Sym::mu)});
                auto sin1 = JetExpr::atom_term(AtomKind::sin_x, AtomArg{Rat(1), int(Sym::mu)});
                auto cos1 = JetExpr::atom_term(AtomKind::cos_x, AtomArg{Rat(1), int(Sym::mu)});
                out.emplace_back(sin2, mu * y * cos2, "V2");
                out.emplace_back(cos2, -(mu * y * sin2), "V3");
                out.emplace_back(y * sin1, mu * y * y * cos1, "V4");
                out.emplace_back(y * cos1, -(mu * y * y * sin1), "V5");
            }
            break;
        }
        case FKind::symbolic:
            break; // arbitrary f admits only the x-translation
    }
    return out;
}

// ---- determining equations, n > 1 ---------------------------------------

// One member of the derivative-relation family:
//   C(2n,k) alpha^(2n-k) - C(2n,k-1) xi^(2n-k+1) = 0,  1 <= k < 2n.
struct DerivativeRelation {
    int k;
    Rat alpha_coeff;
    int alpha_order;
    Rat xi_coeff;
    int xi_order;
};

struct ReducedSystem {
    int n;

    // xi = a1 x^2 + a2 x + a3
    JetExpr xi(const Rat& a1, const Rat& a2, const Rat& a3) const {
        return JetExpr::x(2).scaled(a1) + JetExpr::x().scaled(a2) + JetExpr::constant(a3);
    }
    // alpha = (2n-1)/2 (2 a1 x + a2) + k1
    JetExpr alpha(const Rat& a1, const Rat& a2, const Rat& k1) const {
        return JetExpr::x().scaled(Rat(2 * n - 1) * a1) + JetExpr::constant(Rat(2 * n - 1, 2) * a2 + k1);
    }
    // Compatibility condition:
    //   alpha y f'(y) + beta f'(y) + beta^(2n) + [(2n+1)/2 (2 a1 x + a2) - k1] f(y) = 0
    JetExpr compatibility(const Rat& a1, const Rat& a2, const Rat& k1, const JetExpr& beta,
                          const EquationSpec& eq) const {
        detail::require_x_only(beta, "beta");
        JetExpr fp = eq.f_prime_expr();
        JetExpr bracket = JetExpr::x().scaled(Rat(2 * n + 1) * a1) +
                          JetExpr::constant(Rat(2 * n + 1, 2) * a2 - k1);
        JetExpr r = alpha(a1, a2, k1) * JetExpr::y() * fp + beta * fp + total_derivative(beta, 2 * n) +
                    bracket * eq.f_expr();
        if (eq.kind == FKind::linear) r = reduce_beta(r, 2 * n);
        return r;
    }
};

// Structured determining equations for n > 1 under the ansatz
// xi = xi(x), eta = alpha(x) y + beta(x).
struct DeterminingSystem {
    int n;
    std::vector<DerivativeRelation> relations;
    ReducedSystem reduced;

    // Invariance multiplier lambda = alpha - 2n xi' (the function multiplying
    // F in X F = lambda F; unrelated to the equation coefficient lambda).
    JetExpr multiplier(const JetExpr& xi, const JetExpr& alpha) const {
        detail::require_x_only(xi, "xi");
        detail::require_x_only(alpha, "alpha");
        return alpha - total_derivative(xi).scaled(Rat(2 * n));
    }

    std::vector<JetExpr> relation_residuals(const JetExpr& xi, const JetExpr& alpha) const {
        detail::require_x_only(xi, "xi");
        detail::require_x_only(alpha, "alpha");
        std::vector<JetExpr> out;
        out.reserve(relations.size());
        for (const auto& r : relations)
            out.push_back(r.alpha_coeff * total_derivative(alpha, r.alpha_order) -
                          r.xi_coeff * total_derivative(xi, r.xi_order));
        return out;
    }

    // (alpha y + beta) f'(y) + beta^(2n) + alpha^(2n) y - (alpha - 2n xi') f(y)
    JetExpr compatibility_residual(const JetExpr& xi, const JetExpr& alpha, const JetExpr& beta,
                                   const EquationSpec& eq) const {
        detail::require_x_only(beta, "beta");
        JetExpr fp = eq.f_prime_expr();
        JetExpr r = (alpha * JetExpr::y() + beta) * fp + total_derivative(beta, 2 * n) +
                    total_derivative(alpha, 2 * n) * JetExpr::y() - multiplier(xi, alpha) * eq.f_expr();
        if (eq.kind == FKind::linear) r = reduce_beta(r, 2 * n);
        return r;
    }

    // Splits eta(x, y) into (alpha(x), beta(x)); rejects other y dependence.
    static std::pair<JetExpr, JetExpr> split_eta(const JetExpr& eta) {
        std::vector<Term> alpha_terms, beta_terms;
        for (Term t : eta.terms()) {
            if (!t.jets.empty() || (t.atom && t.atom->kind == AtomKind::exp_y))
                throw std::invalid_argument("eta is outside the alpha(x) y + beta(x) ansatz");
            if (t.y_pow.is_zero()) {
                beta_terms.push_back(std::move(t));
            } else if (t.y_pow == Rat(1)) {
                t.y_pow = Rat(0);
                alpha_terms.push_back(std::move(t));
            } else {
                throw std::invalid_argument("eta is outside the alpha(x) y + beta(x) ansatz");
            }
        }
        return {JetExpr::from_terms(std::move(alpha_terms)), JetExpr::from_terms(std::move(beta_terms))};
    }
};

inline DeterminingSystem determining_system(int n) {
    if (n <= 1)
        throw std::invalid_argument("determining_system requires n > 1; use determining_system_n1 for n = 1");
    DeterminingSystem sys;
    sys.n = n;
    sys.reduced = ReducedSystem{n};
    for (int k = 1; k < 2 * n; ++k)
        sys.relations.push_back({k, binom(2 * n, k), 2 * n - k, binom(2 * n, k - 1), 2 * n - k + 1});
    return sys;
}

// ---- determining equations, n = 1 ----------------------------------------

// Classification of the power nonlinearity at n = 1 (and n > 1 below).
enum class PowerBranch { generic, critical, linear };

// Second-order ansatz xi = a(x) y + b(x), eta = a'(x) y^2 + c(x) y + d(x)
// with its two residual determining equations.
struct N1System {
    // E1 = 3 a'' y + 2c' - b'' + 3 a f(y)
    // E2 = d'' + (2b' - c) f + d f' + c y f' + a' y^2 f' + c'' y + a''' y^2
    std::pair<JetExpr, JetExpr> residuals(const JetExpr& a, const JetExpr& b, const JetExpr& c,
                                          const JetExpr& d, const EquationSpec& eq) const {
        detail::require_x_only(a, "a");
        detail::require_x_only(b, "b");
        detail::require_x_only(c, "c");
        detail::require_x_only(d, "d");
        const JetExpr y = JetExpr::y();
        const JetExpr f = eq.f_expr();
        const JetExpr fp = eq.f_prime_expr();
        JetExpr e1 = total_derivative(a, 2).scaled(Rat(3)) * y + total_derivative(c).scaled(Rat(2)) -
                     total_derivative(b, 2) + a.scaled(Rat(3)) * f;
        JetExpr e2 = total_derivative(d, 2) + (total_derivative(b).scaled(Rat(2)) - c) * f + d * fp +
                     c * y * fp + total_derivative(a) * y * y * fp + total_derivative(c, 2) * y +
                     total_derivative(a, 3) * y * y;
        if (eq.kind == FKind::linear) {
            e1 = reduce_beta(e1, 2);
            e2 = reduce_beta(e2, 2);
        }
        return {e1, e2};
    }

    // Decomposes a vector field into the ansatz and returns its residuals.
    std::pair<JetExpr, JetExpr> residuals_for(const VectorField& vf, const EquationSpec& eq) const {
        auto [a, b] = DeterminingSystem::split_eta(vf.xi); // xi = a y + b
        JetExpr eta_quad = vf.eta - total_derivative(a) * JetExpr::y(Rat(2));
        auto [c, d] = DeterminingSystem::split_eta(eta_quad);
        return residuals(a, b, c, d, eq);
    }

    struct PowerSplit {
        PowerBranch branch;
        int dimension;
        int b_degree;  // xi = b(x) polynomial degree
        int c_degree;  // eta = c(x) y coefficient degree
        bool a_zero;
        bool d_zero;
        std::vector<VectorField> basis;
    };

    PowerSplit power_case(const Rat& p) const {
        if (p == Rat(0))
            throw std::invalid_argument("p = 0 is the constant nonlinearity; classify with the constant branch");
        EquationSpec eq = p == Rat(1) ? EquationSpec::linear(1) : EquationSpec::power(1, p);
        if (p == Rat(1)) {
            auto basis = catalog(eq);
            return {PowerBranch::linear, 8, 1, 0, false, false, std::move(basis)};
        }
        if (p == Rat(-3)) return {PowerBranch::critical, 3, 2, 1, true, true, catalog(eq)};
        return {PowerBranch::generic, 2, 1, 0, true, true, catalog(eq)};
    }

    std::vector<VectorField> basis(const EquationSpec& eq) const {
        if (eq.n != 1) throw std::invalid_argument("N1System handles n = 1 only");
        return catalog(eq);
    }
};

inline N1System determining_system_n1() { return N1System{}; }

// ---- parametric classification, n > 1 -------------------------------------

struct PowerClassification {
    PowerBranch branch;
    int dimension;
    std::vector<VectorField> basis; // the beta family appears as one template field
};

// Solves the coefficient-matching conditions of the compatibility equation
// for f = lambda y^p over the unknowns (a1, a2, a3, k1, beta).
inline PowerClassification classify_power(int n, const Rat& p) {
    if (n <= 1) throw std::invalid_argument("classify_power requires n > 1; use determining_system_n1");
    if (p == Rat(0))
        throw std::invalid_argument("p = 0 is the constant nonlinearity; classify with the constant branch");
    ReducedSystem red{n};
    auto field = [&](Rat a1, Rat a2, Rat a3, Rat k1, std::string label) {
        JetExpr xi = red.xi(a1, a2, a3);
        JetExpr eta = red.alpha(a1, a2, k1) * JetExpr::y();
        return VectorField(xi, eta, std::move(label));
    };
    if (p == Rat(1)) {
        // y-coefficient forces a1 = a2 = 0 with k1 free; beta obeys
        // beta^(2n) + lambda beta = 0, a 2n-parameter family.
        std::vector<VectorField> basis;
        basis.push_back(field(Rat(0), Rat(0), Rat(1), Rat(0), "X1"));
        basis.emplace_back(JetExpr::zero(), JetExpr::y(), "V1");
        basis.emplace_back(JetExpr::zero(), JetExpr::beta_fn(), "Vbeta");
        return {PowerBranch::linear, 2 * n + 2, std::move(basis)};
    }
    // Condition (coefficient of y^p):  c a1 x + (c/2) a2 + (p-1) k1 = 0
    // with c = (2n-1)p + (2n+1); the y^(p-1) coefficient forces beta = 0.
    Rat c = Rat(2 * n - 1) * p + Rat(2 * n + 1);
    std::vector<VectorField> basis;
    basis.push_back(field(Rat(0), Rat(0), Rat(1), Rat(0), "X1"));
    if (c.is_zero()) {
        // critical power: a1, a2, a3 free, k1 = 0
        Rat k1 = Rat(0);
        basis.push_back(field(Rat(0), Rat(1), Rat(0), k1, "X2"));
        basis.push_back(field(Rat(1), Rat(0), Rat(0), k1, "X3"));
        return {PowerBranch::critical, 3, std::move(basis)};
    }
    // generic power: a1 = 0, k1 = c/(2(1-p)) a2
    Rat k1 = c / (Rat(2) * (Rat(1) - p));
    basis.push_back(field(Rat(0), Rat(1), Rat(0), k1, "Dp"));
    return {PowerBranch::generic, 2, std::move(basis)};
}

// ---- one-parameter groups --------------------------------------------------

// Exponentials of X1, X2, X3 acting on the plane.
struct PointTransformation {
    enum class Kind { translation, scaling, projective };
    Kind kind;
    double epsilon = 0.0;
    int n = 1;
};

inline std::vector<std::pair<double, double>> apply_transformation(
    const PointTransformation& t, const std::vector<std::pair<double, double>>& samples) {
    std::vector<std::pair<double, double>> out;
    out.reserve(samples.size());
    for (const auto& [x, y] : samples) {
        switch (t.kind) {
            case PointTransformation::Kind::translation:
                out.emplace_back(x + t.epsilon, y);
                break;
            case PointTransformation::Kind::scaling:
                out.emplace_back(std::exp(t.epsilon) * x,
                                 std::exp(t.epsilon * (2.0 * t.n - 1.0) / 2.0) * y);
                break;
            case PointTransformation::Kind::projective: {
                double denom = 1.0 - t.epsilon * x;
                if (denom == 0.0 || !std::isfinite(1.0 / denom))
                    throw DomainError("projective transformation pole at x = " + std::to_string(x));
                out.emplace_back(x / denom, y / std::pow(denom, 2 * t.n - 1));
                break;
            }
        }
    }
    return out;
}

} // namespace lieode

#endif
