#ifndef LIEODE_NUMERICS_HPP
#define LIEODE_NUMERICS_HPP

#include <array>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

#include "equation.hpp"
#include "noether.hpp"

namespace lieode {

namespace detail {

// Derivatives of A * (q0 + q1 x + q2 x^2)^m, kept as a term list in powers of
// the quadratic and its first derivative.
struct QuadTerm {
    double c;
    Rat ephi;
    int ephip;
};

inline std::vector<double> quadratic_power_derivs(double A, double q0, double q1, double q2, Rat m,
                                                  double x, int up_to) {
    double phi = q0 + q1 * x + q2 * x * x;
    if (!(phi > 0.0))
        throw DomainError("quadratic base is not positive at x = " + std::to_string(x));
    double phip = q1 + 2.0 * q2 * x;
    std::vector<QuadTerm> terms{{A, m, 0}};
    std::vector<double> out;
    out.reserve(std::size_t(up_to) + 1);
    for (int order = 0; order <= up_to; ++order) {
        double v = 0.0;
        for (const QuadTerm& t : terms)
            v += t.c * std::pow(phi, t.ephi.to_double()) * std::pow(phip, t.ephip);
        out.push_back(v);
        if (order == up_to) break;
        std::vector<QuadTerm> next;
        auto add = [&](double c, Rat e, int ep) {
            if (c == 0.0) return;
            for (QuadTerm& u : next)
                if (u.ephi == e && u.ephip == ep) {
                    u.c += c;
                    return;
                }
            next.push_back({c, e, ep});
        };
        for (const QuadTerm& t : terms) {
            add(t.c * t.ephi.to_double(), t.ephi - Rat(1), t.ephip + 1);
            if (t.ephip > 0) add(t.c * t.ephip * 2.0 * q2, t.ephi, t.ephip - 1);
        }
        terms = std::move(next);
    }
    return out;
}

} // namespace detail

// A_n = [(-1)^(n+1) lambda/(beta^2-alpha*gamma)^n (2^n n!/(2n)!)^2]^((2n-1)/(4n))
inline double amplitude(int n, double lambda, double alpha, double beta, double gamma) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    double disc = beta * beta - alpha * gamma;
    if (disc == 0.0) throw DomainError("beta^2 - alpha*gamma must be nonzero");
    double sign = (n % 2 == 0) ? -1.0 : 1.0; // (-1)^(n+1)
    double comb = std::pow(2.0, n) * double(factorial(n)) / double(factorial(2 * n));
    double base = sign * lambda / std::pow(disc, n) * comb * comb;
    if (!(base > 0.0))
        throw DomainError("sign constraint (-1)^(n+1) lambda/(beta^2-alpha*gamma)^n > 0 violated");
    return std::pow(base, double(2 * n - 1) / double(4 * n));
}

// Three-parameter exact solution y = A_n (alpha + 2 beta x + gamma x^2)^((2n-1)/2)
// of the critical-power equation.
struct SolutionFamily {
    int n;
    double lambda, alpha, beta, gamma;
    double A;

    static SolutionFamily make(int n, double lambda, double alpha, double beta, double gamma) {
        return SolutionFamily{n, lambda, alpha, beta, gamma, amplitude(n, lambda, alpha, beta, gamma)};
    }

    double quadratic(double x) const { return alpha + 2.0 * beta * x + gamma * x * x; }
    bool in_domain(double x) const { return quadratic(x) > 0.0; }

    // y and exact derivatives up to the requested order.
    std::vector<double> derivatives(double x, int up_to) const {
        return detail::quadratic_power_derivs(A, alpha, 2.0 * beta, gamma, Rat(2 * n - 1, 2), x, up_to);
    }
    double value(double x) const { return derivatives(x, 0)[0]; }

    // Initial state [y, y', ..., y^(2n-1)] for the first-order reduction.
    std::vector<double> state(double x) const {
        auto d = derivatives(x, 2 * n - 1);
        return {d.begin(), d.end()};
    }

    // |y^(2n) + lambda y^((1+2n)/(1-2n))| at x.
    double residual(double x) const {
        auto d = derivatives(x, 2 * n);
        double p = double(1 + 2 * n) / double(1 - 2 * n);
        return std::abs(d[std::size_t(2 * n)] + lambda * std::pow(d[0], p));
    }

    EquationSpec equation() const {
        EquationSpec eq = EquationSpec::power(n, critical_power(n));
        eq.lambda_value = lambda;
        return eq;
    }
};

struct TrajectorySample {
    double x;
    std::vector<double> state; // [y, y', ..., y^(2n-1)]
    double err;                // local error estimate of the accepting step
};

struct Trajectory {
    EquationSpec eq;
    std::vector<TrajectorySample> samples;
    bool complete = true;
    std::string diagnostic;
};

struct IntegrateOptions {
    double y_floor = 1e-8;
    long max_steps = 2000000;
};

// Adaptive Dormand-Prince 5(4) over the first-order reduction
// [y, y', ..., y^(2n-1)]' = [y', ..., y^(2n-1), -f(y)].
inline Trajectory integrate(const EquationSpec& eq, std::vector<double> ics, double x0, double x1,
                            double tol, IntegrateOptions opts = {}) {
    const std::size_t dim = std::size_t(2 * eq.n);
    if (ics.size() != dim) throw std::invalid_argument("initial state must have dimension 2n");
    if (!(x1 > x0)) throw std::invalid_argument("span must satisfy x1 > x0");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

    auto deriv = [&](const std::vector<double>& s, std::vector<double>& ds) {
        for (std::size_t i = 0; i + 1 < dim; ++i) ds[i] = s[i + 1];
        ds[dim - 1] = -eq.f_eval(s[0]);
    };

    static const double a[7][6] = {
        {0, 0, 0, 0, 0, 0},
        {1.0 / 5, 0, 0, 0, 0, 0},
        {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
        {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
        {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    static const double b5[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                                 -2187.0 / 6784, 11.0 / 84,       0};
    static const double b4[7] = {5179.0 / 57600,    0,           7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    Trajectory traj{eq, {}, true, ""};
    traj.samples.push_back({x0, ics, 0.0});

    std::vector<std::vector<double>> k(7, std::vector<double>(dim));
    std::vector<double> state = std::move(ics), stage(dim), next(dim);
    double x = x0;
    double h = (x1 - x0) / 256.0;
    bool have_k0 = false;

    for (long step = 0; step < opts.max_steps; ++step) {
        if (x >= x1) return traj;
        if (std::abs(state[0]) < opts.y_floor) {
            traj.complete = false;
            traj.diagnostic = "stopped near the singular locus |y| < floor at x = " + std::to_string(x);
            return traj;
        }
        if (x + h > x1) h = x1 - x;
        if (!have_k0) {
            deriv(state, k[0]);
            have_k0 = true;
        }
        bool stage_ok = true;
        for (int i = 1; i < 7 && stage_ok; ++i) {
            for (std::size_t d = 0; d < dim; ++d) {
                double acc = 0.0;
                for (int j = 0; j < i; ++j) acc += a[i][j] * k[j][d];
                stage[d] = state[d] + h * acc;
            }
            if (std::abs(stage[0]) < opts.y_floor || !std::isfinite(stage[0])) {
                stage_ok = false;
                break;
            }
            deriv(stage, k[i]);
        }
        double err = 0.0;
        if (stage_ok) {
            for (std::size_t d = 0; d < dim; ++d) {
                double acc5 = 0.0, acc4 = 0.0;
                for (int j = 0; j < 7; ++j) {
                    acc5 += b5[j] * k[j][d];
                    acc4 += b4[j] * k[j][d];
                }
                next[d] = state[d] + h * acc5;
                double sc = tol + tol * std::max(std::abs(state[d]), std::abs(next[d]));
                double e = h * (acc5 - acc4) / sc;
                err += e * e;
            }
            err = std::sqrt(err / double(dim));
        }
        if (stage_ok && err <= 1.0 && std::isfinite(err)) {
            x += h;
            state = next;
            traj.samples.push_back({x, state, err * tol});
            k[0] = k[6]; // first-same-as-last
            double grow = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
            h *= std::min(5.0, std::max(0.2, grow));
        } else {
            double shrink = stage_ok && std::isfinite(err) ? 0.9 * std::pow(err, -0.2) : 0.1;
            h *= std::max(0.1, std::min(0.9, shrink));
            have_k0 = true; // k0 still valid at the unchanged state
            if (h < 1e-14 * std::max(1.0, std::abs(x))) {
                traj.complete = false;
                traj.diagnostic = "step size underflow near x = " + std::to_string(x);
                return traj;
            }
        }
    }
    traj.complete = false;
    traj.diagnostic = "step limit reached";
    return traj;
}

inline EvalParams eval_params_for(const EquationSpec& eq) {
    EvalParams ps;
    ps.lambda = eq.lambda_value;
    ps.alpha = eq.alpha_value;
    if (eq.lambda_value && *eq.lambda_value >= 0.0) ps.mu = std::sqrt(*eq.lambda_value);
    return ps;
}

// max_k |I(sample_k) - I(sample_0)|.
inline double drift(const Trajectory& traj, const FirstIntegral& integral) {
    if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
    EvalParams ps = eval_params_for(traj.eq);
    double first = evaluate(integral.expr, traj.samples.front().x, traj.samples.front().state, ps);
    double worst = 0.0;
    for (const auto& s : traj.samples)
        worst = std::max(worst, std::abs(evaluate(integral.expr, s.x, s.state, ps) - first));
    return worst;
}

inline void write_csv(const Trajectory& traj, std::ostream& os) {
    os << "x";
    for (std::size_t i = 0; i < std::size_t(2 * traj.eq.n); ++i) os << ",y" << i;
    os << ",err\n";
    os << std::setprecision(17);
    for (const auto& s : traj.samples) {
        os << s.x;
        for (double v : s.state) os << "," << v;
        os << "," << s.err << "\n";
    }
}

// Least-squares quadratic through (x_i, v_i); used to re-fit transformed
// solution samples back onto the family.
inline std::array<double, 3> fit_quadratic(const std::vector<std::pair<double, double>>& pts) {
    double s[5] = {0, 0, 0, 0, 0};
    double t[3] = {0, 0, 0};
    for (const auto& [x, v] : pts) {
        double xp = 1.0;
        for (int i = 0; i < 5; ++i) {
            s[i] += xp;
            if (i < 3) t[i] += v * xp;
            xp *= x;
        }
    }
    double m[3][4] = {{s[0], s[1], s[2], t[0]}, {s[1], s[2], s[3], t[1]}, {s[2], s[3], s[4], t[2]}};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[piv], m[col]);
        if (m[col][col] == 0.0) throw DomainError("degenerate quadratic fit");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = m[r][col] / m[col][col];
            for (int cc = col; cc < 4; ++cc) m[r][cc] -= f * m[col][cc];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

// Residual |y^(2n) + lambda y^p| of y = q(x)^((2n-1)/2) for a fitted quadratic q.
inline double quadratic_solution_residual(int n, double lambda, const std::array<double, 3>& q, double x) {
    auto d = detail::quadratic_power_derivs(1.0, q[0], q[1], q[2], Rat(2 * n - 1, 2), x, 2 * n);
    double p = double(1 + 2 * n) / double(1 - 2 * n);
    return std::abs(d[std::size_t(2 * n)] + lambda * std::pow(d[0], p));
}

} // namespace lieode

#endif
