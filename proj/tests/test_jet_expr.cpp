#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieode/equation.hpp"
#include "lieode/jet_expr.hpp"
#include "lieode/parse.hpp"
#include "test_util.hpp"

using namespace lieode;
using testutil::Rng;

namespace {
JetExpr E(const char* s) { return parse(s); }
} // namespace

TEST_CASE("total derivative basics") {
    CHECK(total_derivative(E("x")) == E("1"));
    CHECK(total_derivative(E("5")) == JetExpr::zero());
    CHECK(total_derivative(E("lambda*mu")) == JetExpr::zero());
    CHECK(total_derivative(E("y")) == E("y'"));
    CHECK(total_derivative(E("y'''")) == E("y^(4)"));
}

TEST_CASE("total derivative of the Ermakov-type energy") {
    // Hand chain-rule oracle: D(-(y')^2/2 + (lambda/2) y^-2) = -y'y'' - lambda y' y^-3
    JetExpr e = E("-1/2*(y')^2 + 1/2*lambda*y^(-2)");
    JetExpr expect = E("-y'*y'' - lambda*y'*y^(-3)");
    CHECK(total_derivative(e) == expect);

    // Cross-check by finite differences along a smooth sample path.
    testutil::PolyPath path{{0.7, 0.3, -0.2, 0.05}};
    EvalParams ps;
    ps.lambda = 0.8;
    double x0 = 0.4, h = 1e-6;
    double lhs = evaluate(total_derivative(e), x0, path.jets(2, x0), ps);
    double fd = (evaluate(e, x0 + h, path.jets(1, x0 + h), ps) -
                 evaluate(e, x0 - h, path.jets(1, x0 - h), ps)) /
                (2 * h);
    CHECK(lhs == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("euler operator recovers the Euler-Lagrange form at n=2") {
    // delta/delta y of (y'')^2/2 + lambda y^{p+1}/(p+1) at p = 3
    JetExpr L = E("1/2*(y'')^2 + 1/4*lambda*y^4");
    JetExpr el = higher_euler(L, 0, OrderBound{4});
    CHECK(el == E("y^(4) + lambda*y^3"));
}

TEST_CASE("euler operator annihilates total derivatives") {
    Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        JetExpr g = testutil::random_expr(rng, 4, 4, testutil::Atoms::trig);
        JetExpr dg = total_derivative(g);
        CHECK(higher_euler(dg, 0, OrderBound{dg.order()}).is_zero());
    }
}

TEST_CASE("higher euler operators of the Lagrangian monomial") {
    // delta L / delta y^(k) = (-1)^(n-k) y^(2n-k) for 1 <= k <= n, L = (y^(n))^2/2 + F(y)
    for (int n = 1; n <= 4; ++n) {
        JetExpr L = JetExpr::jet(n, 2).scaled(Rat(1, 2)) + JetExpr::sym(Sym::lambda) * JetExpr::y(Rat(5));
        for (int k = 1; k <= n; ++k) {
            JetExpr expect = JetExpr::jet(2 * n - k).scaled(Rat((n - k) % 2 == 0 ? 1 : -1));
            CHECK(higher_euler(L, k, OrderBound{2 * n}) == expect);
        }
    }
}

TEST_CASE("higher euler vanishes beyond the expression order") {
    JetExpr e = E("x*(y'')^2 + y'*y");
    CHECK(higher_euler(e, 3, OrderBound{6}).is_zero());
    CHECK(higher_euler(e, 5, OrderBound{8}).is_zero());
}

TEST_CASE("substitution on the solution manifold") {
    EquationSpec eq = EquationSpec::power(2, Rat(-5, 3));
    CHECK(substitute_on_solutions(JetExpr::jet(4), eq) == E("-lambda*y^(-5/3)"));

    // y^(5) -> D(-lambda y^p); verified against the total-derivative oracle
    JetExpr via_sub = substitute_on_solutions(JetExpr::jet(5), eq);
    JetExpr via_d = total_derivative(E("-lambda*y^(-5/3)"));
    CHECK(via_sub == via_d);
    CHECK(via_sub == E("5/3*lambda*y^(-8/3)*y'"));

    EquationSpec ermakov = EquationSpec::power(1, Rat(-3));
    CHECK(substitute_on_solutions(E("y'' + lambda*y^(-3)"), ermakov).is_zero());

    // iterates to a fixed point below order 2n
    JetExpr deep = substitute_on_solutions(JetExpr::jet(8), eq);
    CHECK(deep.order() < 4);
}

TEST_CASE("substitution handles powers of high jets") {
    EquationSpec eq = EquationSpec::power(1, Rat(-3));
    JetExpr e = JetExpr::jet(2, 2); // (y'')^2 -> lambda^2 y^-6
    CHECK(substitute_on_solutions(e, eq) == E("lambda^2*y^(-6)"));
}

TEST_CASE("exactness test recovers potentials") {
    auto a1 = is_total_derivative(E("y'*y''"), OrderBound{2});
    REQUIRE(a1.has_value());
    CHECK(*a1 == E("1/2*(y')^2"));

    CHECK_FALSE(is_total_derivative(E("y^2"), OrderBound{2}).has_value());

    // n^2 y^(n-1) y^(n) -> (n^2/2)(y^(n-1))^2, the divergence gauge shape
    for (int n = 1; n <= 4; ++n) {
        JetExpr e = (n == 1 ? JetExpr::y() : JetExpr::jet(n - 1)) * JetExpr::jet(n);
        e = e.scaled(Rat(n * n));
        auto a = is_total_derivative(e, OrderBound{n});
        REQUIRE(a.has_value());
        JetExpr expect =
            (n == 1 ? JetExpr::y(Rat(2)) : JetExpr::jet(n - 1, 2)).scaled(Rat(n * n, 2));
        CHECK(*a == expect);
    }
}

TEST_CASE("exactness both ways on random expressions") {
    Rng rng(23);
    int recovered = 0;
    for (int trial = 0; trial < 40; ++trial) {
        JetExpr g = testutil::random_expr(rng, 4, 3, trial % 2 ? testutil::Atoms::trig : testutil::Atoms::exp);
        JetExpr dg = total_derivative(g);
        auto a = is_total_derivative(dg, OrderBound{dg.order()});
        REQUIRE(a.has_value());
        CHECK(total_derivative(*a) == dg);
        ++recovered;
    }
    CHECK(recovered == 40);
}

TEST_CASE("antiderivative is normalized without constant term") {
    auto a = is_total_derivative(E("y' + 3*x^2"), OrderBound{1});
    REQUIRE(a.has_value());
    CHECK(*a == E("y + x^3"));
}

TEST_CASE("exactness certified but unintegrable inputs raise, never return wrong potentials") {
    // y'/y passes the Euler test (it is D(log y)) but log is outside the algebra
    CHECK_THROWS_AS(is_total_derivative(E("y^(-1)*y'"), OrderBound{1}), IntegrationIncomplete);
    // beta(x) has no representable antiderivative
    CHECK_THROWS_AS(is_total_derivative(E("beta(x)"), OrderBound{1}), IntegrationIncomplete);
    CHECK_THROWS_AS(is_total_derivative(E("x*beta'(x)"), OrderBound{1}), IntegrationIncomplete);
    // but a pure derivative of a beta term is recovered
    auto a = is_total_derivative(E("x*beta''(x) + beta'(x)"), OrderBound{1});
    REQUIRE(a.has_value());
    CHECK(*a == E("x*beta'(x)"));
}

TEST_CASE("ring laws and canonical form") {
    Rng rng(37);
    for (int trial = 0; trial < 25; ++trial) {
        JetExpr a = testutil::random_expr(rng, 3, 3, testutil::Atoms::trig, true);
        JetExpr b = testutil::random_expr(rng, 3, 3, testutil::Atoms::trig, true);
        JetExpr c = testutil::random_expr(rng, 3, 3);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a + b == b + a);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(JetExpr::from_terms(a.terms()) == a); // canonicalization is idempotent
    }
}

TEST_CASE("Leibniz rule") {
    Rng rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        JetExpr a = testutil::random_expr(rng, 3, 3, testutil::Atoms::trig);
        JetExpr b = testutil::random_expr(rng, 3, 3, testutil::Atoms::trig);
        CHECK(total_derivative(a * b) == total_derivative(a) * b + a * total_derivative(b));
    }
}

TEST_CASE("numeric consistency of the total derivative") {
    Rng rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        JetExpr e = testutil::random_expr(rng, 3, 4, testutil::Atoms::trig);
        testutil::PolyPath path = testutil::random_path(rng, 5);
        double x0 = 0.3 + 0.05 * trial, h = 1e-6;
        double lhs = evaluate(total_derivative(e), x0, path.jets(4, x0));
        double fd = (evaluate(e, x0 + h, path.jets(3, x0 + h)) -
                     evaluate(e, x0 - h, path.jets(3, x0 - h))) /
                    (2 * h);
        double scale = std::max({1.0, std::abs(lhs), std::abs(fd)});
        CHECK(std::abs(lhs - fd) / scale < 1e-6);
    }
}

TEST_CASE("mu squared folds into lambda") {
    JetExpr mu = JetExpr::sym(Sym::mu);
    CHECK(mu * mu == JetExpr::sym(Sym::lambda));
    CHECK(mu.pow(5) == JetExpr::sym(Sym::lambda, 2) * mu);
    CHECK(mu.pow(-3) == JetExpr::sym(Sym::lambda, -2) * mu);
}

TEST_CASE("trig atoms stay closed under products") {
    JetExpr s = E("sin(2*mu*x)");
    JetExpr c = E("cos(2*mu*x)");
    CHECK(s * s + c * c == JetExpr::one());
    CHECK(s * c == E("1/2*sin(4*mu*x)"));
    JetExpr ex = E("exp(3*x)");
    CHECK(ex * ex == E("exp(6*x)"));
    CHECK(ex * ex.pow(-1) == JetExpr::one());
    CHECK_THROWS_AS(s.pow(-1), UnsupportedOperation);
    CHECK_THROWS_AS(s * ex, UnsupportedOperation);
}

TEST_CASE("trig differentiation rotates the family") {
    JetExpr s = E("sin(2*mu*x)");
    CHECK(total_derivative(s) == E("2*mu*cos(2*mu*x)"));
    CHECK(total_derivative(total_derivative(s)) == E("-4*lambda*sin(2*mu*x)"));
    CHECK(total_derivative(E("exp(alpha*y)")) == E("alpha*y'*exp(alpha*y)"));
}

TEST_CASE("beta atoms differentiate and reduce") {
    JetExpr b = JetExpr::beta_fn();
    JetExpr b4 = total_derivative(total_derivative(total_derivative(total_derivative(b))));
    CHECK(b4 == JetExpr::beta_fn(4));
    CHECK(reduce_beta(b4, 4) == E("-lambda*beta(x)"));
    CHECK(reduce_beta(JetExpr::beta_fn(5), 2) == E("lambda^2*beta'(x)"));
    CHECK(reduce_beta(JetExpr::beta_fn(4), 2) == E("lambda^2*beta(x)"));
}

TEST_CASE("zero expression is a fixed point of every operator") {
    JetExpr z;
    CHECK(z.order() == -1);
    CHECK(total_derivative(z).is_zero());
    CHECK(higher_euler(z, 0, OrderBound{4}).is_zero());
    CHECK(substitute_on_solutions(z, EquationSpec::power(2, Rat(-5, 3))).is_zero());
    CHECK(is_total_derivative(z, OrderBound{2})->is_zero());
}

TEST_CASE("equation spec guards") {
    CHECK_THROWS_AS(EquationSpec::power(2, Rat(0)), std::invalid_argument);
    CHECK_THROWS_AS(EquationSpec::power(2, Rat(1)), std::invalid_argument);
    CHECK_THROWS_AS(EquationSpec::symbolic(1, E("x*y")), std::invalid_argument);
    CHECK_THROWS_AS(EquationSpec::symbolic(1, E("y'")), std::invalid_argument);
    EquationSpec sym = EquationSpec::symbolic(1, E("lambda*y^2 + y"));
    CHECK(sym.lhs() == E("y'' + lambda*y^2 + y"));
}
