#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieode/parse.hpp"
#include "test_util.hpp"

using namespace lieode;
using testutil::Rng;

TEST_CASE("parsing the grammar") {
    CHECK(parse("0").is_zero());
    CHECK(parse("x") == JetExpr::x());
    CHECK(parse("y'''") == JetExpr::jet(3));
    CHECK(parse("y^(4)") == JetExpr::jet(4));
    CHECK(parse("y^4") == JetExpr::y(Rat(4)));
    CHECK(parse("y^(-5/3)") == JetExpr::y(Rat(-5, 3)));
    CHECK(parse("(y'')^2") == JetExpr::jet(2, 2));
    CHECK(parse("lambda^2*alpha^(-1)") == JetExpr::sym(Sym::lambda, 2) * JetExpr::sym(Sym::alpha, -1));
    CHECK(parse("3/2*x^2*y'") == JetExpr::x(2) * JetExpr::jet(1) * JetExpr::constant(Rat(3, 2)));
    CHECK(parse("y - y") == JetExpr::zero());
    CHECK(parse("-y^(-2)") == -JetExpr::y(Rat(-2)));
    CHECK(parse("2^3") == JetExpr::constant(Rat(8)));
    CHECK(parse("(x + y)^2") == parse("x^2 + 2*x*y + y^2"));
}

TEST_CASE("atom parsing") {
    CHECK(parse("exp(alpha*y)") == JetExpr::atom_term(AtomKind::exp_y, AtomArg{Rat(1), int(Sym::alpha)}));
    CHECK(parse("sin(2*mu*x)") == JetExpr::atom_term(AtomKind::sin_x, AtomArg{Rat(2), int(Sym::mu)}));
    CHECK(parse("cos(-x)") == JetExpr::atom_term(AtomKind::cos_x, AtomArg{Rat(1), -1}));
    CHECK(parse("sin(-x)") == -JetExpr::atom_term(AtomKind::sin_x, AtomArg{Rat(1), -1}));
    CHECK(parse("beta''(x)") == JetExpr::beta_fn(2));
    CHECK(parse("beta^(6)(x)") == JetExpr::beta_fn(6));
    CHECK_THROWS_AS(parse("sin(y)"), ParseError);
    CHECK_THROWS_AS(parse("exp(x*y)"), ParseError);
    CHECK_THROWS_AS(parse("exp(x^2)"), ParseError);
}

TEST_CASE("parse errors carry positions") {
    try {
        parse("y' + $");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.position == 5);
    }
    CHECK_THROWS_AS(parse("(y'"), ParseError);
    CHECK_THROWS_AS(parse("y^(1/0)"), ParseError);
    CHECK_THROWS_AS(parse("foo"), ParseError);
    CHECK_THROWS_AS(parse("x 3"), ParseError);
}

TEST_CASE("printing canonical forms") {
    CHECK(to_string(JetExpr::zero()) == "0");
    CHECK(to_string(parse("y'' + lambda*y^(-3)")) == "y'' + lambda*y^(-3)");
    CHECK(to_string(parse("-1/2*(y')^2")) == "-1/2*(y')^2");
    CHECK(to_string(parse("y^(5)*y''")) == "y''*y^(5)");
    CHECK(to_string(parse("x^2 - 1")) == "x^2 - 1");
}

TEST_CASE("round trip: parse(print(e)) == e") {
    Rng rng(71);
    for (int trial = 0; trial < 60; ++trial) {
        JetExpr e = testutil::random_expr(rng, 5, 5, testutil::Atoms::trig, true);
        CHECK(parse(to_string(e)) == e);
    }
    // atoms with parameters and beta derivatives round trip too
    for (const char* s : {"exp(-1/2*alpha*y)", "sin(3*mu*x)*y^(4)", "beta'''(x)*x^2",
                          "beta^(7)(x)", "cos(2*x) - sin(2*x)", "mu*y^(-7/5)"}) {
        JetExpr e = parse(s);
        CHECK(parse(to_string(e)) == e);
    }
}
