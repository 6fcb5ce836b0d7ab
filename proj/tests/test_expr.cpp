#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "transurf/expr.hpp"

using namespace transurf;

namespace {

// Central difference with the step convention used throughout the tests.
template <typename F>
double central_diff(F&& f, double x) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

TEST_CASE("parse and evaluate a polynomial") {
    Expr e = parse("u^2/2 + 3*u", "u");
    CHECK(eval(e, {{"u", 2.0}}) == doctest::Approx(8.0).epsilon(1e-15));
    CHECK(eval(e, {{"u", -1.0}}) == doctest::Approx(-2.5).epsilon(1e-15));
}

TEST_CASE("parse tree shape matches the grammar") {
    Expr e = parse("tan(u/2)", "u");
    REQUIRE(e->kind() == NodeKind::Call);
    CHECK(e->func() == Func::Tan);
    REQUIRE(e->child()->kind() == NodeKind::Div);
    CHECK(e->child()->left()->kind() == NodeKind::Variable);
    CHECK(e->child()->left()->name() == "u");
    CHECK(e->child()->right()->kind() == NodeKind::Constant);
    CHECK(e->child()->right()->value() == 2.0);
}

TEST_CASE("exponentiation binds tighter than unary minus per the grammar") {
    // "-u^2" is (-u)^2 under this grammar: unary binds before '^' is consumed.
    Expr e = parse("-u^2", "u");
    REQUIRE(e->kind() == NodeKind::Pow);
    CHECK(e->left()->kind() == NodeKind::Neg);
    CHECK(eval(e, {{"u", 3.0}}) == doctest::Approx(9.0));
    // Right-associativity: u^2^3 = u^(2^3).
    CHECK(eval(parse("2^2^3", "u"), {}) == doctest::Approx(256.0));
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_WITH_AS(parse("u + * v", "u"), doctest::Contains("offset 4"), ParseError);
    try {
        parse("u + * v", "u");
    } catch (const ParseError& pe) {
        CHECK(pe.offset == 4);
    }
    CHECK_THROWS_AS(parse("2u", "u"), ParseError);        // implicit product is not grammar
    CHECK_THROWS_AS(parse("(u + 1", "u"), ParseError);    // unbalanced parenthesis
    CHECK_THROWS_AS(parse("", "u"), ParseError);
    CHECK_THROWS_AS(parse("foo(u)", "u"), ParseError);    // unknown function
    CHECK_THROWS_AS(parse("v + 1", "u"), ParseError);     // other coordinate rejected
    CHECK_THROWS_AS(parse("u + 1 @", "u"), ParseError);   // stray character
}

TEST_CASE("identifiers that are not coordinates become parameters") {
    Expr e = parse("(2/c)*log(cos(c*u/2))", "u");
    const double c = 1.0, u = 1.0;
    const double expected = (2 / c) * std::log(std::cos(c * u / 2));
    CHECK(eval(e, {{"u", u}, {"c", c}}) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(eval(e, {{"u", u}}), EvalError);  // parameter left unbound
}

TEST_CASE("numeric literal forms") {
    CHECK(eval(parse("1e-3", "u"), {}) == doctest::Approx(1e-3));
    CHECK(eval(parse(".5 + 2.", "u"), {}) == doctest::Approx(2.5));
    CHECK(eval(parse("1.5E+2", "u"), {}) == doctest::Approx(150.0));
}

TEST_CASE("comments terminate the expression") {
    Expr e = parse("u + 1 # trailing note", "u");
    CHECK(eval(e, {{"u", 1.0}}) == doctest::Approx(2.0));
}

TEST_CASE("print/parse round trip on fixed strings") {
    for (const char* s : {
             "u^2/2 + 3*u",
             "tan(u/2)",
             "(2/c)*log(cos(c*u/2))",
             "-(1/p)*log(cos(p*u + q))",
             "c*u^(4/3)",
             "-u^2",
             "u^-2",
             "(u^2)^3",
             "1 - u - 2*u - 3",
             "u/(a*u)/2",
             "sqrt(abs(u - 1))",
             "exp(u)*sinh(u)/cosh(u) - tanh(u)",
         }) {
        Expr once = parse(s, "u");
        Expr twice = parse(to_string(once), "u");
        CAPTURE(s);
        CAPTURE(to_string(once));
        CHECK(structurally_equal(once, twice));
    }
}

namespace {

Expr random_tree(std::mt19937& rng, int depth) {
    auto pick = [&](int n) { return static_cast<int>(rng() % n); };
    if (depth <= 0) {
        switch (pick(4)) {
            case 0: return ExprNode::variable("u");
            case 1: return ExprNode::parameter(pick(2) ? "a" : "c");
            case 2: return ExprNode::constant(std::array{0.0, 1.0, 2.0, 0.5, 3.25, 10.0}[pick(6)]);
            default: return ExprNode::constant(static_cast<double>(pick(7)));
        }
    }
    switch (pick(8)) {
        case 0: return ExprNode::add(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 1: return ExprNode::sub(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 2: return ExprNode::mul(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 3: return ExprNode::div(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 4: return ExprNode::neg(random_tree(rng, depth - 1));
        case 5: return ExprNode::pow(random_tree(rng, depth - 1), random_tree(rng, depth - 1));
        case 6: {
            auto f = std::array{Func::Sin, Func::Cos, Func::Tan,  Func::Sinh, Func::Cosh,
                                Func::Tanh, Func::Exp, Func::Log, Func::Sqrt, Func::Abs}[pick(10)];
            return ExprNode::call(f, random_tree(rng, depth - 1));
        }
        default: return random_tree(rng, 0);
    }
}

}  // namespace

TEST_CASE("print/parse round trip on random trees") {
    std::mt19937 rng(20240817);
    for (int i = 0; i < 500; i++) {
        Expr t = random_tree(rng, 4);
        std::string s = to_string(t);
        CAPTURE(s);
        Expr back = parse(s, "u");
        CHECK(structurally_equal(t, back));
        CHECK(structurally_equal(back, parse(to_string(back), "u")));
    }
}

TEST_CASE("derivative of tan(u/2) evaluates like 0.5/cos^2(u/2)") {
    Expr d = differentiate(parse("tan(u/2)", "u"), "u");
    for (double u : {-2.9, -1.3, 0.0, 0.4, 1.7, 2.9}) {
        const double expected = 0.5 / std::pow(std::cos(u / 2), 2);
        CHECK(eval(d, {{"u", u}}) == doctest::Approx(expected).epsilon(1e-13));
    }
}

TEST_CASE("derivatives agree with central differences") {
    const char* exprs[] = {
        "u^3 - 2*u + 1", "sin(u)*cos(u)", "log(cosh(u))", "exp(u/2)/(1 + u^2)",
        "sqrt(u^2 + 1)", "tanh(u)^3",     "2^u",          "u^u",
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.1, 2.5);
    for (const char* s : exprs) {
        Expr e = parse(s, "u");
        Expr d = differentiate(e, "u");
        for (int i = 0; i < 100; i++) {
            const double x = dist(rng);
            auto f = [&](double t) { return eval(e, {{"u", t}}); };
            const double fd = central_diff(f, x);
            const double sym = eval(d, {{"u", x}});
            CAPTURE(s);
            CAPTURE(x);
            CHECK(std::abs(sym - fd) <= 1e-6 * (1 + std::abs(sym)));
        }
    }
}

TEST_CASE("fourth derivative of a cubic vanishes identically") {
    Expr e = parse("0.5*u^3 - 4*u^2 + u - 12", "u");
    for (int i = 0; i < 4; i++) e = differentiate(e, "u");
    for (double u : {-3.0, 0.0, 1.5, 11.0}) CHECK(eval(e, {{"u", u}}) == 0.0);
}

TEST_CASE("adding a constant does not change the derivative tree") {
    Expr f = parse("log(cos(u/2))", "u");
    Expr shifted = ExprNode::add(f, ExprNode::constant(3.7));
    CHECK(structurally_equal(differentiate(f, "u"), differentiate(shifted, "u")));
}

TEST_CASE("partial differentiation treats the other coordinate as constant") {
    // Trees mixing u and v arise internally (second-form coefficients).
    Expr alpha = parse("sinh(u)", "u");
    Expr beta = parse("cos(v)", "v");
    Expr delta = fold_add(ExprNode::constant(1),
                          fold_add(fold_mul(alpha, alpha), fold_mul(beta, beta)));
    Expr d_u = differentiate(delta, "u");
    Expr d_v = differentiate(delta, "v");
    Bindings b = {{"u", 0.7}, {"v", 0.3}};
    CHECK(eval(d_u, b) == doctest::Approx(2 * std::sinh(0.7) * std::cosh(0.7)).epsilon(1e-14));
    CHECK(eval(d_v, b) == doctest::Approx(-2 * std::cos(0.3) * std::sin(0.3)).epsilon(1e-14));
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(eval(parse("1/(u - 1)", "u"), {{"u", 1.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("log(u)", "u"), {{"u", 0.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("log(u)", "u"), {{"u", -2.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("sqrt(u)", "u"), {{"u", -1e-9}}), EvalError);
    CHECK_THROWS_AS(eval(parse("u^(1/2)", "u"), {{"u", -4.0}}), EvalError);
    CHECK_THROWS_AS(eval(parse("exp(u)", "u"), {{"u", 1000.0}}), EvalError);  // overflow
    CHECK(eval(parse("u^3", "u"), {{"u", -2.0}}) == doctest::Approx(-8.0));   // integer exponent ok
    CHECK(eval(parse("u^(4/3)", "u"), {{"u", 8.0}}) == doctest::Approx(16.0).epsilon(1e-14));
}

TEST_CASE("eval errors name the offending node") {
    try {
        eval(parse("1 + log(u - 2)", "u"), {{"u", 1.0}});
        FAIL("expected EvalError");
    } catch (const EvalError& err) {
        CHECK(err.node == "log(u - 2)");
    }
}

TEST_CASE("eval_jet of tan(u/2) at 0") {
    Jet3 j = eval_jet(parse("tan(u/2)", "u"), "u", 0.0);
    CHECK(j.value == doctest::Approx(0.0));
    CHECK(j.d1 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(j.d2 == doctest::Approx(0.0));
    CHECK(j.d3 == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("eval_jet of c*u^(4/3) at 1 with c=1") {
    Jet3 j = eval_jet(parse("c*u^(4/3)", "u"), "u", 1.0, {{"c", 1.0}});
    CHECK(j.value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(j.d1 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(j.d2 == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
    CHECK(j.d3 == doctest::Approx(-8.0 / 27.0).epsilon(1e-13));
}

TEST_CASE("eval_jet derivative orders agree with finite differences") {
    Expr e = parse("exp(u/3)*cos(u)", "u");
    for (double x : {-1.0, 0.2, 2.4}) {
        Jet3 j = eval_jet(e, "u", x);
        auto f = [&](double t) { return eval(e, {{"u", t}}); };
        auto f1 = [&](double t) { return eval_jet(e, "u", t).d1; };
        auto f2 = [&](double t) { return eval_jet(e, "u", t).d2; };
        CHECK(std::abs(j.d1 - central_diff(f, x)) <= 1e-6 * (1 + std::abs(j.d1)));
        CHECK(std::abs(j.d2 - central_diff(f1, x)) <= 1e-6 * (1 + std::abs(j.d2)));
        CHECK(std::abs(j.d3 - central_diff(f2, x)) <= 1e-6 * (1 + std::abs(j.d3)));
    }
}

TEST_CASE("jet cache is stable under concurrent first use") {
    Expr e = parse("sin(u)*exp(u) + u^5", "u");
    std::vector<std::thread> pool;
    std::array<Jet3, 8> out{};
    for (int i = 0; i < 8; i++)
        pool.emplace_back([&, i] { out[i] = eval_jet(e, "u", 0.9); });
    for (auto& t : pool) t.join();
    for (int i = 1; i < 8; i++) {
        CHECK(out[i].value == out[0].value);
        CHECK(out[i].d1 == out[0].d1);
        CHECK(out[i].d2 == out[0].d2);
        CHECK(out[i].d3 == out[0].d3);
    }
}
