#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hopital2d/parser.hpp"
#include "hopital2d/simplify.hpp"
#include "hopital2d/eval.hpp"

#include <string>
#include <vector>

using namespace hopital2d;

namespace {

const std::vector<std::string> kCorpus = {
    "x",
    "y",
    "3",
    "-3",
    "1/2",
    "x + y",
    "x - y",
    "x*y",
    "x/y",
    "x^2",
    "x^3 - y^3",
    "x^2 + 2*x*y - 3*y^2",
    "x^2 + x*y + y^2",
    "x^2 - x*y + y^2",
    "x^2*y + x + y",
    "x^2*y^2 + x*y",
    "x^2*y + 4*x + 5*y - 10",
    "x^2*y^2 + x*y - 2",
    "x^2 + y^2",
    "x^2*y",
    "sqrt(x^2 + y^2 + 1) - 1",
    "2*x^2 + 2*y^2 + x + y",
    "3*x^2 + 3*y^2",
    "x^4 + y^2",
    "x^2 + y^4",
    "sin(x)",
    "cos(x*y)",
    "exp(x + y)",
    "ln(x^2 + 1)",
    "arctan(y/x)",
    "sqrt(x)*y",
    "x/(x + y)",
    "(x + y)/(x - y)",
    "(x + y)^2",
    "(x - y)^3",
    "-(x^2)",
    "-x",
    "2*x - 3*y + 4",
    "x^2/y^2",
    "1/(x^2 + y^2)",
    "x*y/(x^2 + y^2)",
    "x^2*y/(x^4 + y^2)",
    "5/7",
    "x^2 - 2*x + 1",
    "y^3 + 3*y^2 + 3*y + 1",
    "sin(x)/x",
    "exp(x)*cos(y)",
    "sqrt(x^2 + 1)",
    "x + y + x*y + x^2*y^2",
    "x^2*y + x*y^2",
    "(x + 1)*(y - 1)",
    "x^10",
    "x^2*(y + 1)^2",
    "ln(exp(x))",
    "arctan(x) + arctan(y)",
};

} // namespace

TEST_CASE("format/parse round trip over the corpus") {
    REQUIRE(kCorpus.size() >= 50);
    for (const auto& s : kCorpus) {
        CAPTURE(s);
        ExprPtr e = parse(s);
        ExprPtr back = parse(format(e));
        CHECK(equal(e, back));
    }
}

TEST_CASE("simplified forms round trip too") {
    for (const auto& s : kCorpus) {
        CAPTURE(s);
        ExprPtr e = simplify(parse(s));
        ExprPtr back = parse(format(e));
        CHECK(equal(e, back));
    }
}

TEST_CASE("simplify is idempotent") {
    for (const auto& s : kCorpus) {
        CAPTURE(s);
        ExprPtr once = simplify(parse(s));
        ExprPtr twice = simplify(once);
        CHECK(equal(once, twice));
    }
}

TEST_CASE("simplify preserves values at sample points") {
    const std::vector<std::pair<Rational, Rational>> points = {
        {Rational(1), Rational(2)},
        {Rational(-3), Rational(5)},
        {Rational(1, 2), Rational(-1, 3)},
        {Rational(7), Rational(-7)},
    };
    for (const auto& s : kCorpus) {
        ExprPtr raw = parse(s);
        ExprPtr simp = simplify(raw);
        for (const auto& [x, y] : points) {
            CAPTURE(s);
            CAPTURE(to_string(x));
            CAPTURE(to_string(y));
            EvalResult a, b;
            try {
                a = eval(raw, hopital2d::bind(x, y));
                b = eval(simp, hopital2d::bind(x, y));
            } catch (const EvalError&) {
                continue;
            }
            if (a.is_undefined() || b.is_undefined()) continue;
            if (a.is_exact() && b.is_exact()) {
                CHECK(a.exact == b.exact);
            } else {
                CHECK(a.as_double() == doctest::Approx(b.as_double()).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("evaluation is a homomorphism on +, *, -") {
    ExprPtr a = parse("x^2 + 3*y");
    ExprPtr b = parse("x*y - 2");
    Bindings at = hopital2d::bind(Rational(3, 2), Rational(-5));
    EvalResult va = eval(a, at), vb = eval(b, at);
    CHECK(eval(make_add({a, b}), at).exact == va.exact + vb.exact);
    CHECK(eval(make_mul({a, b}), at).exact == va.exact * vb.exact);
    CHECK(eval(make_neg(a), at).exact == -va.exact);
    CHECK(eval(make_div(a, b), at).exact == va.exact / vb.exact);
}

TEST_CASE("exact rational evaluation stays exact") {
    ExprPtr e = parse("(x + y)^2 / (x - y)");
    EvalResult v = eval(e, hopital2d::bind(Rational(1, 3), Rational(1, 7)));
    REQUIRE(v.is_exact());
    // (1/3 + 1/7)^2 / (1/3 - 1/7) = (10/21)^2 / (4/21) = 25/21
    CHECK(v.exact == Rational(25, 21));
}

TEST_CASE("sqrt of a perfect square folds exactly") {
    EvalResult v = eval(parse("sqrt(x^2 + y^2)"), hopital2d::bind(Rational(3), Rational(4)));
    REQUIRE(v.is_exact());
    CHECK(v.exact == 5);
}

TEST_CASE("non-square sqrt falls back to floating point") {
    EvalResult v = eval(parse("sqrt(x)"), hopital2d::bind(Rational(2), Rational(0)));
    REQUIRE(v.kind == EvalResult::Kind::Approx);
    CHECK(v.approx == doctest::Approx(1.41421356237).epsilon(1e-9));
}

TEST_CASE("basic algebraic simplifications") {
    CHECK(equal(simplify(parse("x + x")), parse("2*x")));
    CHECK(equal(simplify(parse("x - x")), make_const(0)));
    CHECK(equal(simplify(parse("x*y/x")), parse("y")));
    CHECK(equal(simplify(parse("(x + y) - y")), parse("x")));
    CHECK(equal(simplify(parse("(x + y)^2")), simplify(parse("x^2 + 2*x*y + y^2"))));
    CHECK(equal(simplify(parse("0*x + 3")), make_const(3)));
    CHECK(equal(simplify(parse("sqrt(4)")), make_const(2)));
    CHECK(equal(simplify(parse("ln(1) + sin(0) + arctan(0)")), make_const(0)));
}

TEST_CASE("as_single_fraction returns a cleared quotient") {
    auto [num, den] = as_single_fraction(parse("x/y + y/x"));
    // (x^2 + y^2) / (x*y)
    CHECK(equal(num, simplify(parse("x^2 + y^2"))));
    CHECK(equal(den, simplify(parse("x*y"))));
}

TEST_CASE("substitute performs capture-free replacement and simplifies") {
    ExprPtr e = parse("x^2 + y");
    ExprPtr out = substitute(e, {{"x", parse("u + 1")}});
    CHECK(equal(out, simplify(parse("u^2 + 2*u + 1 + y"))));
}

TEST_CASE("unary minus binds tighter than the caret") {
    // the grammar reads "-x^2" as (-x)^2
    EvalResult v = eval(parse("-x^2"), hopital2d::bind(Rational(3), Rational(0)));
    REQUIRE(v.is_exact());
    CHECK(v.exact == 9);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse("x + "), ParseError);
    CHECK_THROWS_AS(parse("x ** y"), ParseError);
    CHECK_THROWS_AS(parse("foo(x)"), ParseError);
    CHECK_THROWS_AS(parse("(x + y"), ParseError);
    try {
        parse("x + @");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
}

TEST_CASE("power requires an integer exponent") {
    CHECK_THROWS_AS(parse("x^y"), ParseError);
    CHECK_THROWS_AS(parse("x^(1/2)"), ParseError);
    CHECK(equal(parse("x^0"), make_const(1)));
}
