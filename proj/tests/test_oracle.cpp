#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hopital2d/oracle.hpp"
#include "hopital2d/parser.hpp"

#include <cmath>

using namespace hopital2d;

namespace {

LimitPoint origin() { return LimitPoint::finite(0, 0); }
LimitPoint both_inf() { return {Coord::plus_inf(), Coord::plus_inf()}; }

} // namespace

TEST_CASE("two curves give opposite answers for the quartic mix at infinity") {
    ExprPtr f = parse("x^4 + y^2");
    ExprPtr g = parse("x^2 + y^4");
    // along (t, t^4) the quotient goes to 0; along (t^2, t) it blows up
    oracle::Curve gamma1{Rational(1), Rational(1), 1, 4, "gamma1 (t, t^4)"};
    oracle::Curve gamma2{Rational(1), Rational(1), 2, 1, "gamma2 (t^2, t)"};

    oracle::DirectionalEstimate e1 = oracle::estimate_along(f, g, both_inf(), gamma1);
    REQUIRE(e1.kind == oracle::DirectionalEstimate::Kind::Converged);
    CHECK(std::fabs(e1.value) < 1e-6);

    oracle::DirectionalEstimate e2 = oracle::estimate_along(f, g, both_inf(), gamma2);
    REQUIRE(e2.kind == oracle::DirectionalEstimate::Kind::Diverged);
    CHECK(e2.sign > 0);
}

TEST_CASE("identical numerator and denominator converge to one on any curve") {
    ExprPtr f = parse("x^2*y + x + y");
    for (const auto& c : oracle::default_family(origin())) {
        oracle::DirectionalEstimate e = oracle::estimate_along(f, f, origin(), c);
        if (e.kind == oracle::DirectionalEstimate::Kind::Unusable) continue;
        REQUIRE(e.kind == oracle::DirectionalEstimate::Kind::Converged);
        CHECK(e.value == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("line estimates recover the slope-dependent directional values") {
    // (x^2 + x*y + y^2)/(x^2 - x*y + y^2) along y = r*x equals
    // (1 + r + r^2)/(1 - r + r^2); r = 1 gives 3, r = -1 gives 1/3
    ExprPtr f = parse("x^2 + x*y + y^2");
    ExprPtr g = parse("x^2 - x*y + y^2");
    oracle::Curve diag{Rational(1), Rational(1), 1, 1, "diagonal"};
    oracle::Curve anti{Rational(1), Rational(-1), 1, 1, "antidiagonal"};
    oracle::DirectionalEstimate e1 = oracle::estimate_along(f, g, origin(), diag);
    oracle::DirectionalEstimate e2 = oracle::estimate_along(f, g, origin(), anti);
    REQUIRE(e1.kind == oracle::DirectionalEstimate::Kind::Converged);
    REQUIRE(e2.kind == oracle::DirectionalEstimate::Kind::Converged);
    CHECK(e1.value == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(e2.value == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("verify flags disagreement across the family") {
    oracle::OracleVerdict v =
        oracle::verify(parse("x^2 + x*y + y^2"), parse("x^2 - x*y + y^2"), origin(),
                       oracle::default_family(origin()));
    CHECK(v.kind == oracle::OracleVerdict::Kind::Disagree);
    // the witness pair brackets the spread of directional values
    double hi = v.estimates[v.curve_a].value;
    double lo = v.estimates[v.curve_b].value;
    CHECK(hi > lo);
    CHECK(hi <= 3.0 + 1e-6);
    CHECK(lo >= 1.0 / 3.0 - 1e-6);
}

TEST_CASE("verify agrees on a genuinely existing limit") {
    oracle::OracleVerdict v =
        oracle::verify(parse("x^2 + y^2"), parse("sqrt(x^2 + y^2 + 1) - 1"), origin(),
                       oracle::default_family(origin()));
    REQUIRE(v.kind == oracle::OracleVerdict::Kind::AllAgree);
    CHECK(v.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("high-precision sampling survives catastrophic cancellation") {
    // in double precision sqrt(1 + 1e-14) - 1 loses most significant digits;
    // the estimate must still land within the oracle tolerance
    ExprPtr f = parse("x^2 + y^2");
    ExprPtr g = parse("sqrt(x^2 + y^2 + 1) - 1");
    oracle::Curve diag{Rational(1), Rational(1), 1, 1, "diagonal"};
    oracle::DirectionalEstimate e = oracle::estimate_along(f, g, origin(), diag);
    REQUIRE(e.kind == oracle::DirectionalEstimate::Kind::Converged);
    CHECK(e.value == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("axis curves that sit in the zero set are unusable, not fatal") {
    // numerator and denominator both vanish identically on the line y = x
    ExprPtr f = parse("(x - y)*(x + y)");
    ExprPtr g = parse("(x - y)*(x + 2*y)");
    oracle::Curve diag{Rational(1), Rational(1), 1, 1, "diagonal"};
    oracle::DirectionalEstimate e = oracle::estimate_along(f, g, origin(), diag);
    CHECK(e.kind == oracle::DirectionalEstimate::Kind::Unusable);
    // verify still reaches a verdict from the remaining curves
    oracle::OracleVerdict v =
        oracle::verify(f, g, origin(), oracle::default_family(origin()));
    CHECK(v.kind != oracle::OracleVerdict::Kind::Unclear);
}

TEST_CASE("iterated limits agree for a quotient with equal repeated limits") {
    oracle::OracleVerdict v = oracle::verify(parse("x^2 + y^2"), parse("3*x^2 + 3*y^2"),
                                             origin(), oracle::default_family(origin()));
    REQUIRE(v.iterated.x_then_y.has_value());
    REQUIRE(v.iterated.y_then_x.has_value());
    CHECK(*v.iterated.x_then_y == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
    CHECK(*v.iterated.y_then_x == doctest::Approx(1.0 / 3.0).epsilon(1e-5));
}

TEST_CASE("iterated limits differ when the axis values differ") {
    // x^2/(x^2 + y^2): lim_x lim_y gives 1, lim_y lim_x gives 0
    oracle::OracleVerdict v = oracle::verify(parse("x^2"), parse("x^2 + y^2"), origin(),
                                             oracle::default_family(origin()));
    REQUIRE(v.iterated.x_then_y.has_value());
    REQUIRE(v.iterated.y_then_x.has_value());
    CHECK(*v.iterated.x_then_y == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::fabs(*v.iterated.y_then_x) < 1e-3);
}

TEST_CASE("fuzz families are deterministic per seed") {
    auto a = oracle::fuzz_family(12345);
    auto b = oracle::fuzz_family(12345);
    auto c = oracle::fuzz_family(54321);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ax == b[i].ax);
        CHECK(a[i].ay == b[i].ay);
        CHECK(a[i].px == b[i].px);
        CHECK(a[i].py == b[i].py);
    }
    bool same = true;
    for (size_t i = 0; i < std::min(a.size(), c.size()); ++i)
        same = same && a[i].ax == c[i].ax && a[i].ay == c[i].ay;
    CHECK_FALSE(same);
}

TEST_CASE("oracle disagreement is sound, not a sampling artifact") {
    // substitute y = u*x symbolically: the quotient collapses to a function
    // of u alone, so distinct u values are exact directional limits
    ExprPtr f = parse("x^2 + x*y + y^2");
    ExprPtr g = parse("x^2 - x*y + y^2");
    auto along = [&](const Rational& u) {
        std::map<std::string, ExprPtr> sub = {{"y", make_mul({make_const(u), make_var("x")})}};
        ExprPtr fu = substitute(f, sub);
        ExprPtr gu = substitute(g, sub);
        // both are now c * x^2; their quotient is the constant ratio
        ExprPtr q = simplify(make_div(fu, gu));
        REQUIRE(q->kind == NodeKind::Const);
        return q->value;
    };
    CHECK(along(Rational(1)) == 3);
    CHECK(along(Rational(-1)) == Rational(1, 3));
}
