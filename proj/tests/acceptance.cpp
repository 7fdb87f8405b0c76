// Acceptance suite: one pass/fail line per criterion, exit nonzero on any
// failure. Run directly or through ctest.
#include "hopital2d/generator.hpp"
#include "hopital2d/oracle.hpp"
#include "hopital2d/parser.hpp"

#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hopital2d;

namespace {

int failures = 0;

void criterion(int n, const std::string& name, const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << n << ": " << name;
    if (!ok && !detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << "\n";
    if (!ok) ++failures;
}

LimitPoint origin() { return LimitPoint::finite(0, 0); }

bool expect(bool cond, const std::string& msg, std::string& detail) {
    if (!cond && detail.empty()) detail = msg;
    return cond;
}

} // namespace

int main() {
    // 1. first-order worked example with its exact tensor entries
    criterion(1, "first-order criterion on the cubic-difference quotient", [](std::string& d) {
        LimitPoint p = LimitPoint::finite(1, 1);
        DerivativeTensor tf = derivative_tensor(parse("x^2 + 2*x*y - 3*y^2"), p, 1);
        DerivativeTensor tg = derivative_tensor(parse("x^3 - y^3"), p, 1);
        bool tensors = tf.entries[1].is_exact() && tf.entries[1].exact == 4 &&
                       tf.entries[0].exact == -4 && tg.entries[1].exact == 3 &&
                       tg.entries[0].exact == -3;
        if (!expect(tensors, "tensor entries differ from 4,-4,3,-3", d)) return false;
        LimitVerdict v =
            decide(parse("x^2 + 2*x*y - 3*y^2"), parse("x^3 - y^3"), p);
        return expect(v.result == LimitVerdict::Result::Exists && v.value.is_exact() &&
                          v.value.exact == Rational(4, 3) && v.label == CaseLabel::Theorem1,
                      "verdict is not Exists(4/3) under Theorem1", d);
    });

    // 2. second-order nonexistence plus numeric refutation
    criterion(2, "second-order refutation of the alternating quadratic quotient",
              [](std::string& d) {
        ExprPtr f = parse("x^2 + x*y + y^2");
        ExprPtr g = parse("x^2 - x*y + y^2");
        LimitVerdict v = decide(f, g, origin());
        if (!expect(v.result == LimitVerdict::Result::NotExists && v.order == 2,
                    "engine verdict is not NotExists at order 2", d))
            return false;
        oracle::OracleVerdict o =
            oracle::verify(f, g, origin(), oracle::default_family(origin()));
        if (!expect(o.kind == oracle::OracleVerdict::Kind::Disagree,
                    "oracle did not flag disagreement", d))
            return false;
        double hi = o.estimates[o.curve_a].value;
        double lo = o.estimates[o.curve_b].value;
        // directional values range over [1/3, 3]
        return expect(hi <= 3.0 + 1e-6 && lo >= 1.0 / 3.0 - 1e-6 && hi - lo > 1e-3,
                      "witness estimates fail to bracket [1/3, 3]", d);
    });

    // 3. first-order generation with the published constants
    criterion(3, "first-order problem generation", [](std::string& d) {
        GeneratedProblem prob = construct_order1(parse("x^2*y + x + y"), parse("x^2*y^2 + x*y"),
                                                 LimitPoint::finite(1, 1), Rational(2));
        if (!expect(prob.constants.at("C1") == 3 && prob.constants.at("C2") == 4,
                    "constants are not C1=3, C2=4", d))
            return false;
        if (!expect(equal(prob.numerator, simplify(parse("x^2*y + 4*x + 5*y - 10"))),
                    "numerator does not simplify to x^2*y + 4*x + 5*y - 10", d))
            return false;
        LimitVerdict v = decide(prob.numerator, prob.denominator, prob.point);
        return expect(v.result == LimitVerdict::Result::Exists && v.value.is_exact() &&
                          v.value.exact == 2,
                      "round trip is not Exists(2)", d);
    });

    // 4. second-order generation with the published constants and display pair
    criterion(4, "second-order problem generation", [](std::string& d) {
        GeneratedProblem prob = construct_order2(parse("x^2*y + x + y"), parse("x^2*y^2 + x*y"),
                                                 LimitPoint::finite(1, 1), Rational(2));
        if (!expect(prob.constants.at("C1*") == 1 && prob.constants.at("C2*") == 8 &&
                        prob.constants.at("C3*") == 2,
                    "constants are not C1*=1, C2*=8, C3*=2", d))
            return false;
        bool display =
            equal(prob.numerator,
                  simplify(parse("x^2*y + x^2 + 8*x*y - 12*x + 2*y^2 - 13*y + 13"))) &&
            equal(prob.denominator, simplify(parse("x^2*y^2 + x*y - 3*x - 3*y + 4")));
        if (!expect(display, "final display pair differs", d)) return false;
        LimitVerdict v = decide(prob.numerator, prob.denominator, prob.point);
        if (!expect(v.result == LimitVerdict::Result::Exists && v.value.is_exact() &&
                        v.value.exact == 2 && v.order == 2,
                    "round trip is not Exists(2) at order 2", d))
            return false;
        bool ratios = v.ratios.size() == 3;
        for (const auto& r : v.ratios)
            ratios = ratios && r.status == RatioEntry::Status::Ratio && r.ratio.is_exact() &&
                     r.ratio.exact == 2;
        if (!expect(ratios, "second-derivative ratios are not all exactly 2", d)) return false;
        return expect(v.has_flag(Flag::DegenerateDirection),
                      "DegenerateDirection flag missing (discriminant 84 > 0)", d);
    });

    // 5. three introductory limits
    criterion(5, "introductory limits (matched zeros, order mismatch, infinity)",
              [](std::string& d) {
        ExprPtr f1 = parse("x^2 + y^2");
        ExprPtr g1 = parse("sqrt(x^2 + y^2 + 1) - 1");
        LimitVerdict v1 = decide(f1, g1, origin());
        if (!expect(v1.result == LimitVerdict::Result::Exists && v1.value.is_exact() &&
                        v1.value.exact == 2 && v1.label == CaseLabel::MixedZeroConventionN &&
                        v1.has_flag(Flag::BeyondPaper),
                    "sqrt quotient is not Exists(2) via the matched-zero convention", d))
            return false;
        oracle::OracleVerdict o1 =
            oracle::verify(f1, g1, origin(), oracle::default_family(origin()));
        if (!expect(o1.kind == oracle::OracleVerdict::Kind::AllAgree &&
                        std::fabs(o1.value - 2.0) < 1e-6,
                    "oracle does not agree near 2 for the sqrt quotient", d))
            return false;

        LimitVerdict v2 = decide(parse("x^2*y"), parse("x^2 + y^2"), origin());
        if (!expect(v2.result == LimitVerdict::Result::Exists && v2.value.is_exact() &&
                        v2.value.exact == 0 && v2.label == CaseLabel::OrderMismatch,
                    "x^2*y/(x^2+y^2) is not Exists(0) via OrderMismatch", d))
            return false;

        LimitPoint pinf{Coord::plus_inf(), Coord::plus_inf()};
        LimitVerdict v3 =
            decide(parse("2*x^2 + 2*y^2 + x + y"), parse("3*x^2 + 3*y^2"), pinf);
        return expect(v3.result == LimitVerdict::Result::Exists && v3.value.is_exact() &&
                          v3.value.exact == Rational(2, 3),
                      "quotient at infinity is not Exists(2/3)", d);
    });

    // 6. directional refutation at infinity
    criterion(6, "curve refutation of the quartic mix at infinity", [](std::string& d) {
        ExprPtr f = parse("x^4 + y^2");
        ExprPtr g = parse("x^2 + y^4");
        LimitPoint pinf{Coord::plus_inf(), Coord::plus_inf()};
        oracle::Curve gamma1{Rational(1), Rational(1), 1, 4, "gamma1"};
        oracle::Curve gamma2{Rational(1), Rational(1), 2, 1, "gamma2"};
        oracle::DirectionalEstimate e1 = oracle::estimate_along(f, g, pinf, gamma1);
        oracle::DirectionalEstimate e2 = oracle::estimate_along(f, g, pinf, gamma2);
        if (!expect(e1.kind == oracle::DirectionalEstimate::Kind::Converged &&
                        std::fabs(e1.value) < 1e-6,
                    "gamma1 estimate is not Converged(0)", d))
            return false;
        return expect(e2.kind == oracle::DirectionalEstimate::Kind::Diverged && e2.sign > 0,
                      "gamma2 estimate is not Diverged(+)", d);
    });

    // 7. property suites
    criterion(7, "property suites (a)-(d)", [](std::string& d) {
        // (a) symbolic vs finite-difference derivatives, 200 random cases
        {
            std::mt19937 rng(987654);
            // small coefficients/degrees and points inside the unit box keep
            // the O(h^2) truncation error well under the tolerance
            std::uniform_int_distribution<int> coeff(-4, 4), expo(0, 2), nterms(2, 4),
                num(-3, 3), pickf(0, 2);
            int done = 0, guard = 0;
            while (done < 200 && guard < 2000) {
                ++guard;
                std::vector<ExprPtr> terms;
                int n = nterms(rng);
                for (int i = 0; i < n; ++i) {
                    int c = coeff(rng);
                    if (c == 0) c = 1;
                    terms.push_back(make_mul({make_const(c), make_pow(make_var("x"), expo(rng)),
                                              make_pow(make_var("y"), expo(rng))}));
                }
                ExprPtr e = make_add(std::move(terms));
                int pf = pickf(rng);
                if (pf == 1) e = make_func(FuncKind::Sin, e);
                if (pf == 2) e = make_func(FuncKind::Arctan, e);
                Rational x(num(rng), 4), y(num(rng), 4);
                bool wrt_x = (guard % 2) == 0;
                ExprPtr dd = partial(e, wrt_x ? "x" : "y");
                const Rational h(1, 100000);
                auto value = [&](const Rational& xx, const Rational& yy) {
                    return eval(e, hopital2d::bind(xx, yy)).as_double();
                };
                double sym = eval(dd, hopital2d::bind(x, y)).as_double();
                double fd = wrt_x ? (value(x + h, y) - value(x - h, y)) / (2 * to_double(h))
                                  : (value(x, y + h) - value(x, y - h)) / (2 * to_double(h));
                if (std::isnan(sym) || std::isnan(fd)) continue;
                double scale = std::max({std::fabs(sym), std::fabs(fd), 1.0});
                if (!expect(std::fabs(sym - fd) <= 1e-6 * scale,
                            "(a) finite-difference mismatch", d))
                    return false;
                ++done;
            }
            if (!expect(done == 200, "(a) could not build 200 cases", d)) return false;
        }

        // (b) generator round trip over 100 seeded random polynomial pairs
        {
            std::mt19937 rng(13579);
            std::uniform_int_distribution<int> coeff(-4, 4), expo(0, 2), nterms(2, 4),
                kn(-6, 6), kd(1, 4), pt(-2, 2);
            auto poly = [&]() {
                std::vector<ExprPtr> terms;
                int n = nterms(rng);
                for (int i = 0; i < n; ++i) {
                    int c = coeff(rng);
                    if (c == 0) c = 2;
                    terms.push_back(make_mul({make_const(c),
                                              make_pow(make_var("x"), expo(rng)),
                                              make_pow(make_var("y"), expo(rng))}));
                }
                return make_add(std::move(terms));
            };
            int built = 0, attempts = 0;
            while (built < 100 && attempts < 3000) {
                ++attempts;
                GeneratedProblem prob;
                try {
                    prob = construct_order1(poly(), poly(),
                                            LimitPoint::finite(pt(rng), pt(rng)),
                                            Rational(kn(rng), kd(rng)));
                } catch (const GeneratorError&) {
                    continue;
                }
                LimitVerdict v = decide(prob.numerator, prob.denominator, prob.point);
                if (!expect(v.result == LimitVerdict::Result::Exists && v.value.is_exact() &&
                                v.value.exact == prob.target,
                            "(b) round trip broke", d))
                    return false;
                ++built;
            }
            if (!expect(built == 100, "(b) could not build 100 problems", d)) return false;
        }

        // (c) scaling and reciprocal equivariance over a decision corpus
        {
            struct Case {
                const char* num;
                const char* den;
                LimitPoint p;
            };
            const std::vector<Case> corpus = {
                {"x^2 + 2*x*y - 3*y^2", "x^3 - y^3", LimitPoint::finite(1, 1)},
                {"x^2*y + 4*x + 5*y - 10", "x^2*y^2 + x*y - 2", LimitPoint::finite(1, 1)},
                {"2*x + 3*y", "x + y", origin()},
                {"x^2 + y^2", "3*x^2 + 3*y^2", origin()},
                {"5*x^2 + 5*y^2", "x^2 + y^2", origin()},
                {"x", "x", origin()},
            };
            const Rational c(7, 2);
            for (const auto& cs : corpus) {
                ExprPtr f = parse(cs.num), g = parse(cs.den);
                LimitVerdict base = decide(f, g, cs.p);
                LimitVerdict scaled = decide(make_mul({make_const(c), f}), g, cs.p);
                if (!expect(base.result == scaled.result, "(c) scaling changed the verdict", d))
                    return false;
                if (base.result == LimitVerdict::Result::Exists && base.value.is_exact()) {
                    if (!expect(scaled.value.is_exact() &&
                                    scaled.value.exact == c * base.value.exact,
                                "(c) scaled value mismatch", d))
                        return false;
                    if (base.value.exact != 0) {
                        LimitVerdict flipped = decide(g, f, cs.p);
                        if (!expect(flipped.result == LimitVerdict::Result::Exists &&
                                        flipped.value.is_exact() &&
                                        flipped.value.exact == 1 / base.value.exact,
                                    "(c) reciprocal value mismatch", d))
                            return false;
                    }
                }
            }
        }

        // (d) dispatch totality over all 16 first-order zero patterns
        {
            auto mk = [](int a, int b) {
                return make_add({make_mul({make_const(a), make_var("x")}),
                                 make_mul({make_const(b), make_var("y")}),
                                 make_pow(make_var("x"), 2), make_pow(make_var("y"), 2)});
            };
            for (int mask = 0; mask < 16; ++mask) {
                int fa = (mask & 1) ? 2 : 0;
                int fb = (mask & 2) ? 3 : 0;
                int ga = (mask & 4) ? 4 : 0;
                int gb = (mask & 8) ? 5 : 0;
                LimitVerdict v = decide(mk(fa, fb), mk(ga, gb), origin());
                bool decided = v.result == LimitVerdict::Result::Exists ||
                               v.result == LimitVerdict::Result::NotExists ||
                               v.result == LimitVerdict::Result::InfiniteMagnitude;
                if (!expect(decided, "(d) pattern " + std::to_string(mask) + " undecided", d))
                    return false;
            }
        }
        return true;
    });

    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
