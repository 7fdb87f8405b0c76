#ifndef HOPITAL2D_GENERATOR_HPP
#define HOPITAL2D_GENERATOR_HPP

#include "lhopital.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace hopital2d {

class GeneratorError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A synthesized indeterminate form with a prescribed limit.
struct GeneratedProblem {
    ExprPtr numerator, denominator;
    LimitPoint point;
    Rational target;
    int order = 1;
    std::map<std::string, Rational> constants; // C1,C2 or C1*,C2*,C3*
    ExprPtr seed_f, seed_g;
    std::set<Flag> flags;
};

namespace detail {

inline Rational exact_entry(const EvalResult& v, const std::string& what) {
    if (!v.is_exact())
        throw GeneratorError("seed is not exactly evaluable at the point (" + what + ")");
    return v.exact;
}

// (x - x0), (y - y0)
inline ExprPtr shifted(const std::string& var, const Rational& v0) {
    if (v0 == 0) return make_var(var);
    return make_add({make_var(var), make_const(-v0)});
}

inline void verify_round_trip(GeneratedProblem& prob, const DecideConfig& cfg) {
    if (prob.numerator->kind == NodeKind::Const)
        throw GeneratorError("construction collapses the numerator to a constant");
    OrderClassification cn = classify_order(prob.numerator, prob.point, cfg.n_max);
    OrderClassification cd = classify_order(prob.denominator, prob.point, cfg.n_max);
    if (!cd.is_infinitesimal() || cd.order != prob.order)
        throw std::logic_error("generated denominator is not infinitesimal of the target order");
    if (prob.target != 0 && (!cn.is_infinitesimal() || cn.order != prob.order))
        throw std::logic_error("generated numerator is not infinitesimal of the target order");
    LimitVerdict v = decide(prob.numerator, prob.denominator, prob.point, cfg);
    bool ok = v.result == LimitVerdict::Result::Exists && v.value.is_exact() &&
              v.value.exact == prob.target;
    if (prob.target == 0)
        ok = v.result == LimitVerdict::Result::Exists && v.value.is_exact() &&
             v.value.exact == 0;
    if (!ok) throw std::logic_error("generated problem failed its own round trip");
    for (Flag f : v.flags) prob.flags.insert(f);
}

} // namespace detail

// First-order construction: numerator = Delta f + C1 (x - x0) + C2 (y - y0),
// denominator = Delta g, with C1 = k g'_x - f'_x and C2 = k g'_y - f'_y so
// every first-order ratio equals k.
inline GeneratedProblem construct_order1(const ExprPtr& f, const ExprPtr& g, const LimitPoint& p,
                                         const Rational& k, const DecideConfig& cfg = {}) {
    if (p.is_infinite()) throw GeneratorError("construction needs a finite point");
    GeneratedProblem prob;
    prob.seed_f = f;
    prob.seed_g = g;
    prob.point = p;
    prob.target = k;
    prob.order = 1;

    Bindings at = point_bindings(p);
    Rational g0 = detail::exact_entry(eval(g, at), "g(x0,y0)");
    ExprPtr delta_g = simplify(make_add({g, make_const(-g0)}), cfg.expand_bound);
    OrderClassification og = classify_order(delta_g, p, 2);
    if (!og.is_infinitesimal() || og.order != 1)
        throw GeneratorError("Delta g is not infinitesimal of the first order at the point");
    const DerivativeTensor& tg = *og.witness;
    if (tg.entry_is_zero(1) || tg.entry_is_zero(0))
        throw GeneratorError("seed g has a vanishing first partial at the point");
    Rational gx = detail::exact_entry(tg.entries[1], "g'_x");
    Rational gy = detail::exact_entry(tg.entries[0], "g'_y");

    Rational f0 = detail::exact_entry(eval(f, at), "f(x0,y0)");
    DerivativeTensor tf = derivative_tensor(f, p, 1);
    Rational fx = detail::exact_entry(tf.entries[1], "f'_x");
    Rational fy = detail::exact_entry(tf.entries[0], "f'_y");

    Rational c1 = k * gx - fx;
    Rational c2 = k * gy - fy;
    prob.constants = {{"C1", c1}, {"C2", c2}};

    ExprPtr delta_f = make_add({f, make_const(-f0)});
    prob.numerator = simplify(make_add({delta_f,
                                        make_mul({make_const(c1), detail::shifted("x", p.x.value)}),
                                        make_mul({make_const(c2), detail::shifted("y", p.y.value)})}),
                              cfg.expand_bound);
    prob.denominator = delta_g;

    if (k == 0) prob.flags.insert(Flag::BeyondPaper); // zero limit is outside Theorem 1
    detail::verify_round_trip(prob, cfg);
    return prob;
}

// Second-order construction: numerator = Delta f - df + C1*(x-x0)^2 +
// C2*(x-x0)(y-y0) + C3*(y-y0)^2, denominator = Delta g - dg, with
// C1* = (k g''_xx - f''_xx)/2, C2* = k g''_xy - f''_xy,
// C3* = (k g''_yy - f''_yy)/2.
inline GeneratedProblem construct_order2(const ExprPtr& f, const ExprPtr& g, const LimitPoint& p,
                                         const Rational& k, const DecideConfig& cfg = {}) {
    if (p.is_infinite()) throw GeneratorError("construction needs a finite point");
    GeneratedProblem prob;
    prob.seed_f = f;
    prob.seed_g = g;
    prob.point = p;
    prob.target = k;
    prob.order = 2;

    Bindings at = point_bindings(p);
    Rational f0 = detail::exact_entry(eval(f, at), "f(x0,y0)");
    Rational g0 = detail::exact_entry(eval(g, at), "g(x0,y0)");

    DerivativeTensor tf1 = derivative_tensor(f, p, 1);
    DerivativeTensor tg1 = derivative_tensor(g, p, 1);
    DerivativeTensor tf2 = derivative_tensor(f, p, 2);
    DerivativeTensor tg2 = derivative_tensor(g, p, 2);
    if (!tf2.mixed_symmetric || !tg2.mixed_symmetric)
        throw GeneratorError("mixed second partials of a seed do not coincide (Schwarz check)");

    ExprPtr sx = detail::shifted("x", p.x.value);
    ExprPtr sy = detail::shifted("y", p.y.value);

    auto linear_part = [&](const DerivativeTensor& t1, const std::string& who) {
        Rational px = detail::exact_entry(t1.entries[1], who + "'_x");
        Rational py = detail::exact_entry(t1.entries[0], who + "'_y");
        return make_add({make_mul({make_const(px), sx}), make_mul({make_const(py), sy})});
    };

    ExprPtr den_raw = make_add({g, make_const(-g0), make_neg(linear_part(tg1, "g"))});
    prob.denominator = simplify(den_raw, cfg.expand_bound);
    OrderClassification od = classify_order(prob.denominator, p, 2);
    if (!od.is_infinitesimal() || od.order != 2)
        throw GeneratorError(
            "Delta g - dg is not infinitesimal of exactly the second order at the point");

    Rational gxx = detail::exact_entry(tg2.entries[2], "g''_xx");
    Rational gxy = detail::exact_entry(tg2.entries[1], "g''_xy");
    Rational gyy = detail::exact_entry(tg2.entries[0], "g''_yy");
    Rational fxx = detail::exact_entry(tf2.entries[2], "f''_xx");
    Rational fxy = detail::exact_entry(tf2.entries[1], "f''_xy");
    Rational fyy = detail::exact_entry(tf2.entries[0], "f''_yy");

    Rational c1 = (k * gxx - fxx) / 2;
    Rational c2 = k * gxy - fxy;
    Rational c3 = (k * gyy - fyy) / 2;
    prob.constants = {{"C1*", c1}, {"C2*", c2}, {"C3*", c3}};

    ExprPtr num_raw = make_add({f, make_const(-f0), make_neg(linear_part(tf1, "f")),
                                make_mul({make_const(c1), make_pow(sx, 2)}),
                                make_mul({make_const(c2), sx, sy}),
                                make_mul({make_const(c3), make_pow(sy, 2)})});
    prob.numerator = simplify(num_raw, cfg.expand_bound);

    if (k == 0) prob.flags.insert(Flag::BeyondPaper);
    detail::verify_round_trip(prob, cfg);
    return prob;
}

} // namespace hopital2d

#endif
