#ifndef HOPITAL2D_LHOPITAL_HPP
#define HOPITAL2D_LHOPITAL_HPP

#include "calculus.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hopital2d {

struct DecideConfig {
    int n_max = 4;
    int expand_bound = kDefaultExpandBound;
};

// ---- form classification --------------------------------------------------

struct FormClass {
    enum class Kind { ZeroOverZero, InfOverInf, ZeroTimesInf, NotIndeterminate, Unsupported };
    Kind kind = Kind::Unsupported;
    std::optional<OrderClassification> order_f, order_g; // ZeroOverZero
    EvalResult direct;                                   // NotIndeterminate
    std::string reason;                                  // Unsupported
};

enum class CaseLabel {
    Theorem1,
    Case1_OneDerivativeZero,
    Case2_MatchedXZero,
    Case2_MatchedYZero,
    Case3_CrossedZeros,
    Case4_NumeratorFlat,
    Case4_DenominatorFlat,
    Case5_Escalate,
    TheoremN,
    MixedZeroConventionN,
    OrderMismatch,
    Direct,
};

inline const char* case_name(CaseLabel c) {
    switch (c) {
        case CaseLabel::Theorem1: return "Theorem1";
        case CaseLabel::Case1_OneDerivativeZero: return "Case1_OneDerivativeZero";
        case CaseLabel::Case2_MatchedXZero: return "Case2_MatchedXZero";
        case CaseLabel::Case2_MatchedYZero: return "Case2_MatchedYZero";
        case CaseLabel::Case3_CrossedZeros: return "Case3_CrossedZeros";
        case CaseLabel::Case4_NumeratorFlat: return "Case4_NumeratorFlat";
        case CaseLabel::Case4_DenominatorFlat: return "Case4_DenominatorFlat";
        case CaseLabel::Case5_Escalate: return "Case5_Escalate";
        case CaseLabel::TheoremN: return "TheoremN";
        case CaseLabel::MixedZeroConventionN: return "MixedZeroConventionN";
        case CaseLabel::OrderMismatch: return "OrderMismatch";
        case CaseLabel::Direct: return "Direct";
    }
    return "?";
}

enum class Flag { FloatZero, DegenerateDirection, BeyondPaper };

inline const char* flag_name(Flag f) {
    switch (f) {
        case Flag::FloatZero: return "FloatZero";
        case Flag::DegenerateDirection: return "DegenerateDirection";
        case Flag::BeyondPaper: return "BeyondPaper";
    }
    return "?";
}

struct RatioEntry {
    int index = 0; // l: number of first-variable derivatives
    EvalResult num_entry, den_entry;
    enum class Status { Ratio, SkippedBothZero, ZeroMismatch } status = Status::Ratio;
    EvalResult ratio; // Status::Ratio only
};

// A direction Delta y = r * Delta x (dx = 0 encodes the vertical axis) with
// the directional value of the order-n ratio along it.
struct Witness {
    Rational dx, dy;
    EvalResult value;
    std::string description;
};

struct LimitVerdict {
    enum class Result { Exists, NotExists, InfiniteMagnitude, Inconclusive };
    Result result = Result::Inconclusive;
    EvalResult value; // Exists: the limit k
    CaseLabel label = CaseLabel::Theorem1;
    int order = 0; // the order at which the criterion fired
    std::vector<RatioEntry> ratios;
    std::set<Flag> flags;
    std::vector<Witness> witnesses;
    std::string note;

    bool has_flag(Flag f) const { return flags.count(f) > 0; }
};

// ---- ratio criterion ------------------------------------------------------

struct RatioDecision {
    enum class Kind { Equal, Unequal, MixedZerosEqual, MixedZerosUnequal, Undecidable };
    Kind kind = Kind::Undecidable;
    EvalResult k;
    std::vector<RatioEntry> ratios;
    bool used_float = false;
};

namespace detail {

inline bool entry_zero(const EvalResult& e, bool& used_float) {
    if (e.is_exact()) return e.exact == 0;
    used_float = true;
    return std::fabs(e.as_double()) < kFloatZeroTol;
}

inline bool values_equal(const EvalResult& a, const EvalResult& b, bool& used_float) {
    if (a.is_infinite() || b.is_infinite()) return a.kind == b.kind;
    if (a.is_exact() && b.is_exact()) return a.exact == b.exact;
    used_float = true;
    double x = a.as_double(), y = b.as_double();
    double scale = std::max({std::fabs(x), std::fabs(y), 1.0});
    return std::fabs(x - y) <= 1e-9 * scale;
}

} // namespace detail

// Index-by-index comparison of two same-order tensors. Indices where both
// entries vanish are skipped (matched-zero convention); an index where
// exactly one side vanishes forces Unequal.
inline RatioDecision ratio_criterion(const DerivativeTensor& tf, const DerivativeTensor& tg) {
    if (tf.order != tg.order) throw std::invalid_argument("tensor orders differ");
    RatioDecision d;
    bool skipped = false;
    bool mismatch = false;
    std::optional<EvalResult> k;
    bool all_equal = true;
    for (int l = 0; l <= tf.order; ++l) {
        RatioEntry r;
        r.index = l;
        r.num_entry = tf.entries[l];
        r.den_entry = tg.entries[l];
        bool fz = detail::entry_zero(r.num_entry, d.used_float);
        bool gz = detail::entry_zero(r.den_entry, d.used_float);
        if (fz && gz) {
            r.status = RatioEntry::Status::SkippedBothZero;
            skipped = true;
        } else if (fz || gz) {
            r.status = RatioEntry::Status::ZeroMismatch;
            mismatch = true;
        } else {
            r.status = RatioEntry::Status::Ratio;
            r.ratio = detail::ev_div(r.num_entry, r.den_entry);
            if (!k) {
                k = r.ratio;
            } else if (!detail::values_equal(*k, r.ratio, d.used_float)) {
                all_equal = false;
            }
        }
        d.ratios.push_back(std::move(r));
    }
    if (!k && !mismatch) {
        d.kind = RatioDecision::Kind::Undecidable;
        return d;
    }
    bool equal_verdict = !mismatch && all_equal && k.has_value();
    if (equal_verdict) d.k = *k;
    if (skipped)
        d.kind = equal_verdict ? RatioDecision::Kind::MixedZerosEqual
                               : RatioDecision::Kind::MixedZerosUnequal;
    else
        d.kind = equal_verdict ? RatioDecision::Kind::Equal : RatioDecision::Kind::Unequal;
    return d;
}

// ---- transformations to 0/0 -----------------------------------------------

struct TransformedProblem {
    ExprPtr f, g;
    LimitPoint point;
    VarPair vars;
    bool transformed = false;
    std::string description;
};

// x -> 1/u, y -> 1/v on the infinite coordinates, then clear denominators so
// numerator and denominator are polynomial where possible. Cancelling the
// shared monomial factor preserves the quotient pointwise.
inline TransformedProblem transform_infinite_point(const ExprPtr& f, const ExprPtr& g,
                                                   const LimitPoint& p,
                                                   int expand_bound = kDefaultExpandBound) {
    TransformedProblem t;
    t.transformed = true;
    std::map<std::string, ExprPtr> sub;
    VarPair vars;
    LimitPoint np = p;
    if (p.x.is_infinite()) {
        sub["x"] = make_div(make_const(1), make_var("u"));
        vars.first = "u";
        np.x = Coord::finite(Rational(0));
    }
    if (p.y.is_infinite()) {
        sub["y"] = make_div(make_const(1), make_var("v"));
        vars.second = "v";
        np.y = Coord::finite(Rational(0));
    }
    ExprPtr fs = detail::substitute_raw(*f, sub);
    ExprPtr gs = detail::substitute_raw(*g, sub);
    detail::PolyFrac ff = detail::to_frac(*fs, expand_bound);
    detail::PolyFrac gf = detail::to_frac(*gs, expand_bound);
    detail::PolyFrac q{detail::poly_mul(ff.num, gf.den), detail::poly_mul(ff.den, gf.num)};
    detail::frac_reduce(q);
    t.f = detail::poly_to_expr(q.num);
    t.g = detail::poly_to_expr(q.den);
    t.point = np;
    t.vars = vars;
    t.description = "point at infinity: substituted reciprocals and cleared denominators";
    return t;
}

// Reduction of the infinity-flavored forms to 0/0:
//   inf/inf    -> (1/g, 1/f)
//   0 * inf    -> (zero factor, reciprocal of infinite factor)
//   infinite p -> reciprocal change of variables
inline TransformedProblem to_zero_over_zero(const ExprPtr& f, const ExprPtr& g,
                                            const LimitPoint& p, const FormClass& form,
                                            const VarPair& vars = {},
                                            int expand_bound = kDefaultExpandBound) {
    TransformedProblem t;
    t.vars = vars;
    t.point = p;
    if (p.is_infinite()) return transform_infinite_point(f, g, p, expand_bound);
    switch (form.kind) {
        case FormClass::Kind::InfOverInf:
            t.f = simplify(make_div(make_const(1), g), expand_bound);
            t.g = simplify(make_div(make_const(1), f), expand_bound);
            t.transformed = true;
            t.description = "inf/inf: took reciprocals";
            return t;
        case FormClass::Kind::ZeroTimesInf: {
            // product reading: the factor tending to 0 stays up top
            Bindings at = point_bindings(p, vars);
            EvalResult fv = eval(f, at);
            bool f_is_zero = fv.is_finite();
            t.f = f_is_zero ? f : g;
            const ExprPtr& infinite = f_is_zero ? g : f;
            t.g = simplify(make_div(make_const(1), infinite), expand_bound);
            t.transformed = true;
            t.description = "0*inf: moved infinite factor to the denominator";
            return t;
        }
        default:
            t.f = f;
            t.g = g;
            return t;
    }
}

// ---- form classification --------------------------------------------------

inline FormClass classify_form(const ExprPtr& f, const ExprPtr& g, const LimitPoint& p,
                               const DecideConfig& cfg = {}, const VarPair& vars = {}) {
    if (p.is_infinite()) {
        TransformedProblem t = transform_infinite_point(f, g, p, cfg.expand_bound);
        return classify_form(t.f, t.g, t.point, cfg, t.vars);
    }
    FormClass fc;
    Bindings at = point_bindings(p, vars);
    EvalResult fv, gv;
    try {
        fv = eval(f, at);
        gv = eval(g, at);
    } catch (const EvalError& e) {
        fc.kind = FormClass::Kind::Unsupported;
        fc.reason = e.what();
        return fc;
    }
    bool dummy = false;
    bool fz = fv.is_finite() && detail::entry_zero(fv, dummy);
    bool gz = gv.is_finite() && detail::entry_zero(gv, dummy);
    // a nonzero-over-exact-zero subexpression blows up near the point
    auto blows_up = [](const EvalResult& v) {
        return v.is_infinite() || (v.is_undefined() && v.reason == "div0");
    };
    bool finf = blows_up(fv), ginf = blows_up(gv);
    if ((fv.is_undefined() && !finf) || (gv.is_undefined() && !ginf)) {
        fc.kind = FormClass::Kind::Unsupported;
        fc.reason = "value undefined at the point: " +
                    (fv.is_undefined() ? fv.reason : gv.reason);
        return fc;
    }
    if (fz && gz) {
        fc.kind = FormClass::Kind::ZeroOverZero;
        fc.order_f = classify_order(f, p, cfg.n_max, vars);
        fc.order_g = classify_order(g, p, cfg.n_max, vars);
        return fc;
    }
    if (finf && ginf) {
        fc.kind = FormClass::Kind::InfOverInf;
        return fc;
    }
    if ((fz && ginf) || (finf && gz)) {
        fc.kind = FormClass::Kind::ZeroTimesInf;
        return fc;
    }
    fc.kind = FormClass::Kind::NotIndeterminate;
    fc.direct = detail::ev_div(fv, gv);
    return fc;
}

// ---- decision pipeline ----------------------------------------------------

namespace detail {

inline Rational binom(int n, int k) {
    Rational r(1);
    for (int i = 0; i < k; ++i) r = r * Rational(n - i) / Rational(i + 1);
    return r;
}

// Directional coefficient sum_l C(n,l) * entry[l] * r^(n-l) for direction
// (dx, dy) = (1, r); the vertical axis (0, 1) keeps only l = 0.
inline EvalResult directional_coefficient(const DerivativeTensor& t, const Rational& r,
                                          bool vertical) {
    if (vertical) return t.entries[0];
    EvalResult acc = EvalResult::make_exact(Rational(0));
    for (int l = 0; l <= t.order; ++l) {
        EvalResult term = ev_mul(t.entries[l],
                                 EvalResult::make_exact(binom(t.order, l) *
                                                        rational_pow(r, t.order - l)));
        acc = ev_add(acc, term);
    }
    return acc;
}

// Two directions along which the order-n directional ratios provably differ.
inline std::vector<Witness> find_direction_witnesses(const DerivativeTensor& tf,
                                                     const DerivativeTensor& tg) {
    struct Cand {
        Rational r;
        bool vertical;
    };
    std::vector<Cand> cands{{Rational(0), true}};
    for (long v : {0L, 1L, -1L, 2L, -2L, 3L, -3L, 4L, -4L, 5L, -5L, 7L, -7L, 10L, -10L})
        cands.push_back({Rational(v), false});
    for (long v : {1L, -1L, 2L, -2L, 3L, -3L})
        cands.push_back({Rational(v, 2), false});
    std::vector<std::pair<Cand, EvalResult>> vals;
    for (const auto& c : cands) {
        EvalResult a = directional_coefficient(tf, c.r, c.vertical);
        EvalResult b = directional_coefficient(tg, c.r, c.vertical);
        EvalResult q = ev_div(a, b);
        if (q.is_undefined()) continue;
        vals.push_back({c, q});
    }
    bool used_float = false;
    for (size_t i = 0; i < vals.size(); ++i) {
        for (size_t j = i + 1; j < vals.size(); ++j) {
            if (!values_equal(vals[i].second, vals[j].second, used_float) ||
                vals[i].second.is_infinite() != vals[j].second.is_infinite()) {
                auto mk = [](const std::pair<Cand, EvalResult>& p) {
                    Witness w;
                    w.dx = p.first.vertical ? Rational(0) : Rational(1);
                    w.dy = p.first.vertical ? Rational(1) : p.first.r;
                    w.value = p.second;
                    w.description = p.first.vertical
                                        ? "vertical axis direction"
                                        : "direction dy = " + to_string(p.first.r) + " dx";
                    return w;
                };
                return {mk(vals[i]), mk(vals[j])};
            }
        }
    }
    return {};
}

inline Witness axis_witness(bool x_axis, const DerivativeTensor& tf, const DerivativeTensor& tg) {
    Witness w;
    int l = x_axis ? tf.order : 0;
    w.dx = Rational(x_axis ? 1 : 0);
    w.dy = Rational(x_axis ? 0 : 1);
    w.value = ev_div(tf.entries[l], tg.entries[l]);
    w.description = x_axis ? "x-axis direction" : "y-axis direction";
    return w;
}

// Does b(r) = b20 + 2*b11*r + b02*r^2 (the denominator's second directional
// coefficient) have a real root?
inline bool denominator_quadratic_has_real_root(const DerivativeTensor& tg, bool& used_float) {
    const EvalResult& b20 = tg.entries[2];
    const EvalResult& b11 = tg.entries[1];
    const EvalResult& b02 = tg.entries[0];
    bool z02 = entry_zero(b02, used_float);
    bool z11 = entry_zero(b11, used_float);
    bool z20 = entry_zero(b20, used_float);
    if (z02) {
        if (!z11) return true; // linear with nonzero slope
        return z20;            // identically zero counts as degenerate
    }
    // discriminant (2*b11)^2 - 4*b20*b02 >= 0
    if (b20.is_exact() && b11.is_exact() && b02.is_exact())
        return 4 * b11.exact * b11.exact - 4 * b20.exact * b02.exact >= 0;
    used_float = true;
    double d = 4 * b11.as_double() * b11.as_double() - 4 * b20.as_double() * b02.as_double();
    return d >= 0;
}

inline LimitVerdict decide_zero_over_zero(const ExprPtr& f, const ExprPtr& g, const LimitPoint& p,
                                          const FormClass& fc, const DecideConfig& cfg,
                                          const VarPair& vars) {
    LimitVerdict v;
    const OrderClassification& of = *fc.order_f;
    const OrderClassification& og = *fc.order_g;
    if (of.float_zero || og.float_zero) v.flags.insert(Flag::FloatZero);

    if (of.kind == OrderClassification::Kind::OrderExceedsMax ||
        og.kind == OrderClassification::Kind::OrderExceedsMax) {
        v.result = LimitVerdict::Result::Inconclusive;
        v.label = CaseLabel::Case5_Escalate;
        v.order = cfg.n_max;
        v.note = "all derivative tensors vanish up to the configured maximum order";
        return v;
    }

    int nf = of.order, ng = og.order;

    if (nf != ng) {
        v.order = std::min(nf, ng);
        bool numerator_flat = nf > ng;
        if (v.order == 1) {
            v.label = numerator_flat ? CaseLabel::Case4_NumeratorFlat
                                     : CaseLabel::Case4_DenominatorFlat;
        } else {
            v.label = CaseLabel::OrderMismatch;
        }
        if (numerator_flat) {
            v.result = LimitVerdict::Result::Exists;
            v.value = EvalResult::make_exact(Rational(0));
            v.note = "numerator vanishes to higher order than the denominator";
        } else {
            v.result = LimitVerdict::Result::InfiniteMagnitude;
            v.flags.insert(Flag::BeyondPaper);
            v.note = "denominator vanishes to higher order; sign depends on the approach";
        }
        return v;
    }

    const DerivativeTensor& tf = *of.witness;
    const DerivativeTensor& tg = *og.witness;
    int n = nf;
    v.order = n;

    if (n == 1) {
        bool fx0 = tf.entry_is_zero(1), fy0 = tf.entry_is_zero(0);
        bool gx0 = tg.entry_is_zero(1), gy0 = tg.entry_is_zero(0);
        // both-of-one-function patterns were consumed by order classification
        int zeros = int(fx0) + int(fy0) + int(gx0) + int(gy0);
        if (zeros == 0) {
            RatioDecision rd = ratio_criterion(tf, tg);
            v.ratios = rd.ratios;
            if (rd.used_float) v.flags.insert(Flag::FloatZero);
            v.label = CaseLabel::Theorem1;
            if (rd.kind == RatioDecision::Kind::Equal) {
                v.result = LimitVerdict::Result::Exists;
                v.value = rd.k;
            } else {
                v.result = LimitVerdict::Result::NotExists;
                v.witnesses = find_direction_witnesses(tf, tg);
            }
            return v;
        }
        if (zeros == 1) {
            v.label = CaseLabel::Case1_OneDerivativeZero;
            v.result = LimitVerdict::Result::NotExists;
            v.witnesses = {axis_witness(true, tf, tg), axis_witness(false, tf, tg)};
            v.note = "the repeated limits exist but differ";
            return v;
        }
        if ((fx0 && gx0) || (fy0 && gy0)) {
            bool x_matched = fx0 && gx0;
            v.label = x_matched ? CaseLabel::Case2_MatchedXZero : CaseLabel::Case2_MatchedYZero;
            v.result = LimitVerdict::Result::Exists;
            int l = x_matched ? 0 : 1; // surviving partial pair
            v.value = ev_div(tf.entries[l], tg.entries[l]);
            RatioEntry re;
            re.index = l;
            re.num_entry = tf.entries[l];
            re.den_entry = tg.entries[l];
            re.ratio = v.value;
            v.ratios = {re};
            return v;
        }
        v.label = CaseLabel::Case3_CrossedZeros;
        v.result = LimitVerdict::Result::NotExists;
        v.witnesses = {axis_witness(true, tf, tg), axis_witness(false, tf, tg)};
        v.note = "the repeated limits differ (one vanishes, one is infinite)";
        return v;
    }

    // n >= 2
    RatioDecision rd = ratio_criterion(tf, tg);
    v.ratios = rd.ratios;
    if (rd.used_float) v.flags.insert(Flag::FloatZero);
    bool mixed = rd.kind == RatioDecision::Kind::MixedZerosEqual ||
                 rd.kind == RatioDecision::Kind::MixedZerosUnequal ||
                 rd.kind == RatioDecision::Kind::Undecidable;
    v.label = mixed ? CaseLabel::MixedZeroConventionN : CaseLabel::TheoremN;
    if (mixed) v.flags.insert(Flag::BeyondPaper);
    switch (rd.kind) {
        case RatioDecision::Kind::Equal:
        case RatioDecision::Kind::MixedZerosEqual:
            v.result = LimitVerdict::Result::Exists;
            v.value = rd.k;
            break;
        case RatioDecision::Kind::Unequal:
        case RatioDecision::Kind::MixedZerosUnequal:
            v.result = LimitVerdict::Result::NotExists;
            v.witnesses = find_direction_witnesses(tf, tg);
            break;
        case RatioDecision::Kind::Undecidable:
            v.result = LimitVerdict::Result::Inconclusive;
            v.note = "every order-n index is a matched zero";
            break;
    }
    if (n == 2 && v.result == LimitVerdict::Result::Exists) {
        bool uf = false;
        if (denominator_quadratic_has_real_root(tg, uf))
            v.flags.insert(Flag::DegenerateDirection);
        if (uf) v.flags.insert(Flag::FloatZero);
    }
    return v;
}

} // namespace detail

// Full pipeline: classify the form, reduce infinity-flavored forms to 0/0,
// then run the order-n ratio criteria and case dispatch.
inline LimitVerdict decide(const ExprPtr& f_in, const ExprPtr& g_in, const LimitPoint& p_in,
                           const DecideConfig& cfg = {}) {
    ExprPtr f = simplify(f_in, cfg.expand_bound);
    ExprPtr g = simplify(g_in, cfg.expand_bound);
    LimitPoint p = p_in;
    VarPair vars;

    for (int pass = 0; pass < 3; ++pass) {
        if (p.is_infinite()) {
            TransformedProblem t = transform_infinite_point(f, g, p, cfg.expand_bound);
            f = t.f;
            g = t.g;
            p = t.point;
            vars = t.vars;
        }
        FormClass fc;
        try {
            fc = classify_form(f, g, p, cfg, vars);
        } catch (const DomainError& e) {
            LimitVerdict v;
            v.result = LimitVerdict::Result::Inconclusive;
            v.label = CaseLabel::Direct;
            v.note = e.what();
            return v;
        }
        switch (fc.kind) {
            case FormClass::Kind::ZeroOverZero:
                return detail::decide_zero_over_zero(f, g, p, fc, cfg, vars);
            case FormClass::Kind::NotIndeterminate: {
                LimitVerdict v;
                v.label = CaseLabel::Direct;
                if (fc.direct.is_infinite()) {
                    v.result = LimitVerdict::Result::InfiniteMagnitude;
                } else if (fc.direct.is_undefined()) {
                    // nonzero / exact zero
                    v.result = LimitVerdict::Result::InfiniteMagnitude;
                    v.note = "denominator vanishes while numerator does not";
                } else {
                    v.result = LimitVerdict::Result::Exists;
                    v.value = fc.direct;
                }
                return v;
            }
            case FormClass::Kind::InfOverInf:
            case FormClass::Kind::ZeroTimesInf: {
                TransformedProblem t = to_zero_over_zero(f, g, p, fc, vars, cfg.expand_bound);
                f = t.f;
                g = t.g;
                p = t.point;
                continue;
            }
            case FormClass::Kind::Unsupported: {
                LimitVerdict v;
                v.result = LimitVerdict::Result::Inconclusive;
                v.label = CaseLabel::Direct;
                v.note = fc.reason;
                return v;
            }
        }
    }
    LimitVerdict v;
    v.result = LimitVerdict::Result::Inconclusive;
    v.label = CaseLabel::Direct;
    v.note = "form did not reduce to 0/0";
    return v;
}

} // namespace hopital2d

#endif
