#ifndef HOPITAL2D_ORACLE_HPP
#define HOPITAL2D_ORACLE_HPP

#include "calculus.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace hopital2d {

// The oracle deliberately avoids the engine's evaluation path: sampling is
// exact rational where expressions allow it and 50-digit floating point
// otherwise, so cancellation near the limit point cannot fake convergence.
namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

// Path t -> (x0 + ax*t^px, y0 + ay*t^py) as t -> 0+. An infinite coordinate
// uses ax*t^(-px) (negated for -inf). A zero amplitude pins the coordinate
// at the limit value (axis curves).
struct Curve {
    Rational ax, ay;
    int px = 1, py = 1;
    std::string description;
};

struct OracleConfig {
    int samples = 7;       // t = 10^-1 .. 10^-samples
    int extrap_window = 4; // values fed to extrapolation
    double tol = 1e-6;
    double diverge_magnitude = 1e8;
};

struct DirectionalEstimate {
    enum class Kind { Converged, Diverged, Oscillating, Unusable };
    Kind kind = Kind::Unusable;
    Curve curve;
    double value = 0.0;    // Converged
    double residual = 0.0; // Converged
    int sign = 0;          // Diverged
    std::vector<double> samples;
    std::string note;
};

struct IteratedLimits {
    std::optional<double> x_then_y; // lim_{x->x0} lim_{y->y0}
    std::optional<double> y_then_x;
};

struct OracleVerdict {
    enum class Kind { AllAgree, Disagree, SomeDiverge, Unclear };
    Kind kind = Kind::Unclear;
    double value = 0.0;                // AllAgree
    size_t curve_a = 0, curve_b = 0;   // Disagree
    std::vector<DirectionalEstimate> estimates;
    IteratedLimits iterated;
};

namespace detail {

struct UndefinedSample {};

inline Real to_real(const Rational& r) { return Real(num(r)) / Real(den(r)); }

// Exact evaluation; nullopt means "needs floating point".
inline std::optional<Rational> eval_rational(const Expr& e, const Rational& x,
                                             const Rational& y) {
    switch (e.kind) {
        case NodeKind::Const:
            return e.value;
        case NodeKind::Var:
            if (e.name == "x" || e.name == "u") return x;
            if (e.name == "y" || e.name == "v") return y;
            throw UndefinedSample{};
        case NodeKind::Add: {
            Rational acc(0);
            for (const auto& c : e.children) {
                auto v = eval_rational(*c, x, y);
                if (!v) return std::nullopt;
                acc += *v;
            }
            return acc;
        }
        case NodeKind::Mul: {
            Rational acc(1);
            for (const auto& c : e.children) {
                auto v = eval_rational(*c, x, y);
                if (!v) return std::nullopt;
                acc *= *v;
            }
            return acc;
        }
        case NodeKind::Neg: {
            auto v = eval_rational(*e.children[0], x, y);
            if (!v) return std::nullopt;
            return -*v;
        }
        case NodeKind::Div: {
            auto a = eval_rational(*e.children[0], x, y);
            auto b = eval_rational(*e.children[1], x, y);
            if (!a || !b) return std::nullopt;
            if (*b == 0) throw UndefinedSample{};
            return *a / *b;
        }
        case NodeKind::Pow: {
            auto b = eval_rational(*e.children[0], x, y);
            if (!b) return std::nullopt;
            if (*b == 0 && e.exponent < 0) throw UndefinedSample{};
            return rational_pow(*b, e.exponent);
        }
        case NodeKind::Func: {
            auto a = eval_rational(*e.children[0], x, y);
            if (!a) return std::nullopt;
            switch (e.func) {
                case FuncKind::Sqrt:
                    if (*a < 0) throw UndefinedSample{};
                    if (auto r = exact_sqrt(*a)) return *r;
                    return std::nullopt;
                case FuncKind::Ln:
                    if (*a <= 0) throw UndefinedSample{};
                    if (*a == 1) return Rational(0);
                    return std::nullopt;
                case FuncKind::Exp:
                    if (*a == 0) return Rational(1);
                    return std::nullopt;
                case FuncKind::Sin:
                    if (*a == 0) return Rational(0);
                    return std::nullopt;
                case FuncKind::Cos:
                    if (*a == 0) return Rational(1);
                    return std::nullopt;
                case FuncKind::Arctan:
                    if (*a == 0) return Rational(0);
                    return std::nullopt;
            }
        }
    }
    return std::nullopt;
}

inline Real eval_real(const Expr& e, const Real& x, const Real& y) {
    switch (e.kind) {
        case NodeKind::Const:
            return to_real(e.value);
        case NodeKind::Var:
            if (e.name == "x" || e.name == "u") return x;
            if (e.name == "y" || e.name == "v") return y;
            throw UndefinedSample{};
        case NodeKind::Add: {
            Real acc = 0;
            for (const auto& c : e.children) acc += eval_real(*c, x, y);
            return acc;
        }
        case NodeKind::Mul: {
            Real acc = 1;
            for (const auto& c : e.children) acc *= eval_real(*c, x, y);
            return acc;
        }
        case NodeKind::Neg:
            return -eval_real(*e.children[0], x, y);
        case NodeKind::Div: {
            Real a = eval_real(*e.children[0], x, y);
            Real b = eval_real(*e.children[1], x, y);
            if (b == 0) throw UndefinedSample{};
            return a / b;
        }
        case NodeKind::Pow: {
            Real b = eval_real(*e.children[0], x, y);
            if (b == 0 && e.exponent < 0) throw UndefinedSample{};
            return boost::multiprecision::pow(b, e.exponent);
        }
        case NodeKind::Func: {
            Real a = eval_real(*e.children[0], x, y);
            switch (e.func) {
                case FuncKind::Sqrt:
                    if (a < 0) throw UndefinedSample{};
                    return boost::multiprecision::sqrt(a);
                case FuncKind::Ln:
                    if (a <= 0) throw UndefinedSample{};
                    return boost::multiprecision::log(a);
                case FuncKind::Exp:
                    return boost::multiprecision::exp(a);
                case FuncKind::Sin:
                    return boost::multiprecision::sin(a);
                case FuncKind::Cos:
                    return boost::multiprecision::cos(a);
                case FuncKind::Arctan:
                    return boost::multiprecision::atan(a);
            }
        }
    }
    throw UndefinedSample{};
}

struct SamplePoint {
    bool defined = false;
    bool exact = false;
    Rational exact_value;
    Real value = 0;
};

inline Rational pow10(int k) { return rational_pow(Rational(10), k); }

// Coordinate of the curve at parameter t for one axis of the limit point.
inline Rational curve_coord(const Coord& c, const Rational& amp, int exp, const Rational& t) {
    switch (c.kind) {
        case Coord::Kind::Finite:
            return c.value + amp * rational_pow(t, exp);
        case Coord::Kind::PlusInf:
            return amp * rational_pow(t, -exp);
        case Coord::Kind::MinusInf:
            return -amp * rational_pow(t, -exp);
    }
    return Rational(0);
}

inline SamplePoint sample_quotient(const Expr& f, const Expr& g, const Rational& x,
                                   const Rational& y) {
    SamplePoint s;
    try {
        auto fr = eval_rational(f, x, y);
        auto gr = eval_rational(g, x, y);
        if (fr && gr) {
            if (*gr == 0) return s; // undefined
            s.defined = true;
            s.exact = true;
            s.exact_value = *fr / *gr;
            s.value = to_real(s.exact_value);
            return s;
        }
        Real xr = to_real(x), yr = to_real(y);
        Real fv = eval_real(f, xr, yr);
        Real gv = eval_real(g, xr, yr);
        if (gv == 0 || boost::multiprecision::isnan(fv) || boost::multiprecision::isnan(gv))
            return s;
        Real q = fv / gv;
        if (boost::multiprecision::isnan(q)) return s;
        s.defined = true;
        s.value = q;
        return s;
    } catch (const UndefinedSample&) {
        return s;
    }
}

// One Aitken delta-squared step.
template <typename T>
inline std::vector<T> aitken(const std::vector<T>& v) {
    std::vector<T> out;
    for (size_t i = 0; i + 2 < v.size(); ++i) {
        T d1 = v[i + 1] - v[i];
        T d2 = v[i + 2] - v[i + 1];
        T den = d2 - d1;
        if (den == 0) {
            out.push_back(v[i + 2]);
        } else {
            out.push_back(v[i + 2] - d2 * d2 / den);
        }
    }
    return out;
}

// Iterated Aitken extrapolation on a geometric sample schedule; returns the
// final extrapolant and the residual |last - previous|.
template <typename T>
inline std::pair<T, T> extrapolate(std::vector<T> v) {
    T prev = v.back();
    while (v.size() >= 3) {
        v = aitken(v);
        if (!v.empty()) {
            T cur = v.back();
            if (v.size() < 3) {
                T res = cur - prev;
                return {cur, res < 0 ? T(-res) : res};
            }
            prev = cur;
        }
    }
    T res = v.back() - prev;
    return {v.back(), res < 0 ? T(-res) : res};
}

} // namespace detail

// Numeric estimate of lim f/g along one curve: sample at t = 10^-1..10^-N,
// Richardson-style extrapolation on the trailing window.
inline DirectionalEstimate estimate_along(const ExprPtr& f, const ExprPtr& g, const LimitPoint& p,
                                          const Curve& c, const OracleConfig& cfg = {}) {
    DirectionalEstimate est;
    est.curve = c;
    std::vector<detail::SamplePoint> samples;
    for (int k = 1; k <= cfg.samples; ++k) {
        Rational t = rational_pow(Rational(1, 10), k);
        Rational x = detail::curve_coord(p.x, c.ax, c.px, t);
        Rational y = detail::curve_coord(p.y, c.ay, c.py, t);
        samples.push_back(detail::sample_quotient(*f, *g, x, y));
    }
    std::vector<detail::SamplePoint> defined;
    for (const auto& s : samples) {
        if (s.defined) {
            defined.push_back(s);
            est.samples.push_back(s.value.convert_to<double>());
        }
    }
    if (static_cast<int>(defined.size()) < cfg.extrap_window) {
        est.kind = DirectionalEstimate::Kind::Unusable;
        est.note = defined.empty() ? "all samples undefined" : "too few usable samples";
        return est;
    }

    // divergence: trailing magnitudes blow up monotonically
    size_t n = defined.size();
    Real last = defined[n - 1].value;
    Real mag = boost::multiprecision::abs(last);
    if (mag > cfg.diverge_magnitude &&
        boost::multiprecision::abs(defined[n - 2].value) < mag &&
        boost::multiprecision::abs(defined[n - 3].value) <
            boost::multiprecision::abs(defined[n - 2].value)) {
        est.kind = DirectionalEstimate::Kind::Diverged;
        est.sign = last > 0 ? 1 : -1;
        return est;
    }

    bool all_exact = true;
    for (const auto& s : defined) all_exact = all_exact && s.exact;

    double value, residual;
    if (all_exact) {
        std::vector<Rational> w;
        for (size_t i = n - cfg.extrap_window; i < n; ++i) w.push_back(defined[i].exact_value);
        auto [val, res] = detail::extrapolate(w);
        value = to_double(val);
        residual = to_double(res);
    } else {
        std::vector<Real> w;
        for (size_t i = n - cfg.extrap_window; i < n; ++i) w.push_back(defined[i].value);
        auto [val, res] = detail::extrapolate(w);
        value = val.convert_to<double>();
        residual = res.convert_to<double>();
    }
    if (residual < cfg.tol) {
        est.kind = DirectionalEstimate::Kind::Converged;
        est.value = value;
        est.residual = residual;
    } else {
        est.kind = DirectionalEstimate::Kind::Oscillating;
        est.value = value;
        est.residual = residual;
    }
    return est;
}

// Default curve family: 16 line directions (rational slopes plus both axes),
// parabolic arcs and cubic arcs. Axis curves pin a coordinate, which is not
// possible toward an infinite coordinate; near-axis slopes stand in there.
inline std::vector<Curve> default_family(const LimitPoint& p) {
    std::vector<Curve> fam;
    auto line = [&](const Rational& ax, const Rational& ay, const std::string& d) {
        fam.push_back({ax, ay, 1, 1, d});
    };
    static const std::pair<long, long> slopes[] = {
        {1, 1},  {-1, 1}, {2, 1},  {-2, 1}, {3, 1},  {-3, 1}, {1, 2},
        {-1, 2}, {1, 3},  {-1, 3}, {4, 1},  {-4, 1}, {5, 1},  {-5, 1},
    };
    for (auto [n, d] : slopes) {
        Rational r(n, d);
        line(Rational(1), r, "line slope " + to_string(r));
    }
    if (p.is_infinite()) {
        line(Rational(1), Rational(1, 10), "near-x-axis line");
        line(Rational(1, 10), Rational(1), "near-y-axis line");
    } else {
        line(Rational(1), Rational(0), "x-axis");
        line(Rational(0), Rational(1), "y-axis");
    }
    fam.push_back({Rational(1), Rational(1), 1, 2, "parabolic arc (t, t^2)"});
    fam.push_back({Rational(1), Rational(1), 2, 1, "parabolic arc (t^2, t)"});
    fam.push_back({Rational(1), Rational(1), 1, 3, "cubic arc (t, t^3)"});
    fam.push_back({Rational(1), Rational(1), 3, 1, "cubic arc (t^3, t)"});
    return fam;
}

// Seeded random curves; deterministic for a fixed seed.
inline std::vector<Curve> fuzz_family(uint32_t seed, int count = 8) {
    std::vector<Curve> fam;
    // xorshift keeps this reproducible across standard libraries
    uint32_t s = seed ? seed : 1;
    auto next = [&s]() {
        s ^= s << 13;
        s ^= s >> 17;
        s ^= s << 5;
        return s;
    };
    for (int i = 0; i < count; ++i) {
        long an = static_cast<long>(next() % 9) - 4;
        if (an == 0) an = 1;
        long ad = static_cast<long>(next() % 4) + 1;
        long bn = static_cast<long>(next() % 9) - 4;
        if (bn == 0) bn = -1;
        long bd = static_cast<long>(next() % 4) + 1;
        int px = static_cast<int>(next() % 3) + 1;
        int py = static_cast<int>(next() % 3) + 1;
        fam.push_back({Rational(an, ad), Rational(bn, bd), px, py,
                       "fuzz curve " + std::to_string(i)});
    }
    return fam;
}

namespace detail {

// Nested extrapolation: inner 1-D limit at each of `outer_count` abscissae,
// then extrapolate the outer sequence.
inline std::optional<double> iterated_limit(const ExprPtr& f, const ExprPtr& g,
                                            const LimitPoint& p, bool x_outer,
                                            const OracleConfig& cfg) {
    // the outer abscissae stay well above the smallest inner sample, so the
    // inner schedule can still resolve its limit at every outer point
    const int outer_count = 4;
    std::vector<Real> outer_vals;
    for (int i = 1; i <= outer_count; ++i) {
        Rational t_out = rational_pow(Rational(1, 10), i);
        Rational fixed = curve_coord(x_outer ? p.x : p.y, Rational(1), 1, t_out);
        std::vector<Real> inner;
        for (int k = 1; k <= cfg.samples; ++k) {
            Rational t_in = rational_pow(Rational(1, 10), k);
            Rational moving = curve_coord(x_outer ? p.y : p.x, Rational(1), 1, t_in);
            Rational x = x_outer ? fixed : moving;
            Rational y = x_outer ? moving : fixed;
            SamplePoint s = sample_quotient(*f, *g, x, y);
            if (s.defined) inner.push_back(s.value);
        }
        if (static_cast<int>(inner.size()) < cfg.extrap_window) return std::nullopt;
        std::vector<Real> w(inner.end() - cfg.extrap_window, inner.end());
        auto [val, res] = extrapolate(w);
        if (res.convert_to<double>() >= cfg.tol * 100) return std::nullopt;
        outer_vals.push_back(val);
    }
    std::vector<Real> w(outer_vals.end() - cfg.extrap_window, outer_vals.end());
    auto [val, res] = extrapolate(w);
    if (res.convert_to<double>() >= cfg.tol * 100) return std::nullopt;
    return val.convert_to<double>();
}

} // namespace detail

// Runs the whole family and aggregates. Unusable curves are reported but do
// not block agreement (a line may sit inside the zero set of f and g).
inline OracleVerdict verify(const ExprPtr& f, const ExprPtr& g, const LimitPoint& p,
                            const std::vector<Curve>& family, const OracleConfig& cfg = {}) {
    OracleVerdict v;
    for (const auto& c : family) v.estimates.push_back(estimate_along(f, g, p, c, cfg));
    v.iterated.x_then_y = detail::iterated_limit(f, g, p, true, cfg);
    v.iterated.y_then_x = detail::iterated_limit(f, g, p, false, cfg);

    std::vector<size_t> converged, diverged;
    for (size_t i = 0; i < v.estimates.size(); ++i) {
        switch (v.estimates[i].kind) {
            case DirectionalEstimate::Kind::Converged: converged.push_back(i); break;
            case DirectionalEstimate::Kind::Diverged: diverged.push_back(i); break;
            default: break;
        }
    }
    if (!diverged.empty()) {
        v.kind = OracleVerdict::Kind::SomeDiverge;
        return v;
    }
    if (converged.empty()) {
        v.kind = OracleVerdict::Kind::Unclear;
        return v;
    }
    size_t lo = converged[0], hi = converged[0];
    double sum = 0;
    for (size_t i : converged) {
        double val = v.estimates[i].value;
        sum += val;
        if (val < v.estimates[lo].value) lo = i;
        if (val > v.estimates[hi].value) hi = i;
    }
    double spread = v.estimates[hi].value - v.estimates[lo].value;
    if (spread < cfg.tol) {
        v.kind = OracleVerdict::Kind::AllAgree;
        v.value = sum / static_cast<double>(converged.size());
    } else if (spread > 10 * cfg.tol) {
        v.kind = OracleVerdict::Kind::Disagree;
        v.curve_a = hi;
        v.curve_b = lo;
    } else {
        v.kind = OracleVerdict::Kind::Unclear;
    }
    return v;
}

} // namespace oracle
} // namespace hopital2d

#endif
