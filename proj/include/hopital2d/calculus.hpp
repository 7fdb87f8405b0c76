#ifndef HOPITAL2D_CALCULUS_HPP
#define HOPITAL2D_CALCULUS_HPP

#include "eval.hpp"
#include "simplify.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopital2d {

class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// An entry whose exact value fell back to float counts as zero below this.
inline constexpr double kFloatZeroTol = 1e-9;

struct Coord {
    enum class Kind { Finite, PlusInf, MinusInf };
    Kind kind = Kind::Finite;
    Rational value; // Finite only

    static Coord finite(Rational v) { return {Kind::Finite, std::move(v)}; }
    static Coord plus_inf() { return {Kind::PlusInf, Rational(0)}; }
    static Coord minus_inf() { return {Kind::MinusInf, Rational(0)}; }
    bool is_infinite() const { return kind != Kind::Finite; }
};

struct LimitPoint {
    Coord x, y;
    bool is_infinite() const { return x.is_infinite() || y.is_infinite(); }

    static LimitPoint finite(Rational x0, Rational y0) {
        return {Coord::finite(std::move(x0)), Coord::finite(std::move(y0))};
    }
};

// The two active variables; (x, y) for user input, (u, v) after the
// point-at-infinity change of variables.
struct VarPair {
    std::string first = "x";
    std::string second = "y";
};

inline Bindings point_bindings(const LimitPoint& p, const VarPair& vars = {}) {
    auto coord = [](const Coord& c) {
        switch (c.kind) {
            case Coord::Kind::Finite: return EvalResult::make_exact(c.value);
            case Coord::Kind::PlusInf: return EvalResult::plus_inf();
            case Coord::Kind::MinusInf: return EvalResult::minus_inf();
        }
        return EvalResult::undefined("bad coord");
    };
    return {{vars.first, coord(p.x)}, {vars.second, coord(p.y)}};
}

// ---- symbolic differentiation --------------------------------------------

namespace detail {

inline ExprPtr diff(const ExprPtr& e, const std::string& v) {
    switch (e->kind) {
        case NodeKind::Const:
            return make_const(0);
        case NodeKind::Var:
            return make_const(e->name == v ? 1 : 0);
        case NodeKind::Add: {
            std::vector<ExprPtr> parts;
            for (const auto& c : e->children) parts.push_back(diff(c, v));
            return make_add(std::move(parts));
        }
        case NodeKind::Neg:
            return make_neg(diff(e->children[0], v));
        case NodeKind::Mul: {
            std::vector<ExprPtr> parts;
            for (size_t i = 0; i < e->children.size(); ++i) {
                std::vector<ExprPtr> fs = e->children;
                fs[i] = diff(e->children[i], v);
                parts.push_back(make_mul(std::move(fs)));
            }
            return make_add(std::move(parts));
        }
        case NodeKind::Div: {
            const auto& a = e->children[0];
            const auto& b = e->children[1];
            ExprPtr top = make_add(
                {make_mul({diff(a, v), b}), make_neg(make_mul({a, diff(b, v)}))});
            return make_div(top, make_pow(b, 2));
        }
        case NodeKind::Pow: {
            const auto& b = e->children[0];
            int n = e->exponent;
            return make_mul({make_const(n), make_pow(b, n - 1), diff(b, v)});
        }
        case NodeKind::Func: {
            const auto& a = e->children[0];
            ExprPtr da = diff(a, v);
            switch (e->func) {
                case FuncKind::Sqrt:
                    return make_div(da, make_mul({make_const(2), make_func(FuncKind::Sqrt, a)}));
                case FuncKind::Exp:
                    return make_mul({da, make_func(FuncKind::Exp, a)});
                case FuncKind::Ln:
                    return make_div(da, a);
                case FuncKind::Sin:
                    return make_mul({da, make_func(FuncKind::Cos, a)});
                case FuncKind::Cos:
                    return make_neg(make_mul({da, make_func(FuncKind::Sin, a)}));
                case FuncKind::Arctan:
                    return make_div(da, make_add({make_const(1), make_pow(a, 2)}));
            }
        }
    }
    return make_const(0);
}

} // namespace detail

// Symbolic partial derivative, simplified.
inline ExprPtr partial(const ExprPtr& e, const std::string& v) {
    return simplify(detail::diff(e, v));
}

// All order-n partials of one function at a point. entries[l] holds the
// value of d^n e / dx^l dy^(n-l).
struct DerivativeTensor {
    int order = 0;
    std::vector<EvalResult> entries;  // size order + 1, index l = first-var count
    std::vector<ExprPtr> symbolic;    // the simplified derivative expressions
    bool mixed_symmetric = true;      // Schwarz check at order 2
    bool approximate = false;         // some entry left rational arithmetic

    // zero test per engine convention: Exact(0), or |approx| < tol
    bool entry_is_zero(int l) const {
        const EvalResult& e = entries[l];
        if (e.is_exact()) return e.exact == 0;
        if (e.kind == EvalResult::Kind::Approx) return std::fabs(e.approx) < kFloatZeroTol;
        return false;
    }
    bool all_zero() const {
        for (int l = 0; l <= order; ++l)
            if (!entry_is_zero(l)) return false;
        return true;
    }
    bool any_zero() const {
        for (int l = 0; l <= order; ++l)
            if (entry_is_zero(l)) return true;
        return false;
    }
};

inline DerivativeTensor derivative_tensor(const ExprPtr& e, const LimitPoint& p, int n,
                                          const VarPair& vars = {}) {
    if (p.is_infinite()) throw DomainError("derivative tensor needs a finite point");
    if (n < 1) throw std::invalid_argument("tensor order must be positive");
    DerivativeTensor t;
    t.order = n;
    Bindings at = point_bindings(p, vars);

    // y-derivatives first, then x-derivatives on each
    std::vector<ExprPtr> ydiffs(n + 1);
    ydiffs[0] = e;
    for (int k = 1; k <= n; ++k) ydiffs[k] = partial(ydiffs[k - 1], vars.second);

    for (int l = 0; l <= n; ++l) {
        ExprPtr d = ydiffs[n - l];
        for (int i = 0; i < l; ++i) d = partial(d, vars.first);
        EvalResult v = eval(d, at);
        if (v.is_undefined()) throw DomainError("derivative undefined at point: " + v.reason);
        if (!v.is_exact()) t.approximate = true;
        t.symbolic.push_back(d);
        t.entries.push_back(std::move(v));
    }
    if (n == 2) {
        ExprPtr xy = partial(partial(e, vars.first), vars.second);
        ExprPtr yx = partial(partial(e, vars.second), vars.first);
        t.mixed_symmetric = equal(xy, yx);
    }
    return t;
}

// ---- infinitesimal order classification ----------------------------------

struct OrderClassification {
    enum class Kind { FirstOrder, OrderN, NotInfinitesimal, OrderExceedsMax };
    Kind kind = Kind::NotInfinitesimal;
    int order = 0;                           // FirstOrder => 1, OrderN => n
    std::optional<DerivativeTensor> witness; // first nonvanishing tensor
    EvalResult value;                        // function value at the point
    bool float_zero = false;                 // a zero decision used floats

    bool is_infinitesimal() const {
        return kind == Kind::FirstOrder || kind == Kind::OrderN;
    }
};

inline int default_max_order() {
    if (const char* env = std::getenv("HOPITAL2D_MAX_ORDER")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 4;
}

// Smallest n <= n_max with a nonvanishing order-n derivative tensor, per the
// "infinitely small of order n" definition.
inline OrderClassification classify_order(const ExprPtr& e, const LimitPoint& p, int n_max,
                                          const VarPair& vars = {}) {
    if (p.is_infinite()) throw DomainError("order classification needs a finite point");
    OrderClassification c;
    c.value = eval(e, point_bindings(p, vars));
    if (c.value.is_undefined()) throw DomainError("value undefined at point: " + c.value.reason);
    bool zero;
    if (c.value.is_exact()) {
        zero = c.value.exact == 0;
    } else if (c.value.kind == EvalResult::Kind::Approx) {
        zero = std::fabs(c.value.approx) < kFloatZeroTol;
        c.float_zero = true;
    } else {
        zero = false;
    }
    if (!zero) {
        c.kind = OrderClassification::Kind::NotInfinitesimal;
        return c;
    }
    for (int n = 1; n <= n_max; ++n) {
        DerivativeTensor t = derivative_tensor(e, p, n, vars);
        if (!t.mixed_symmetric)
            throw DomainError("mixed second partials disagree (Schwarz check failed)");
        if (t.approximate) c.float_zero = true;
        if (!t.all_zero()) {
            c.kind = n == 1 ? OrderClassification::Kind::FirstOrder
                            : OrderClassification::Kind::OrderN;
            c.order = n;
            c.witness = std::move(t);
            return c;
        }
    }
    c.kind = OrderClassification::Kind::OrderExceedsMax;
    c.order = n_max;
    return c;
}

} // namespace hopital2d

#endif
