#ifndef HOPITAL2D_EVAL_HPP
#define HOPITAL2D_EVAL_HPP

#include "expr.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace hopital2d {

class EvalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Result of exact-first evaluation. Exact only when every subexpression
// stayed within rational arithmetic.
struct EvalResult {
    enum class Kind { Exact, Approx, PlusInf, MinusInf, Undefined };
    Kind kind = Kind::Undefined;
    Rational exact;
    double approx = 0.0;
    std::string reason;

    static EvalResult make_exact(Rational v) {
        EvalResult r;
        r.kind = Kind::Exact;
        r.exact = std::move(v);
        return r;
    }
    static EvalResult make_approx(double v) {
        if (std::isnan(v)) return undefined("nan");
        if (std::isinf(v)) return v > 0 ? plus_inf() : minus_inf();
        EvalResult r;
        r.kind = Kind::Approx;
        r.approx = v;
        return r;
    }
    static EvalResult plus_inf() {
        EvalResult r;
        r.kind = Kind::PlusInf;
        return r;
    }
    static EvalResult minus_inf() {
        EvalResult r;
        r.kind = Kind::MinusInf;
        return r;
    }
    static EvalResult undefined(std::string why) {
        EvalResult r;
        r.kind = Kind::Undefined;
        r.reason = std::move(why);
        return r;
    }

    bool is_exact() const { return kind == Kind::Exact; }
    bool is_finite() const { return kind == Kind::Exact || kind == Kind::Approx; }
    bool is_infinite() const { return kind == Kind::PlusInf || kind == Kind::MinusInf; }
    bool is_undefined() const { return kind == Kind::Undefined; }

    double as_double() const {
        switch (kind) {
            case Kind::Exact: return to_double(exact);
            case Kind::Approx: return approx;
            case Kind::PlusInf: return std::numeric_limits<double>::infinity();
            case Kind::MinusInf: return -std::numeric_limits<double>::infinity();
            case Kind::Undefined: return std::numeric_limits<double>::quiet_NaN();
        }
        return 0.0;
    }

    // sign of a finite or infinite value: -1, 0, +1
    int sign() const {
        switch (kind) {
            case Kind::Exact: return exact == 0 ? 0 : (exact < 0 ? -1 : 1);
            case Kind::Approx: return approx == 0 ? 0 : (approx < 0 ? -1 : 1);
            case Kind::PlusInf: return 1;
            case Kind::MinusInf: return -1;
            case Kind::Undefined: return 0;
        }
        return 0;
    }
};

using Bindings = std::map<std::string, EvalResult>;

inline Bindings bind(const Rational& x, const Rational& y) {
    return {{"x", EvalResult::make_exact(x)}, {"y", EvalResult::make_exact(y)}};
}

namespace detail {

inline EvalResult ev_add(const EvalResult& a, const EvalResult& b) {
    if (a.is_undefined()) return a;
    if (b.is_undefined()) return b;
    if (a.is_infinite() || b.is_infinite()) {
        if (a.is_finite()) return b;
        if (b.is_finite()) return a;
        if (a.kind == b.kind) return a;
        return EvalResult::undefined("inf - inf");
    }
    if (a.is_exact() && b.is_exact()) return EvalResult::make_exact(a.exact + b.exact);
    return EvalResult::make_approx(a.as_double() + b.as_double());
}

inline EvalResult ev_neg(const EvalResult& a) {
    switch (a.kind) {
        case EvalResult::Kind::Exact: return EvalResult::make_exact(-a.exact);
        case EvalResult::Kind::Approx: return EvalResult::make_approx(-a.approx);
        case EvalResult::Kind::PlusInf: return EvalResult::minus_inf();
        case EvalResult::Kind::MinusInf: return EvalResult::plus_inf();
        default: return a;
    }
}

inline EvalResult ev_mul(const EvalResult& a, const EvalResult& b) {
    if (a.is_undefined()) return a;
    if (b.is_undefined()) return b;
    if (a.is_infinite() || b.is_infinite()) {
        int sa = a.sign(), sb = b.sign();
        if (sa == 0 || sb == 0) return EvalResult::undefined("0 * inf");
        return sa * sb > 0 ? EvalResult::plus_inf() : EvalResult::minus_inf();
    }
    if (a.is_exact() && b.is_exact()) return EvalResult::make_exact(a.exact * b.exact);
    return EvalResult::make_approx(a.as_double() * b.as_double());
}

inline EvalResult ev_div(const EvalResult& a, const EvalResult& b) {
    if (a.is_undefined()) return a;
    if (b.is_undefined()) return b;
    if (b.is_infinite()) {
        if (a.is_infinite()) return EvalResult::undefined("inf / inf");
        return EvalResult::make_exact(Rational(0));
    }
    if (b.sign() == 0) return EvalResult::undefined("div0");
    if (a.is_infinite())
        return a.sign() * b.sign() > 0 ? EvalResult::plus_inf() : EvalResult::minus_inf();
    if (a.is_exact() && b.is_exact()) return EvalResult::make_exact(a.exact / b.exact);
    return EvalResult::make_approx(a.as_double() / b.as_double());
}

inline EvalResult ev_pow(const EvalResult& a, int n) {
    if (a.is_undefined()) return a;
    if (a.is_infinite()) {
        if (n < 0) return EvalResult::make_exact(Rational(0));
        if (a.kind == EvalResult::Kind::MinusInf && (n % 2 != 0)) return EvalResult::minus_inf();
        return EvalResult::plus_inf();
    }
    if (a.sign() == 0 && n < 0) return EvalResult::undefined("div0");
    if (a.is_exact()) return EvalResult::make_exact(rational_pow(a.exact, n));
    return EvalResult::make_approx(std::pow(a.approx, n));
}

inline EvalResult ev_func(FuncKind f, const EvalResult& a) {
    if (a.is_undefined()) return a;
    if (a.is_infinite()) {
        bool plus = a.kind == EvalResult::Kind::PlusInf;
        switch (f) {
            case FuncKind::Sqrt:
                return plus ? EvalResult::plus_inf() : EvalResult::undefined("sqrt domain");
            case FuncKind::Exp:
                return plus ? EvalResult::plus_inf() : EvalResult::make_exact(Rational(0));
            case FuncKind::Ln:
                return plus ? EvalResult::plus_inf() : EvalResult::undefined("ln domain");
            case FuncKind::Sin:
            case FuncKind::Cos:
                return EvalResult::undefined("oscillates at infinity");
            case FuncKind::Arctan:
                return EvalResult::make_approx(plus ? std::atan(INFINITY) : -std::atan(INFINITY));
        }
    }
    if (a.is_exact()) {
        const Rational& v = a.exact;
        switch (f) {
            case FuncKind::Sqrt:
                if (v < 0) return EvalResult::undefined("sqrt domain");
                if (auto r = exact_sqrt(v)) return EvalResult::make_exact(*r);
                break;
            case FuncKind::Exp:
                if (v == 0) return EvalResult::make_exact(Rational(1));
                break;
            case FuncKind::Ln:
                if (v <= 0) return EvalResult::undefined("ln domain");
                if (v == 1) return EvalResult::make_exact(Rational(0));
                break;
            case FuncKind::Sin:
                if (v == 0) return EvalResult::make_exact(Rational(0));
                break;
            case FuncKind::Cos:
                if (v == 0) return EvalResult::make_exact(Rational(1));
                break;
            case FuncKind::Arctan:
                if (v == 0) return EvalResult::make_exact(Rational(0));
                break;
        }
    }
    double x = a.as_double();
    switch (f) {
        case FuncKind::Sqrt: return EvalResult::make_approx(std::sqrt(x));
        case FuncKind::Exp: return EvalResult::make_approx(std::exp(x));
        case FuncKind::Ln:
            if (x <= 0) return EvalResult::undefined("ln domain");
            return EvalResult::make_approx(std::log(x));
        case FuncKind::Sin: return EvalResult::make_approx(std::sin(x));
        case FuncKind::Cos: return EvalResult::make_approx(std::cos(x));
        case FuncKind::Arctan: return EvalResult::make_approx(std::atan(x));
    }
    return EvalResult::undefined("bad func");
}

} // namespace detail

// Exact rational evaluation when possible, float otherwise. Division by an
// exact zero yields Undefined("div0"); indeterminacy is the caller's call.
inline EvalResult eval(const ExprPtr& e, const Bindings& at) {
    switch (e->kind) {
        case NodeKind::Const:
            return EvalResult::make_exact(e->value);
        case NodeKind::Var: {
            auto it = at.find(e->name);
            if (it == at.end()) throw EvalError("unbound variable '" + e->name + "'");
            return it->second;
        }
        case NodeKind::Add: {
            EvalResult acc = EvalResult::make_exact(Rational(0));
            for (const auto& c : e->children) acc = detail::ev_add(acc, eval(c, at));
            return acc;
        }
        case NodeKind::Mul: {
            EvalResult acc = EvalResult::make_exact(Rational(1));
            for (const auto& c : e->children) acc = detail::ev_mul(acc, eval(c, at));
            return acc;
        }
        case NodeKind::Neg:
            return detail::ev_neg(eval(e->children[0], at));
        case NodeKind::Div:
            return detail::ev_div(eval(e->children[0], at), eval(e->children[1], at));
        case NodeKind::Pow:
            return detail::ev_pow(eval(e->children[0], at), e->exponent);
        case NodeKind::Func:
            return detail::ev_func(e->func, eval(e->children[0], at));
    }
    return EvalResult::undefined("bad node");
}

} // namespace hopital2d

#endif
