#ifndef HOPITAL2D_EXPR_HPP
#define HOPITAL2D_EXPR_HPP

#include "rational.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hopital2d {

enum class NodeKind { Const, Var, Add, Mul, Pow, Neg, Div, Func };

enum class FuncKind { Sqrt, Exp, Ln, Sin, Cos, Arctan };

inline const char* func_name(FuncKind k) {
    switch (k) {
        case FuncKind::Sqrt: return "sqrt";
        case FuncKind::Exp: return "exp";
        case FuncKind::Ln: return "ln";
        case FuncKind::Sin: return "sin";
        case FuncKind::Cos: return "cos";
        case FuncKind::Arctan: return "arctan";
    }
    return "?";
}

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable expression tree node. Shared freely across threads once built.
class Expr {
  public:
    NodeKind kind;
    Rational value;                 // Const
    std::string name;               // Var
    std::vector<ExprPtr> children;  // Add/Mul: >=2, Pow/Neg/Func: 1, Div: 2
    int exponent = 0;               // Pow
    FuncKind func = FuncKind::Sqrt; // Func

    explicit Expr(NodeKind k) : kind(k) {}
};

inline ExprPtr make_const(Rational v) {
    auto e = std::make_shared<Expr>(NodeKind::Const);
    e->value = std::move(v);
    return e;
}

inline ExprPtr make_const(long v) { return make_const(Rational(v)); }

inline ExprPtr make_var(std::string name) {
    auto e = std::make_shared<Expr>(NodeKind::Var);
    e->name = std::move(name);
    return e;
}

inline ExprPtr make_add(std::vector<ExprPtr> children) {
    if (children.empty()) return make_const(0);
    if (children.size() == 1) return children[0];
    auto e = std::make_shared<Expr>(NodeKind::Add);
    e->children = std::move(children);
    return e;
}

inline ExprPtr make_mul(std::vector<ExprPtr> children) {
    if (children.empty()) return make_const(1);
    if (children.size() == 1) return children[0];
    auto e = std::make_shared<Expr>(NodeKind::Mul);
    e->children = std::move(children);
    return e;
}

inline ExprPtr make_pow(ExprPtr base, int exponent) {
    if (exponent == 1) return base;
    auto e = std::make_shared<Expr>(NodeKind::Pow);
    e->children = {std::move(base)};
    e->exponent = exponent;
    return e;
}

inline ExprPtr make_neg(ExprPtr child) {
    auto e = std::make_shared<Expr>(NodeKind::Neg);
    e->children = {std::move(child)};
    return e;
}

inline ExprPtr make_div(ExprPtr n, ExprPtr d) {
    auto e = std::make_shared<Expr>(NodeKind::Div);
    e->children = {std::move(n), std::move(d)};
    return e;
}

inline ExprPtr make_func(FuncKind f, ExprPtr arg) {
    auto e = std::make_shared<Expr>(NodeKind::Func);
    e->children = {std::move(arg)};
    e->func = f;
    return e;
}

// Fixed variable ordering: x < y < u < v < everything else (alphabetical).
inline int var_rank(const std::string& n) {
    if (n == "x") return 0;
    if (n == "y") return 1;
    if (n == "u") return 2;
    if (n == "v") return 3;
    return 4;
}

// Total order on expression trees; 0 means structurally equal.
inline int compare(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
    switch (a.kind) {
        case NodeKind::Const:
            if (a.value == b.value) return 0;
            return a.value < b.value ? -1 : 1;
        case NodeKind::Var: {
            int ra = var_rank(a.name), rb = var_rank(b.name);
            if (ra != rb) return ra < rb ? -1 : 1;
            return a.name.compare(b.name) < 0 ? -1 : (a.name == b.name ? 0 : 1);
        }
        case NodeKind::Func:
            if (a.func != b.func) return static_cast<int>(a.func) < static_cast<int>(b.func) ? -1 : 1;
            break;
        case NodeKind::Pow:
            if (a.exponent != b.exponent) return a.exponent < b.exponent ? -1 : 1;
            break;
        default:
            break;
    }
    if (a.children.size() != b.children.size())
        return a.children.size() < b.children.size() ? -1 : 1;
    for (size_t i = 0; i < a.children.size(); ++i) {
        int c = compare(*a.children[i], *b.children[i]);
        if (c != 0) return c;
    }
    return 0;
}

inline int compare(const ExprPtr& a, const ExprPtr& b) { return compare(*a, *b); }

inline bool equal(const ExprPtr& a, const ExprPtr& b) { return compare(*a, *b) == 0; }

inline bool is_const(const Expr& e, const Rational& v) {
    return e.kind == NodeKind::Const && e.value == v;
}

inline bool contains_var(const Expr& e, const std::string& name) {
    if (e.kind == NodeKind::Var) return e.name == name;
    for (const auto& c : e.children)
        if (contains_var(*c, name)) return true;
    return false;
}

// ---- formatting ----------------------------------------------------------

namespace detail {

// Precedence: Add = 1, Mul/Div = 2, Neg = 2, Pow = 3, atoms = 4.
inline int precedence(const Expr& e) {
    switch (e.kind) {
        case NodeKind::Add: return 1;
        case NodeKind::Mul:
        case NodeKind::Div:
        case NodeKind::Neg: return 2;
        case NodeKind::Pow: return 3;
        case NodeKind::Const: return e.value < 0 || !is_integer(e.value) ? 2 : 4;
        default: return 4;
    }
}

inline void format_into(const Expr& e, std::string& out, int min_prec);

inline void format_child(const Expr& e, std::string& out, int min_prec) {
    if (precedence(e) < min_prec) {
        out += '(';
        format_into(e, out, 0);
        out += ')';
    } else {
        format_into(e, out, min_prec);
    }
}

inline void format_into(const Expr& e, std::string& out, int) {
    switch (e.kind) {
        case NodeKind::Const:
            out += to_string(e.value);
            break;
        case NodeKind::Var:
            out += e.name;
            break;
        case NodeKind::Add:
            for (size_t i = 0; i < e.children.size(); ++i) {
                const Expr* c = e.children[i].get();
                bool negated = false;
                if (c->kind == NodeKind::Neg) {
                    negated = true;
                    c = c->children[0].get();
                } else if (c->kind == NodeKind::Const && c->value < 0) {
                    // print "a - 3" rather than "a + -3"
                    if (i > 0) {
                        out += " - ";
                        out += to_string(-c->value);
                        continue;
                    }
                }
                if (i > 0) out += negated ? " - " : " + ";
                else if (negated) out += "-";
                format_child(*c, out, 2);
            }
            break;
        case NodeKind::Mul:
            for (size_t i = 0; i < e.children.size(); ++i) {
                if (i > 0) out += "*";
                format_child(*e.children[i], out, 3);
            }
            break;
        case NodeKind::Div:
            format_child(*e.children[0], out, 3);
            out += "/";
            format_child(*e.children[1], out, 4);
            break;
        case NodeKind::Pow:
            format_child(*e.children[0], out, 4);
            out += "^";
            if (e.exponent < 0) {
                out += "(";
                out += std::to_string(e.exponent);
                out += ")";
            } else {
                out += std::to_string(e.exponent);
            }
            break;
        case NodeKind::Neg:
            // unary '-' binds tighter than '^' in the grammar, so anything
            // below an atom needs parentheses
            out += "-";
            format_child(*e.children[0], out, 4);
            break;
        case NodeKind::Func:
            out += func_name(e.func);
            out += '(';
            format_into(*e.children[0], out, 0);
            out += ')';
            break;
    }
}

} // namespace detail

// Deterministic infix rendering; parse(format(e)) gives back the same tree
// up to canonical form.
inline std::string format(const ExprPtr& e) {
    std::string out;
    detail::format_into(*e, out, 0);
    return out;
}

} // namespace hopital2d

#endif
