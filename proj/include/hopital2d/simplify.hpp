#ifndef HOPITAL2D_SIMPLIFY_HPP
#define HOPITAL2D_SIMPLIFY_HPP

#include "expr.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace hopital2d {

// Total degree bound up to which integer powers of sums are expanded.
inline constexpr int kDefaultExpandBound = 6;

namespace detail {

// Canonical form: a quotient of polynomials whose "variables" are opaque
// atoms (Var, Func(...), or an unexpanded Pow of a sum). Like terms combine
// by monomial key; everything non-polynomial stays an atom.

struct Factor {
    ExprPtr atom;
    int exp; // > 0
};

struct Term {
    Rational coeff;
    std::vector<Factor> factors; // sorted by atom order, distinct atoms
};

struct Poly {
    std::vector<Term> terms; // sorted by term order, no zero coefficients
};

struct PolyFrac {
    Poly num;
    Poly den; // never the zero polynomial
};

inline int total_degree(const Term& t) {
    int d = 0;
    for (const auto& f : t.factors) d += f.exp;
    return d;
}

// Graded order: higher total degree first, then lexicographic on the
// exponent vector over the fixed atom order (x before y, x^2 before x*y).
inline int term_order(const Term& a, const Term& b) {
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db ? -1 : 1;
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        int c = compare(a.factors[i].atom, b.factors[j].atom);
        if (c != 0) return c; // earlier atom present => earlier term
        if (a.factors[i].exp != b.factors[j].exp)
            return a.factors[i].exp > b.factors[j].exp ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < a.factors.size()) return -1;
    if (j < b.factors.size()) return 1;
    return 0;
}

inline bool same_monomial(const Term& a, const Term& b) {
    if (a.factors.size() != b.factors.size()) return false;
    for (size_t i = 0; i < a.factors.size(); ++i) {
        if (a.factors[i].exp != b.factors[i].exp) return false;
        if (!equal(a.factors[i].atom, b.factors[i].atom)) return false;
    }
    return true;
}

inline Poly poly_normalize(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return term_order(a, b) < 0; });
    Poly p;
    for (auto& t : terms) {
        if (t.coeff == 0) continue;
        if (!p.terms.empty() && same_monomial(p.terms.back(), t)) {
            p.terms.back().coeff += t.coeff;
            if (p.terms.back().coeff == 0) p.terms.pop_back();
        } else {
            p.terms.push_back(std::move(t));
        }
    }
    return p;
}

inline Poly poly_const(Rational c) {
    Poly p;
    if (c != 0) p.terms.push_back({std::move(c), {}});
    return p;
}

inline Poly poly_atom(ExprPtr a, int exp = 1) {
    Poly p;
    p.terms.push_back({Rational(1), {{std::move(a), exp}}});
    return p;
}

inline bool poly_is_zero(const Poly& p) { return p.terms.empty(); }

inline bool poly_is_const(const Poly& p) {
    return p.terms.empty() || (p.terms.size() == 1 && p.terms[0].factors.empty());
}

inline Rational poly_const_value(const Poly& p) {
    return p.terms.empty() ? Rational(0) : p.terms[0].coeff;
}

inline Poly poly_add(const Poly& a, const Poly& b) {
    std::vector<Term> terms = a.terms;
    terms.insert(terms.end(), b.terms.begin(), b.terms.end());
    return poly_normalize(std::move(terms));
}

inline Poly poly_neg(const Poly& a) {
    Poly p = a;
    for (auto& t : p.terms) t.coeff = -t.coeff;
    return p;
}

inline Term term_mul(const Term& a, const Term& b) {
    Term r;
    r.coeff = a.coeff * b.coeff;
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        int c = compare(a.factors[i].atom, b.factors[j].atom);
        if (c < 0) {
            r.factors.push_back(a.factors[i++]);
        } else if (c > 0) {
            r.factors.push_back(b.factors[j++]);
        } else {
            r.factors.push_back({a.factors[i].atom, a.factors[i].exp + b.factors[j].exp});
            ++i;
            ++j;
        }
    }
    while (i < a.factors.size()) r.factors.push_back(a.factors[i++]);
    while (j < b.factors.size()) r.factors.push_back(b.factors[j++]);
    return r;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
    std::vector<Term> terms;
    terms.reserve(a.terms.size() * b.terms.size());
    for (const auto& ta : a.terms)
        for (const auto& tb : b.terms) terms.push_back(term_mul(ta, tb));
    return poly_normalize(std::move(terms));
}

inline Poly poly_scale(const Poly& a, const Rational& c) {
    if (c == 0) return {};
    Poly p = a;
    for (auto& t : p.terms) t.coeff *= c;
    return p;
}

inline int poly_degree(const Poly& p) {
    return p.terms.empty() ? 0 : total_degree(p.terms[0]);
}

inline Poly poly_ipow(const Poly& base, int n) {
    Poly acc = poly_const(Rational(1));
    Poly b = base;
    int k = n;
    while (k) {
        if (k & 1) acc = poly_mul(acc, b);
        b = poly_mul(b, b);
        k >>= 1;
    }
    return acc;
}

// Cancels the monomial GCD shared by every term of num and den, then divides
// both by den's leading coefficient so the representation is unique.
inline void frac_reduce(PolyFrac& f) {
    if (poly_is_zero(f.num)) {
        f.den = poly_const(Rational(1));
        return;
    }
    // shared monomial across all terms of both polynomials
    std::vector<Factor> shared;
    bool first = true;
    auto visit = [&](const Poly& p) {
        for (const auto& t : p.terms) {
            if (first) {
                shared = t.factors;
                first = false;
                continue;
            }
            std::vector<Factor> next;
            size_t i = 0, j = 0;
            while (i < shared.size() && j < t.factors.size()) {
                int c = compare(shared[i].atom, t.factors[j].atom);
                if (c < 0) {
                    ++i;
                } else if (c > 0) {
                    ++j;
                } else {
                    next.push_back({shared[i].atom, std::min(shared[i].exp, t.factors[j].exp)});
                    ++i;
                    ++j;
                }
            }
            shared = std::move(next);
        }
    };
    visit(f.num);
    visit(f.den);
    if (!shared.empty()) {
        auto strip = [&](Poly& p) {
            for (auto& t : p.terms) {
                std::vector<Factor> kept;
                size_t j = 0;
                for (const auto& fac : t.factors) {
                    int drop = 0;
                    while (j < shared.size() && compare(shared[j].atom, fac.atom) < 0) ++j;
                    if (j < shared.size() && compare(shared[j].atom, fac.atom) == 0)
                        drop = shared[j].exp;
                    if (fac.exp > drop) kept.push_back({fac.atom, fac.exp - drop});
                }
                t.factors = std::move(kept);
            }
            p = poly_normalize(std::move(p.terms));
        };
        strip(f.num);
        strip(f.den);
    }
    Rational lead = f.den.terms[0].coeff;
    if (lead != 1) {
        Rational inv = Rational(1) / lead;
        f.num = poly_scale(f.num, inv);
        f.den = poly_scale(f.den, inv);
    }
}

inline PolyFrac frac_const(Rational c) { return {poly_const(std::move(c)), poly_const(Rational(1))}; }

inline PolyFrac frac_add(const PolyFrac& a, const PolyFrac& b) {
    PolyFrac r;
    if (a.den.terms.size() == b.den.terms.size() &&
        [&] {
            for (size_t i = 0; i < a.den.terms.size(); ++i)
                if (a.den.terms[i].coeff != b.den.terms[i].coeff ||
                    !same_monomial(a.den.terms[i], b.den.terms[i]))
                    return false;
            return true;
        }()) {
        r.num = poly_add(a.num, b.num);
        r.den = a.den;
    } else {
        r.num = poly_add(poly_mul(a.num, b.den), poly_mul(b.num, a.den));
        r.den = poly_mul(a.den, b.den);
    }
    frac_reduce(r);
    return r;
}

inline PolyFrac frac_mul(const PolyFrac& a, const PolyFrac& b) {
    PolyFrac r{poly_mul(a.num, b.num), poly_mul(a.den, b.den)};
    frac_reduce(r);
    return r;
}

ExprPtr poly_to_expr(const Poly& p);

// Division by a zero polynomial has no fraction form; the caller keeps the
// original Div node as an opaque leaf in that case.
inline bool frac_div(const PolyFrac& a, const PolyFrac& b, PolyFrac& out) {
    if (poly_is_zero(b.num)) return false;
    out = {poly_mul(a.num, b.den), poly_mul(a.den, b.num)};
    frac_reduce(out);
    return true;
}

ExprPtr frac_to_expr(const PolyFrac& f);
PolyFrac to_frac(const Expr& e, int expand_bound);

inline PolyFrac frac_pow(const PolyFrac& base, int n, int expand_bound) {
    PolyFrac b = base;
    if (n < 0) {
        PolyFrac inv;
        if (!frac_div(frac_const(Rational(1)), b, inv)) {
            // 1/0^|n|: keep symbolic
            return {poly_atom(make_pow(frac_to_expr(base), n)), poly_const(Rational(1))};
        }
        b = inv;
        n = -n;
    }
    auto pow_side = [&](const Poly& p) -> Poly {
        if (poly_is_const(p)) return poly_const(rational_pow(poly_const_value(p), n));
        if (p.terms.size() == 1 || poly_degree(p) * n <= expand_bound) return poly_ipow(p, n);
        return poly_atom(make_pow(poly_to_expr(p), n));
    };
    PolyFrac r{pow_side(b.num), pow_side(b.den)};
    frac_reduce(r);
    return r;
}

inline ExprPtr term_to_expr(const Term& t) {
    std::vector<ExprPtr> factors;
    Rational c = t.coeff < 0 ? -t.coeff : t.coeff;
    bool neg = t.coeff < 0;
    if (c != 1 || t.factors.empty()) factors.push_back(make_const(c));
    for (const auto& f : t.factors) factors.push_back(make_pow(f.atom, f.exp));
    ExprPtr e = make_mul(std::move(factors));
    return neg ? make_neg(e) : e;
}

inline ExprPtr poly_to_expr(const Poly& p) {
    if (p.terms.empty()) return make_const(0);
    std::vector<ExprPtr> terms;
    terms.reserve(p.terms.size());
    for (const auto& t : p.terms) terms.push_back(term_to_expr(t));
    ExprPtr e = make_add(std::move(terms));
    // a lone negative constant prints and reparses as one literal
    if (e->kind == NodeKind::Neg && e->children[0]->kind == NodeKind::Const)
        return make_const(-e->children[0]->value);
    return e;
}

inline ExprPtr frac_to_expr(const PolyFrac& f) {
    if (poly_is_const(f.den) && poly_const_value(f.den) == 1) return poly_to_expr(f.num);
    return make_div(poly_to_expr(f.num), poly_to_expr(f.den));
}

inline ExprPtr fold_func_const(FuncKind k, const Rational& v, bool& ok) {
    ok = true;
    switch (k) {
        case FuncKind::Sqrt:
            if (auto r = exact_sqrt(v)) return make_const(*r);
            break;
        case FuncKind::Exp:
            if (v == 0) return make_const(1);
            break;
        case FuncKind::Ln:
            if (v == 1) return make_const(0);
            break;
        case FuncKind::Sin:
            if (v == 0) return make_const(0);
            break;
        case FuncKind::Cos:
            if (v == 0) return make_const(1);
            break;
        case FuncKind::Arctan:
            if (v == 0) return make_const(0);
            break;
    }
    ok = false;
    return nullptr;
}

inline PolyFrac to_frac(const Expr& e, int expand_bound) {
    switch (e.kind) {
        case NodeKind::Const:
            return frac_const(e.value);
        case NodeKind::Var:
            return {poly_atom(make_var(e.name)), poly_const(Rational(1))};
        case NodeKind::Neg: {
            PolyFrac f = to_frac(*e.children[0], expand_bound);
            f.num = poly_neg(f.num);
            return f;
        }
        case NodeKind::Add: {
            PolyFrac acc = frac_const(Rational(0));
            for (const auto& c : e.children) acc = frac_add(acc, to_frac(*c, expand_bound));
            return acc;
        }
        case NodeKind::Mul: {
            PolyFrac acc = frac_const(Rational(1));
            for (const auto& c : e.children) acc = frac_mul(acc, to_frac(*c, expand_bound));
            return acc;
        }
        case NodeKind::Div: {
            PolyFrac a = to_frac(*e.children[0], expand_bound);
            PolyFrac b = to_frac(*e.children[1], expand_bound);
            PolyFrac r;
            if (frac_div(a, b, r)) return r;
            return {poly_atom(make_div(frac_to_expr(a), make_const(0))), poly_const(Rational(1))};
        }
        case NodeKind::Pow:
            return frac_pow(to_frac(*e.children[0], expand_bound), e.exponent, expand_bound);
        case NodeKind::Func: {
            PolyFrac arg = to_frac(*e.children[0], expand_bound);
            ExprPtr arg_e = frac_to_expr(arg);
            if (arg_e->kind == NodeKind::Const) {
                bool ok;
                ExprPtr folded = fold_func_const(e.func, arg_e->value, ok);
                if (ok) return to_frac(*folded, expand_bound);
            }
            return {poly_atom(make_func(e.func, arg_e)), poly_const(Rational(1))};
        }
    }
    return frac_const(Rational(0));
}

} // namespace detail

// Canonical rewrite: constant folding, 0/1 identities, flattening and
// sorting of sums/products, like-term combination with rational
// coefficients, fraction normalization, bounded expansion of integer powers
// of sums. Idempotent; never fails.
inline ExprPtr simplify(const ExprPtr& e, int expand_bound = kDefaultExpandBound) {
    return detail::frac_to_expr(detail::to_frac(*e, expand_bound));
}

// Rewrites e as a single quotient (numerator, denominator), both canonical.
inline std::pair<ExprPtr, ExprPtr> as_single_fraction(const ExprPtr& e,
                                                      int expand_bound = kDefaultExpandBound) {
    detail::PolyFrac f = detail::to_frac(*e, expand_bound);
    return {detail::poly_to_expr(f.num), detail::poly_to_expr(f.den)};
}

namespace detail {

inline ExprPtr substitute_raw(const Expr& e, const std::map<std::string, ExprPtr>& bindings) {
    if (e.kind == NodeKind::Var) {
        auto it = bindings.find(e.name);
        return it != bindings.end() ? it->second : make_var(e.name);
    }
    auto copy = std::make_shared<Expr>(e);
    for (auto& c : copy->children) c = substitute_raw(*c, bindings);
    return copy;
}

} // namespace detail

// Simultaneous substitution of variables, followed by simplify.
inline ExprPtr substitute(const ExprPtr& e, const std::map<std::string, ExprPtr>& bindings,
                          int expand_bound = kDefaultExpandBound) {
    return simplify(detail::substitute_raw(*e, bindings), expand_bound);
}

} // namespace hopital2d

#endif
