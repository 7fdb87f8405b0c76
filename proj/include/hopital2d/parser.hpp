#ifndef HOPITAL2D_PARSER_HPP
#define HOPITAL2D_PARSER_HPP

#include "expr.hpp"

#include <cctype>
#include <stdexcept>
#include <string>

namespace hopital2d {

class ParseError : public std::runtime_error {
  public:
    size_t offset;
    ParseError(const std::string& msg, size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

namespace detail {

// Grammar:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' integer)?
//   atom   := number | var | func '(' expr ')' | '(' expr ')' | '-' atom
// Whitespace is insignificant. Implicit multiplication is not supported.
class Parser {
  public:
    explicit Parser(const std::string& text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    const std::string& text_;
    size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_expr() {
        std::vector<ExprPtr> terms{parse_term()};
        for (;;) {
            if (consume('+')) {
                terms.push_back(parse_term());
            } else if (consume('-')) {
                terms.push_back(make_neg(parse_term()));
            } else {
                break;
            }
        }
        return make_add(std::move(terms));
    }

    ExprPtr parse_term() {
        ExprPtr e = parse_factor();
        for (;;) {
            if (consume('*')) {
                ExprPtr rhs = parse_factor();
                if (e->kind == NodeKind::Mul) {
                    auto children = e->children;
                    children.push_back(rhs);
                    e = make_mul(std::move(children));
                } else {
                    e = make_mul({e, rhs});
                }
            } else if (consume('/')) {
                ExprPtr rhs = parse_factor();
                // fold literal fractions so "1/2" is the rational 1/2
                if (e->kind == NodeKind::Const && rhs->kind == NodeKind::Const &&
                    rhs->value != 0) {
                    e = make_const(e->value / rhs->value);
                } else {
                    e = make_div(e, rhs);
                }
            } else {
                break;
            }
        }
        return e;
    }

    ExprPtr parse_factor() {
        ExprPtr base = parse_atom();
        if (consume('^')) {
            skip_ws();
            size_t start = pos_;
            bool neg = pos_ < text_.size() && text_[pos_] == '-';
            if (neg) ++pos_;
            size_t dstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == dstart) {
                pos_ = start;
                fail("expected integer exponent");
            }
            if (pos_ < text_.size() && text_[pos_] == '.') fail("non-integer exponent");
            int e;
            try {
                e = std::stoi(text_.substr(start, pos_ - start));
            } catch (const std::exception&) {
                pos_ = start;
                fail("exponent out of range");
            }
            if (e == 0) return make_const(1);
            return make_pow(base, e);
        }
        return base;
    }

    ExprPtr parse_atom() {
        char c = peek();
        if (c == '\0') fail("unexpected end of input");
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return e;
        }
        if (c == '-') {
            ++pos_;
            ExprPtr inner = parse_atom();
            // fold unary minus on literals so "-3" is a single constant
            if (inner->kind == NodeKind::Const) return make_const(-inner->value);
            return make_neg(inner);
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            size_t fstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (pos_ == fstart) fail("expected digits after '.'");
        }
        return make_const(parse_rational(text_.substr(start, pos_ - start)));
    }

    ExprPtr parse_ident() {
        size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name = text_.substr(start, pos_ - start);
        if (name == "x" || name == "y" || name == "u" || name == "v") return make_var(name);
        static const std::pair<const char*, FuncKind> funcs[] = {
            {"sqrt", FuncKind::Sqrt}, {"exp", FuncKind::Exp},  {"ln", FuncKind::Ln},
            {"sin", FuncKind::Sin},   {"cos", FuncKind::Cos},  {"arctan", FuncKind::Arctan},
        };
        for (const auto& [fname, kind] : funcs) {
            if (name == fname) {
                if (!consume('(')) fail("expected '(' after function name");
                ExprPtr arg = parse_expr();
                if (!consume(')')) fail("expected ')'");
                return make_func(kind, arg);
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

} // namespace detail

inline ExprPtr parse(const std::string& text) { return detail::Parser(text).parse(); }

} // namespace hopital2d

#endif
