#ifndef HOPITAL2D_RATIONAL_HPP
#define HOPITAL2D_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace hopital2d {

using BigInt = boost::multiprecision::cpp_int;

// Canonical arbitrary-precision rational: denominator > 0, gcd(num, den) = 1.
// cpp_rational maintains both invariants on every operation.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Rational make_rational(long n, long d = 1) {
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(n, d);
}

inline bool is_integer(const Rational& r) { return den(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline std::string to_string(const Rational& r) { return r.str(); }

inline Rational rational_pow(const Rational& base, int e) {
    if (e == 0) return Rational(1);
    bool neg = e < 0;
    unsigned k = neg ? static_cast<unsigned>(-(long long)e) : static_cast<unsigned>(e);
    Rational acc(1), b = base;
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    if (neg) {
        if (acc == 0) throw std::domain_error("zero to negative power");
        acc = Rational(1) / acc;
    }
    return acc;
}

inline std::optional<BigInt> exact_isqrt(const BigInt& n) {
    if (n < 0) return std::nullopt;
    BigInt s = boost::multiprecision::sqrt(n);
    if (s * s == n) return s;
    return std::nullopt;
}

// sqrt(r) when r is a perfect rational square, nullopt otherwise.
inline std::optional<Rational> exact_sqrt(const Rational& r) {
    if (r < 0) return std::nullopt;
    auto sn = exact_isqrt(num(r));
    if (!sn) return std::nullopt;
    auto sd = exact_isqrt(den(r));
    if (!sd) return std::nullopt;
    return Rational(*sn, *sd);
}

// Parses "p", "p/q" or a finite decimal like "1.25". Throws on malformed input.
inline Rational parse_rational(const std::string& s) {
    auto bad = [&] { throw std::invalid_argument("bad rational literal: '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        BigInt n(s.substr(0, slash)), d(s.substr(slash + 1));
        if (d == 0) bad();
        return Rational(n, d);
    }
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        size_t frac_len = s.size() - dot - 1;
        if (digits.empty() || digits == "-" || digits == "+") bad();
        BigInt n(digits), d(1);
        for (size_t i = 0; i < frac_len; ++i) d *= 10;
        return Rational(n, d);
    }
    return Rational(BigInt(s));
}

} // namespace hopital2d

#endif
