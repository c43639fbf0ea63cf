#pragma once

#include "rpls/quadratic.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rpls {

/// Comparison tolerance shared by the float64 backend. Exact backends
/// never consult it.
struct float_config {
    static double& eps_cmp() {
        static double eps = 1e-12;
        return eps;
    }
};

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static constexpr const char* name = "rational";
    static Rational from_ratio(long long n, long long d) { return Rational(n, d); }
    static Rational from_double(double x) {
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite double");
        int exp = 0;
        double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
        Rational r(Int(std::llround(std::ldexp(m, 53))), Int(1) << 53);
        if (exp > 0)
            r *= Rational(Int(1) << exp);
        else if (exp < 0)
            r /= Rational(Int(1) << -exp);
        return r;
    }
    static double to_double(const Rational& x) { return x.convert_to<double>(); }
};

template <>
struct scalar_traits<Quadratic> {
    static constexpr bool is_exact = true;
    static constexpr const char* name = "quadratic";
    static Quadratic from_ratio(long long n, long long d) { return Quadratic(Rational(n, d)); }
    static Quadratic from_double(double x) { return Quadratic(scalar_traits<Rational>::from_double(x)); }
    static double to_double(const Quadratic& x) { return x.to_double(); }
};

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static constexpr const char* name = "float64";
    static double from_ratio(long long n, long long d) { return double(n) / double(d); }
    static double from_double(double x) { return x; }
    static double to_double(double x) { return x; }
};

template <class S>
double to_double(const S& x) {
    return scalar_traits<S>::to_double(x);
}

template <class S>
S from_ratio(long long n, long long d) {
    return scalar_traits<S>::from_ratio(n, d);
}

inline int sign(const Rational& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }
inline int sign(const Quadratic& x) { return x.sign(); }
inline int sign(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

template <class S>
S abs_value(const S& x) {
    return sign(x) < 0 ? S(-x) : x;
}

/// Equality test honoring the float backend tolerance.
inline bool scalars_equal(const Rational& x, const Rational& y) { return x == y; }
inline bool scalars_equal(const Quadratic& x, const Quadratic& y) { return x == y; }
inline bool scalars_equal(double x, double y) { return std::abs(x - y) <= float_config::eps_cmp(); }

// ---------------------------------------------------------------------------
// String form: "a/b" or "a/b+c/e*sqrt(d)" with optional signs. The emitted
// form parses back to the identical value on exact backends.

inline std::string scalar_to_string(const Rational& x) {
    std::string s = numerator(x).str();
    if (denominator(x) != 1) s += "/" + denominator(x).str();
    return s;
}

inline std::string scalar_to_string(const Quadratic& x) {
    std::string s = scalar_to_string(x.rational_part());
    if (!x.is_rational()) {
        const Rational& b = x.radical_coefficient();
        s += (b > 0 ? "+" : "-");
        s += scalar_to_string(b > 0 ? b : Rational(-b));
        s += "*sqrt(" + std::to_string(x.radicand()) + ")";
    }
    return s;
}

inline std::string scalar_to_string(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

namespace detail {

// Rational literal: [sign] digits [ '/' digits | '.' digits ]
inline Rational parse_rational_at(const std::string& s, size_t& pos) {
    size_t start = pos;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    size_t digits_begin = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == digits_begin) throw std::invalid_argument("bad scalar literal: '" + s.substr(start) + "'");
    Int num(s.substr(digits_begin, pos - digits_begin));
    Int den = 1;
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        size_t den_begin = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == den_begin) throw std::invalid_argument("bad denominator in '" + s + "'");
        den = Int(s.substr(den_begin, pos - den_begin));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    } else if (pos < s.size() && s[pos] == '.') {
        ++pos;
        size_t frac_begin = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        for (size_t i = frac_begin; i < pos; ++i) {
            num = num * 10 + (s[i] - '0');
            den *= 10;
        }
    }
    Rational r(num, den);
    return neg ? Rational(-r) : r;
}

}  // namespace detail

namespace detail {

// Consumes "sqrt(<int>)" at pos.
inline long long parse_radical_at(const std::string& s, size_t& pos) {
    if (s.compare(pos, 5, "sqrt(") != 0) throw std::invalid_argument("bad quadratic literal: '" + s + "'");
    pos += 5;
    size_t close = s.find(')', pos);
    if (close == std::string::npos) throw std::invalid_argument("unterminated sqrt in '" + s + "'");
    long long d = std::stoll(s.substr(pos, close - pos));
    pos = close + 1;
    return d;
}

inline bool at_radical(const std::string& s, size_t pos) {
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) ++pos;
    return s.compare(pos, 5, "sqrt(") == 0;
}

}  // namespace detail

inline Quadratic parse_quadratic(const std::string& s) {
    std::string t;
    t.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;

    size_t pos = 0;
    Rational a = 0, b = 0;
    long long d = 0;
    bool have_radical = false;

    if (detail::at_radical(t, pos)) {  // "sqrt(d)" / "-sqrt(d)"
        b = 1;
        if (t[pos] == '+' || t[pos] == '-') b = t[pos++] == '-' ? -1 : 1;
        d = detail::parse_radical_at(t, pos);
        have_radical = true;
    } else {
        Rational first = detail::parse_rational_at(t, pos);
        if (pos < t.size() && (t[pos] == '*' || t.compare(pos, 5, "sqrt(") == 0)) {
            // "c*sqrt(d)": the literal was the radical coefficient
            if (t[pos] == '*') ++pos;
            b = first;
            d = detail::parse_radical_at(t, pos);
            have_radical = true;
        } else {
            a = first;
            if (pos < t.size()) {  // "a +/- c*sqrt(d)" or "a +/- sqrt(d)"
                if (detail::at_radical(t, pos)) {
                    b = 1;
                    if (t[pos] == '+' || t[pos] == '-') b = t[pos++] == '-' ? -1 : 1;
                } else {
                    b = detail::parse_rational_at(t, pos);
                    if (pos < t.size() && t[pos] == '*') ++pos;
                }
                d = detail::parse_radical_at(t, pos);
                have_radical = true;
            }
        }
    }
    if (pos != t.size()) throw std::invalid_argument("trailing characters in scalar '" + s + "'");
    if (!have_radical || b == 0) return Quadratic(a);
    return Quadratic(a, b, d);
}

template <class S>
S parse_scalar(const std::string& s);

template <>
inline Rational parse_scalar<Rational>(const std::string& s) {
    Quadratic q = parse_quadratic(s);
    if (!q.is_rational()) throw std::invalid_argument("quadratic literal in rational mode: '" + s + "'");
    return q.rational_part();
}

template <>
inline Quadratic parse_scalar<Quadratic>(const std::string& s) {
    return parse_quadratic(s);
}

template <>
inline double parse_scalar<double>(const std::string& s) {
    return parse_quadratic(s).to_double();
}

}  // namespace rpls
