#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <stdexcept>
#include <string>

namespace rpls {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Element of the real quadratic field Q(sqrt(d)): value = a + b*sqrt(d)
/// with rational a, b and a positive non-square integer d.
///
/// Canonical form: b == 0 implies d == 0, so values that happen to be
/// rational compare equal regardless of the field they were computed in.
/// Mixed-d arithmetic is allowed only when one operand is rational
/// (b == 0); otherwise the radicands must match.
class Quadratic {
public:
    Quadratic() : a_(0), b_(0), d_(0) {}
    Quadratic(int v) : a_(v), b_(0), d_(0) {}
    Quadratic(long long v) : a_(v), b_(0), d_(0) {}
    Quadratic(const Rational& a) : a_(a), b_(0), d_(0) {}

    Quadratic(Rational a, Rational b, long long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
        if (b_ == 0) {
            d_ = 0;
            return;
        }
        if (d <= 0) throw std::invalid_argument("Quadratic: radicand must be positive");
        Int r = isqrt_floor(Int(d));
        if (r * r == d) {  // sqrt(d) rational: fold into the rational part
            a_ += b_ * Rational(r);
            b_ = 0;
            d_ = 0;
        }
    }

    const Rational& rational_part() const { return a_; }
    const Rational& radical_coefficient() const { return b_; }
    long long radicand() const { return d_; }
    bool is_rational() const { return b_ == 0; }

    int sign() const {
        int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: |a| vs |b|sqrt(d), decided by a^2 vs b^2 d
        Rational lhs = a_ * a_;
        Rational rhs = b_ * b_ * Rational(d_);
        if (lhs == rhs) return 0;  // unreachable for non-square d
        return lhs > rhs ? sa : sb;
    }

    Quadratic operator-() const { return raw(-a_, -b_, d_); }

    friend Quadratic operator+(const Quadratic& x, const Quadratic& y) {
        long long d = joint_radicand(x, y);
        return Quadratic(x.a_ + y.a_, x.b_ + y.b_, d == 0 ? 1 : d);
    }
    friend Quadratic operator-(const Quadratic& x, const Quadratic& y) { return x + (-y); }
    friend Quadratic operator*(const Quadratic& x, const Quadratic& y) {
        long long d = joint_radicand(x, y);
        Rational a = x.a_ * y.a_ + x.b_ * y.b_ * Rational(d);
        Rational b = x.a_ * y.b_ + x.b_ * y.a_;
        return Quadratic(std::move(a), std::move(b), d == 0 ? 1 : d);
    }
    friend Quadratic operator/(const Quadratic& x, const Quadratic& y) {
        if (y.a_ == 0 && y.b_ == 0) throw std::domain_error("Quadratic: division by zero");
        long long d = joint_radicand(x, y);
        // multiply by the conjugate of y
        Rational norm = y.a_ * y.a_ - y.b_ * y.b_ * Rational(d);
        Rational a = (x.a_ * y.a_ - x.b_ * y.b_ * Rational(d)) / norm;
        Rational b = (x.b_ * y.a_ - x.a_ * y.b_) / norm;
        return Quadratic(std::move(a), std::move(b), d == 0 ? 1 : d);
    }

    Quadratic& operator+=(const Quadratic& y) { return *this = *this + y; }
    Quadratic& operator-=(const Quadratic& y) { return *this = *this - y; }
    Quadratic& operator*=(const Quadratic& y) { return *this = *this * y; }
    Quadratic& operator/=(const Quadratic& y) { return *this = *this / y; }

    friend bool operator==(const Quadratic& x, const Quadratic& y) {
        if (x.b_ == 0 && y.b_ == 0) return x.a_ == y.a_;
        return (x - y).sign() == 0;
    }
    friend bool operator!=(const Quadratic& x, const Quadratic& y) { return !(x == y); }
    friend bool operator<(const Quadratic& x, const Quadratic& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Quadratic& x, const Quadratic& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Quadratic& x, const Quadratic& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Quadratic& x, const Quadratic& y) { return (x - y).sign() >= 0; }

    double to_double() const {
        double v = a_.convert_to<double>();
        if (b_ != 0) v += b_.convert_to<double>() * std::sqrt(static_cast<double>(d_));
        return v;
    }

    /// (1 + sqrt(5)) / 2
    static Quadratic golden_ratio() { return Quadratic(Rational(1, 2), Rational(1, 2), 5); }

private:
    static Quadratic raw(Rational a, Rational b, long long d) {
        Quadratic q;
        q.a_ = std::move(a);
        q.b_ = std::move(b);
        q.d_ = q.b_ == 0 ? 0 : d;
        return q;
    }
    static int sgn(const Rational& r) { return r > 0 ? 1 : (r < 0 ? -1 : 0); }
    static Int isqrt_floor(Int n) {
        if (n < 0) throw std::invalid_argument("isqrt of negative");
        Int x = n, y = (n + 1) / 2;
        while (y < x) {
            x = y;
            y = (y + n / y) / 2;
        }
        return x;
    }
    static long long joint_radicand(const Quadratic& x, const Quadratic& y) {
        if (x.d_ == 0) return y.d_;
        if (y.d_ == 0) return x.d_;
        if (x.d_ != y.d_) throw std::domain_error("Quadratic: mixed radicands");
        return x.d_;
    }

    Rational a_, b_;
    long long d_;
};

}  // namespace rpls
