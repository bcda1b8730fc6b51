#pragma once

#include <ostream>

#include "dp/rational.hpp"

namespace dp {

// Element a + b*sqrt(5) of the real quadratic extension Q(sqrt 5).
// Arithmetic is exact; equality with zero is decidable (a = b = 0, since
// sqrt 5 is irrational).
struct QuadExt {
    Rational a{0};
    Rational b{0};

    QuadExt() = default;
    QuadExt(Rational a_, Rational b_ = Rational(0)) : a(std::move(a_)), b(std::move(b_)) {}
    QuadExt(long v) : a(v) {}

    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }

    friend QuadExt operator+(const QuadExt& x, const QuadExt& y) { return {x.a + y.a, x.b + y.b}; }
    friend QuadExt operator-(const QuadExt& x, const QuadExt& y) { return {x.a - y.a, x.b - y.b}; }
    friend QuadExt operator-(const QuadExt& x) { return {-x.a, -x.b}; }
    friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
        return {x.a * y.a + 5 * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    friend bool operator==(const QuadExt& x, const QuadExt& y) { return x.a == y.a && x.b == y.b; }
    friend bool operator!=(const QuadExt& x, const QuadExt& y) { return !(x == y); }

    // Field inverse (a - b sqrt5)/(a^2 - 5 b^2). The norm cannot vanish for a
    // nonzero element because sqrt 5 is irrational.
    QuadExt inverse() const {
        if (is_zero()) throw ZeroDivisor("inverse of zero in Q(sqrt5)");
        Rational norm = a * a - 5 * b * b;
        if (norm == 0) throw ZeroDivisor("degenerate norm in Q(sqrt5)");
        return {a / norm, -b / norm};
    }

    double eval() const {
        static const BigFloat sqrt5 = sqrt(BigFloat(5));
        BigFloat v = static_cast<BigFloat>(a) + static_cast<BigFloat>(b) * sqrt5;
        return static_cast<double>(v);
    }

    friend std::ostream& operator<<(std::ostream& os, const QuadExt& q) {
        os << to_slash_string(q.a);
        if (q.b != 0) os << (q.b > 0 ? "+" : "") << to_slash_string(q.b) << "*sqrt5";
        return os;
    }
};

} // namespace dp
