#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <vector>

#include "dp/rational.hpp"

namespace dp {

// Dispersion law on the circle: omega(j) = j (4+j^2)/(1+j^2), odd in j.
inline Rational omega(long j) {
    if (j == 0) throw ZeroMode("dispersion law at mode 0");
    Int jj = Int(j) * j;
    return Rational(Int(j) * (4 + jj), 1 + jj);
}

struct GaussianRational {
    Rational re{0};
    Rational im{0};

    GaussianRational() = default;
    GaussianRational(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long v) : re(v) {}

    bool is_zero() const { return re == 0 && im == 0; }
    friend GaussianRational operator+(const GaussianRational& x, const GaussianRational& y) {
        return {x.re + y.re, x.im + y.im};
    }
    friend GaussianRational operator-(const GaussianRational& x, const GaussianRational& y) {
        return {x.re - y.re, x.im - y.im};
    }
    friend GaussianRational operator-(const GaussianRational& x) { return {-x.re, -x.im}; }
    friend GaussianRational operator*(const GaussianRational& x, const GaussianRational& y) {
        return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
    }
    friend bool operator==(const GaussianRational& x, const GaussianRational& y) {
        return x.re == y.re && x.im == y.im;
    }
    GaussianRational times_i() const { return {-im, re}; }
    GaussianRational div(const Rational& d) const { return {re / d, im / d}; }
    GaussianRational conj() const { return {re, -im}; }

    friend std::ostream& operator<<(std::ostream& os, const GaussianRational& g) {
        os << to_slash_string(g.re);
        if (g.im != 0) os << (g.im > 0 ? "+" : "") << to_slash_string(g.im) << "i";
        return os;
    }
};

// Zero-momentum exponent vector on the integer modes, stored sparsely as a
// sorted (mode, exponent) list with no zero entries.
struct FourierMultiIndex {
    std::vector<std::pair<int, unsigned>> support;

    FourierMultiIndex() = default;
    static FourierMultiIndex from_modes(std::initializer_list<int> modes) {
        FourierMultiIndex a;
        for (int j : modes) a.bump(j);
        a.normalize();
        return a;
    }
    void bump(int j, unsigned e = 1) {
        for (auto& [m, ex] : support)
            if (m == j) { ex += e; return; }
        support.emplace_back(j, e);
    }
    void normalize() {
        std::sort(support.begin(), support.end());
        support.erase(std::remove_if(support.begin(), support.end(),
                                     [](const auto& p) { return p.second == 0; }),
                      support.end());
    }
    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [_, e] : support) d += e;
        return d;
    }
    long momentum() const {
        long m = 0;
        for (const auto& [j, e] : support) m += static_cast<long>(j) * e;
        return m;
    }
    unsigned exponent(int j) const {
        for (const auto& [m, e] : support)
            if (m == j) return e;
        return 0;
    }
    int max_abs_mode() const {
        int m = 0;
        for (const auto& [j, _] : support) m = std::max(m, std::abs(j));
        return m;
    }
    bool trivially_resonant() const {
        for (const auto& [j, e] : support)
            if (exponent(-j) != e) return false;
        return true;
    }
    friend bool operator<(const FourierMultiIndex& x, const FourierMultiIndex& y) {
        return x.support < y.support;
    }
    friend bool operator==(const FourierMultiIndex& x, const FourierMultiIndex& y) {
        return x.support == y.support;
    }
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [j, e] : support) {
            if (!first) os << " ";
            first = false;
            os << j;
            if (e > 1) os << "^" << e;
        }
        return os.str();
    }
};

inline Rational divisor(const FourierMultiIndex& a) {
    Rational s(0);
    for (const auto& [j, e] : a.support) s += omega(j) * e;
    return s;
}

// Divisor of the diagonal quadratic with weights |j|^{2(m-1)} (1+j^2)^2:
//   sum_j j^{2m-1} (1+j^2)(4+j^2) alpha_j.
inline Rational km_divisor(const FourierMultiIndex& a, unsigned m) {
    Rational s(0);
    for (const auto& [j, e] : a.support) {
        Int jj = Int(j) * j;
        Int p = j;
        for (unsigned i = 0; i + 1 < m; ++i) p *= jj;
        s += Rational(p * (1 + jj) * (4 + jj)) * e;
    }
    return s;
}

struct ResonanceReport {
    FourierMultiIndex alpha;
    Rational divisor_value{0};
    bool trivially_resonant = false;
    std::vector<Rational> km_divisors;
};

inline ResonanceReport classify_resonance(const FourierMultiIndex& a, unsigned M) {
    ResonanceReport r;
    r.alpha = a;
    r.divisor_value = divisor(a);
    r.trivially_resonant = a.trivially_resonant();
    for (unsigned m = 1; m <= M; ++m) r.km_divisors.push_back(km_divisor(a, m));
    return r;
}

// All zero-momentum indices of degree n+2 supported on 0 < |j| <= J, emitted
// in deterministic (lexicographic) order.
inline std::vector<FourierMultiIndex> enumerate_In(unsigned n, int J) {
    if (J < 1) throw ConfigError("mode cutoff must be >= 1");
    std::vector<FourierMultiIndex> out;
    std::vector<int> modes;
    for (int j = -J; j <= J; ++j)
        if (j != 0) modes.push_back(j);
    unsigned target = n + 2;
    std::vector<std::pair<int, unsigned>> cur;
    std::function<void(size_t, unsigned, long)> rec = [&](size_t idx, unsigned left, long mom) {
        if (left == 0) {
            if (mom == 0) {
                FourierMultiIndex a;
                a.support = cur;
                out.push_back(a);
            }
            return;
        }
        if (idx == modes.size()) return;
        // bound: remaining modes can move momentum by at most left * J
        long reach = static_cast<long>(left) * J;
        if (mom > reach || mom < -reach) return;
        for (unsigned e = 0; e <= left; ++e) {
            if (e > 0) {
                if (e == 1) cur.emplace_back(modes[idx], 1);
                else cur.back().second = e;
            }
            rec(idx + 1, left - e, mom + static_cast<long>(modes[idx]) * e);
            if (e > 0 && e == left) break;
        }
        if (!cur.empty() && cur.back().first == modes[idx]) cur.pop_back();
    };
    rec(0, target, 0);
    std::sort(out.begin(), out.end());
    return out;
}

// Exact determinant of the odd-power matrix V[r][i] = js[i]^(2r-1) by
// fraction-free elimination. Equals (prod js_i) * prod_{i<l} (js_l^2-js_i^2).
inline Int vandermonde_det(const std::vector<long>& js) {
    size_t k = js.size();
    for (size_t i = 0; i < k; ++i) {
        if (js[i] == 0) throw ZeroMode("vandermonde index 0");
        for (size_t l = i + 1; l < k; ++l)
            if (js[i] == js[l]) throw DuplicateIndex("repeated vandermonde index");
    }
    std::vector<std::vector<Int>> m(k, std::vector<Int>(k));
    for (size_t r = 0; r < k; ++r)
        for (size_t i = 0; i < k; ++i) {
            Int v = js[i];
            for (size_t e = 0; e < r; ++e) v *= Int(js[i]) * js[i];
            m[r][i] = v;
        }
    // Bareiss
    Int prev(1);
    int sign = 1;
    for (size_t p = 0; p + 1 < k; ++p) {
        if (m[p][p] == 0) {
            size_t swap_row = p + 1;
            while (swap_row < k && m[swap_row][p] == 0) ++swap_row;
            if (swap_row == k) return Int(0);
            std::swap(m[p], m[swap_row]);
            sign = -sign;
        }
        for (size_t r = p + 1; r < k; ++r)
            for (size_t col = p + 1; col < k; ++col)
                m[r][col] = (m[r][col] * m[p][p] - m[r][p] * m[p][col]) / prev;
        prev = m[p][p];
    }
    return k == 0 ? Int(1) : Int(sign) * m[k - 1][k - 1];
}

} // namespace dp
