#pragma once

#include <optional>
#include <vector>

#include "dp/rho.hpp"

namespace dp {

// Diagonal quadratic functional sum_i d_i * int (d^i w)^2 dx, the normal form
// every quadratic density takes after integration by parts on the torus.
struct QuadraticForm {
    std::map<unsigned, RingElem> coeffs;

    RingElem coeff(unsigned i) const {
        auto it = coeffs.find(i);
        return it == coeffs.end() ? RingElem() : it->second;
    }
    void add(unsigned i, const RingElem& v) {
        if (v.is_zero()) return;
        auto it = coeffs.find(i);
        if (it == coeffs.end()) { coeffs[i] = v; return; }
        it->second += v;
        if (it->second.is_zero()) coeffs.erase(it);
    }
    bool is_zero() const { return coeffs.empty(); }
    std::optional<unsigned> top_order() const {
        if (coeffs.empty()) return std::nullopt;
        return coeffs.rbegin()->first;
    }
    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [i, v] : coeffs) arr.push_back({{"i", i}, {"coeff", v.to_json()}});
        return arr;
    }
};

// Integration by parts of the degree-2 part of int(density) dx:
//   int (d^{k1}w)(d^{k2}w) = (-1)^{k1 - (k1+k2)/2} int (d^{(k1+k2)/2} w)^2
// when k1+k2 is even, and 0 when odd (total derivative). The degree-1 part
// integrates to zero on zero-mean fields. Degrees >= 3 are returned as-is.
inline std::pair<QuadraticForm, DiffSeries> ibp_reduce(const DiffSeries& density) {
    QuadraticForm q;
    DiffSeries rest(density.trunc_degree());
    for (const auto& [a, v] : density.terms()) {
        unsigned deg = a.degree();
        if (deg >= 3) {
            rest.add_term(a, v);
            continue;
        }
        if (deg != 2) continue;
        unsigned k1 = 0, k2 = 0;
        bool first = true;
        for (size_t i = 0; i < a.exponents.size(); ++i) {
            for (unsigned rep = 0; rep < a.exponents[i]; ++rep) {
                (first ? k1 : k2) = static_cast<unsigned>(i);
                first = false;
            }
        }
        if ((k1 + k2) % 2 != 0) continue;
        unsigned mid = (k1 + k2) / 2;
        bool negate = (static_cast<int>(k1) - static_cast<int>(mid)) % 2 != 0;
        q.add(mid, negate ? -v : v);
    }
    return {q, rest};
}

struct ConservedFunctional {
    unsigned n = 0;
    QuadraticForm quadratic;
    DiffSeries higher;        // degree >= 3 remainder density, as computed
    RingElem linear_coeff_top; // coefficient of w_{n+1}
    RingElem constant_term;    // value at w = 0 (volume-1 torus)

    ConservedFunctional() : higher(0) {}
    explicit ConservedFunctional(unsigned deg) : higher(deg) {}

    nlohmann::json to_json() const {
        return {{"n", n},
                {"quadratic", quadratic.to_json()},
                {"constant", constant_term.to_json()},
                {"linear_coeff_top", linear_coeff_top.to_json()},
                {"higher", higher.to_json()}};
    }
};

// Gamma^(n) = int rho^(n) dx assembled from a computed hierarchy. Even levels
// must have vanishing quadratic part; a nonzero one signals a recursion bug.
inline ConservedFunctional gamma_from(const RhoHierarchy& h, unsigned n) {
    const DiffSeries& r = h.rho(n);
    ConservedFunctional g(r.trunc_degree());
    g.n = n;
    auto [q, rest] = ibp_reduce(r);
    if (n % 2 == 0 && !q.is_zero())
        throw ParityViolation("even-level functional has a nonzero quadratic part");
    g.quadratic = q;
    g.higher = rest;
    std::vector<unsigned> top(n + 2, 0);
    top[n + 1] = 1;
    g.linear_coeff_top = r.coeff(DerivMultiIndex(std::move(top)));
    g.constant_term = r.constant_term();
    return g;
}

inline ConservedFunctional gamma(unsigned n, unsigned D) {
    if (D < 3) throw ConfigError("gamma needs truncation degree >= 3");
    RhoHierarchy h(n, D);
    return gamma_from(h, n);
}

// Coefficients of the maximal-order linear terms, c_m = [w_{m+1}] rho^(m),
// together with the constants of the closed form
//   c_m = d1 * b^m + d2 * a^m,
//   a = (3+sqrt5)/(2 c^{1/3}),  b = (3-sqrt5)/(2 c^{1/3}),
//   d1 = (-3-sqrt5)/(18 c),     d2 = (-3+sqrt5)/(18 c).
// (d1 pairs with b and d2 with a: this is the pairing that matches the
// machine recursion; see verify_closed_form.)
struct LinearCoeffTable {
    std::vector<RingElem> c;

    static RingElem root_a() {
        return RingElem(QuadExt(Rational(3, 2), Rational(1, 2)), -1);
    }
    static RingElem root_b() {
        return RingElem(QuadExt(Rational(3, 2), Rational(-1, 2)), -1);
    }
    static RingElem coeff_d1() {
        return RingElem(QuadExt(Rational(-1, 6), Rational(-1, 18)), -3);
    }
    static RingElem coeff_d2() {
        return RingElem(QuadExt(Rational(-1, 6), Rational(1, 18)), -3);
    }

    // c_{m+2} = -c^{-2/3} c_m + 3 c^{-1/3} c_{m+1}
    bool verify_recursion() const {
        RingElem k0 = ring_monomial(Rational(-1), -2);
        RingElem k1 = ring_monomial(Rational(3), -1);
        for (size_t m = 0; m + 2 < c.size(); ++m)
            if (c[m + 2] != k0 * c[m] + k1 * c[m + 1]) return false;
        return true;
    }
    bool verify_closed_form() const {
        RingElem a = root_a(), b = root_b(), d1 = coeff_d1(), d2 = coeff_d2();
        RingElem ap(1), bp(1);
        for (size_t m = 0; m < c.size(); ++m) {
            if (c[m] != d1 * bp + d2 * ap) return false;
            ap *= a;
            bp *= b;
        }
        return true;
    }
};

inline LinearCoeffTable linear_table(unsigned N) {
    if (N < 2) throw ConfigError("linear table needs N >= 2");
    // Linear coefficients only need degree-1 truncation (constants feed the
    // linear terms through p, so degree 0 and 1 are both required).
    RhoHierarchy h(N, 1);
    LinearCoeffTable t;
    for (unsigned m = 0; m <= N; ++m) {
        std::vector<unsigned> top(m + 2, 0);
        top[m + 1] = 1;
        t.c.push_back(h.rho(m).coeff(DerivMultiIndex(std::move(top))));
    }
    if (!t.verify_recursion() || !t.verify_closed_form())
        throw ClosedFormMismatch("linear coefficient recursion drifted from the closed form");
    return t;
}

// Alternating sum S_n = sum_{k=0}^{n+1} (-1)^{(n+1)/2 - k} c_k c_{n-k+1},
// cross-checked against the even/odd regrouped form
//   S_n = 2 (-1)^{(n+1)/2} ( sum_{k even} - sum_{k odd} ) c_k c_{n+1-k}
//         + c_{(n+1)/2}^2,   k = 0..(n-1)/2.
inline RingElem compute_Sn(unsigned n, const LinearCoeffTable& t) {
    if (n % 2 == 0) throw ConfigError("S_n is defined for odd n");
    if (t.c.size() < n + 2) throw ConfigError("linear table too short for S_n");
    RingElem s;
    for (unsigned k = 0; k <= n + 1; ++k) {
        long q = static_cast<long>((n + 1) / 2) - static_cast<long>(k);
        RingElem term = t.c[k] * t.c[n + 1 - k];
        s += (q % 2 != 0) ? -term : term;
    }
    RingElem regrouped;
    for (unsigned k = 0; k <= (n - 1) / 2; ++k) {
        RingElem term = t.c[k] * t.c[n + 1 - k];
        regrouped += (k % 2 == 0) ? term : -term;
    }
    regrouped = regrouped * RingElem(2);
    if (((n + 1) / 2) % 2 != 0) regrouped = -regrouped;
    regrouped += t.c[(n + 1) / 2] * t.c[(n + 1) / 2];
    if (s != regrouped)
        throw ClosedFormMismatch("regrouped alternating sum disagrees with direct form");
    if (s.is_zero()) throw VanishingSn("S_n vanished exactly");
    return s;
}

inline RingElem compute_Sn(unsigned n) { return compute_Sn(n, linear_table(n + 1)); }

// Relates the top quadratic diagonal of Gamma^(n+2) (n odd) to S_n. With m =
// n+2, reducing the weight-(m+1) quadratic content of the integrated relation
// gives
//   c^{2/3} d_m^{(m+1)/2} + (2/3)(-1)^{(m+1)/2} c^{-1/3} c_m = 3 c^{1/3} S_n.
// The second summand on the left (the linear term of p^2 paired against the
// top linear term of rho^(m)) decides degeneracy: at m = 3 it cancels
// 3 c^{1/3} S_1 exactly and the top diagonal vanishes.
inline bool quad_consistency(unsigned n, const RhoHierarchy& h, const LinearCoeffTable& t) {
    if (n % 2 == 0) throw ConfigError("consistency check is defined for odd n");
    unsigned m = n + 2;
    auto [q, rest] = ibp_reduce(h.rho(m));
    (void)rest;
    RingElem lhs = ring_monomial(Rational(1), 2) * q.coeff((m + 1) / 2);
    RingElem cross = ring_monomial(Rational(2, 3), -1) * t.c[m];
    if (((m + 1) / 2) % 2 != 0) cross = -cross;
    RingElem rhs = ring_monomial(Rational(3), 1) * compute_Sn(n, t);
    return lhs + cross == rhs;
}

inline bool quad_consistency(unsigned n) {
    RhoHierarchy h(n + 2, 2);
    return quad_consistency(n, h, linear_table(n + 3));
}

// Expansion of M1 = int (c+w)^{1/3} dx = -int p dx. Degree-1 part integrates
// to zero; the quadratic part is -1/(9 c^{5/3}) int w^2.
inline ConservedFunctional m1_expansion(unsigned D) {
    if (D < 2) throw ConfigError("M1 expansion needs degree >= 2");
    DiffSeries density(D);
    DiffSeries p = taylor_p(D);
    for (const auto& [a, v] : p.terms()) density.add_term(a, -v);
    ConservedFunctional f(D);
    f.n = 0;
    auto [q, rest] = ibp_reduce(density);
    f.quadratic = q;
    f.higher = rest;
    f.constant_term = density.constant_term();
    return f;
}

// Triangular reduction: starting from F_1 built out of Gamma^(1) and M1,
//   F_{2k+1} = (1/d_{2k+1}^{k+1}) ( Gamma^(2k+1) - (d_{2k+1}^0 / mu) M1
//              - sum_{i=1..k} d_{2k+1}^i F_{2i-1} ),
// where mu is the machine-computed quadratic coefficient of M1 and F_{2i-1}
// carries the diagonal int (d^i w)^2. Each step requires the leading diagonal
// d_{2k+1}^{k+1} != 0; the hierarchy violates this at k = 1 (the level-3
// functional has an identically vanishing quadratic part), which surfaces as
// DegenerateLeadingCoefficient.
struct TriangularStep {
    unsigned n = 0;                 // odd level 2k+1
    QuadraticForm quadratic;        // of F_n after reduction
    std::map<unsigned, RingElem> combo; // level -> coefficient on Gamma^(level)
    RingElem m1_coeff;              // coefficient on M1
};

inline std::vector<TriangularStep> triangularize(unsigned K, unsigned D) {
    RhoHierarchy h(2 * K + 1, std::max(D, 2u));
    ConservedFunctional m1 = m1_expansion(std::max(D, 2u));
    RingElem mu = m1.quadratic.coeff(0);
    std::vector<TriangularStep> F;
    for (unsigned k = 0; k <= K; ++k) {
        unsigned n = 2 * k + 1;
        auto [g, rest] = ibp_reduce(h.rho(n));
        (void)rest;
        TriangularStep step;
        step.n = n;
        QuadraticForm acc = g;
        std::map<unsigned, RingElem> combo;
        combo[n] = RingElem(1);
        RingElem m1c;
        // cancel the int w^2 entry with M1
        RingElem d0 = g.coeff(0);
        if (!d0.is_zero()) {
            RingElem s = d0 * mu.inverse();
            acc.add(0, -(s * mu));
            m1c -= s;
        }
        // cancel int (d^i w)^2, i = 1..k, with the established F_{2i-1}
        for (unsigned i = 1; i <= k; ++i) {
            RingElem di = acc.coeff(i);
            if (di.is_zero()) continue;
            const TriangularStep& prev = F.at(i - 1);
            for (const auto& [j, v] : prev.quadratic.coeffs) acc.add(j, -(di * v));
            for (const auto& [lvl, v] : prev.combo) combo[lvl] -= di * v;
            m1c -= di * prev.m1_coeff;
        }
        RingElem lead = acc.coeff(k + 1);
        if (lead.is_zero())
            throw DegenerateLeadingCoefficient(
                "leading diagonal d_" + std::to_string(n) + "^" + std::to_string(k + 1) +
                " is exactly zero; the triangular ladder stops at level " + std::to_string(n));
        RingElem inv = lead.inverse();
        QuadraticForm norm;
        for (const auto& [j, v] : acc.coeffs) norm.add(j, inv * v);
        step.quadratic = norm;
        for (auto& [lvl, v] : combo) step.combo[lvl] = inv * v;
        step.m1_coeff = inv * m1c;
        F.push_back(step);
    }
    return F;
}

// Fourier-diagonal weights of the quadratic normal form int (d^{n-1} w)^2:
// weight(j) = |j|^{2(n-1)} (1+j^2)^2 on modes 0 < |j| <= J.
inline std::map<int, Rational> k_quadratic_fourier(unsigned n, int J) {
    if (n < 1) throw ConfigError("quadratic weights need n >= 1");
    std::map<int, Rational> w;
    for (int j = -J; j <= J; ++j) {
        if (j == 0) continue;
        Int jj = Int(j) * j;
        Int p = 1;
        for (unsigned e = 0; e + 1 < n; ++e) p *= jj;
        Int q = (1 + jj) * (1 + jj);
        w[j] = Rational(p * q);
    }
    return w;
}

} // namespace dp
