#pragma once

#include "dp/fourier.hpp"

namespace dp {

// Graded polynomial in the modes u_j with Gaussian-rational coefficients.
// Every stored index has zero momentum and support within |j| <= cutoff.
class FourierPolynomial {
public:
    using Graded = std::map<unsigned, std::map<FourierMultiIndex, GaussianRational>>;

    explicit FourierPolynomial(int cutoff = 0) : cutoff_(cutoff) {}

    int cutoff() const { return cutoff_; }
    const Graded& graded() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const FourierMultiIndex& a, const GaussianRational& v) {
        if (v.is_zero()) return;
        if (a.momentum() != 0) throw ConfigError("nonzero-momentum monomial");
        if (a.max_abs_mode() > cutoff_) throw ConfigError("monomial beyond mode cutoff");
        auto& level = terms_[a.degree()];
        auto it = level.find(a);
        if (it == level.end()) {
            level[a] = v;
        } else {
            it->second = it->second + v;
            if (it->second.is_zero()) level.erase(it);
        }
        if (level.empty()) terms_.erase(a.degree());
    }

    GaussianRational coeff(const FourierMultiIndex& a) const {
        auto lv = terms_.find(a.degree());
        if (lv == terms_.end()) return {};
        auto it = lv->second.find(a);
        return it == lv->second.end() ? GaussianRational{} : it->second;
    }

    FourierPolynomial part(unsigned degree) const {
        FourierPolynomial r(cutoff_);
        auto lv = terms_.find(degree);
        if (lv != terms_.end()) r.terms_[degree] = lv->second;
        return r;
    }
    FourierPolynomial truncated(unsigned max_degree) const {
        FourierPolynomial r(cutoff_);
        for (const auto& [d, lvl] : terms_)
            if (d <= max_degree) r.terms_[d] = lvl;
        return r;
    }
    unsigned max_degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
    size_t term_count() const {
        size_t n = 0;
        for (const auto& [_, lvl] : terms_) n += lvl.size();
        return n;
    }

    friend FourierPolynomial operator+(const FourierPolynomial& p, const FourierPolynomial& q) {
        p.check(q);
        FourierPolynomial r = p;
        for (const auto& [d, lvl] : q.terms_)
            for (const auto& [a, v] : lvl) r.add_term(a, v);
        return r;
    }
    friend FourierPolynomial operator-(const FourierPolynomial& p, const FourierPolynomial& q) {
        p.check(q);
        FourierPolynomial r = p;
        for (const auto& [d, lvl] : q.terms_)
            for (const auto& [a, v] : lvl) r.add_term(a, -v);
        return r;
    }
    FourierPolynomial scaled(const GaussianRational& s) const {
        FourierPolynomial r(cutoff_);
        for (const auto& [d, lvl] : terms_)
            for (const auto& [a, v] : lvl) r.add_term(a, v * s);
        return r;
    }
    friend bool operator==(const FourierPolynomial& p, const FourierPolynomial& q) {
        return p.terms_ == q.terms_;
    }

    // Mirror u -> -u: negates odd-degree levels. Sends the invariants of the
    // flow with parameter c to those of the sign-flipped parameter.
    FourierPolynomial mirrored() const {
        FourierPolynomial r(cutoff_);
        for (const auto& [d, lvl] : terms_)
            for (const auto& [a, v] : lvl) r.add_term(a, d % 2 ? -v : v);
        return r;
    }

    bool real_coefficients() const {
        for (const auto& [d, lvl] : terms_)
            for (const auto& [a, v] : lvl)
                if (v.im != 0) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json out = nlohmann::json::object();
        out["cutoff"] = cutoff_;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [d, lvl] : terms_)
            for (const auto& [a, v] : lvl) {
                nlohmann::json modes = nlohmann::json::array();
                for (const auto& [j, e] : a.support) modes.push_back({{"j", j}, {"e", e}});
                arr.push_back({{"degree", d},
                               {"alpha", modes},
                               {"re", to_slash_string(v.re)},
                               {"im", to_slash_string(v.im)}});
            }
        out["terms"] = arr;
        return out;
    }

private:
    void check(const FourierPolynomial& q) const {
        if (cutoff_ != q.cutoff_) throw CutoffMismatch("mode cutoffs differ");
    }

    int cutoff_;
    Graded terms_;
};

// Exact canonical bracket on zero-momentum polynomials:
//   {P,Q} = sum_{a,b,j} i omega(j) a_j b_{-j} P_a Q_b u^{a+b-e_j-e_{-j}}.
// With this sign, a diagonal quadratic G (stored coefficient g_j on the
// monomial u_j u_{-j}) acts on monomials as {G, u^a} = -i Omega_G(a) u^a with
// Omega_G(a) = sum_{j>0} g_j omega(j) (a_j - a_{-j}).
inline FourierPolynomial poisson(const FourierPolynomial& P, const FourierPolynomial& Q) {
    if (P.cutoff() != Q.cutoff()) throw CutoffMismatch("mode cutoffs differ");
    FourierPolynomial R(P.cutoff());
    for (const auto& [dp_, plvl] : P.graded()) {
        (void)dp_;
        for (const auto& [a, pv] : plvl) {
            for (const auto& [dq_, qlvl] : Q.graded()) {
                (void)dq_;
                for (const auto& [b, qv] : qlvl) {
                    for (const auto& [j, aj] : a.support) {
                        unsigned bmj = b.exponent(-j);
                        if (bmj == 0) continue;
                        Rational factor = omega(j) * aj * bmj;
                        GaussianRational w = (pv * qv).times_i();
                        w = GaussianRational(w.re * factor, w.im * factor);
                        FourierMultiIndex m;
                        m.support = a.support;
                        for (const auto& [k, e] : b.support) m.bump(k, e);
                        m.normalize();
                        // subtract e_j + e_{-j}
                        for (auto& [k, e] : m.support) {
                            if (k == j) e -= 1;
                            if (k == -j) e -= 1;
                        }
                        m.normalize();
                        R.add_term(m, w);
                    }
                }
            }
        }
    }
    return R;
}

// Divisor of a diagonal quadratic Hamiltonian given by its stored weights
// (j>0 -> coefficient of u_j u_{-j}).
inline Rational diag_divisor(const std::map<int, Rational>& weights, const FourierMultiIndex& a) {
    Rational s(0);
    for (const auto& [j, g] : weights)
        s += g * omega(j) * (static_cast<long>(a.exponent(j)) - static_cast<long>(a.exponent(-j)));
    return s;
}

inline FourierPolynomial diagonal_quadratic(const std::map<int, Rational>& weights, int J) {
    FourierPolynomial p(J);
    for (const auto& [j, g] : weights) {
        if (j <= 0) throw ConfigError("diagonal weights are indexed by j > 0");
        p.add_term(FourierMultiIndex::from_modes({j, -j}), GaussianRational(g));
    }
    return p;
}

} // namespace dp
