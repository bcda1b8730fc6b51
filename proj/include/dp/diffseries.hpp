#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "dp/ring.hpp"

namespace dp {

// Multi-index alpha = (a_0, ..., a_n): exponent a_i on the i-th x-derivative
// of w. Trailing zeros are trimmed so the representation is canonical.
struct DerivMultiIndex {
    std::vector<unsigned> exponents;

    DerivMultiIndex() = default;
    DerivMultiIndex(std::initializer_list<unsigned> e) : exponents(e) { trim(); }
    explicit DerivMultiIndex(std::vector<unsigned> e) : exponents(std::move(e)) { trim(); }

    void trim() {
        while (!exponents.empty() && exponents.back() == 0) exponents.pop_back();
    }
    unsigned degree() const {
        unsigned d = 0;
        for (unsigned e : exponents) d += e;
        return d;
    }
    unsigned weight() const {
        unsigned w = 0;
        for (size_t i = 0; i < exponents.size(); ++i) w += static_cast<unsigned>(i) * exponents[i];
        return w;
    }
    // Highest derivative order present, -1 for the constant monomial.
    int top_order() const { return static_cast<int>(exponents.size()) - 1; }

    friend bool operator<(const DerivMultiIndex& x, const DerivMultiIndex& y) {
        return x.exponents < y.exponents;
    }
    friend bool operator==(const DerivMultiIndex& x, const DerivMultiIndex& y) {
        return x.exponents == y.exponents;
    }
};

inline DerivMultiIndex merge_indices(const DerivMultiIndex& a, const DerivMultiIndex& b) {
    std::vector<unsigned> e(std::max(a.exponents.size(), b.exponents.size()), 0);
    for (size_t i = 0; i < a.exponents.size(); ++i) e[i] += a.exponents[i];
    for (size_t i = 0; i < b.exponents.size(); ++i) e[i] += b.exponents[i];
    return DerivMultiIndex(std::move(e));
}

struct ClassCertificate {
    bool in_sigma = false;   // every monomial has weight <= claimed order
    bool affine_top = false; // affine in the top derivative, lower slots empty
    unsigned min_degree = 0;
};

// Formal power series in w, w_x, ..., truncated at a fixed homogeneity degree
// D; all arithmetic silently discards degrees > D, so identities proved with
// these objects hold "through degree D".
class DiffSeries {
public:
    using Terms = std::map<DerivMultiIndex, RingElem>;

    explicit DiffSeries(unsigned trunc_degree) : trunc_(trunc_degree) {}

    unsigned trunc_degree() const { return trunc_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Max derivative order appearing (0 when empty or constant-only).
    unsigned order() const {
        int m = 0;
        for (const auto& [a, _] : terms_) m = std::max(m, a.top_order());
        return static_cast<unsigned>(std::max(0, m));
    }

    void add_term(const DerivMultiIndex& a, const RingElem& coeff) {
        if (a.degree() > trunc_ || coeff.is_zero()) return;
        auto it = terms_.find(a);
        if (it == terms_.end()) {
            terms_[a] = coeff;
            return;
        }
        it->second += coeff;
        if (it->second.is_zero()) terms_.erase(it);
    }

    RingElem coeff(const DerivMultiIndex& a) const {
        auto it = terms_.find(a);
        return it == terms_.end() ? RingElem() : it->second;
    }
    RingElem constant_term() const { return coeff(DerivMultiIndex{}); }

    DiffSeries homogeneous_part(unsigned degree) const {
        DiffSeries r(trunc_);
        for (const auto& [a, v] : terms_)
            if (a.degree() == degree) r.terms_[a] = v;
        return r;
    }

    friend DiffSeries operator+(const DiffSeries& f, const DiffSeries& g) {
        f.check_trunc(g);
        DiffSeries r = f;
        for (const auto& [a, v] : g.terms_) r.add_term(a, v);
        return r;
    }
    friend DiffSeries operator-(const DiffSeries& f, const DiffSeries& g) {
        f.check_trunc(g);
        DiffSeries r = f;
        for (const auto& [a, v] : g.terms_) r.add_term(a, -v);
        return r;
    }
    friend DiffSeries operator*(const DiffSeries& f, const DiffSeries& g) {
        f.check_trunc(g);
        DiffSeries r(f.trunc_);
        for (const auto& [a, va] : f.terms_) {
            unsigned da = a.degree();
            for (const auto& [b, vb] : g.terms_) {
                if (da + b.degree() > f.trunc_) continue;
                r.add_term(merge_indices(a, b), va * vb);
            }
        }
        return r;
    }
    friend DiffSeries operator*(const DiffSeries& f, const RingElem& s) {
        DiffSeries r(f.trunc_);
        for (const auto& [a, v] : f.terms_) r.add_term(a, v * s);
        return r;
    }
    friend DiffSeries operator*(const RingElem& s, const DiffSeries& f) { return f * s; }

    friend bool operator==(const DiffSeries& f, const DiffSeries& g) {
        return f.trunc_ == g.trunc_ && f.terms_ == g.terms_;
    }

    // Total x-derivative: d/dx w_i = w_{i+1}, extended by Leibniz. Preserves
    // homogeneity degree, raises the order by at most one.
    DiffSeries dx() const {
        DiffSeries r(trunc_);
        for (const auto& [a, v] : terms_) {
            for (size_t i = 0; i < a.exponents.size(); ++i) {
                if (a.exponents[i] == 0) continue;
                std::vector<unsigned> e = a.exponents;
                e.resize(std::max(e.size(), i + 2), 0);
                e[i] -= 1;
                e[i + 1] += 1;
                r.add_term(DerivMultiIndex(std::move(e)), v * RingElem(long(a.exponents[i])));
            }
        }
        return r;
    }
    DiffSeries dxx() const { return dx().dx(); }

    // Multiplicative inverse through degree D via the geometric series; the
    // constant term must be an invertible ring monomial.
    DiffSeries inverse() const {
        RingElem c0 = constant_term();
        if (c0.is_zero() || !c0.is_monomial())
            throw NonInvertibleConstantTerm("series constant term is not an invertible monomial");
        RingElem inv0 = c0.inverse();
        DiffSeries one(trunc_);
        one.add_term({}, RingElem(1));
        // h = 1 - f*inv0 has no constant term; sum_k h^k terminates at D.
        DiffSeries h = one - (*this * inv0);
        DiffSeries acc = one;
        DiffSeries pw = one;
        for (unsigned k = 1; k <= trunc_; ++k) {
            pw = pw * h;
            if (pw.is_zero()) break;
            acc = acc + pw;
        }
        return acc * inv0;
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [a, v] : terms_)
            arr.push_back({{"alpha", a.exponents}, {"coeff", v.to_json()}});
        return {{"trunc_degree", trunc_}, {"order", order()}, {"terms", arr}};
    }

private:
    void check_trunc(const DiffSeries& g) const {
        if (trunc_ != g.trunc_)
            throw TruncMismatch("series truncation degrees differ");
    }

    unsigned trunc_;
    Terms terms_;
};

// Taylor expansion of p(w) = -(c+w)^{1/3} through degree D: the coefficient
// of w^n is -binomial(1/3, n) c^{(1-3n)/3}.
inline Rational binomial_one_third(unsigned n) {
    Rational num(1);
    for (unsigned k = 0; k < n; ++k) num *= Rational(1, 3) - Rational(k);
    Rational fact(1);
    for (unsigned k = 2; k <= n; ++k) fact *= Rational(k);
    return num / fact;
}

inline DiffSeries taylor_p(unsigned D) {
    DiffSeries p(D);
    for (unsigned n = 0; n <= D; ++n) {
        std::vector<unsigned> e;
        if (n > 0) e.assign(1, n);
        p.add_term(DerivMultiIndex(std::move(e)),
                   ring_monomial(-binomial_one_third(n), 1 - 3 * static_cast<int>(n)));
    }
    return p;
}

// Membership/affinity certificate for the class Sigma_order^0: every stored
// monomial must satisfy weight(alpha) <= claimed_order, and the series must
// be affine in the top derivative w_{claimed_order} (a monomial touching the
// top slot carries it to power one with all intermediate slots empty).
inline ClassCertificate classify(const DiffSeries& f, unsigned claimed_order) {
    ClassCertificate cert;
    cert.in_sigma = true;
    cert.affine_top = true;
    unsigned min_deg = f.trunc_degree() + 1;
    for (const auto& [a, _] : f.terms()) {
        min_deg = std::min(min_deg, a.degree());
        if (a.weight() > claimed_order) cert.in_sigma = false;
        if (a.exponents.size() == claimed_order + 1) {
            unsigned top = a.exponents[claimed_order];
            if (top > 1) cert.affine_top = false;
            if (top == 1)
                for (unsigned i = 1; i < claimed_order; ++i)
                    if (a.exponents[i] != 0) cert.affine_top = false;
        } else if (a.exponents.size() > claimed_order + 1) {
            cert.in_sigma = false;
            cert.affine_top = false;
        }
    }
    cert.min_degree = f.terms().empty() ? 0 : min_deg;
    return cert;
}

} // namespace dp
