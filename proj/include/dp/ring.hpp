#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "dp/quadext.hpp"

#include <json.hpp>

namespace dp {

// Element of Q(sqrt5)[c^{1/3}, c^{-1/3}]: a finite Laurent sum
//   sum_k  q_k * c^{k/3},   q_k in Q(sqrt5),
// stored sparsely by the third-exponent k. The zero element is the empty map.
class RingElem {
public:
    using Terms = std::map<int, QuadExt>;

    RingElem() = default;
    RingElem(long v) { if (v != 0) terms_[0] = QuadExt(v); }
    explicit RingElem(const QuadExt& q, int k = 0) { if (!q.is_zero()) terms_[k] = q; }
    explicit RingElem(const Rational& r, int k = 0) { if (r != 0) terms_[k] = QuadExt(r); }

    static RingElem c_power_third(int k, const QuadExt& coeff = QuadExt(Rational(1))) {
        return RingElem(coeff, k);
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_monomial() const { return terms_.size() == 1; }
    // For a monomial, its third-exponent and coefficient.
    std::pair<int, QuadExt> monomial() const {
        if (!is_monomial()) throw NotAMonomial("ring element is not a monomial");
        return *terms_.begin();
    }

    friend RingElem operator+(const RingElem& x, const RingElem& y) {
        RingElem r = x;
        for (const auto& [k, q] : y.terms_) r.add_term(k, q);
        return r;
    }
    friend RingElem operator-(const RingElem& x, const RingElem& y) {
        RingElem r = x;
        for (const auto& [k, q] : y.terms_) r.add_term(k, -q);
        return r;
    }
    friend RingElem operator-(const RingElem& x) {
        RingElem r;
        for (const auto& [k, q] : x.terms_) r.terms_[k] = -q;
        return r;
    }
    friend RingElem operator*(const RingElem& x, const RingElem& y) {
        RingElem r;
        for (const auto& [kx, qx] : x.terms_)
            for (const auto& [ky, qy] : y.terms_) r.add_term(kx + ky, qx * qy);
        return r;
    }
    RingElem& operator+=(const RingElem& y) { *this = *this + y; return *this; }
    RingElem& operator-=(const RingElem& y) { *this = *this - y; return *this; }
    RingElem& operator*=(const RingElem& y) { *this = *this * y; return *this; }

    friend bool operator==(const RingElem& x, const RingElem& y) { return x.terms_ == y.terms_; }
    friend bool operator!=(const RingElem& x, const RingElem& y) { return !(x == y); }

    // Inverse of a single monomial q*c^{k/3}. Deliberately restricted: every
    // series division in the hierarchy has a monomial leading coefficient.
    RingElem inverse() const {
        if (terms_.empty()) throw ZeroDivisor("inverse of ring zero");
        if (terms_.size() > 1) throw NotAMonomial("ring inverse needs a monomial");
        const auto& [k, q] = *terms_.begin();
        return RingElem(q.inverse(), -k);
    }

    RingElem pow(unsigned n) const {
        RingElem r(1);
        for (unsigned i = 0; i < n; ++i) r = r * *this;
        return r;
    }

    // Floating evaluation at a real parameter value; c^{1/3} is the real cube
    // root. `precision_bits` is the guaranteed internal precision for sqrt5
    // and the powers (the implementation computes with ~166 bits throughout).
    double eval(double c_value, unsigned precision_bits = 64) const {
        if (c_value == 0.0) throw ZeroParameter("ring evaluation at c = 0");
        if (precision_bits == 0 || precision_bits > 160)
            throw ConfigError("unsupported eval precision");
        static const BigFloat sqrt5 = sqrt(BigFloat(5));
        BigFloat t = cbrt(BigFloat(c_value));
        BigFloat acc = 0;
        for (const auto& [k, q] : terms_) {
            BigFloat coeff = static_cast<BigFloat>(q.a) + static_cast<BigFloat>(q.b) * sqrt5;
            acc += coeff * boost::multiprecision::pow(t, k);
        }
        return static_cast<double>(acc);
    }

    nlohmann::json to_json() const {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& [k, q] : terms_) {
            arr.push_back({{"k", k}, {"a", to_slash_string(q.a)}, {"b", to_slash_string(q.b)}});
        }
        return {{"terms", arr}};
    }
    static RingElem from_json(const nlohmann::json& j) {
        RingElem r;
        for (const auto& t : j.at("terms")) {
            r.add_term(t.at("k").get<int>(),
                       QuadExt(rational_from_string(t.at("a").get<std::string>()),
                               rational_from_string(t.at("b").get<std::string>())));
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, q] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << q << ")";
            if (k != 0) os << "*c^(" << k << "/3)";
        }
        return os.str();
    }
    friend std::ostream& operator<<(std::ostream& os, const RingElem& r) { return os << r.str(); }

private:
    void add_term(int k, const QuadExt& q) {
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!q.is_zero()) terms_[k] = q;
            return;
        }
        it->second = it->second + q;
        if (it->second.is_zero()) terms_.erase(it);
    }

    Terms terms_;
};

// Convenience: rational monomial r * c^{k/3}.
inline RingElem ring_monomial(const Rational& r, int k) { return RingElem(r, k); }

} // namespace dp
