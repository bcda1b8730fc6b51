#pragma once

#include <vector>

#include "dp/diffseries.hpp"

namespace dp {

// The density hierarchy rho^(0..N), truncated at homogeneity degree D.
//
// Base cases:
//   rho^(0) = -p_x / p
//   rho^(1) = -p_x^2/p^3 + (2/3) p_xx/p^2 + 1/(3p)
// and for n >= 0 the order-by-order relation solved for rho^(n+2):
//   rho^(n) - rho^(n)_xx = rho^(n+2) p^2
//                        + 3 sum_{k1+k2=n+1} p rho^(k1) rho^(k2)
//                        + sum_{k1+k2+k3=n} rho^(k1) rho^(k2) rho^(k3)
//                        + 3 d/dx ( rho^(n+1) p )
//                        + 3 sum_{k1+k2=n} rho^(k1) d/dx rho^(k2)
// with all convolution sums over ordered tuples.
class RhoHierarchy {
public:
    RhoHierarchy(unsigned N, unsigned D) : p_(taylor_p(D)) {
        DiffSeries px = p_.dx();
        DiffSeries invp = p_.inverse();
        DiffSeries invp2 = invp * invp;
        inv_p2_ = (p_ * p_).inverse(); // cached: one inversion per hierarchy
        DiffSeries rho0 = DiffSeries(D) - (px * invp);
        rho_.push_back(rho0);
        if (N >= 1) {
            DiffSeries rho1 = DiffSeries(D) - (px * px * (invp2 * invp));
            rho1 = rho1 + p_.dxx() * invp2 * ring_monomial(Rational(2, 3), 0);
            rho1 = rho1 + invp * ring_monomial(Rational(1, 3), 0);
            rho_.push_back(rho1);
        }
        while (rho_.size() < N + 1) extend();
    }

    const DiffSeries& p() const { return p_; }
    const std::vector<DiffSeries>& levels() const { return rho_; }
    const DiffSeries& rho(unsigned n) const { return rho_.at(n); }
    unsigned max_level() const { return static_cast<unsigned>(rho_.size()) - 1; }

    // RHS of the defining relation at level n with rho^(n+2) already
    // substituted; the residual  rho^(n) - rho^(n)_xx - RHS  must vanish.
    DiffSeries residual(unsigned n) const {
        const DiffSeries& r2 = rho_.at(n + 2);
        DiffSeries rhs = r2 * p_ * p_;
        rhs = rhs + pair_sum(n + 1) * p_ * RingElem(3);
        rhs = rhs + triple_sum(n);
        rhs = rhs + (rho_.at(n + 1) * p_).dx() * RingElem(3);
        rhs = rhs + pair_dx_sum(n) * RingElem(3);
        return rho_.at(n) - rho_.at(n).dxx() - rhs;
    }

private:
    DiffSeries pair_sum(unsigned m) const {
        DiffSeries s(p_.trunc_degree());
        for (unsigned k1 = 0; k1 <= m; ++k1) s = s + rho_.at(k1) * rho_.at(m - k1);
        return s;
    }
    DiffSeries triple_sum(unsigned m) const {
        DiffSeries s(p_.trunc_degree());
        for (unsigned k1 = 0; k1 <= m; ++k1)
            for (unsigned k2 = 0; k2 + k1 <= m; ++k2)
                s = s + rho_.at(k1) * rho_.at(k2) * rho_.at(m - k1 - k2);
        return s;
    }
    DiffSeries pair_dx_sum(unsigned m) const {
        DiffSeries s(p_.trunc_degree());
        for (unsigned k1 = 0; k1 <= m; ++k1) s = s + rho_.at(k1) * rho_.at(m - k1).dx();
        return s;
    }

    void extend() {
        unsigned n = static_cast<unsigned>(rho_.size()) - 2;
        DiffSeries rhs = rho_.at(n) - rho_.at(n).dxx();
        rhs = rhs - pair_sum(n + 1) * p_ * RingElem(3);
        rhs = rhs - triple_sum(n);
        rhs = rhs - (rho_.at(n + 1) * p_).dx() * RingElem(3);
        rhs = rhs - pair_dx_sum(n) * RingElem(3);
        rho_.push_back(inv_p2_ * rhs);
    }

    DiffSeries p_;
    DiffSeries inv_p2_{0};
    std::vector<DiffSeries> rho_;
};

inline std::vector<DiffSeries> rho_seq(unsigned N, unsigned D) {
    return RhoHierarchy(N, D).levels();
}

} // namespace dp
