#pragma once

#include "dp/conserved.hpp"
#include "dp/fourier_poly.hpp"

namespace dp {

// Quadratic + cubic part of the canonical energy in mode coordinates on a
// finite cutoff: c sum_{j>0} u_j u_{-j} - (1/6) sum_{j+k+l=0} u_j u_k u_l,
// the cubic coefficient of a monomial being -(ordered triple count)/6.
inline FourierPolynomial dp_hamiltonian_fourier(int J, const Rational& c = Rational(1)) {
    if (J < 2) throw ConfigError("hamiltonian needs cutoff >= 2");
    std::map<int, Rational> w;
    for (int j = 1; j <= J; ++j) w[j] = c;
    FourierPolynomial H = diagonal_quadratic(w, J);
    for (int j = -J; j <= J; ++j) {
        if (j == 0) continue;
        for (int k = j; k <= J; ++k) {
            if (k == 0) continue;
            int l = -j - k;
            if (l < k || l == 0 || l > J) continue; // j <= k <= l once each
            unsigned count = (j == k && k == l) ? 1 : (j == k || k == l) ? 3 : 6;
            H.add_term(FourierMultiIndex::from_modes({j, k, l}),
                       GaussianRational(Rational(-(long)count, 6)));
        }
    }
    return H;
}

inline std::map<int, Rational> dp_h0_weights(int J, const Rational& c = Rational(1)) {
    std::map<int, Rational> w;
    for (int j = 1; j <= J; ++j) w[j] = c;
    return w;
}

// Solve {H0, chi} + G = Z for a homogeneous G: on the range of the adjoint
// action chi_a = G_a / (i Omega(a)); the kernel part Z collects the
// divisor-zero monomials and is returned untouched.
struct HomologicalSplit {
    FourierPolynomial chi;
    FourierPolynomial kernel_part;
};

inline HomologicalSplit homological_solve(const FourierPolynomial& G,
                                          const std::map<int, Rational>& h0_weights) {
    HomologicalSplit out{FourierPolynomial(G.cutoff()), FourierPolynomial(G.cutoff())};
    for (const auto& [d, lvl] : G.graded()) {
        (void)d;
        for (const auto& [a, v] : lvl) {
            Rational w = diag_divisor(h0_weights, a);
            if (w == 0) {
                out.kernel_part.add_term(a, v);
            } else {
                // v / (i w) = -i v / w
                GaussianRational chi_v = GaussianRational(v.im / w, -(v.re / w));
                out.chi.add_term(a, chi_v);
            }
        }
    }
    return out;
}

// Lie transform e^{ad_chi} with ad_chi[P] = {P, chi}, truncated at max_degree.
// With chi solving {H0,chi}+G=Z, the transform replaces the homogeneous part
// G of the Hamiltonian by its kernel projection Z.
inline FourierPolynomial lie_transform(const FourierPolynomial& H, const FourierPolynomial& chi,
                                       unsigned max_degree) {
    FourierPolynomial out = H.truncated(max_degree);
    FourierPolynomial term = H.truncated(max_degree);
    Rational kfac(1);
    for (unsigned k = 1; k <= max_degree + 2; ++k) {
        term = poisson(term, chi).truncated(max_degree);
        if (term.is_zero()) break;
        kfac *= k;
        out = out + term.scaled(GaussianRational(Rational(1) / kfac));
    }
    return out;
}

struct BirkhoffStepResult {
    FourierPolynomial H_next;
    FourierPolynomial chi;
    FourierPolynomial normal_terms; // kernel projection entering the normal form
    std::vector<FourierMultiIndex> cutoff_flagged; // kernel support in the guard band
    std::vector<FourierMultiIndex> nontrivial_kernel; // certified region, not action-type
};

// One normalization step: removes the non-resonant part of the homogeneity
// degree k+3 and keeps the kernel projection. Kernel indices whose support
// reaches into the guard band |j| > J - (max degree) are flagged rather than
// trusted: the bracket may feed them from modes beyond the cutoff.
inline BirkhoffStepResult birkhoff_step(const FourierPolynomial& H_cur, unsigned k,
                                        const std::map<int, Rational>& h0_weights,
                                        unsigned trunc_degree) {
    unsigned target = k + 3;
    BirkhoffStepResult r{FourierPolynomial(H_cur.cutoff()), FourierPolynomial(H_cur.cutoff()),
                         FourierPolynomial(H_cur.cutoff()), {}, {}};
    FourierPolynomial G = H_cur.part(target);
    HomologicalSplit split = homological_solve(G, h0_weights);
    r.chi = split.chi;
    r.normal_terms = split.kernel_part;
    r.H_next = lie_transform(H_cur, split.chi, trunc_degree);
    int guard = H_cur.cutoff() - static_cast<int>(trunc_degree);
    for (const auto& [d, lvl] : split.kernel_part.graded()) {
        (void)d;
        for (const auto& [a, v] : lvl) {
            (void)v;
            if (a.max_abs_mode() > guard) r.cutoff_flagged.push_back(a);
            else if (!a.trivially_resonant()) r.nontrivial_kernel.push_back(a);
        }
    }
    return r;
}

struct ScanReport {
    unsigned long total = 0;
    unsigned long resonant = 0;
    unsigned long trivially_resonant = 0;
    // divisor-zero, not trivially resonant, with every tested km divisor zero
    std::vector<FourierMultiIndex> unresolved;
    // divisor-zero, not trivially resonant, resolved by some nonzero km divisor
    std::vector<FourierMultiIndex> resolved_by_km;
};

// Scan I_n up to the cutoff for divisor-zero indices and test the diagonal
// divisor ladder on the non-trivially-resonant ones. `dispersion` defaults to
// the circle law; substituting e.g. j -> j lets tests verify the scanner does
// find resonances when they exist.
inline ScanReport nonresonance_scan(unsigned n, int J, unsigned M = 0,
                                    const std::function<Rational(long)>& dispersion = {}) {
    ScanReport rep;
    unsigned km_count = M ? M : n + 4;
    auto disp = dispersion ? dispersion : [](long j) { return omega(j); };
    for (const auto& a : enumerate_In(n, J)) {
        ++rep.total;
        Rational d(0);
        for (const auto& [j, e] : a.support) d += disp(j) * e;
        if (d != 0) continue;
        ++rep.resonant;
        if (a.trivially_resonant()) {
            ++rep.trivially_resonant;
            continue;
        }
        bool resolved = false;
        for (unsigned m = 1; m <= km_count && !resolved; ++m)
            if (km_divisor(a, m) != 0) resolved = true;
        if (resolved) rep.resolved_by_km.push_back(a);
        else rep.unresolved.push_back(a);
    }
    return rep;
}

struct SimultaneousReport {
    bool identity_holds = true;       // {H0,K^(1)} + {H^(1),K0} = 0 for each K
    bool chi_normalizes_all = true;   // cubic range part of each K removed by chi
    std::vector<size_t> failing;
};

// Check that commuting quadratic+cubic pairs satisfy the degree-3 commutator
// identity and that a single generator normalizes every member.
inline SimultaneousReport simultaneous_check(const FourierPolynomial& H,
                                             const std::vector<FourierPolynomial>& Ks,
                                             const FourierPolynomial& chi,
                                             const std::map<int, Rational>& h0_weights) {
    SimultaneousReport rep;
    FourierPolynomial H0 = H.part(2), H1 = H.part(3);
    for (size_t i = 0; i < Ks.size(); ++i) {
        FourierPolynomial K0 = Ks[i].part(2), K1 = Ks[i].part(3);
        FourierPolynomial lhs = poisson(H0, K1) + poisson(H1, K0);
        bool ok = lhs.is_zero();
        FourierPolynomial moved = lie_transform(Ks[i].truncated(3), chi, 3).part(3);
        HomologicalSplit split = homological_solve(K1, h0_weights);
        bool norm_ok = (moved == split.kernel_part);
        if (!ok) rep.identity_holds = false;
        if (!norm_ok) rep.chi_normalizes_all = false;
        if (!ok || !norm_ok) rep.failing.push_back(i);
    }
    return rep;
}

// ---- bridge from differential-polynomial densities to mode coordinates ----

// Evaluate a ring element at c = 1; requires a sqrt5-free value.
inline Rational ring_value_at_c1(const RingElem& r) {
    Rational acc(0);
    for (const auto& [k, q] : r.terms()) {
        (void)k;
        if (q.b != 0) throw ConfigError("irrational coefficient at c = 1 bridge");
        acc += q.a;
    }
    return acc;
}

// Fourier expansion (at c = 1, cutoff J) of int f dx for the quadratic and
// cubic parts of a density f in w and its derivatives, under w_j = (1+j^2)u_j
// and the volume-1 normalization. Quadratic terms are first reduced to the
// diagonal; cubic monomials prod_t (d^{i_t} w) expand over ordered mode
// triples j+k+l = 0 with factor prod_t (i j_t)^{i_t} (1+j_t^2).
inline FourierPolynomial fourier_of_density_c1(const DiffSeries& f, int J) {
    FourierPolynomial out(J);
    auto [quad, rest] = ibp_reduce(f);
    for (const auto& [i, v] : quad.coeffs) {
        Rational coeff = ring_value_at_c1(v);
        for (int j = 1; j <= J; ++j) {
            Int jj = Int(j) * j;
            Int pw = 1;
            for (unsigned e = 0; e < i; ++e) pw *= jj;
            out.add_term(FourierMultiIndex::from_modes({j, -j}),
                         GaussianRational(coeff * 2 * Rational(pw * (1 + jj) * (1 + jj))));
        }
    }
    for (const auto& [a, v] : rest.terms()) {
        if (a.degree() != 3) continue;
        Rational coeff = ring_value_at_c1(v);
        std::vector<unsigned> slots;
        for (size_t i = 0; i < a.exponents.size(); ++i)
            for (unsigned e = 0; e < a.exponents[i]; ++e) slots.push_back(static_cast<unsigned>(i));
        for (int j = -J; j <= J; ++j) {
            if (j == 0) continue;
            for (int k = -J; k <= J; ++k) {
                if (k == 0) continue;
                int l = -j - k;
                if (l == 0 || std::abs(l) > J) continue;
                long modes[3] = {j, k, l};
                unsigned ipow = (slots[0] + slots[1] + slots[2]) % 4;
                Rational mag(1);
                for (int t = 0; t < 3; ++t) {
                    Int m = modes[t];
                    Int pw = 1;
                    for (unsigned e = 0; e < slots[t]; ++e) pw *= m;
                    mag *= Rational(pw * (1 + m * m));
                }
                mag *= coeff;
                GaussianRational g;
                switch (ipow) {
                    case 0: g = GaussianRational(mag); break;
                    case 1: g = GaussianRational(Rational(0), mag); break;
                    case 2: g = GaussianRational(-mag); break;
                    default: g = GaussianRational(Rational(0), -mag); break;
                }
                out.add_term(FourierMultiIndex::from_modes({j, k, l}), g);
            }
        }
    }
    return out;
}

} // namespace dp
