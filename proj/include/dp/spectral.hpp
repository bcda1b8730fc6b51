#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dp/fft.hpp"

namespace dp {

// Real zero-mean torus field stored as its Fourier coefficients (FFT layout).
struct SpectralState {
    size_t n_modes = 0;            // grid size N (power of two)
    std::vector<cplx> spectrum;    // u_hat_j, j in FFT layout
    double time = 0.0;

    explicit SpectralState(size_t n = 0) : n_modes(n), spectrum(n, cplx(0)) {}

    void enforce_invariants() {
        if (n_modes == 0) return;
        spectrum[0] = cplx(0);               // zero mean
        spectrum[n_modes / 2] = cplx(0);     // drop the unpaired Nyquist bin
        for (size_t j = 1; j < n_modes / 2; ++j) {
            cplx avg = 0.5 * (spectrum[j] + std::conj(spectrum[n_modes - j]));
            spectrum[j] = avg;
            spectrum[n_modes - j] = std::conj(avg);
        }
    }

    std::vector<double> grid() const { return to_grid(spectrum); }

    double sup_norm() const {
        double m = 0;
        for (double v : grid()) m = std::max(m, std::abs(v));
        return m;
    }
    double sobolev_norm(double s) const {
        double acc = 0;
        for (size_t i = 1; i < n_modes; ++i) {
            if (i == n_modes / 2) continue;
            double j2 = static_cast<double>(fft_mode(i, n_modes));
            j2 *= j2;
            acc += std::pow(1.0 + j2, s) * std::norm(spectrum[i]);
        }
        return std::sqrt(acc);
    }
};

struct SimConfig {
    double c = 1.0;
    size_t grid = 256;
    double dt = 1e-3;
    double t_end = 1.0;
    double amplitude = 1e-2;           // target H^2 norm of random initial data
    unsigned long long seed = 1;
    bool dealias = true;
    std::optional<double> mollifier_eps;
    std::vector<unsigned> gammas = {1, 3};
    std::vector<double> sobolev = {2.0};
    std::vector<unsigned> k_quads = {1, 2};
    size_t sample_every = 100;
    double blowup_factor = 0.5;        // abort when sup|u| >= factor * |c|
    std::map<int, cplx> init_modes;    // empty -> seeded random field
    std::string out = "run.csv";
};

inline double omega_real(long j) {
    double x = static_cast<double>(j);
    return x * (4.0 + x * x) / (1.0 + x * x);
}

// Smooth even cutoff profile: 1 on |xi|<=1, exp(1 - 1/(1-(|xi|-1)^2)) on
// 1<|xi|<2, 0 beyond.
inline double mollifier_profile(double xi) {
    double a = std::abs(xi);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    double t = a - 1.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

namespace detail {

inline void dealias_two_thirds(std::vector<cplx>& spec) {
    size_t n = spec.size();
    for (size_t i = 0; i < n; ++i)
        if (std::abs(fft_mode(i, n)) > static_cast<long>(n / 3)) spec[i] = cplx(0);
}

inline std::vector<cplx> product_spectrum(const std::vector<cplx>& a, const std::vector<cplx>& b,
                                          bool dealias) {
    std::vector<double> ga = to_grid(a), gb = to_grid(b);
    for (size_t i = 0; i < ga.size(); ++i) ga[i] *= gb[i];
    std::vector<cplx> s = to_spectrum(ga);
    if (dealias) dealias_two_thirds(s);
    return s;
}

} // namespace detail

// d/dt u_hat_j = -i omega(j) * hat(c u + u^2/2)_j : the quasi-linear torus
// flow whose invariants the symbolic modules compute. (The equivalent literal
// differential form is exercised against this multiplier form in the tests.)
inline SpectralState dp_rhs(const SpectralState& u, double c, bool dealias = true) {
    size_t n = u.n_modes;
    std::vector<cplx> half_sq = detail::product_spectrum(u.spectrum, u.spectrum, dealias);
    SpectralState out(n);
    for (size_t i = 1; i < n; ++i) {
        long j = fft_mode(i, n);
        if (j == 0) continue;
        cplx g = c * u.spectrum[i] + 0.5 * half_sq[i];
        out.spectrum[i] = cplx(0, -omega_real(j)) * g;
    }
    out.time = u.time;
    return out;
}

// Mollified flow: -J_eps[(c + J_eps u) d/dx J_eps u] - 3c d/dx D^-2 u
//                 - (3/2) d/dx D^-2 (u^2),  with hat(J_eps u)_j = jhat(eps j).
inline SpectralState mollified_rhs(const SpectralState& u, double c, double eps,
                                   bool dealias = true) {
    if (!(eps > 0.0 && eps <= 1.0)) throw ConfigError("mollifier epsilon must be in (0,1]");
    size_t n = u.n_modes;
    std::vector<cplx> ju(n), jux(n);
    for (size_t i = 0; i < n; ++i) {
        long j = fft_mode(i, n);
        double h = mollifier_profile(eps * static_cast<double>(j));
        ju[i] = h * u.spectrum[i];
        jux[i] = cplx(0, static_cast<double>(j)) * ju[i];
    }
    // (c + J_eps u) * (J_eps u)_x
    std::vector<cplx> prod = detail::product_spectrum(ju, jux, dealias);
    for (size_t i = 0; i < n; ++i) prod[i] += c * jux[i];
    std::vector<cplx> usq = detail::product_spectrum(u.spectrum, u.spectrum, dealias);
    SpectralState out(n);
    for (size_t i = 1; i < n; ++i) {
        long j = fft_mode(i, n);
        if (j == 0) continue;
        double h = mollifier_profile(eps * static_cast<double>(j));
        double jd = static_cast<double>(j);
        cplx nonlocal = cplx(0, jd / (1.0 + jd * jd)) * (3.0 * c * u.spectrum[i] + 1.5 * usq[i]);
        out.spectrum[i] = -h * prod[i] - nonlocal;
    }
    out.time = u.time;
    return out;
}

inline SpectralState rhs_for(const SpectralState& u, const SimConfig& cfg) {
    if (cfg.mollifier_eps) return mollified_rhs(u, cfg.c, *cfg.mollifier_eps, cfg.dealias);
    return dp_rhs(u, cfg.c, cfg.dealias);
}

// One classical RK4 step; reasserts reality and zero mean, then applies the
// wave-breaking guard (the theory lives in sup|u| < |c|/2).
inline SpectralState step(const SpectralState& u, const SimConfig& cfg) {
    auto axpy = [&](const SpectralState& base, double h, const SpectralState& d) {
        SpectralState r = base;
        for (size_t i = 0; i < r.spectrum.size(); ++i) r.spectrum[i] += h * d.spectrum[i];
        return r;
    };
    SpectralState k1 = rhs_for(u, cfg);
    SpectralState k2 = rhs_for(axpy(u, cfg.dt / 2, k1), cfg);
    SpectralState k3 = rhs_for(axpy(u, cfg.dt / 2, k2), cfg);
    SpectralState k4 = rhs_for(axpy(u, cfg.dt, k3), cfg);
    SpectralState out = u;
    for (size_t i = 0; i < out.spectrum.size(); ++i)
        out.spectrum[i] += cfg.dt / 6.0 *
            (k1.spectrum[i] + 2.0 * k2.spectrum[i] + 2.0 * k3.spectrum[i] + k4.spectrum[i]);
    out.time = u.time + cfg.dt;
    out.enforce_invariants();
    if (out.sup_norm() >= cfg.blowup_factor * std::abs(cfg.c))
        throw BlowUpDetected("sup|u| reached " + std::to_string(out.sup_norm()) +
                             " at t = " + std::to_string(out.time));
    return out;
}

// ---- diagnostics ----

// Pointwise density recursion on a padded grid; returns the means of the
// levels 0..nmax. Requires |w| < |c| pointwise (real cube-root domain).
inline std::vector<double> gamma_diagnostics(const SpectralState& u, double c, unsigned nmax) {
    size_t n = u.n_modes, np = 2 * n;
    std::vector<cplx> wpad(np, cplx(0));
    for (size_t i = 0; i < n; ++i) {
        long j = fft_mode(i, n);
        if (std::abs(j) >= static_cast<long>(n / 2)) continue;
        double mult = 1.0 + static_cast<double>(j) * j;
        size_t ip = j >= 0 ? static_cast<size_t>(j) : np - static_cast<size_t>(-j);
        wpad[ip] = mult * u.spectrum[i];
    }
    std::vector<double> w = to_grid(wpad);
    for (double v : w)
        if (std::abs(v) >= std::abs(c))
            throw CubeRootDomain("|w| reached |c|; cube-root domain left");
    auto ddx = [&](const std::vector<double>& f) {
        std::vector<cplx> s = to_spectrum(f);
        for (size_t i = 0; i < np; ++i)
            s[i] *= cplx(0, static_cast<double>(fft_mode(i, np)));
        s[np / 2] = cplx(0);
        return to_grid(s);
    };
    auto mean = [&](const std::vector<double>& f) {
        double acc = 0;
        for (double v : f) acc += v;
        return acc / static_cast<double>(np);
    };
    std::vector<double> p(np), p2(np);
    for (size_t i = 0; i < np; ++i) {
        p[i] = -std::cbrt(c + w[i]);
        p2[i] = p[i] * p[i];
    }
    std::vector<double> px = ddx(p);
    std::vector<std::vector<double>> rho;
    {
        std::vector<double> r0(np);
        for (size_t i = 0; i < np; ++i) r0[i] = -px[i] / p[i];
        rho.push_back(r0);
    }
    if (nmax >= 1) {
        std::vector<double> pxx = ddx(px), r1(np);
        for (size_t i = 0; i < np; ++i)
            r1[i] = -px[i] * px[i] / (p2[i] * p[i]) + (2.0 / 3.0) * pxx[i] / p2[i] +
                    1.0 / (3.0 * p[i]);
        rho.push_back(r1);
    }
    while (rho.size() < nmax + 1) {
        unsigned lev = static_cast<unsigned>(rho.size()) - 2;
        std::vector<double> rhs = rho[lev];
        std::vector<double> rxx = ddx(ddx(rho[lev]));
        for (size_t i = 0; i < np; ++i) rhs[i] -= rxx[i];
        for (unsigned k1 = 0; k1 <= lev + 1; ++k1)
            for (size_t i = 0; i < np; ++i)
                rhs[i] -= 3.0 * p[i] * rho[k1][i] * rho[lev + 1 - k1][i];
        for (unsigned k1 = 0; k1 <= lev; ++k1)
            for (unsigned k2 = 0; k2 + k1 <= lev; ++k2)
                for (size_t i = 0; i < np; ++i)
                    rhs[i] -= rho[k1][i] * rho[k2][i] * rho[lev - k1 - k2][i];
        {
            std::vector<double> rp(np);
            for (size_t i = 0; i < np; ++i) rp[i] = rho[lev + 1][i] * p[i];
            std::vector<double> drp = ddx(rp);
            for (size_t i = 0; i < np; ++i) rhs[i] -= 3.0 * drp[i];
        }
        for (unsigned k1 = 0; k1 <= lev; ++k1) {
            std::vector<double> dr = ddx(rho[lev - k1]);
            for (size_t i = 0; i < np; ++i) rhs[i] -= 3.0 * rho[k1][i] * dr[i];
        }
        for (size_t i = 0; i < np; ++i) rhs[i] /= p2[i];
        rho.push_back(rhs);
    }
    std::vector<double> out;
    for (const auto& r : rho) out.push_back(mean(r));
    return out;
}

struct DiagnosticsSample {
    double t = 0;
    double H = 0, M0 = 0, M1 = 0;
    std::map<unsigned, double> gamma;
    std::map<double, double> sobolev;
    std::map<unsigned, double> k_quadratic;
};

inline DiagnosticsSample diag_all(const SpectralState& u, const SimConfig& cfg,
                                  const std::vector<unsigned>& ns) {
    DiagnosticsSample d;
    d.t = u.time;
    size_t n = u.n_modes, np = 2 * n;
    // padded grid for the cubic quadrature
    std::vector<cplx> upad(np, cplx(0));
    std::vector<cplx> wpad(np, cplx(0));
    for (size_t i = 0; i < n; ++i) {
        long j = fft_mode(i, n);
        if (std::abs(j) >= static_cast<long>(n / 2)) continue;
        size_t ip = j >= 0 ? static_cast<size_t>(j) : np - static_cast<size_t>(-j);
        upad[ip] = u.spectrum[i];
        wpad[ip] = (1.0 + static_cast<double>(j) * j) * u.spectrum[i];
    }
    std::vector<double> ug = to_grid(upad), wg = to_grid(wpad);
    double h = 0, m1 = 0;
    for (size_t i = 0; i < np; ++i) {
        h += cfg.c * ug[i] * ug[i] / 2.0 + ug[i] * ug[i] * ug[i] / 6.0;
        double m = cfg.c + wg[i];
        if (std::abs(wg[i]) >= std::abs(cfg.c))
            throw CubeRootDomain("|w| reached |c| in diagnostics");
        m1 += std::cbrt(m);
    }
    d.H = h / static_cast<double>(np);
    d.M1 = m1 / static_cast<double>(np);
    double m0 = 0;
    for (size_t i = 1; i < n; ++i) {
        if (i == n / 2) continue;
        double j = static_cast<double>(fft_mode(i, n));
        m0 += 0.5 * (1.0 + j * j) / (4.0 + j * j) * std::norm(u.spectrum[i]);
    }
    d.M0 = m0;
    if (!ns.empty()) {
        unsigned nmax = *std::max_element(ns.begin(), ns.end());
        std::vector<double> g = gamma_diagnostics(u, cfg.c, nmax);
        for (unsigned lev : ns) d.gamma[lev] = g[lev];
    }
    for (double s : cfg.sobolev) d.sobolev[s] = u.sobolev_norm(s);
    for (unsigned kq : cfg.k_quads) {
        double acc = 0;
        for (size_t i = 1; i < n; ++i) {
            if (i == n / 2) continue;
            double j = static_cast<double>(fft_mode(i, n));
            acc += std::pow(j * j, static_cast<double>(kq) - 1.0) * std::pow(1.0 + j * j, 2.0) *
                   std::norm(u.spectrum[i]);
        }
        d.k_quadratic[kq] = acc;
    }
    return d;
}

struct DiagnosticsSeries {
    std::vector<DiagnosticsSample> samples;
};

inline SpectralState initial_state(const SimConfig& cfg) {
    SpectralState u(cfg.grid);
    if (!cfg.init_modes.empty()) {
        for (const auto& [j, v] : cfg.init_modes) {
            if (j == 0 || std::abs(j) >= static_cast<int>(cfg.grid / 2))
                throw ConfigError("initial mode out of range");
            size_t i = j > 0 ? static_cast<size_t>(j) : cfg.grid - static_cast<size_t>(-j);
            u.spectrum[i] = v;
        }
        u.enforce_invariants();
        return u;
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * 3.141592653589793);
    for (int j = 1; j <= 8; ++j) {
        double amp = std::pow(0.6, j - 1);
        double ph = phase(rng);
        u.spectrum[static_cast<size_t>(j)] = 0.5 * amp * cplx(std::cos(ph), std::sin(ph));
    }
    u.enforce_invariants();
    double norm = u.sobolev_norm(2.0);
    if (norm > 0)
        for (auto& v : u.spectrum) v *= cfg.amplitude / norm;
    return u;
}

inline DiagnosticsSeries run(const SimConfig& cfg, const SpectralState& initial,
                             size_t sample_every) {
    DiagnosticsSeries out;
    SpectralState u = initial;
    out.samples.push_back(diag_all(u, cfg, cfg.gammas));
    size_t nsteps = static_cast<size_t>(std::llround(cfg.t_end / cfg.dt));
    for (size_t i = 1; i <= nsteps; ++i) {
        u = step(u, cfg);
        if (i % std::max<size_t>(sample_every, 1) == 0 || i == nsteps)
            out.samples.push_back(diag_all(u, cfg, cfg.gammas));
    }
    return out;
}

// Measured operator-norm decay of Id - J_eps from H^s to H^sigma over seeded
// sample fields with near-critical H^s tails. Returns the max Rayleigh ratio.
inline double mollifier_opnorm_probe(double eps, double s, double sigma, unsigned samples,
                                     size_t grid = 256, unsigned long long seed = 99) {
    if (!(sigma > 0 && sigma <= s)) throw ConfigError("need 0 < sigma <= s");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> urand(0.5, 1.5);
    double worst = 0;
    for (unsigned trial = 0; trial < samples; ++trial) {
        double num = 0, den = 0;
        for (long j = 1; j < static_cast<long>(grid / 2); ++j) {
            double jj = 1.0 + static_cast<double>(j) * j;
            // near-critical H^s tail with a randomized envelope
            double amp = urand(rng) * std::pow(jj, -(s + 0.6) / 2.0);
            double cut = 1.0 - mollifier_profile(eps * static_cast<double>(j));
            num += std::pow(jj, sigma) * cut * cut * amp * amp;
            den += std::pow(jj, s) * amp * amp;
        }
        worst = std::max(worst, std::sqrt(num / den));
    }
    return worst;
}

} // namespace dp
