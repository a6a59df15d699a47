#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bessel.hpp"
#include "eigen.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "lattice.hpp"

namespace imstark {

// Closed-form eigenstate of the infinite imaginary ladder, truncated to the
// finite chain: amplitudes i^(m-n) I_{n-m}(gamma) with gamma = J/F, centered
// at site m, unit-normalized with the same phase gauge as the numeric
// eigenvectors.
struct AnalyticState {
    int m = 0;             // localization center, 1-based site
    double gamma = 0.0;    // J/F
    std::vector<cdouble> amplitudes;
    double norm_constant = 0.0;
};

inline std::pair<cdouble, AnalyticState> analytic_eigenpair(int m, const LatticeConfig& cfg) {
    cfg.validate();
    if (cfg.kind != PotentialKind::ImaginaryStark)
        throw ConfigError("analytic eigenpair is defined for the imaginary potential only");
    if (!(cfg.F > 0.0)) throw ConfigError("analytic eigenpair requires F > 0");
    if (m < 1 || m > cfg.L) throw ConfigError("localization center must lie in 1..L");
    const double gamma = cfg.J / cfg.F;
    if (gamma > 500.0)
        throw OutOfRange("gamma = J/F above 500 is outside the validated range of the closed form");
    AnalyticState st;
    st.m = m;
    st.gamma = gamma;
    st.amplitudes.resize(static_cast<size_t>(cfg.L));
    const cdouble iunit(0.0, 1.0);
    for (int n = 1; n <= cfg.L; ++n) {
        // i^(m-n), reduced mod 4
        int e = (m - n) % 4;
        if (e < 0) e += 4;
        cdouble phase(1.0, 0.0);
        for (int k = 0; k < e; ++k) phase *= iunit;
        st.amplitudes[static_cast<size_t>(n - 1)] = phase * bessel_i(n - m, gamma);
    }
    const double nrm = norm2(st.amplitudes);
    if (!(nrm > 0.0)) throw ComputationError("analytic amplitudes vanished after truncation");
    st.norm_constant = 1.0 / nrm;
    for (cdouble& z : st.amplitudes) z *= st.norm_constant;
    // phase gauge: largest-magnitude component real positive
    int kmax = 0;
    double amax = 0.0;
    for (int i = 0; i < cfg.L; ++i) {
        const double a = std::abs(st.amplitudes[static_cast<size_t>(i)]);
        if (a > amax) {
            amax = a;
            kmax = i;
        }
    }
    const cdouble g = std::abs(st.amplitudes[static_cast<size_t>(kmax)]) / st.amplitudes[static_cast<size_t>(kmax)];
    for (cdouble& z : st.amplitudes) z *= g;
    return {cdouble(0.0, -m * cfg.F), st};
}

inline double analytic_ipr(const LatticeConfig& cfg, int m) {
    const auto [e, st] = analytic_eigenpair(m, cfg);
    (void)e;
    double s = 0.0;
    for (const cdouble& z : st.amplitudes) {
        const double p = std::norm(z);
        s += p * p;
    }
    return s;
}

// Least-squares fit of |psi(n)|^2 to a0 * exp(-((n-m)/sigma)^2) in log
// space, with the center m pinned at the discrete argmax. Only sites within
// two decades of the peak (prob > 1e-2 * max) enter the fit: the profile is
// Gaussian in its core but has systematically heavier tails.
inline FitResult gaussian_fit(const std::vector<cdouble>& state, double floor_rel = 1e-2) {
    const int n = static_cast<int>(state.size());
    if (n < 3) throw DegenerateProfile("state too short for a profile fit");
    std::vector<double> prob(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) prob[static_cast<size_t>(i)] = std::norm(state[static_cast<size_t>(i)]);
    int m = 0;
    for (int i = 1; i < n; ++i)
        if (prob[static_cast<size_t>(i)] > prob[static_cast<size_t>(m)]) m = i;
    if (m == 0 || m == n - 1) throw DegenerateProfile("profile peaks at the boundary");
    const double pmax = prob[static_cast<size_t>(m)];
    if (!(pmax > 0.0)) throw DegenerateProfile("profile is identically zero");
    std::vector<double> xs, ys;
    for (int i = 0; i < n; ++i) {
        if (prob[static_cast<size_t>(i)] > pmax * floor_rel) {
            const double d = static_cast<double>(i - m);
            xs.push_back(d * d);
            ys.push_back(std::log(prob[static_cast<size_t>(i)]));
        }
    }
    if (xs.size() < 3) throw DegenerateProfile("fewer than 3 sites above the fit floor");
    // ln p = ln a0 - x / sigma^2 with x = (n-m)^2
    const LineFit lf = linear_fit(xs, ys);
    if (!(lf.slope < 0.0)) throw DegenerateProfile("profile is not decaying away from the peak");
    const double sigma = 1.0 / std::sqrt(-lf.slope);
    const double a0 = std::exp(lf.intercept);
    FitResult r;
    r.model = FitModel::Gaussian;
    r.parameters = {a0, static_cast<double>(m + 1), sigma};  // center reported 1-based
    r.n_points = static_cast<int>(xs.size());
    double ss = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
        const double fitp = a0 * std::exp(-xs[k] / (sigma * sigma));
        const double res = std::exp(ys[k]) - fitp;
        ss += res * res;
    }
    r.residual = std::sqrt(ss / static_cast<double>(xs.size()));
    return r;
}

inline double localization_length(const FitResult& gaussian) {
    if (gaussian.model != FitModel::Gaussian || gaussian.parameters.size() != 3)
        throw ConfigError("localization length needs a Gaussian fit result");
    return std::sqrt(2.0) * gaussian.parameters[2];
}

// Numeric eigenstate whose eigenvalue lies nearest -i m F, unit-normalized.
inline std::vector<cdouble> numeric_state_near_center(const LatticeConfig& cfg, int m) {
    const Spectrum sp = eigendecompose(build_hamiltonian(cfg));
    const cdouble want(0.0, -m * cfg.F);
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < sp.dim; ++k) {
        const double d = std::abs(sp.values[static_cast<size_t>(k)] - want);
        if (d < bd) {
            bd = d;
            best = k;
        }
    }
    return sp.right_vector(best);
}

// Power law l_s(F) ~ a * F^b fitted over the given field strengths, with
// l_s extracted from the Gaussian core fit of the eigenstate centered at
// site m (numeric eigenstates by default; analytic Bessel profiles as a
// cross-check source).
enum class StateSource { Numeric, Analytic };

inline FitResult loc_length_powerlaw(const LatticeConfig& cfg_template, int m,
                                     const std::vector<double>& f_values,
                                     StateSource source = StateSource::Numeric) {
    if (f_values.size() < 2) throw ConfigError("power-law fit needs >= 2 field values");
    std::vector<double> ls;
    ls.reserve(f_values.size());
    for (double f : f_values) {
        if (!(f > 0.0)) throw NonPositiveData("field strengths must be positive");
        LatticeConfig cfg = cfg_template;
        cfg.F = f;
        std::vector<cdouble> state;
        if (source == StateSource::Numeric) {
            state = numeric_state_near_center(cfg, m);
        } else {
            state = analytic_eigenpair(m, cfg).second.amplitudes;
        }
        ls.push_back(localization_length(gaussian_fit(state)));
    }
    return powerlaw_fit(f_values, ls);
}

// Log-quadratic interpolation of the probability profile at a fractional
// site position; returns the amplitude sqrt(p).
inline double amplitude_at(const std::vector<double>& prob, double pos) {
    const int n = static_cast<int>(prob.size());
    if (n < 3) throw DegenerateProfile("profile too short for interpolation");
    int i = static_cast<int>(std::lround(pos));
    i = std::max(1, std::min(n - 2, i));
    const double y0 = std::log(prob[static_cast<size_t>(i - 1)]);
    const double y1 = std::log(prob[static_cast<size_t>(i)]);
    const double y2 = std::log(prob[static_cast<size_t>(i + 1)]);
    const double d = pos - i;
    const double val = y1 + 0.5 * d * (y2 - y0) + 0.5 * d * d * (y2 - 2.0 * y1 + y0);
    return std::exp(0.5 * val);
}

}  // namespace imstark
