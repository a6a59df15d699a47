#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "eigen.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "lattice.hpp"
#include "parallel.hpp"

namespace imstark {

// Counts of the shifted spectrum E' = E - E0, E0 = -i F (L+1)/2, relative
// to the real axis (|Im E'| small) and the imaginary axis (|Re E'| small).
// An eigenvalue near the origin lands in both tallies, which keeps both
// fractions well defined at a crossing.
struct ClassificationReport {
    double F = 0.0;
    int L = 0;
    int n_real = 0;
    int n_imag = 0;
    double frac_real = 0.0;
    double frac_imag = 0.0;
    double tol = 0.0;
    std::vector<bool> is_real;   // per eigenvalue, input order
    std::vector<bool> is_imag;
};

inline cdouble shift_origin(const LatticeConfig& cfg) {
    return cdouble(0.0, -cfg.F * (cfg.L + 1) / 2.0);
}

inline ClassificationReport classify_eigenvalues(const Spectrum& spec, const LatticeConfig& cfg,
                                                 double tol = 1e-8) {
    if (spec.dim != cfg.L) throw ConfigError("spectrum dimension does not match lattice.L");
    if (!(tol > 0.0)) throw ConfigError("classification tolerance must be > 0");
    ClassificationReport rep;
    rep.F = cfg.F;
    rep.L = cfg.L;
    rep.tol = tol;
    const cdouble e0 = shift_origin(cfg);
    double scale = 1.0;
    std::vector<cdouble> shifted(static_cast<size_t>(spec.dim));
    for (int i = 0; i < spec.dim; ++i) {
        shifted[static_cast<size_t>(i)] = spec.values[static_cast<size_t>(i)] - e0;
        scale = std::max(scale, std::abs(shifted[static_cast<size_t>(i)]));
    }
    rep.is_real.resize(static_cast<size_t>(spec.dim));
    rep.is_imag.resize(static_cast<size_t>(spec.dim));
    for (int i = 0; i < spec.dim; ++i) {
        const cdouble e = shifted[static_cast<size_t>(i)];
        const bool re = std::abs(e.imag()) <= tol * scale;
        const bool im = std::abs(e.real()) <= tol * scale;
        rep.is_real[static_cast<size_t>(i)] = re;
        rep.is_imag[static_cast<size_t>(i)] = im;
        if (re) ++rep.n_real;
        if (im) ++rep.n_imag;
    }
    rep.frac_real = static_cast<double>(rep.n_real) / cfg.L;
    rep.frac_imag = static_cast<double>(rep.n_imag) / cfg.L;
    return rep;
}

inline double ipr(const std::vector<cdouble>& state) {
    const double nrm = norm2(state);
    if (std::abs(nrm - 1.0) > 1e-8) throw NotNormalized("state norm deviates from 1 by more than 1e-8");
    double s = 0.0;
    for (const cdouble& z : state) {
        const double p = std::norm(z);
        s += p * p;
    }
    return s;
}

struct IprStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline IprStats mean_ipr(const Spectrum& spec) {
    if (!spec.has_vectors) throw ConfigError("spectrum carries no vectors");
    IprStats st;
    st.min = 1.0;
    st.max = 0.0;
    for (int m = 0; m < spec.dim; ++m) {
        const double v = ipr(spec.right_vector(m));
        st.mean += v;
        st.min = std::min(st.min, v);
        st.max = std::max(st.max, v);
    }
    st.mean /= spec.dim;
    return st;
}

enum class Transition { Fc1, Fc2 };

// Bisection on the exact-count indicator: Fc1 is the edge of the
// "all shifted eigenvalues real" region, Fc2 the edge of "all imaginary".
// The indicator must differ between the bracket ends.
inline double detect_transition(const LatticeConfig& cfg_template, Transition which, double f_lo,
                                double f_hi, double tol_f = 1e-9, double tol_classify = 1e-8) {
    if (!(f_lo >= 0.0) || !(f_hi > f_lo)) throw ConfigError("transition bracket must satisfy 0 <= lo < hi");
    if (!(tol_f > 0.0)) throw ConfigError("tol.bisect must be > 0");
    auto indicator = [&](double f) {
        LatticeConfig cfg = cfg_template;
        cfg.F = f;
        cfg.kind = PotentialKind::ImaginaryStark;
        Spectrum sp;
        sp.dim = cfg.L;
        sp.values = qr_eigenvalues(build_hamiltonian(cfg));
        const ClassificationReport rep = classify_eigenvalues(sp, cfg, tol_classify);
        return which == Transition::Fc1 ? rep.n_real == cfg.L : rep.n_imag == cfg.L;
    };
    bool lo_ind = indicator(f_lo);
    const bool hi_ind = indicator(f_hi);
    if (lo_ind == hi_ind)
        throw NoSignChange("transition indicator does not change across the bracket");
    double lo = f_lo, hi = f_hi;
    while (hi - lo > tol_f) {
        const double mid = 0.5 * (lo + hi);
        if (indicator(mid) == lo_ind)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct FiniteSizeFit {
    FitResult power;     // F_c ~ a * L^b
    FitResult constant;  // F_c ~ c
};

inline FiniteSizeFit finite_size_fit(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw ConfigError("finite-size fit needs >= 3 points");
    std::vector<double> ls, fs;
    for (const auto& [l, fc] : points) {
        if (!(l > 0.0) || !(fc > 0.0)) throw NonPositiveData("finite-size fit requires positive (L, F_c)");
        ls.push_back(l);
        fs.push_back(fc);
    }
    FiniteSizeFit out;
    out.power = powerlaw_fit(ls, fs);
    out.constant = constant_fit(fs);
    return out;
}

struct KPairEntry {
    int index = 0;         // position in the spectrum
    bool on_axis = false;  // eigenvalue on the imaginary axis
    int partner = -1;      // index of the (E, -E*) partner; self if on_axis
    double overlap = 0.0;  // |<candidate | U conj(psi)>|
};

struct KPairingReport {
    std::vector<KPairEntry> entries;
    double worst_deficit = 0.0;  // max over states of 1 - overlap
};

// Verifies the eigenstate relations behind the symmetric-spectrum
// structure of the shifted Hamiltonian: states on the imaginary axis map
// to themselves under U K (K = complex conjugation), and off-axis states
// map onto their (E, -E*) partner.
inline KPairingReport check_k_pairing(const Spectrum& spec, const ComplexMatrix& u,
                                      double tol_axis = 1e-8) {
    if (!spec.has_vectors) throw ConfigError("spectrum carries no vectors");
    if (u.dim() != spec.dim) throw ConfigError("transform dimension mismatch");
    const int n = spec.dim;
    double scale = 1.0;
    for (const cdouble& z : spec.values) scale = std::max(scale, std::abs(z));
    KPairingReport rep;
    rep.entries.resize(static_cast<size_t>(n));
    for (int m = 0; m < n; ++m) {
        KPairEntry e;
        e.index = m;
        const cdouble lam = spec.values[static_cast<size_t>(m)];
        e.on_axis = std::abs(lam.real()) <= tol_axis * scale;
        // U conj(psi_m)
        std::vector<cdouble> mapped = spec.right_vector(m);
        for (int i = 0; i < n; ++i) mapped[static_cast<size_t>(i)] = u(i, i) * std::conj(mapped[static_cast<size_t>(i)]);
        int cand = m;
        if (!e.on_axis) {
            const cdouble want = -std::conj(lam);
            cand = -1;
            double best = std::numeric_limits<double>::infinity();
            for (int j = 0; j < n; ++j) {
                const double d = std::abs(spec.values[static_cast<size_t>(j)] - want);
                if (d < best) {
                    best = d;
                    cand = j;
                }
            }
            if (cand < 0 || best > 1e-8 * scale)
                throw UnpairedEigenvalue("no -conj(E) partner for eigenvalue index " + std::to_string(m));
        }
        e.partner = cand;
        e.overlap = std::abs(inner(spec.right_vector(cand), mapped));
        rep.worst_deficit = std::max(rep.worst_deficit, 1.0 - e.overlap);
        rep.entries[static_cast<size_t>(m)] = e;
    }
    return rep;
}

struct PtProfile {
    bool symmetric = false;
    double asymmetry = 0.0;  // sum over n of (|psi(n)| - |psi(L+1-n)|)^2
};

inline PtProfile check_pt_profile(const std::vector<cdouble>& state) {
    const double nrm = norm2(state);
    if (std::abs(nrm - 1.0) > 1e-8) throw NotNormalized("state norm deviates from 1 by more than 1e-8");
    const size_t n = state.size();
    PtProfile p;
    for (size_t i = 0; i < n; ++i) {
        const double d = std::abs(state[i]) - std::abs(state[n - 1 - i]);
        p.asymmetry += d * d;
    }
    p.symmetric = p.asymmetry < 1e-10;
    return p;
}

}  // namespace imstark
