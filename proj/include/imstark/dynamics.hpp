#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "detect.hpp"
#include "eigen.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "lattice.hpp"

namespace imstark {

// Initial condition for the correlation-matrix flow. The pure kinds carry
// one particle; FullyOccupied is one particle per site (Delta(0) = Id).
struct InitialState {
    enum class Kind { SingleSite, Uniform, GaussianPacket, Custom, FullyOccupied };
    Kind kind = Kind::Uniform;
    int site = 1;        // SingleSite: 1-based location
    double center = 0.0; // GaussianPacket: 1-based center
    double beta = 1.0;   // GaussianPacket: exp(-beta (j - center)^2)
    std::vector<cdouble> amplitudes;  // Custom: per-site amplitudes, normalized on use

    static InitialState single_site(int m) {
        InitialState s;
        s.kind = Kind::SingleSite;
        s.site = m;
        return s;
    }
    static InitialState uniform() { return InitialState{}; }
    static InitialState gaussian_packet(double center, double beta) {
        InitialState s;
        s.kind = Kind::GaussianPacket;
        s.center = center;
        s.beta = beta;
        return s;
    }
    static InitialState custom(std::vector<cdouble> v) {
        InitialState s;
        s.kind = Kind::Custom;
        s.amplitudes = std::move(v);
        return s;
    }
    static InitialState fully_occupied() {
        InitialState s;
        s.kind = Kind::FullyOccupied;
        return s;
    }

    bool pure() const { return kind != Kind::FullyOccupied; }

    std::vector<cdouble> to_vector(int L) const {
        std::vector<cdouble> v(static_cast<size_t>(L));
        switch (kind) {
            case Kind::SingleSite:
                if (site < 1 || site > L) throw ConfigError("initial site outside 1..L");
                v[static_cast<size_t>(site - 1)] = 1.0;
                break;
            case Kind::Uniform:
                for (auto& z : v) z = 1.0 / std::sqrt(static_cast<double>(L));
                break;
            case Kind::GaussianPacket: {
                if (!(beta > 0.0)) throw ConfigError("packet width beta must be > 0");
                double nrm = 0.0;
                for (int j = 1; j <= L; ++j) {
                    const double a = std::exp(-beta * (j - center) * (j - center));
                    v[static_cast<size_t>(j - 1)] = a;
                    nrm += a * a;
                }
                nrm = std::sqrt(nrm);
                for (auto& z : v) z /= nrm;
                break;
            }
            case Kind::Custom: {
                if (static_cast<int>(amplitudes.size()) != L)
                    throw ConfigError("custom initial state length must equal lattice.L");
                double nrm = 0.0;
                for (const cdouble& z : amplitudes) nrm += std::norm(z);
                if (!(nrm > 0.0)) throw ConfigError("custom initial state must be nonzero");
                nrm = std::sqrt(nrm);
                for (int j = 0; j < L; ++j) v[static_cast<size_t>(j)] = amplitudes[static_cast<size_t>(j)] / nrm;
                break;
            }
            case Kind::FullyOccupied:
                throw ConfigError("fully occupied state has no single-particle vector");
        }
        return v;
    }

    ComplexMatrix to_matrix(int L) const {
        ComplexMatrix d(L);
        if (kind == Kind::FullyOccupied) {
            for (int i = 0; i < L; ++i) d(i, i) = 1.0;
            return d;
        }
        const std::vector<cdouble> v = to_vector(L);
        // Delta_{jk} = <c_j^dag c_k> = conj(psi_j) psi_k
        for (int j = 0; j < L; ++j)
            for (int k = 0; k < L; ++k) d(j, k) = std::conj(v[static_cast<size_t>(j)]) * v[static_cast<size_t>(k)];
        return d;
    }
};

// Time series of the correlation matrix and its site densities
// n_j(t) = Delta_jj(t). Full matrices are stored only when requested; the
// densities are always present.
struct CorrelationTrace {
    LatticeConfig cfg;
    std::vector<double> times;
    std::vector<std::vector<double>> densities;  // [time][site], 0-based site index
    std::vector<ComplexMatrix> delta;            // empty unless matrices were kept
    bool used_fallback = false;                  // spectral path was ill-conditioned
};

namespace detail {

// Exact propagator columns from the eigendecomposition of the generator:
// E(t) = R diag(e^{lam t}) Lrows.
struct SpectralPropagator {
    Spectrum spec;
    bool ok = false;

    explicit SpectralPropagator(const ComplexMatrix& gen) {
        try {
            spec = eigendecompose(gen);
            try {
                left_vectors_complex_symmetric(spec, gen);
            } catch (const ConfigError&) {
                // generator not complex-symmetric: keep general left vectors
            }
            ok = true;
        } catch (const Degenerate&) {
            ok = spec.has_vectors;  // keep inverse-iteration left vectors
        } catch (const IllConditioned&) {
            ok = false;
        } catch (const NonConvergence&) {
            ok = false;
        }
    }

    ComplexMatrix matrix_at(double t) const {
        const int n = spec.dim;
        ComplexMatrix e(n);
        for (int m = 0; m < n; ++m) {
            const cdouble f = std::exp(spec.values[static_cast<size_t>(m)] * t);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) e(i, j) += f * spec.right(i, m) * spec.left(m, j);
        }
        return e;
    }

    std::vector<cdouble> apply(double t, const std::vector<cdouble>& v0) const {
        const int n = spec.dim;
        std::vector<cdouble> c(static_cast<size_t>(n));
        for (int m = 0; m < n; ++m) {
            cdouble s = 0.0;
            for (int j = 0; j < n; ++j) s += spec.left(m, j) * v0[static_cast<size_t>(j)];
            c[static_cast<size_t>(m)] = s * std::exp(spec.values[static_cast<size_t>(m)] * t);
        }
        std::vector<cdouble> out(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            cdouble s = 0.0;
            for (int m = 0; m < n; ++m) s += spec.right(i, m) * c[static_cast<size_t>(m)];
            out[static_cast<size_t>(i)] = s;
        }
        return out;
    }
};

// Classic fixed-order Runge-Kutta on dDelta/dt = X Delta + Delta X^dag with
// step-doubling error control.
inline ComplexMatrix rk4_advance(const ComplexMatrix& x, const ComplexMatrix& xd, ComplexMatrix d,
                                 double t_from, double t_to, double rel_tol) {
    auto rhs = [&](const ComplexMatrix& m) { return matmul(x, m) + matmul(m, xd); };
    auto step = [&](const ComplexMatrix& m, double h) {
        const ComplexMatrix k1 = rhs(m);
        const ComplexMatrix k2 = rhs(m + cdouble(h / 2) * k1);
        const ComplexMatrix k3 = rhs(m + cdouble(h / 2) * k2);
        const ComplexMatrix k4 = rhs(m + cdouble(h) * k3);
        ComplexMatrix out = m;
        out += cdouble(h / 6) * k1;
        out += cdouble(h / 3) * k2;
        out += cdouble(h / 3) * k3;
        out += cdouble(h / 6) * k4;
        return out;
    };
    const double span = t_to - t_from;
    if (span <= 0.0) return d;
    double t = t_from;
    double h = span / 16.0;
    const double h_min = span * 1e-12;
    while (t < t_to - 1e-15 * span) {
        if (h < h_min) throw StepSizeUnderflow("step size underflow in the direct integrator");
        if (t + h > t_to) h = t_to - t;
        const ComplexMatrix full = step(d, h);
        const ComplexMatrix half = step(step(d, h / 2), h / 2);
        const double scale = std::max(1e-30, half.max_abs());
        const double err = (full - half).max_abs() / scale;
        if (err > rel_tol) {
            h /= 2.0;
            continue;
        }
        d = half;
        t += h;
        if (err < rel_tol / 64.0) h *= 2.0;
    }
    return d;
}

inline void check_times(const std::vector<double>& times) {
    if (times.empty()) throw ConfigError("time grid is empty");
    if (times.front() != 0.0) throw ConfigError("time grid must start at 0");
    for (size_t i = 1; i < times.size(); ++i)
        if (!(times[i] >= times[i - 1])) throw ConfigError("time grid must be sorted ascending");
}

}  // namespace detail

struct EvolveOptions {
    bool store_matrices = false;
    bool force_direct = false;  // skip the spectral path (testing hook)
    double direct_rel_tol = 1e-10;
};

// Evolution of the single-particle correlation matrix,
// dDelta/dt = X Delta + Delta X^dag with X = i conj(H). The spectral path
// uses the eigendecomposition of X; if that is ill-conditioned the
// step-doubled direct integrator takes over (reported, not fatal).
inline CorrelationTrace evolve_correlation(const LatticeConfig& cfg, const InitialState& init,
                                           const std::vector<double>& times,
                                           const EvolveOptions& opts = {}) {
    cfg.validate();
    detail::check_times(times);
    const int L = cfg.L;
    ComplexMatrix x = build_hamiltonian(cfg).conjugate();
    x *= cdouble(0.0, 1.0);
    CorrelationTrace tr;
    tr.cfg = cfg;
    tr.times = times;
    tr.densities.resize(times.size());

    const bool keep_matrices = opts.store_matrices || !init.pure();

    if (!opts.force_direct) {
        const detail::SpectralPropagator prop(x);
        if (prop.ok) {
            if (init.pure() && !opts.store_matrices) {
                // Delta(t) stays an outer product of the propagated vector
                std::vector<cdouble> conj_psi0(static_cast<size_t>(L));
                const std::vector<cdouble> psi0 = init.to_vector(L);
                for (int i = 0; i < L; ++i) conj_psi0[static_cast<size_t>(i)] = std::conj(psi0[static_cast<size_t>(i)]);
                for (size_t it = 0; it < times.size(); ++it) {
                    // t = 0 bypasses the eigenbasis: the propagator is the
                    // identity there, and reconstructing the initial state
                    // through a near-defective basis would lose accuracy.
                    const std::vector<cdouble> phi =
                        times[it] == 0.0 ? conj_psi0 : prop.apply(times[it], conj_psi0);
                    std::vector<double>& dens = tr.densities[it];
                    dens.resize(static_cast<size_t>(L));
                    for (int j = 0; j < L; ++j) dens[static_cast<size_t>(j)] = std::norm(phi[static_cast<size_t>(j)]);
                }
            } else {
                const ComplexMatrix d0 = init.to_matrix(L);
                for (size_t it = 0; it < times.size(); ++it) {
                    ComplexMatrix dt;
                    if (times[it] == 0.0) {
                        dt = d0;
                    } else {
                        const ComplexMatrix e = prop.matrix_at(times[it]);
                        dt = matmul(matmul(e, d0), e.adjoint());
                    }
                    std::vector<double>& dens = tr.densities[it];
                    dens.resize(static_cast<size_t>(L));
                    for (int j = 0; j < L; ++j) dens[static_cast<size_t>(j)] = dt(j, j).real();
                    if (keep_matrices) tr.delta.push_back(dt);
                }
            }
            return tr;
        }
        tr.used_fallback = true;
    }

    // direct integration path
    const ComplexMatrix xd = x.adjoint();
    ComplexMatrix d = init.to_matrix(L);
    double t_prev = 0.0;
    for (size_t it = 0; it < times.size(); ++it) {
        d = detail::rk4_advance(x, xd, std::move(d), t_prev, times[it], opts.direct_rel_tol);
        t_prev = times[it];
        std::vector<double>& dens = tr.densities[it];
        dens.resize(static_cast<size_t>(L));
        for (int j = 0; j < L; ++j) dens[static_cast<size_t>(j)] = d(j, j).real();
        if (keep_matrices || opts.store_matrices) tr.delta.push_back(d);
    }
    return tr;
}

// Pure-state oracle in the one-particle sector: unnormalized
// psi(t) = e^{-iHt} psi(0) through the eigendecomposition of H.
struct PureTrace {
    LatticeConfig cfg;
    std::vector<double> times;
    std::vector<std::vector<cdouble>> psi;       // [time][site]
    std::vector<std::vector<double>> densities;  // |psi_j(t)|^2
};

inline PureTrace nh_evolve_pure(const LatticeConfig& cfg, const std::vector<cdouble>& psi0,
                                const std::vector<double>& times) {
    cfg.validate();
    if (cfg.kind != PotentialKind::ImaginaryStark)
        throw ConfigError("the pure-state oracle is defined for the imaginary potential");
    detail::check_times(times);
    if (static_cast<int>(psi0.size()) != cfg.L) throw ConfigError("initial state length must equal lattice.L");
    if (std::abs(norm2(psi0) - 1.0) > 1e-8) throw NotNormalized("initial state must have unit norm");
    const ComplexMatrix h = build_hamiltonian(cfg);
    Spectrum sp = eigendecompose(h);
    try {
        left_vectors_complex_symmetric(sp, h);
    } catch (const Degenerate&) {
        // keep general left vectors
    }
    PureTrace tr;
    tr.cfg = cfg;
    tr.times = times;
    tr.psi.resize(times.size());
    tr.densities.resize(times.size());
    const int L = cfg.L;
    std::vector<cdouble> c(static_cast<size_t>(L));
    for (int m = 0; m < L; ++m) {
        cdouble s = 0.0;
        for (int j = 0; j < L; ++j) s += sp.left(m, j) * psi0[static_cast<size_t>(j)];
        c[static_cast<size_t>(m)] = s;
    }
    const cdouble mi(0.0, -1.0);
    for (size_t it = 0; it < times.size(); ++it) {
        std::vector<cdouble>& v = tr.psi[it];
        if (times[it] == 0.0) {
            v = psi0;  // the propagator is the identity at t = 0
        } else {
            v.assign(static_cast<size_t>(L), 0.0);
            for (int m = 0; m < L; ++m) {
                const cdouble f = std::exp(mi * sp.values[static_cast<size_t>(m)] * times[it]) * c[static_cast<size_t>(m)];
                for (int i = 0; i < L; ++i) v[static_cast<size_t>(i)] += f * sp.right(i, m);
            }
        }
        std::vector<double>& dens = tr.densities[it];
        dens.resize(static_cast<size_t>(L));
        for (int i = 0; i < L; ++i) dens[static_cast<size_t>(i)] = std::norm(v[static_cast<size_t>(i)]);
    }
    return tr;
}

// R(t) = n_{ja}(t) / n_{jb}(t) with an exponential-decay fit of the kept
// samples. Samples where either density has decayed below `density_floor`
// are truncated (they are numerically meaningless).
struct DensityRatio {
    std::vector<double> times;
    std::vector<double> ratio;
    FitResult decay_fit;  // a * exp(-beta t) over the kept samples
    bool fit_valid = false;
};

inline DensityRatio density_ratio(const CorrelationTrace& tr, int j_a = 25, int j_b = 15,
                                  double density_floor = 1e-300, int smooth_window = 0,
                                  double fit_t_min = 0.0,
                                  double fit_t_max = std::numeric_limits<double>::infinity()) {
    const int L = tr.cfg.L;
    if (j_a < 1 || j_a > L || j_b < 1 || j_b > L)
        throw ConfigError("ratio sites must lie in 1..L");
    DensityRatio out;
    for (size_t it = 0; it < tr.times.size(); ++it) {
        const double na = tr.densities[it][static_cast<size_t>(j_a - 1)];
        const double nb = tr.densities[it][static_cast<size_t>(j_b - 1)];
        if (na < density_floor || nb < density_floor) break;  // truncate the tail
        out.times.push_back(tr.times[it]);
        out.ratio.push_back(na / nb);
    }
    std::vector<double> fit_src = out.ratio;
    if (smooth_window > 1 && static_cast<int>(fit_src.size()) > smooth_window)
        fit_src = moving_average(fit_src, smooth_window);
    std::vector<double> ft, fy;
    for (size_t i = 0; i < out.times.size(); ++i) {
        if (out.times[i] >= fit_t_min && out.times[i] <= fit_t_max && fit_src[i] > 0.0) {
            ft.push_back(out.times[i]);
            fy.push_back(fit_src[i]);
        }
    }
    if (ft.size() >= 2) {
        out.decay_fit = expdecay_fit(ft, fy);
        out.fit_valid = true;
    }
    return out;
}

// Rescaled particle number N_r(t) = e^{F(L+1)t} sum_j n_j(t), evaluated in
// log space so the exponential prefactor cannot overflow.
inline std::vector<double> rescaled_number_log(const CorrelationTrace& tr, const LatticeConfig& cfg) {
    std::vector<double> out(tr.times.size());
    const double rate = cfg.F * (cfg.L + 1);
    for (size_t it = 0; it < tr.times.size(); ++it) {
        double total = 0.0;
        for (double nj : tr.densities[it]) total += nj;
        out[it] = rate * tr.times[it] + std::log(std::max(total, 1e-300));
    }
    return out;
}

inline std::vector<double> rescaled_number_log(const CorrelationTrace& tr) {
    return rescaled_number_log(tr, tr.cfg);
}

inline std::vector<double> rescaled_number(const CorrelationTrace& tr, const LatticeConfig& cfg) {
    std::vector<double> ln = rescaled_number_log(tr, cfg);
    for (double& v : ln) v = std::exp(v);
    return ln;
}

inline std::vector<double> rescaled_number(const CorrelationTrace& tr) {
    return rescaled_number(tr, tr.cfg);
}

// Closed form for the uniform single-particle state in the fully
// dissipative regime, as a function of the rescaled time tau = F t:
// N_r = sinh(L tau) / (L sinh(tau)), computed in log space.
inline double nr_sinh_closed_form_log(int L, double tau) {
    if (tau <= 0.0) return 0.0;  // N_r -> 1
    auto ln_sinh = [](double z) { return z + std::log1p(-std::exp(-2.0 * z)) - std::numbers::ln2; };
    return ln_sinh(L * tau) - ln_sinh(tau) - std::log(static_cast<double>(L));
}

// Level crossings of the density field: for each site j (1-based in the
// result), the time where n_j(t) first drops below the level, interpolated
// linearly in (t, ln n). Sites that never cross, or start below the level,
// are omitted.
inline std::vector<std::pair<int, double>> contour_crossings(const CorrelationTrace& tr, double level) {
    const int L = tr.cfg.L;
    std::vector<std::pair<int, double>> out;
    for (int j = 0; j < L; ++j) {
        int idx = -1;
        for (size_t it = 0; it < tr.times.size(); ++it) {
            if (tr.densities[it][static_cast<size_t>(j)] < level) {
                idx = static_cast<int>(it);
                break;
            }
        }
        if (idx <= 0) continue;  // never crossed, or started below the level
        const double n0 = tr.densities[static_cast<size_t>(idx - 1)][static_cast<size_t>(j)];
        const double n1 = tr.densities[static_cast<size_t>(idx)][static_cast<size_t>(j)];
        if (!(n0 > 0.0) || !(n1 > 0.0)) continue;
        const double y0 = std::log(n0), y1 = std::log(n1);
        const double t0 = tr.times[static_cast<size_t>(idx - 1)], t1 = tr.times[static_cast<size_t>(idx)];
        const double tc = t0 + (std::log(level) - y0) * (t1 - t0) / (y1 - y0);
        if (tc > 0.0) out.emplace_back(j + 1, tc);
    }
    return out;
}

// Power-law fit of the crossing time against the site index for one level.
inline FitResult contour_fit_level(const CorrelationTrace& tr, double level) {
    const std::vector<std::pair<int, double>> pts = contour_crossings(tr, level);
    if (pts.size() < 3) throw LevelNotCrossed("density level crossed by fewer than 3 sites");
    std::vector<double> sites, tcross;
    for (const auto& [j, tc] : pts) {
        sites.push_back(static_cast<double>(j));
        tcross.push_back(tc);
    }
    return powerlaw_fit(sites, tcross);
}

inline std::vector<FitResult> contour_fit(const CorrelationTrace& tr, const std::vector<double>& levels) {
    std::vector<FitResult> out;
    out.reserve(levels.size());
    for (double lv : levels) out.push_back(contour_fit_level(tr, lv));
    return out;
}

// Boundary-density analysis: decay speed Lambda from the regression of
// ln n_1(t) past the initial transient (first 10% of samples dropped), and
// the residual oscillation frequency of e^{Lambda t} n_1(t).
struct BoundaryOscillation {
    double lambda = 0.0;
    double frequency = 0.0;
    bool has_oscillation = false;
    double prominence = 0.0;
};

inline BoundaryOscillation boundary_oscillation(const CorrelationTrace& tr, double prominence_factor = 5.0);

inline BoundaryOscillation boundary_oscillation(const CorrelationTrace& tr, const LatticeConfig& cfg,
                                                double prominence_factor = 5.0) {
    if (cfg.L != tr.cfg.L) throw ConfigError("config does not match the trace");
    return boundary_oscillation(tr, prominence_factor);
}

inline BoundaryOscillation boundary_oscillation(const CorrelationTrace& tr, double prominence_factor) {
    const int n = static_cast<int>(tr.times.size());
    if (n < 32) throw WindowTooShort("boundary analysis needs >= 32 samples");
    const int k0 = n / 10;
    std::vector<double> ts, ln1;
    for (int i = k0; i < n; ++i) {
        const double v = tr.densities[static_cast<size_t>(i)][0];
        if (!(v > 0.0)) throw ComputationError("site-1 density vanished inside the analysis window");
        ts.push_back(tr.times[static_cast<size_t>(i)]);
        ln1.push_back(std::log(v));
    }
    const LineFit lf = linear_fit(ts, ln1);
    BoundaryOscillation out;
    out.lambda = -lf.slope;
    // uniform spacing required for the frequency readout
    const double dt = tr.times[1] - tr.times[0];
    for (int i = 2; i < n; ++i)
        if (std::abs((tr.times[static_cast<size_t>(i)] - tr.times[static_cast<size_t>(i - 1)]) - dt) > 1e-9 * dt)
            throw ConfigError("boundary analysis requires a uniform time grid");
    std::vector<double> resc(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        resc[static_cast<size_t>(i)] = std::exp(out.lambda * tr.times[static_cast<size_t>(i)]) *
                                       tr.densities[static_cast<size_t>(i)][0];
    const SpectralPeak pk = dominant_frequency(resc, dt);
    out.frequency = pk.found ? pk.omega : 0.0;
    out.prominence = pk.prominence;
    out.has_oscillation = pk.found && pk.prominence >= prominence_factor;
    return out;
}

// Side-by-side run of the conservative and dissipative ladders with the
// same (L, J, F): the conservative chain revives periodically (centroid
// for a smooth packet, width for a single-site start) with period 2 pi / F,
// while the dissipative chain shows no revival and forgets its initial
// state.
struct BlochComparison {
    double real_period = 0.0;        // revival period of the conservative run
    bool real_revival = false;
    bool imag_revival = false;       // revival detected in the dissipative run
    double imag_profile_distance = 0.0;  // init-state sensitivity of the normalized profile

    // analyzed series, for serialization
    std::vector<double> real_times;
    std::vector<double> real_signal;  // centroid (smooth packet) or width (single-site start)
    std::vector<double> imag_times;
    std::vector<double> imag_centroid_main;  // normalized-profile centroid, requested init
    std::vector<double> imag_centroid_ref;   // same for the single-site reference start
    double probe_time = 0.0;                 // early profile-comparison instant
    std::vector<double> profile_main_probe, profile_ref_probe;  // normalized site profiles
    std::vector<double> profile_main_end, profile_ref_end;
};

namespace detail {

inline std::vector<std::vector<double>> pure_densities_any(const LatticeConfig& cfg,
                                                           const std::vector<cdouble>& psi0,
                                                           const std::vector<double>& times) {
    const ComplexMatrix h = build_hamiltonian(cfg);
    Spectrum sp = eigendecompose(h);
    try {
        left_vectors_complex_symmetric(sp, h);
    } catch (const Degenerate&) {
    }
    const int L = cfg.L;
    std::vector<cdouble> c(static_cast<size_t>(L));
    for (int m = 0; m < L; ++m) {
        cdouble s = 0.0;
        for (int j = 0; j < L; ++j) s += sp.left(m, j) * psi0[static_cast<size_t>(j)];
        c[static_cast<size_t>(m)] = s;
    }
    std::vector<std::vector<double>> dens(times.size());
    const cdouble mi(0.0, -1.0);
    for (size_t it = 0; it < times.size(); ++it) {
        std::vector<cdouble> v;
        if (times[it] == 0.0) {
            v = psi0;  // identity propagator; skip the eigenbasis round trip
        } else {
            v.assign(static_cast<size_t>(L), 0.0);
            for (int m = 0; m < L; ++m) {
                const cdouble f = std::exp(mi * sp.values[static_cast<size_t>(m)] * times[it]) * c[static_cast<size_t>(m)];
                for (int i = 0; i < L; ++i) v[static_cast<size_t>(i)] += f * sp.right(i, m);
            }
        }
        dens[it].resize(static_cast<size_t>(L));
        for (int i = 0; i < L; ++i) dens[it][static_cast<size_t>(i)] = std::norm(v[static_cast<size_t>(i)]);
    }
    return dens;
}

inline std::vector<double> centroid_series(const std::vector<std::vector<double>>& dens) {
    std::vector<double> c(dens.size());
    for (size_t it = 0; it < dens.size(); ++it) {
        double tot = 0.0, s = 0.0;
        for (size_t j = 0; j < dens[it].size(); ++j) {
            tot += dens[it][j];
            s += dens[it][j] * static_cast<double>(j + 1);
        }
        c[it] = s / tot;
    }
    return c;
}

inline std::vector<double> width_series(const std::vector<std::vector<double>>& dens) {
    std::vector<double> w(dens.size());
    for (size_t it = 0; it < dens.size(); ++it) {
        double tot = 0.0, s1 = 0.0, s2 = 0.0;
        for (size_t j = 0; j < dens[it].size(); ++j) {
            const double jj = static_cast<double>(j + 1);
            tot += dens[it][j];
            s1 += dens[it][j] * jj;
            s2 += dens[it][j] * jj * jj;
        }
        const double mean = s1 / tot;
        w[it] = std::sqrt(std::max(0.0, s2 / tot - mean * mean));
    }
    return w;
}

}  // namespace detail

inline BlochComparison bloch_comparison(const LatticeConfig& cfg_template, const InitialState& init,
                                        double t_end = 100.0, int samples = 4000) {
    if (!init.pure()) throw ConfigError("comparison runs need a single-particle initial state");
    LatticeConfig real_cfg = cfg_template;
    real_cfg.kind = PotentialKind::RealStark;
    LatticeConfig imag_cfg = cfg_template;
    imag_cfg.kind = PotentialKind::ImaginaryStark;
    std::vector<double> times(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) times[static_cast<size_t>(i)] = t_end * i / (samples - 1);
    const double dt = times[1] - times[0];
    const std::vector<cdouble> psi0 = init.to_vector(cfg_template.L);

    const auto real_dens = detail::pure_densities_any(real_cfg, psi0, times);
    // centroid oscillates for a smooth packet; width breathes for a
    // single-site start whose centroid stays pinned by symmetry
    const std::vector<double> real_sig = (init.kind == InitialState::Kind::SingleSite)
                                             ? detail::width_series(real_dens)
                                             : detail::centroid_series(real_dens);
    BlochComparison out;
    const RevivalCheck rev = autocorr_revival(real_sig);
    out.real_revival = rev.found;
    const SpectralPeak pk = dominant_frequency(real_sig, dt);
    if (pk.found && pk.omega > 0.0) out.real_period = 2.0 * std::numbers::pi / pk.omega;

    // dissipative side: normalized densities, shorter window (the total
    // number decays fast)
    const int n_imag = 1000;
    const double t_imag = 25.0;
    std::vector<double> it_times(static_cast<size_t>(n_imag));
    for (int i = 0; i < n_imag; ++i) it_times[static_cast<size_t>(i)] = t_imag * i / (n_imag - 1);
    auto imag_dens = detail::pure_densities_any(imag_cfg, psi0, it_times);
    for (auto& row : imag_dens) {
        double tot = 0.0;
        for (double v : row) tot += v;
        if (tot > 0.0)
            for (double& v : row) v /= tot;
    }
    const std::vector<double> imag_sig = detail::centroid_series(imag_dens);
    out.imag_revival = autocorr_revival(imag_sig).found;

    // initial-state sensitivity: half-L1 distance between this run's
    // normalized late-time profile and a single-site start's
    const InitialState other = InitialState::single_site(cfg_template.L / 2);
    auto other_dens = detail::pure_densities_any(imag_cfg, other.to_vector(cfg_template.L), it_times);
    for (auto& row : other_dens) {
        double tot = 0.0;
        for (double v : row) tot += v;
        if (tot > 0.0)
            for (double& v : row) v /= tot;
    }
    double dist = 0.0;
    const size_t probe = it_times.size() / 5;  // t = 5 on the default window
    for (size_t idx : {probe, it_times.size() - 1}) {
        double d = 0.0;
        for (size_t j = 0; j < imag_dens[idx].size(); ++j)
            d += std::abs(imag_dens[idx][j] - other_dens[idx][j]);
        dist = std::max(dist, 0.5 * d);
    }
    out.imag_profile_distance = dist;

    out.real_times = times;
    out.real_signal = real_sig;
    out.imag_times = it_times;
    out.imag_centroid_main = imag_sig;
    out.imag_centroid_ref = detail::centroid_series(other_dens);
    out.probe_time = it_times[probe];
    out.profile_main_probe = imag_dens[probe];
    out.profile_ref_probe = other_dens[probe];
    out.profile_main_end = imag_dens.back();
    out.profile_ref_end = other_dens.back();
    return out;
}

}  // namespace imstark
