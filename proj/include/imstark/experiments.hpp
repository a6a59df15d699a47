#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "config.hpp"
#include "csvio.hpp"
#include "detect.hpp"
#include "dynamics.hpp"
#include "eigen.hpp"
#include "errors.hpp"
#include "fit.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "spectral.hpp"
#include "timegrid.hpp"

namespace imstark {

struct ExperimentSpec {
    std::string name;
    ConfigMap config;
    std::filesystem::path out_dir;  // resolved by the caller; empty = no file output
};

struct ExperimentInfo {
    std::string name;
    std::string description;
};

namespace detail {

inline std::string num_key(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%g", v);
    return b;
}

inline Spectrum values_spectrum(const LatticeConfig& cfg) {
    Spectrum sp;
    sp.dim = cfg.L;
    sp.values = qr_eigenvalues(build_hamiltonian(cfg));
    return sp;
}

// |sum of eigenvalues - trace| / scale: a cheap global eigensolver check.
inline double trace_deviation(const Spectrum& sp, const LatticeConfig& cfg) {
    const ComplexMatrix h = build_hamiltonian(cfg);
    cdouble tr = 0.0, sum = 0.0;
    for (int i = 0; i < cfg.L; ++i) tr += h(i, i);
    for (const cdouble& z : sp.values) sum += z;
    double scale = 1.0;
    for (const cdouble& z : sp.values) scale = std::max(scale, std::abs(z));
    return std::abs(sum - tr) / (scale * cfg.L);
}

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(hi > lo) || n < 2) throw ConfigError("geometric grid needs 0 < lo < hi and >= 2 points");
    std::vector<double> g(static_cast<size_t>(n));
    const double r = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[static_cast<size_t>(i)] = lo * std::exp(r * i);
    return g;
}

inline double total_number(const std::vector<double>& dens) {
    double s = 0.0;
    for (double v : dens) s += v;
    return s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// spectrum-panel: eigenvalue tables at several field strengths
// ---------------------------------------------------------------------------
inline ResultBundle run_spectrum_panel(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const double tol_classify = cm.get_double("tol.classify", 1e-8);
    const std::vector<double> fs = cm.get_list("grid.f_values", {1e-5, 0.05, 0.1, 1.0});
    const int nf = static_cast<int>(fs.size());
    std::vector<Table> tables(static_cast<size_t>(nf));
    std::vector<ClassificationReport> reps(static_cast<size_t>(nf));
    std::vector<double> kres(static_cast<size_t>(nf)), tdev(static_cast<size_t>(nf));
    parallel_for(nf, [&](int i) {
        LatticeConfig cfg = base;
        cfg.F = fs[static_cast<size_t>(i)];
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        Spectrum sp = sort_spectrum(detail::values_spectrum(cfg));
        reps[static_cast<size_t>(i)] = classify_eigenvalues(sp, cfg, tol_classify);
        tdev[static_cast<size_t>(i)] = detail::trace_deviation(sp, cfg);
        kres[static_cast<size_t>(i)] = k_symmetry_residual(cfg);
        const cdouble e0 = shift_origin(cfg);
        Table t("spectrum_f_" + detail::num_key(cfg.F),
                {"m", "re_e", "im_e", "re_e_shifted", "im_e_shifted", "is_real", "is_imag"});
        for (int m = 0; m < cfg.L; ++m) {
            const cdouble e = sp.values[static_cast<size_t>(m)];
            const cdouble es = e - e0;
            t.add_row({static_cast<double>(m + 1), e.real(), e.imag(), es.real(), es.imag(),
                       reps[static_cast<size_t>(i)].is_real[static_cast<size_t>(m)] ? 1.0 : 0.0,
                       reps[static_cast<size_t>(i)].is_imag[static_cast<size_t>(m)] ? 1.0 : 0.0});
        }
        tables[static_cast<size_t>(i)] = std::move(t);
    });
    double worst_k = 0.0, worst_tr = 0.0;
    for (int i = 0; i < nf; ++i) {
        b.tables.push_back(std::move(tables[static_cast<size_t>(i)]));
        nlohmann::json panel;
        panel["F"] = fs[static_cast<size_t>(i)];
        panel["n_real"] = reps[static_cast<size_t>(i)].n_real;
        panel["n_imag"] = reps[static_cast<size_t>(i)].n_imag;
        b.summary["panels"].push_back(panel);
        worst_k = std::max(worst_k, kres[static_cast<size_t>(i)]);
        worst_tr = std::max(worst_tr, tdev[static_cast<size_t>(i)]);
    }
    b.summary["max_k_symmetry_residual"] = worst_k;
    b.summary["max_trace_deviation"] = worst_tr;
    b.invariants["k_symmetry_residual_below_1e-10"] = worst_k < 1e-10;
    b.invariants["eigenvalue_sum_matches_trace"] = worst_tr < 1e-10;
    return b;
}

// ---------------------------------------------------------------------------
// ipr-sweep: mean/min/max inverse participation ratio across F
// ---------------------------------------------------------------------------
inline ResultBundle run_ipr_sweep(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const double f_min = cm.get_double("grid.f_min", 1e-4);
    const double f_max = cm.get_double("grid.f_max", 10.0);
    const int f_count = cm.get_int("grid.f_count", 61);
    const std::vector<double> fs = detail::geometric_grid(f_min, f_max, f_count);
    std::vector<IprStats> stats(fs.size());
    parallel_for(static_cast<int>(fs.size()), [&](int i) {
        LatticeConfig cfg = base;
        cfg.F = fs[static_cast<size_t>(i)];
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        const Spectrum sp = eigendecompose(build_hamiltonian(cfg));
        stats[static_cast<size_t>(i)] = mean_ipr(sp);
    });
    Table t("ipr_sweep", {"f", "mean_ipr", "min_ipr", "max_ipr"});
    bool bounds_ok = true;
    const double lo = 1.0 / base.L - 1e-9, hi = 1.0 + 1e-9;
    for (size_t i = 0; i < fs.size(); ++i) {
        t.add_row({fs[i], stats[i].mean, stats[i].min, stats[i].max});
        if (stats[i].min < lo || stats[i].max > hi) bounds_ok = false;
    }
    b.tables.push_back(std::move(t));
    b.summary["mean_ipr_first"] = stats.front().mean;
    b.summary["mean_ipr_last"] = stats.back().mean;
    b.invariants["ipr_within_[1/L,1]"] = bounds_ok;
    return b;
}

// ---------------------------------------------------------------------------
// count-sweep: classified real/imaginary counts across F
// ---------------------------------------------------------------------------
inline ResultBundle run_count_sweep(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const double tol_classify = cm.get_double("tol.classify", 1e-8);
    const double f_min = cm.get_double("grid.f_min", 1e-4);
    const double f_max = cm.get_double("grid.f_max", 2.0);
    const int f_count = cm.get_int("grid.f_count", 121);
    const std::vector<double> fs = detail::geometric_grid(f_min, f_max, f_count);
    std::vector<ClassificationReport> reps(fs.size());
    parallel_for(static_cast<int>(fs.size()), [&](int i) {
        LatticeConfig cfg = base;
        cfg.F = fs[static_cast<size_t>(i)];
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        reps[static_cast<size_t>(i)] = classify_eigenvalues(detail::values_spectrum(cfg), cfg, tol_classify);
    });
    Table t("count_sweep", {"f", "n_real", "n_imag", "frac_real", "frac_imag"});
    bool real_dec = true, imag_inc = true;
    for (size_t i = 0; i < fs.size(); ++i) {
        t.add_row({fs[i], static_cast<double>(reps[i].n_real), static_cast<double>(reps[i].n_imag),
                   reps[i].frac_real, reps[i].frac_imag});
        if (i > 0) {
            if (reps[i].n_real > reps[i - 1].n_real) real_dec = false;
            if (reps[i].n_imag < reps[i - 1].n_imag) imag_inc = false;
        }
    }
    b.tables.push_back(std::move(t));
    b.summary["n_real_at_f_min"] = reps.front().n_real;
    b.summary["n_imag_at_f_max"] = reps.back().n_imag;
    b.invariants["n_real_nonincreasing_in_f"] = real_dec;
    b.invariants["n_imag_nondecreasing_in_f"] = imag_inc;
    return b;
}

// ---------------------------------------------------------------------------
// finite-size: both transition points vs lattice size + scaling fits
// ---------------------------------------------------------------------------
inline ResultBundle run_finite_size(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const std::vector<int> ls = cm.get_int_list("grid.l_values", {20, 40, 80, 160});
    const double tol_bisect = cm.get_double("tol.bisect", 1e-9);
    const double tol_classify = cm.get_double("tol.classify", 1e-8);
    std::vector<double> fc1(ls.size()), fc2(ls.size());
    parallel_for(static_cast<int>(ls.size()), [&](int i) {
        LatticeConfig cfg = base;
        cfg.L = ls[static_cast<size_t>(i)];
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.F = 0.0;
        cfg.validate();
        fc1[static_cast<size_t>(i)] = detect_transition(cfg, Transition::Fc1, 0.0, 0.1, tol_bisect, tol_classify);
        fc2[static_cast<size_t>(i)] = detect_transition(cfg, Transition::Fc2, 0.5, 1.0, tol_bisect, tol_classify);
    });
    Table t("transitions", {"l", "fc1", "fc2"});
    std::vector<std::pair<double, double>> pts1, pts2;
    bool fc1_dec = true;
    double fc2_lo = fc2.front(), fc2_hi = fc2.front();
    for (size_t i = 0; i < ls.size(); ++i) {
        t.add_row({static_cast<double>(ls[i]), fc1[i], fc2[i]});
        pts1.emplace_back(static_cast<double>(ls[i]), fc1[i]);
        pts2.emplace_back(static_cast<double>(ls[i]), fc2[i]);
        if (i > 0 && fc1[i] >= fc1[i - 1]) fc1_dec = false;
        fc2_lo = std::min(fc2_lo, fc2[i]);
        fc2_hi = std::max(fc2_hi, fc2[i]);
    }
    b.tables.push_back(std::move(t));
    const FiniteSizeFit fit1 = finite_size_fit(pts1);
    const FiniteSizeFit fit2 = finite_size_fit(pts2);
    b.summary["fc1_powerlaw_prefactor"] = fit1.power.parameters[0];
    b.summary["fc1_powerlaw_exponent"] = fit1.power.parameters[1];
    b.summary["fc2_mean"] = fit2.constant.parameters[0];
    b.summary["fc2_spread"] = fc2_hi - fc2_lo;
    b.invariants["fc1_decreasing_in_l"] = fc1_dec;
    b.invariants["fc2_size_independent_within_0.01"] = (fc2_hi - fc2_lo) < 0.01;
    return b;
}

// ---------------------------------------------------------------------------
// pt-states: per-state parity profiles and spatial symmetry of |psi|
// ---------------------------------------------------------------------------
inline ResultBundle run_pt_states(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    if (base.L < 3) throw ConfigError("pt-states needs lattice.L >= 3 (profiles of the first three states)");
    const double tol_classify = cm.get_double("tol.classify", 1e-8);
    const std::vector<double> fs = cm.get_list("grid.f_values", {1e-5, 0.01});
    bool real_symmetric = true, broken_asymmetric = true;
    for (double f : fs) {
        LatticeConfig cfg = base;
        cfg.F = f;
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        const Spectrum sp = sort_spectrum(eigendecompose(build_hamiltonian(cfg)));
        const ClassificationReport rep = classify_eigenvalues(sp, cfg, tol_classify);
        const cdouble e0 = shift_origin(cfg);
        Table t("pt_states_f_" + detail::num_key(f),
                {"m", "re_e_shifted", "im_e_shifted", "asymmetry", "is_symmetric", "ipr_value"});
        Table prof("pt_profiles_f_" + detail::num_key(f), {"site", "prob_1", "prob_2", "prob_3"});
        int n_asym = 0;
        std::vector<std::vector<double>> probs;
        for (int m = 0; m < cfg.L; ++m) {
            const std::vector<cdouble> v = sp.right_vector(m);
            const PtProfile p = check_pt_profile(v);
            const double ip = ipr(v);
            const cdouble es = sp.values[static_cast<size_t>(m)] - e0;
            t.add_row({static_cast<double>(m + 1), es.real(), es.imag(), p.asymmetry,
                       p.symmetric ? 1.0 : 0.0, ip});
            if (!p.symmetric) ++n_asym;
            if (rep.is_real[static_cast<size_t>(m)] && !p.symmetric) real_symmetric = false;
            if (!rep.is_real[static_cast<size_t>(m)] && p.symmetric) broken_asymmetric = false;
            if (m < 3) {
                std::vector<double> pr(static_cast<size_t>(cfg.L));
                for (int j = 0; j < cfg.L; ++j) pr[static_cast<size_t>(j)] = std::norm(v[static_cast<size_t>(j)]);
                probs.push_back(std::move(pr));
            }
        }
        for (int j = 0; j < cfg.L; ++j)
            prof.add_row({static_cast<double>(j + 1), probs[0][static_cast<size_t>(j)],
                          probs[1][static_cast<size_t>(j)], probs[2][static_cast<size_t>(j)]});
        b.tables.push_back(std::move(t));
        b.tables.push_back(std::move(prof));
        nlohmann::json block;
        block["F"] = f;
        block["n_asymmetric"] = n_asym;
        block["n_real"] = rep.n_real;
        b.summary["fields"].push_back(block);
    }
    b.invariants["real_axis_states_have_symmetric_profiles"] = real_symmetric;
    b.invariants["off_axis_states_have_asymmetric_profiles"] = broken_asymmetric;
    return b;
}

// ---------------------------------------------------------------------------
// size-spectra: spectra of several lattice sizes at one field strength
// ---------------------------------------------------------------------------
inline ResultBundle run_size_spectra(const ConfigMap& cm) {
    ResultBundle b;
    LatticeConfig base = cm.lattice();
    if (!cm.has("lattice.F")) base.F = 0.1;
    const double tol_classify = cm.get_double("tol.classify", 1e-8);
    const std::vector<int> ls = cm.get_int_list("grid.l_values", {40, 60, 80});
    const int nl = static_cast<int>(ls.size());
    std::vector<Table> tables(static_cast<size_t>(nl));
    std::vector<ClassificationReport> reps(static_cast<size_t>(nl));
    std::vector<double> tdev(static_cast<size_t>(nl));
    parallel_for(nl, [&](int i) {
        LatticeConfig cfg = base;
        cfg.L = ls[static_cast<size_t>(i)];
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        Spectrum sp = sort_spectrum(detail::values_spectrum(cfg));
        reps[static_cast<size_t>(i)] = classify_eigenvalues(sp, cfg, tol_classify);
        tdev[static_cast<size_t>(i)] = detail::trace_deviation(sp, cfg);
        const cdouble e0 = shift_origin(cfg);
        Table t("size_spectrum_l_" + std::to_string(cfg.L),
                {"m", "re_e", "im_e", "re_e_shifted", "im_e_shifted", "is_real", "is_imag"});
        for (int m = 0; m < cfg.L; ++m) {
            const cdouble e = sp.values[static_cast<size_t>(m)];
            const cdouble es = e - e0;
            t.add_row({static_cast<double>(m + 1), e.real(), e.imag(), es.real(), es.imag(),
                       reps[static_cast<size_t>(i)].is_real[static_cast<size_t>(m)] ? 1.0 : 0.0,
                       reps[static_cast<size_t>(i)].is_imag[static_cast<size_t>(m)] ? 1.0 : 0.0});
        }
        tables[static_cast<size_t>(i)] = std::move(t);
    });
    double worst_tr = 0.0;
    for (int i = 0; i < nl; ++i) {
        b.tables.push_back(std::move(tables[static_cast<size_t>(i)]));
        nlohmann::json block;
        block["L"] = ls[static_cast<size_t>(i)];
        block["n_real"] = reps[static_cast<size_t>(i)].n_real;
        block["n_imag"] = reps[static_cast<size_t>(i)].n_imag;
        block["frac_imag"] = reps[static_cast<size_t>(i)].frac_imag;
        b.summary["sizes"].push_back(block);
        worst_tr = std::max(worst_tr, tdev[static_cast<size_t>(i)]);
    }
    b.summary["F"] = base.F;
    b.summary["max_trace_deviation"] = worst_tr;
    b.invariants["eigenvalue_sum_matches_trace"] = worst_tr < 1e-10;
    return b;
}

// ---------------------------------------------------------------------------
// analytic-compare: numeric eigenpairs against the Bessel closed form
// ---------------------------------------------------------------------------
inline ResultBundle run_analytic_compare(const ConfigMap& cm) {
    ResultBundle b;
    LatticeConfig cfg = cm.lattice();
    if (!cm.has("lattice.F")) cfg.F = 0.8;
    cfg.kind = PotentialKind::ImaginaryStark;
    cfg.validate();
    const int m_min = cm.get_int("grid.m_min", 10);
    const int m_max = cm.get_int("grid.m_max", 30);
    if (m_min < 1 || m_max > cfg.L || m_min > m_max) throw ConfigError("grid.m_min..m_max must lie inside 1..L");
    const Spectrum sp = eigendecompose(build_hamiltonian(cfg));
    Table t("analytic_compare", {"m", "overlap", "e_err_over_f", "ipr_numeric", "ipr_analytic"});
    double min_ov = 1.0, max_err = 0.0;
    const int m_profile = std::min(std::max(cfg.L / 2, m_min), m_max);
    Table prof("analytic_profile", {"site", "prob_numeric", "prob_analytic"});
    for (int m = m_min; m <= m_max; ++m) {
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
        const std::vector<cdouble> num = sp.right_vector(best);
        const auto [e_an, st] = analytic_eigenpair(m, cfg);
        const double ov = std::abs(inner(num, st.amplitudes));
        const double err = std::abs(sp.values[static_cast<size_t>(best)] - e_an) / cfg.F;
        t.add_row({static_cast<double>(m), ov, err, ipr(num), analytic_ipr(cfg, m)});
        min_ov = std::min(min_ov, ov);
        max_err = std::max(max_err, err);
        if (m == m_profile) {
            for (int j = 0; j < cfg.L; ++j)
                prof.add_row({static_cast<double>(j + 1), std::norm(num[static_cast<size_t>(j)]),
                              std::norm(st.amplitudes[static_cast<size_t>(j)])});
        }
    }
    b.tables.push_back(std::move(t));
    b.tables.push_back(std::move(prof));
    const std::vector<cdouble> center = numeric_state_near_center(cfg, m_profile);
    const FitResult g = gaussian_fit(center);
    b.summary["F"] = cfg.F;
    b.summary["min_overlap"] = min_ov;
    b.summary["max_e_err_over_f"] = max_err;
    b.summary["loc_length_at_center"] = localization_length(g);
    b.summary["gaussian_sigma"] = g.parameters[2];
    b.invariants["interior_overlap_above_0.999"] = min_ov > 0.999;
    b.invariants["interior_eigenvalue_error_below_0.01f"] = max_err < 0.01;
    return b;
}

// ---------------------------------------------------------------------------
// wavepacket: two-site density ratio R(t) of a traveling packet
// ---------------------------------------------------------------------------
inline ResultBundle run_wavepacket(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const std::vector<double> fs = cm.get_list("grid.f_values", {1e-5, 0.01});
    const double beta = cm.get_double("grid.beta", 0.1);
    const double center = cm.get_double("grid.center", base.L / 2.0);
    const int j_a = cm.get_int("grid.j_a", 25);
    const int j_b = cm.get_int("grid.j_b", 15);
    const double t_end = cm.get_double("time.t_end", 30.0);
    const int samples = cm.get_int("time.samples", 601);
    const std::vector<double> times = linear_times(t_end, samples);
    const InitialState init = InitialState::gaussian_packet(center, beta);
    bool r0_ok = true, window_ok = true;
    for (double f : fs) {
        LatticeConfig cfg = base;
        cfg.F = f;
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        const CorrelationTrace tr = evolve_correlation(cfg, init, times);
        const DensityRatio full = density_ratio(tr, j_a, j_b);
        Table t("ratio_f_" + detail::num_key(f), {"t", "r", "n_ja", "n_jb"});
        for (size_t i = 0; i < full.times.size(); ++i) {
            const size_t idx = i;  // density_ratio keeps the leading samples
            t.add_row({full.times[i], full.ratio[i], tr.densities[idx][static_cast<size_t>(j_a - 1)],
                       tr.densities[idx][static_cast<size_t>(j_b - 1)]});
        }
        b.tables.push_back(std::move(t));
        if (std::abs(full.ratio.front() - 1.0) > 1e-10) r0_ok = false;
        // traversal window: both probe densities above 1e-3
        double max_dev = 0.0;
        bool any = false;
        for (size_t i = 0; i < full.times.size(); ++i) {
            if (tr.densities[i][static_cast<size_t>(j_a - 1)] > 1e-3 &&
                tr.densities[i][static_cast<size_t>(j_b - 1)] > 1e-3) {
                max_dev = std::max(max_dev, std::abs(full.ratio[i] - 1.0));
                any = true;
            }
        }
        const DensityRatio fitted = density_ratio(tr, j_a, j_b, 1e-300, 21, 5.0, 25.0);
        nlohmann::json block;
        block["F"] = f;
        block["max_abs_r_minus_1_in_window"] = any ? max_dev : -1.0;
        if (fitted.fit_valid) {
            block["decay_rate_beta"] = fitted.decay_fit.parameters[1];
            block["fit_residual"] = fitted.decay_fit.residual;
        }
        b.summary["fields"].push_back(block);
        if (f <= 1e-4 && beta <= 0.3 && any && max_dev > 0.05) window_ok = false;
    }
    b.summary["beta"] = beta;
    b.summary["j_a"] = j_a;
    b.summary["j_b"] = j_b;
    b.invariants["ratio_starts_at_1"] = r0_ok;
    b.invariants["slow_field_ratio_stays_near_1"] = window_ok;
    return b;
}

// ---------------------------------------------------------------------------
// uniform-decay: total particle number of the uniform single-particle state
// ---------------------------------------------------------------------------
inline ResultBundle run_uniform_decay(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const std::vector<double> fs = cm.get_list("grid.f_values", {1e-5, 0.05, 0.1, 1.0});
    bool start_ok = true, mono_ok = true;
    for (double f : fs) {
        LatticeConfig cfg = base;
        cfg.F = f;
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        std::vector<double> times;
        if (cm.has("time.t_end")) {
            times = linear_times(cm.get_double("time.t_end", 10.0), cm.get_int("time.samples", 400));
        } else {
            times = default_times(f);
        }
        const CorrelationTrace tr = evolve_correlation(cfg, InitialState::uniform(), times);
        Table t("number_decay_f_" + detail::num_key(f), {"t", "total_number", "ln_total"});
        double prev = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < tr.times.size(); ++i) {
            const double tot = detail::total_number(tr.densities[i]);
            t.add_row({tr.times[i], tot, std::log(std::max(tot, 1e-300))});
            if (i == 0 && std::abs(tot - 1.0) > 1e-10) start_ok = false;
            if (f > 0.0 && tot > prev + 1e-12) mono_ok = false;
            prev = tot;
        }
        b.tables.push_back(std::move(t));
        nlohmann::json block;
        block["F"] = f;
        block["final_number"] = detail::total_number(tr.densities.back());
        b.summary["fields"].push_back(block);
    }
    b.invariants["initial_number_is_1"] = start_ok;
    b.invariants["number_nonincreasing_for_positive_f"] = mono_ok;
    return b;
}

// ---------------------------------------------------------------------------
// contours: iso-density crossing times of the fully occupied lattice
// ---------------------------------------------------------------------------
inline ResultBundle run_contours(const ConfigMap& cm) {
    ResultBundle b;
    LatticeConfig cfg = cm.lattice();
    if (!cm.has("lattice.F")) cfg.F = 1.0;
    cfg.kind = PotentialKind::ImaginaryStark;
    cfg.validate();
    const double t_end = cm.get_double("time.t_end", 2.0);
    const int samples = cm.get_int("time.samples", 801);
    const std::vector<double> levels =
        cm.get_list("grid.levels", {1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3});
    const std::vector<double> times = linear_times(t_end, samples);
    const CorrelationTrace tr = evolve_correlation(cfg, InitialState::fully_occupied(), times);

    Table field("density_field", {"t", "site", "density"});
    for (size_t i = 0; i < tr.times.size(); ++i)
        for (int j = 0; j < cfg.L; ++j)
            field.add_row({tr.times[i], static_cast<double>(j + 1), tr.densities[i][static_cast<size_t>(j)]});
    Table pts("contour_points", {"level", "site", "t_cross"});
    Table fits("contour_fits", {"level", "prefactor", "slope", "n_sites", "residual"});
    double worst_slope_dev = 0.0;
    for (double lv : levels) {
        for (const auto& [j, tc] : contour_crossings(tr, lv))
            pts.add_row({lv, static_cast<double>(j), tc});
        const FitResult fr = contour_fit_level(tr, lv);
        fits.add_row({lv, fr.parameters[0], fr.parameters[1], static_cast<double>(fr.n_points), fr.residual});
        worst_slope_dev = std::max(worst_slope_dev, std::abs(fr.parameters[1] + 1.0));
    }
    // interior-site comparison with the decoupled-decay form e^{-2Fjt}
    double eq_worst = 0.0;
    const int j_lo = std::max(1, cfg.L / 4), j_hi = std::min(cfg.L, 3 * cfg.L / 4);
    for (int j = j_lo; j <= j_hi; ++j) {
        for (size_t i = 0; i < tr.times.size(); ++i) {
            const double n = tr.densities[i][static_cast<size_t>(j - 1)];
            if (n < 1e-6) continue;
            const double ref = std::exp(-2.0 * cfg.F * j * tr.times[i]);
            eq_worst = std::max(eq_worst, std::abs(n / ref - 1.0));
        }
    }
    b.tables.push_back(std::move(field));
    b.tables.push_back(std::move(pts));
    b.tables.push_back(std::move(fits));
    b.summary["F"] = cfg.F;
    b.summary["worst_slope_deviation_from_-1"] = worst_slope_dev;
    b.summary["interior_decay_form_max_rel_err"] = eq_worst;
    b.summary["spectral_fallback_used"] = tr.used_fallback;
    b.invariants["contour_slopes_within_0.05_of_-1"] = worst_slope_dev <= 0.05;
    b.invariants["interior_decay_form_within_10pc"] = eq_worst <= 0.10;
    return b;
}

// ---------------------------------------------------------------------------
// nr-sweep: rescaled particle number against its closed form
// ---------------------------------------------------------------------------
inline ResultBundle run_nr_sweep(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const std::vector<double> fs = cm.get_list("grid.f_values", {1e-5, 0.1, 1.0});
    const double tau_max = cm.get_double("grid.tau_max", 2.0);
    const int tau_count = cm.get_int("grid.tau_count", 201);
    Table t("nr_sweep", {"f", "tau", "t", "ln_nr", "nr", "ln_closed_form"});
    bool start_ok = true, sinh_ok = true;
    for (double f : fs) {
        LatticeConfig cfg = base;
        cfg.F = f;
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        std::vector<double> times(static_cast<size_t>(tau_count));
        for (int i = 0; i < tau_count; ++i) times[static_cast<size_t>(i)] = tau_max * i / (tau_count - 1) / f;
        const CorrelationTrace tr = evolve_correlation(cfg, InitialState::uniform(), times);
        const std::vector<double> ln_nr = rescaled_number_log(tr);
        double worst_rel_ln = 0.0, dev0 = std::abs(std::exp(ln_nr.front()) - 1.0);
        for (int i = 0; i < tau_count; ++i) {
            const double tau = times[static_cast<size_t>(i)] * f;
            const double lns = nr_sinh_closed_form_log(cfg.L, tau);
            const double lnv = ln_nr[static_cast<size_t>(i)];
            t.add_row({f, tau, times[static_cast<size_t>(i)], lnv,
                       lnv < 700.0 ? std::exp(lnv) : std::numeric_limits<double>::infinity(), lns});
            if (tau > 0.0) worst_rel_ln = std::max(worst_rel_ln, std::abs(lnv - lns) / std::max(std::abs(lns), 1e-30));
        }
        if (dev0 > 1e-10) start_ok = false;
        nlohmann::json block;
        block["F"] = f;
        block["max_rel_dev_ln_vs_closed_form"] = worst_rel_ln;
        b.summary["fields"].push_back(block);
        if (f > 0.8 && worst_rel_ln > 0.05) sinh_ok = false;
    }
    b.tables.push_back(std::move(t));
    b.invariants["nr_starts_at_1"] = start_ok;
    b.invariants["strong_field_matches_closed_form_5pc"] = sinh_ok;
    return b;
}

// ---------------------------------------------------------------------------
// boundary-osc: decay speed and residual oscillation of the first site
// ---------------------------------------------------------------------------
inline ResultBundle run_boundary_osc(const ConfigMap& cm) {
    ResultBundle b;
    const LatticeConfig base = cm.lattice();
    const std::vector<double> fs = cm.get_list("grid.f_values", {0.1, 0.3, 0.5, 1.0});
    const int l_check = cm.get_int("grid.l_check", 60);
    const double f_check = cm.get_double("grid.f_check", 0.5);
    const double t_end = cm.get_double("time.t_end", 60.0);
    const int samples = cm.get_int("time.samples", 1200);
    const std::vector<double> times = linear_times(t_end, samples);

    std::vector<std::pair<double, int>> runs;
    for (double f : fs) runs.emplace_back(f, base.L);
    runs.emplace_back(f_check, l_check);

    Table res("boundary_results", {"f", "l", "lambda", "omega", "prominence", "has_oscillation"});
    std::map<std::pair<double, int>, BoundaryOscillation> by_run;
    for (const auto& [f, l] : runs) {
        LatticeConfig cfg = base;
        cfg.F = f;
        cfg.L = l;
        cfg.kind = PotentialKind::ImaginaryStark;
        cfg.validate();
        const CorrelationTrace tr = evolve_correlation(cfg, InitialState::uniform(), times);
        const BoundaryOscillation osc = boundary_oscillation(tr);
        by_run[{f, l}] = osc;
        res.add_row({f, static_cast<double>(l), osc.lambda, osc.frequency, osc.prominence,
                     osc.has_oscillation ? 1.0 : 0.0});
        Table sig("boundary_signal_f_" + detail::num_key(f) + "_l_" + std::to_string(l), {"t", "n1", "rescaled"});
        for (size_t i = 0; i < tr.times.size(); ++i) {
            const double n1 = tr.densities[i][0];
            sig.add_row({tr.times[i], n1, std::exp(osc.lambda * tr.times[i]) * n1});
        }
        b.tables.push_back(std::move(sig));
    }
    b.tables.push_back(std::move(res));

    // cross-run checks on the default layout
    bool strong_field_quiet = true, freq_decreasing = true, size_insensitive = true;
    double prev_freq = std::numeric_limits<double>::infinity();
    for (const auto& [f, l] : runs) {
        if (l != base.L) continue;
        const BoundaryOscillation& osc = by_run[{f, l}];
        if (f >= 0.99) {
            if (osc.has_oscillation) strong_field_quiet = false;
        } else if (osc.has_oscillation) {
            if (osc.frequency >= prev_freq) freq_decreasing = false;
            prev_freq = osc.frequency;
        }
    }
    const auto a = by_run.find({f_check, base.L});
    const auto c = by_run.find({f_check, l_check});
    double size_dev = -1.0;
    if (a != by_run.end() && c != by_run.end() && a->second.has_oscillation && c->second.has_oscillation) {
        size_dev = std::abs(a->second.frequency - c->second.frequency) / a->second.frequency;
        size_insensitive = size_dev <= 0.05;
    }
    b.summary["size_check_f"] = f_check;
    b.summary["size_check_rel_freq_dev"] = size_dev;
    b.invariants["no_oscillation_at_strong_field"] = strong_field_quiet;
    b.invariants["frequency_decreases_with_f"] = freq_decreasing;
    b.invariants["frequency_size_insensitive_5pc"] = size_insensitive;
    return b;
}

// ---------------------------------------------------------------------------
// bloch-compare: conservative vs dissipative ladder with the same packet
// ---------------------------------------------------------------------------
inline ResultBundle run_bloch_compare(const ConfigMap& cm) {
    ResultBundle b;
    LatticeConfig cfg = cm.lattice();
    if (!cm.has("lattice.F")) cfg.F = 1.0;
    cfg.validate();
    const double beta = cm.get_double("grid.beta", 1.0);
    const double center = cm.get_double("grid.center", cfg.L / 2.0);
    const double t_end = cm.get_double("time.t_end", 100.0);
    const int samples = cm.get_int("time.samples", 4000);
    const InitialState init = InitialState::gaussian_packet(center, beta);
    const BlochComparison rep = bloch_comparison(cfg, init, t_end, samples);

    Table rt("real_signal", {"t", "signal"});
    for (size_t i = 0; i < rep.real_times.size(); ++i) rt.add_row({rep.real_times[i], rep.real_signal[i]});
    Table ic("imag_centroids", {"t", "centroid_main", "centroid_ref"});
    for (size_t i = 0; i < rep.imag_times.size(); ++i)
        ic.add_row({rep.imag_times[i], rep.imag_centroid_main[i], rep.imag_centroid_ref[i]});
    Table pr("imag_profiles", {"site", "main_probe", "ref_probe", "main_end", "ref_end"});
    for (size_t j = 0; j < rep.profile_main_probe.size(); ++j)
        pr.add_row({static_cast<double>(j + 1), rep.profile_main_probe[j], rep.profile_ref_probe[j],
                    rep.profile_main_end[j], rep.profile_ref_end[j]});
    b.tables.push_back(std::move(rt));
    b.tables.push_back(std::move(ic));
    b.tables.push_back(std::move(pr));

    const double expect = 2.0 * std::numbers::pi / cfg.F;
    const double period_dev = std::abs(rep.real_period - expect) / expect;
    b.summary["real_period"] = rep.real_period;
    b.summary["expected_period"] = expect;
    b.summary["period_rel_dev"] = period_dev;
    b.summary["imag_profile_distance"] = rep.imag_profile_distance;
    b.summary["probe_time"] = rep.probe_time;
    b.invariants["conservative_period_within_2pc"] = rep.real_period > 0.0 && period_dev <= 0.02;
    b.invariants["conservative_revival_detected"] = rep.real_revival;
    b.invariants["dissipative_no_revival"] = !rep.imag_revival;
    b.invariants["dissipative_profiles_insensitive"] = rep.imag_profile_distance <= 0.05;
    return b;
}

// ---------------------------------------------------------------------------
// registry + dispatch
// ---------------------------------------------------------------------------
inline const std::vector<ExperimentInfo>& experiment_registry() {
    static const std::vector<ExperimentInfo> reg = {
        {"spectrum-panel", "eigenvalue tables + real/imag classification at several F (default L=40, F=1e-5,0.05,0.1,1)"},
        {"ipr-sweep", "mean/min/max inverse participation ratio on a geometric F grid (default 1e-4..10)"},
        {"count-sweep", "classified real/imaginary eigenvalue counts across F (default 1e-4..2)"},
        {"finite-size", "both transition fields vs lattice size + power-law/constant fits (default L=20,40,80,160)"},
        {"pt-states", "per-state spatial symmetry, asymmetry measure and IPR (default F=1e-5,0.01)"},
        {"size-spectra", "spectra for several lattice sizes at fixed F (default L=40,60,80 at F=0.1)"},
        {"analytic-compare", "numeric eigenpairs vs Bessel closed form: overlaps, eigenvalue errors, profiles (default F=0.8)"},
        {"wavepacket", "two-site density ratio R(t) of a Gaussian packet (default sites 25/15, beta=0.1, F=1e-5,0.01)"},
        {"uniform-decay", "total particle number decay of the uniform state (default F=1e-5,0.05,0.1,1)"},
        {"contours", "iso-density crossing times + power-law fits, fully occupied start (default F=1, levels 1e-1..1e-3)"},
        {"nr-sweep", "rescaled particle number vs rescaled time against the closed form (default F=1e-5,0.1,1)"},
        {"boundary-osc", "first-site decay speed and residual oscillation frequency (default F=0.1..1, size check L=60)"},
        {"bloch-compare", "conservative vs dissipative packet dynamics: revival period and profile sensitivity (default F=1)"},
    };
    return reg;
}

inline ResultBundle compute_experiment(const std::string& name, const ConfigMap& cm) {
    using Runner = ResultBundle (*)(const ConfigMap&);
    static const std::map<std::string, Runner> dispatch = {
        {"spectrum-panel", run_spectrum_panel}, {"ipr-sweep", run_ipr_sweep},
        {"count-sweep", run_count_sweep},       {"finite-size", run_finite_size},
        {"pt-states", run_pt_states},           {"size-spectra", run_size_spectra},
        {"analytic-compare", run_analytic_compare}, {"wavepacket", run_wavepacket},
        {"uniform-decay", run_uniform_decay},   {"contours", run_contours},
        {"nr-sweep", run_nr_sweep},             {"boundary-osc", run_boundary_osc},
        {"bloch-compare", run_bloch_compare},
    };
    const auto it = dispatch.find(name);
    if (it == dispatch.end()) throw ConfigError("unknown experiment: " + name);
    ResultBundle b = it->second(cm);
    b.experiment = name;
    return b;
}

// ---------------------------------------------------------------------------
// plot-script generation
// ---------------------------------------------------------------------------
inline std::string emit_plot_script(const ResultBundle& b) {
    if (b.tables.empty()) throw UnsupportedTable("bundle has no tables to plot");
    std::string s;
    s += "#!/usr/bin/env python3\n";
    s += "# Regenerates the '" + b.experiment + "' figure from the CSV files in this directory.\n";
    s += "# Data stays in the CSVs; this script only reads and draws them.\n";
    s += "import csv\nimport math\nimport matplotlib.pyplot as plt\n\n";
    s += "def load(name):\n";
    s += "    with open(name, newline=\"\") as fh:\n";
    s += "        rows = list(csv.reader(fh))\n";
    s += "    cols = rows[0]\n";
    s += "    return {c: [float(r[i]) for r in rows[1:]] for i, c in enumerate(cols)}\n\n";

    const std::string& e = b.experiment;
    auto tables_with_prefix = [&](const std::string& p) {
        std::vector<std::string> names;
        for (const auto& t : b.tables)
            if (t.name.rfind(p, 0) == 0) names.push_back(t.name);
        return names;
    };

    if (e == "spectrum-panel" || e == "size-spectra") {
        const auto names = tables_with_prefix(e == "spectrum-panel" ? "spectrum_f_" : "size_spectrum_l_");
        s += "names = [";
        for (const auto& n : names) s += "\"" + n + "\", ";
        s += "]\n";
        s += "fig, axes = plt.subplots(1, len(names), figsize=(4 * len(names), 4), squeeze=False)\n";
        s += "for ax, name in zip(axes[0], names):\n";
        s += "    d = load(name + \".csv\")\n";
        s += "    colors = [\"tab:red\" if r else (\"tab:blue\" if i else \"tab:gray\")\n";
        s += "              for r, i in zip(d[\"is_real\"], d[\"is_imag\"])]\n";
        s += "    ax.scatter(d[\"re_e_shifted\"], d[\"im_e_shifted\"], c=colors, s=18)\n";
        s += "    ax.set_xlabel(\"Re E'\"); ax.set_ylabel(\"Im E'\"); ax.set_title(name)\n";
        s += "    ax.axhline(0, lw=0.5, color=\"k\"); ax.axvline(0, lw=0.5, color=\"k\")\n";
    } else if (e == "ipr-sweep") {
        s += "d = load(\"ipr_sweep.csv\")\n";
        s += "plt.figure(figsize=(6, 4))\n";
        s += "plt.semilogx(d[\"f\"], d[\"mean_ipr\"], \"o-\", label=\"mean\")\n";
        s += "plt.semilogx(d[\"f\"], d[\"min_ipr\"], \"--\", label=\"min\")\n";
        s += "plt.semilogx(d[\"f\"], d[\"max_ipr\"], \"--\", label=\"max\")\n";
        s += "plt.xlabel(\"F\"); plt.ylabel(\"IPR\"); plt.legend()\n";
    } else if (e == "count-sweep") {
        s += "d = load(\"count_sweep.csv\")\n";
        s += "plt.figure(figsize=(6, 4))\n";
        s += "plt.semilogx(d[\"f\"], d[\"frac_real\"], \"o-\", label=\"fraction real\")\n";
        s += "plt.semilogx(d[\"f\"], d[\"frac_imag\"], \"s-\", label=\"fraction imaginary\")\n";
        s += "plt.xlabel(\"F\"); plt.ylabel(\"fraction of spectrum\"); plt.legend()\n";
    } else if (e == "finite-size") {
        s += "d = load(\"transitions.csv\")\n";
        s += "lx = [math.log(v) for v in d[\"l\"]]\n";
        s += "ly = [math.log(v) for v in d[\"fc1\"]]\n";
        s += "n = len(lx); mx = sum(lx) / n; my = sum(ly) / n\n";
        s += "slope = sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)\n";
        s += "icpt = my - slope * mx\n";
        s += "fig, (a1, a2) = plt.subplots(1, 2, figsize=(10, 4))\n";
        s += "a1.loglog(d[\"l\"], d[\"fc1\"], \"o\", label=\"first transition\")\n";
        s += "a1.loglog(d[\"l\"], [math.exp(icpt) * v ** slope for v in d[\"l\"]], \"-\",\n";
        s += "          label=f\"fit exponent {slope:.3f}\")\n";
        s += "a1.set_xlabel(\"L\"); a1.set_ylabel(\"F\"); a1.legend()\n";
        s += "a2.semilogx(d[\"l\"], d[\"fc2\"], \"s-\", label=\"second transition\")\n";
        s += "a2.set_xlabel(\"L\"); a2.set_ylabel(\"F\"); a2.legend()\n";
    } else if (e == "pt-states") {
        const auto names = tables_with_prefix("pt_profiles_f_");
        s += "names = [";
        for (const auto& n : names) s += "\"" + n + "\", ";
        s += "]\n";
        s += "fig, axes = plt.subplots(1, len(names), figsize=(5 * len(names), 4), squeeze=False)\n";
        s += "for ax, name in zip(axes[0], names):\n";
        s += "    d = load(name + \".csv\")\n";
        s += "    for k in (1, 2, 3):\n";
        s += "        ax.plot(d[\"site\"], d[f\"prob_{k}\"], \"o-\", ms=3, label=f\"state {k}\")\n";
        s += "    ax.set_xlabel(\"site\"); ax.set_ylabel(\"|psi|^2\"); ax.set_title(name); ax.legend()\n";
    } else if (e == "analytic-compare") {
        s += "d = load(\"analytic_compare.csv\")\n";
        s += "p = load(\"analytic_profile.csv\")\n";
        s += "fig, (a1, a2) = plt.subplots(1, 2, figsize=(10, 4))\n";
        s += "a1.plot(d[\"m\"], d[\"overlap\"], \"o-\")\n";
        s += "a1.set_xlabel(\"m\"); a1.set_ylabel(\"overlap\"); a1.set_ylim(0.99, 1.001)\n";
        s += "a2.semilogy(p[\"site\"], p[\"prob_numeric\"], \"o\", label=\"numeric\")\n";
        s += "a2.semilogy(p[\"site\"], p[\"prob_analytic\"], \"-\", label=\"closed form\")\n";
        s += "a2.set_xlabel(\"site\"); a2.set_ylabel(\"|psi|^2\"); a2.legend()\n";
    } else if (e == "wavepacket") {
        const auto names = tables_with_prefix("ratio_f_");
        s += "names = [";
        for (const auto& n : names) s += "\"" + n + "\", ";
        s += "]\n";
        s += "plt.figure(figsize=(6, 4))\n";
        s += "for name in names:\n";
        s += "    d = load(name + \".csv\")\n";
        s += "    plt.semilogy(d[\"t\"], d[\"r\"], label=name)\n";
        s += "plt.xlabel(\"t\"); plt.ylabel(\"R(t)\"); plt.legend()\n";
    } else if (e == "uniform-decay") {
        const auto names = tables_with_prefix("number_decay_f_");
        s += "names = [";
        for (const auto& n : names) s += "\"" + n + "\", ";
        s += "]\n";
        s += "plt.figure(figsize=(6, 4))\n";
        s += "for name in names:\n";
        s += "    d = load(name + \".csv\")\n";
        s += "    plt.semilogy(d[\"t\"], d[\"total_number\"], label=name)\n";
        s += "plt.xlabel(\"t\"); plt.ylabel(\"total particle number\"); plt.legend()\n";
    } else if (e == "contours") {
        s += "pts = load(\"contour_points.csv\")\n";
        s += "plt.figure(figsize=(6, 4))\n";
        s += "levels = sorted(set(pts[\"level\"]), reverse=True)\n";
        s += "for lv in levels:\n";
        s += "    xs = [s_ for s_, l_ in zip(pts[\"site\"], pts[\"level\"]) if l_ == lv]\n";
        s += "    ys = [t_ for t_, l_ in zip(pts[\"t_cross\"], pts[\"level\"]) if l_ == lv]\n";
        s += "    plt.loglog(xs, ys, \"o-\", ms=3, label=f\"level {lv:g}\")\n";
        s += "plt.xlabel(\"site j\"); plt.ylabel(\"crossing time t\"); plt.legend()\n";
    } else if (e == "nr-sweep") {
        s += "d = load(\"nr_sweep.csv\")\n";
        s += "plt.figure(figsize=(6, 4))\n";
        s += "fields = sorted(set(d[\"f\"]))\n";
        s += "for fv in fields:\n";
        s += "    xs = [x for x, f_ in zip(d[\"tau\"], d[\"f\"]) if f_ == fv]\n";
        s += "    ys = [y for y, f_ in zip(d[\"ln_nr\"], d[\"f\"]) if f_ == fv]\n";
        s += "    plt.plot(xs, ys, label=f\"F={fv:g}\")\n";
        s += "xs = [x for x, f_ in zip(d[\"tau\"], d[\"f\"]) if f_ == fields[-1]]\n";
        s += "ys = [y for y, f_ in zip(d[\"ln_closed_form\"], d[\"f\"]) if f_ == fields[-1]]\n";
        s += "plt.plot(xs, ys, \"k--\", label=\"closed form\")\n";
        s += "plt.xlabel(\"tau = F t\"); plt.ylabel(\"ln N_r\"); plt.legend()\n";
    } else if (e == "boundary-osc") {
        const auto names = tables_with_prefix("boundary_signal_");
        s += "names = [";
        for (const auto& n : names) s += "\"" + n + "\", ";
        s += "]\n";
        s += "fig, (a1, a2) = plt.subplots(1, 2, figsize=(11, 4))\n";
        s += "for name in names:\n";
        s += "    d = load(name + \".csv\")\n";
        s += "    k0 = len(d[\"t\"]) // 10\n";
        s += "    a1.plot(d[\"t\"][k0:], d[\"rescaled\"][k0:], label=name)\n";
        s += "a1.set_xlabel(\"t\"); a1.set_ylabel(\"rescaled first-site density\"); a1.legend(fontsize=7)\n";
        s += "r = load(\"boundary_results.csv\")\n";
        s += "a2.plot(r[\"f\"], r[\"omega\"], \"o\")\n";
        s += "a2.set_xlabel(\"F\"); a2.set_ylabel(\"oscillation frequency\")\n";
    } else if (e == "bloch-compare") {
        s += "rs = load(\"real_signal.csv\")\n";
        s += "ic = load(\"imag_centroids.csv\")\n";
        s += "pr = load(\"imag_profiles.csv\")\n";
        s += "fig, (a1, a2, a3) = plt.subplots(1, 3, figsize=(15, 4))\n";
        s += "a1.plot(rs[\"t\"], rs[\"signal\"]); a1.set_xlabel(\"t\"); a1.set_ylabel(\"conservative signal\")\n";
        s += "a2.plot(ic[\"t\"], ic[\"centroid_main\"], label=\"packet start\")\n";
        s += "a2.plot(ic[\"t\"], ic[\"centroid_ref\"], \"--\", label=\"single-site start\")\n";
        s += "a2.set_xlabel(\"t\"); a2.set_ylabel(\"normalized centroid\"); a2.legend()\n";
        s += "a3.plot(pr[\"site\"], pr[\"main_end\"], label=\"packet, late\")\n";
        s += "a3.plot(pr[\"site\"], pr[\"ref_end\"], \"--\", label=\"single-site, late\")\n";
        s += "a3.set_xlabel(\"site\"); a3.set_ylabel(\"normalized density\"); a3.legend()\n";
    } else {
        s += "names = [";
        for (const auto& t : b.tables) s += "\"" + t.name + "\", ";
        s += "]\n";
        s += "fig, axes = plt.subplots(len(names), 1, figsize=(6, 4 * len(names)), squeeze=False)\n";
        s += "for ax, name in zip((a for row in axes for a in row), names):\n";
        s += "    d = load(name + \".csv\")\n";
        s += "    cols = list(d)\n";
        s += "    for c in cols[1:]:\n";
        s += "        ax.plot(d[cols[0]], d[c], label=c)\n";
        s += "    ax.set_xlabel(cols[0]); ax.set_title(name); ax.legend(fontsize=7)\n";
    }
    s += "\nplt.tight_layout()\n";
    s += "plt.savefig(\"" + e + ".png\", dpi=160)\n";
    s += "print(\"wrote " + e + ".png\")\n";
    return s;
}

// Computes the experiment, stamps run metadata, writes tables + summary +
// plot script into spec.out_dir (unless empty).
inline ResultBundle run(const ExperimentSpec& spec) {
    ResultBundle b = compute_experiment(spec.name, spec.config);
    b.config_hash = fnv1a_hash(spec.name + "|" + spec.config.canonical());
    b.timestamp = utc_timestamp();
    if (!spec.out_dir.empty()) {
        write_bundle(b, spec.out_dir);
        write_text_file(spec.out_dir / (spec.name + "_plot.py"), emit_plot_script(b));
    }
    return b;
}

}  // namespace imstark
