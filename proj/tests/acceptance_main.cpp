// Acceptance gate: one self-contained check per numbered criterion, each
// printing a single PASS/FAIL line with the measured quantities. Run with no
// arguments for the full set, or with a single number (1..12) for one
// criterion. Exit status is nonzero when any executed criterion fails.

#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <imstark/imstark.hpp>

using namespace imstark;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

LatticeConfig mk(int L, double F, PotentialKind kind = PotentialKind::ImaginaryStark) {
    LatticeConfig c;
    c.L = L;
    c.F = F;
    c.kind = kind;
    return c;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

// 1. discrete symmetries of the generator across random configurations
Outcome c1() {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> ld(2, 100);
    std::uniform_real_distribution<double> fd(0.0, 3.0), jd(0.1, 2.0);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        LatticeConfig c = mk(ld(rng), fd(rng));
        c.J = jd(rng);
        worst = std::max(worst, k_symmetry_residual(c));
        worst = std::max(worst, pt_symmetry_residual(c));
    }
    return {worst < 1e-12, fmt("max symmetry residual %.3e over 50 random configs (L<=100, F in [0,3]); require < 1e-12", worst)};
}

// 2. closed-form spectra: two sites at any F, cosine band at F = 0
Outcome c2() {
    double worst2 = 0.0;
    for (double f : {0.25, 0.5, 2.0}) {
        const LatticeConfig c = mk(2, f);
        std::vector<cdouble> ev = qr_eigenvalues(build_hamiltonian(c));
        const cdouble root = 0.5 * std::sqrt(cdouble(c.J * c.J - f * f, 0.0));
        const cdouble base(0.0, -1.5 * f);
        const cdouble w1 = base + root, w2 = base - root;
        const double d = std::min(std::abs(ev[0] - w1) + std::abs(ev[1] - w2),
                                  std::abs(ev[0] - w2) + std::abs(ev[1] - w1));
        worst2 = std::max(worst2, d);
    }
    double worst_cos = 0.0;
    for (int l : {10, 40}) {
        const Spectrum sp = sort_spectrum(eigendecompose(build_hamiltonian(mk(l, 0.0))));
        for (int m = 1; m <= l; ++m) {
            const double want = std::cos(m * std::numbers::pi / (l + 1));
            const cdouble got = sp.values[static_cast<size_t>(l - m)];
            worst_cos = std::max(worst_cos, std::abs(got - cdouble(want, 0.0)));
        }
    }
    const bool ok = worst2 < 1e-12 && worst_cos < 1e-10;
    return {ok, fmt("two-site closed form dev %.3e (require < 1e-12); F=0 cosine band dev %.3e for L=10,40 (require < 1e-10)", worst2, worst_cos)};
}

// 3. transition fields and their size scaling
Outcome c3() {
    const double tol_f = 1e-9;
    auto fc1_of = [&](int l) {
        return detect_transition(mk(l, 0.0), Transition::Fc1, 0.0, 0.1, tol_f);
    };
    auto fc2_of = [&](int l) {
        return detect_transition(mk(l, 0.0), Transition::Fc2, 0.5, 1.0, tol_f);
    };
    const double fc2_20 = fc2_of(20), fc2_40 = fc2_of(40), fc2_80 = fc2_of(80);
    const double spread = std::max({fc2_20, fc2_40, fc2_80}) - std::min({fc2_20, fc2_40, fc2_80});
    const double fc1_40 = fc1_of(40);
    std::vector<std::pair<double, double>> pts;
    for (int l : {20, 40, 80, 160}) pts.emplace_back(static_cast<double>(l), l == 40 ? fc1_40 : fc1_of(l));
    const FiniteSizeFit fit = finite_size_fit(pts);
    const double expnt = fit.power.parameters[1];

    const bool box_fc2 = std::abs(fc2_40 - 0.7079) <= 0.01;
    const bool box_spread = spread < 0.01;
    const bool box_fc1 = fc1_40 >= 3e-5 && fc1_40 <= 3e-4;
    const bool box_exp = std::abs(expnt - (-0.94)) <= 0.10;
    const bool ok = box_fc2 && box_spread && box_fc1 && box_exp;
    return {ok, fmt("Fc2(40)=%.9f vs 0.7079+-0.01 [%s]; Fc2 spread %.2e < 0.01 [%s]; Fc1(40)=%.5e in [3e-5,3e-4] [%s]; size exponent %.4f vs -0.94+-0.10 [%s]",
                    fc2_40, box_fc2 ? "ok" : "MISS", spread, box_spread ? "ok" : "MISS",
                    fc1_40, box_fc1 ? "ok" : "MISS", expnt, box_exp ? "ok" : "MISS")};
}

// 4. strong-field ladder: interior eigenvalues sit at -i m F, spacing F
Outcome c4() {
    const double f = 1.0;
    const Spectrum sp = sort_spectrum(eigendecompose(build_hamiltonian(mk(40, f))));
    double worst_pos = 0.0, worst_sp = 0.0;
    for (int m = 10; m <= 30; ++m) {
        const cdouble want(0.0, -m * f);
        worst_pos = std::max(worst_pos, std::abs(sp.values[static_cast<size_t>(m - 1)] - want));
        if (m < 30) {
            const double gap = std::abs(sp.values[static_cast<size_t>(m)] - sp.values[static_cast<size_t>(m - 1)]);
            worst_sp = std::max(worst_sp, std::abs(gap - f));
        }
    }
    const bool ok = worst_pos < 0.01 * f && worst_sp <= 0.01 * f;
    return {ok, fmt("F=1 L=40 interior m=10..30: max |E-(-imF)| = %.3e (require < 0.01F), spacing dev %.3e (require <= 1%%)", worst_pos, worst_sp)};
}

// 5. closed-form eigenstates overlap the numeric ones in the interior
Outcome c5() {
    const LatticeConfig c = mk(40, 0.8);
    const Spectrum sp = eigendecompose(build_hamiltonian(c));
    double min_ov = 1.0;
    for (int m = 10; m <= 30; ++m) {
        const cdouble want(0.0, -m * c.F);
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int k = 0; k < sp.dim; ++k) {
            const double d = std::abs(sp.values[static_cast<size_t>(k)] - want);
            if (d < bd) {
                bd = d;
                best = k;
            }
        }
        const auto [e_an, st] = analytic_eigenpair(m, c);
        min_ov = std::min(min_ov, std::abs(inner(sp.right_vector(best), st.amplitudes)));
    }
    // near the boundary at weak field the closed form degrades; measured, not gated
    const LatticeConfig cb = mk(40, 0.1);
    const Spectrum spb = eigendecompose(build_hamiltonian(cb));
    const auto [eb, stb] = analytic_eigenpair(2, cb);
    double best_ov = 0.0;
    for (int k = 0; k < spb.dim; ++k)
        best_ov = std::max(best_ov, std::abs(inner(spb.right_vector(k), stb.amplitudes)));
    return {min_ov > 0.999,
            fmt("interior overlap min %.6f at F=0.8, m=10..30 (require > 0.999); note: boundary m=2 at F=0.1 reaches only %.4f, outside the closed form's validity", min_ov, best_ov)};
}

// 6. localization length falls off with the field as a power law
Outcome c6() {
    std::vector<double> fv;
    for (int i = 0; i < 11; ++i) fv.push_back(0.5 + 2.5 * i / 10.0);
    const FitResult fit = loc_length_powerlaw(mk(40, 0.5), 20, fv, StateSource::Numeric);
    const double a = fit.parameters[0], b = fit.parameters[1];
    const bool ok = std::abs(a - 1.162) / 1.162 <= 0.10 && std::abs(b - (-0.5823)) <= 0.05;
    return {ok, fmt("power law a=%.6f (vs 1.162 +-10%%), b=%.6f (vs -0.5823 +-0.05) over F in [0.5,3]", a, b)};
}

// 7. correlation flow reproduces the pure-state oracle
Outcome c7() {
    std::mt19937 rng(777);
    std::normal_distribution<double> nd;
    double worst = 0.0;
    for (double f : {0.01, 0.5, 1.0}) {
        const LatticeConfig c = mk(40, f);
        for (int rep = 0; rep < 10; ++rep) {
            std::vector<cdouble> psi0(40);
            double nrm = 0.0;
            for (auto& z : psi0) {
                z = cdouble(nd(rng), nd(rng));
                nrm += std::norm(z);
            }
            nrm = std::sqrt(nrm);
            for (auto& z : psi0) z /= nrm;
            const std::vector<double> ts = {0.0, 0.5, 2.0, 7.0, 20.0};
            const CorrelationTrace tr = evolve_correlation(c, InitialState::custom(psi0), ts);
            const PureTrace pt = nh_evolve_pure(c, psi0, ts);
            for (size_t it = 0; it < ts.size(); ++it)
                for (int j = 0; j < 40; ++j)
                    worst = std::max(worst, std::abs(tr.densities[it][static_cast<size_t>(j)] -
                                                     pt.densities[it][static_cast<size_t>(j)]));
        }
    }
    return {worst < 1e-8, fmt("max |Delta_jj - |psi_j|^2| = %.3e over 10 random states x F in {0.01,0.5,1}, t <= 20 (require < 1e-8)", worst)};
}

// 8. structural properties of the correlation flow
Outcome c8() {
    double worst_tr = 0.0;
    {
        const CorrelationTrace tr =
            evolve_correlation(mk(12, 0.0), InitialState::gaussian_packet(6.0, 0.4), linear_times(15.0, 40));
        for (size_t it = 0; it < tr.times.size(); ++it) {
            double s = 0.0;
            for (double v : tr.densities[it]) s += v;
            worst_tr = std::max(worst_tr, std::abs(s - 1.0));
        }
    }
    bool decreasing = true;
    {
        const CorrelationTrace tr = evolve_correlation(mk(12, 0.5), InitialState::uniform(), linear_times(6.0, 30));
        double prev = std::numeric_limits<double>::infinity();
        for (size_t it = 0; it < tr.times.size(); ++it) {
            double s = 0.0;
            for (double v : tr.densities[it]) s += v;
            if (it > 0 && !(s < prev)) decreasing = false;
            prev = s;
        }
    }
    double worst_h = 0.0, min_eig = 0.0;
    {
        EvolveOptions keep;
        keep.store_matrices = true;
        const CorrelationTrace tr =
            evolve_correlation(mk(10, 0.5), InitialState::gaussian_packet(5.0, 0.3), linear_times(5.0, 11), keep);
        for (const ComplexMatrix& d : tr.delta) {
            for (int j = 0; j < 10; ++j)
                for (int k = 0; k < 10; ++k) worst_h = std::max(worst_h, std::abs(d(j, k) - std::conj(d(k, j))));
            for (const cdouble& e : qr_eigenvalues(d)) min_eig = std::min(min_eig, e.real());
        }
    }
    const bool ok = worst_tr < 1e-10 && decreasing && worst_h < 1e-10 && min_eig > -1e-8;
    return {ok, fmt("F=0 trace dev %.3e (< 1e-10); F>0 total strictly decreasing: %s; hermiticity dev %.3e; min eigenvalue %.3e (> -1e-8)",
                    worst_tr, decreasing ? "yes" : "NO", worst_h, min_eig)};
}

// 9. decoupled decay at J = 0 and iso-density contours at strong field
Outcome c9() {
    double worst_j0 = 0.0;
    {
        LatticeConfig c = mk(8, 0.7);
        c.J = 0.0;
        const std::vector<double> ts{0.0, 0.3, 1.2};
        const CorrelationTrace tr = evolve_correlation(c, InitialState::uniform(), ts);
        for (size_t it = 0; it < ts.size(); ++it)
            for (int j = 1; j <= 8; ++j) {
                const double want = (1.0 / 8.0) * std::exp(-2.0 * j * 0.7 * ts[it]);
                worst_j0 = std::max(worst_j0, std::abs(tr.densities[it][static_cast<size_t>(j - 1)] - want));
            }
    }
    const CorrelationTrace tr =
        evolve_correlation(mk(40, 1.0), InitialState::fully_occupied(), linear_times(2.0, 801));
    double worst_slope = 0.0;
    for (double lv : {1e-1, 3.1622776601683794e-2, 1e-2, 3.1622776601683794e-3, 1e-3})
        worst_slope = std::max(worst_slope, std::abs(contour_fit_level(tr, lv).parameters[1] + 1.0));
    double eq_worst = 0.0;
    for (int j = 10; j <= 30; ++j)
        for (size_t i = 0; i < tr.times.size(); ++i) {
            const double n = tr.densities[i][static_cast<size_t>(j - 1)];
            if (n < 1e-6) continue;
            eq_worst = std::max(eq_worst, std::abs(n / std::exp(-2.0 * j * tr.times[i]) - 1.0));
        }
    const bool ok = worst_j0 < 1e-12 && worst_slope <= 0.05 && eq_worst <= 0.10;
    return {ok, fmt("J=0 closed-form abs dev %.3e (< 1e-12); contour slope dev %.4f from -1 (<= 0.05); interior decay-form rel dev %.4f (<= 0.10)",
                    worst_j0, worst_slope, eq_worst)};
}

// 10. rescaled particle number against its closed form
Outcome c10() {
    double worst_small = 0.0;
    {
        const CorrelationTrace tr =
            evolve_correlation(mk(10, 1e-5), InitialState::uniform(), linear_times(1000.0, 400));
        for (double v : rescaled_number(tr)) worst_small = std::max(worst_small, std::abs(v - 1.0));
    }
    const int nt = 201;
    std::vector<double> ts(static_cast<size_t>(nt));
    for (int i = 0; i < nt; ++i) ts[static_cast<size_t>(i)] = 2.0 * i / (nt - 1);
    const CorrelationTrace tr = evolve_correlation(mk(40, 1.0), InitialState::uniform(), ts);
    const std::vector<double> ln_nr = rescaled_number_log(tr);
    double worst_ln = 0.0, worst_val = 0.0;
    for (int i = 1; i < nt; ++i) {
        const double tau = ts[static_cast<size_t>(i)];
        const double lns = nr_sinh_closed_form_log(40, tau);
        worst_ln = std::max(worst_ln, std::abs(ln_nr[static_cast<size_t>(i)] - lns) / std::abs(lns));
        if (tau <= 0.5) worst_val = std::max(worst_val, std::abs(std::exp(ln_nr[static_cast<size_t>(i)] - lns) - 1.0));
    }
    const bool ok = worst_small < 1e-6 && worst_ln <= 0.05 && worst_val <= 0.05;
    return {ok, fmt("slow-field max |Nr-1| = %.3e at F=1e-5, L=10 (< 1e-6); F=1 sinh-form dev: log-space %.4f, early value %.4f (<= 0.05)",
                    worst_small, worst_ln, worst_val)};
}

// 11. boundary-density oscillation frequency across field and size
Outcome c11() {
    const std::vector<double> ts = linear_times(60.0, 1200);
    std::vector<double> freqs;
    for (double f : {0.1, 0.3, 0.5}) {
        const BoundaryOscillation o =
            boundary_oscillation(evolve_correlation(mk(40, f), InitialState::uniform(), ts));
        if (!o.has_oscillation) return {false, fmt("expected an oscillation at F=%g", f)};
        freqs.push_back(o.frequency);
    }
    const bool monotone = freqs[0] > freqs[1] && freqs[1] > freqs[2];
    const BoundaryOscillation strong =
        boundary_oscillation(evolve_correlation(mk(40, 1.0), InitialState::uniform(), ts));
    const BoundaryOscillation other =
        boundary_oscillation(evolve_correlation(mk(60, 0.5), InitialState::uniform(), ts));
    const double size_dev = std::abs(other.frequency - freqs[2]) / freqs[2];
    const bool ok = monotone && !strong.has_oscillation && other.has_oscillation && size_dev <= 0.05;
    return {ok, fmt("freq falls with F (%s): %.4f/%.4f/%.4f at F=0.1/0.3/0.5; none at F=1 (%s); L=40 vs L=60 rel dev %.2e (<= 0.05)",
                    monotone ? "yes" : "NO", freqs[0], freqs[1], freqs[2],
                    strong.has_oscillation ? "FOUND ONE" : "ok", size_dev)};
}

// 12. conservative chain revives with period 2 pi / F; dissipative one does not
Outcome c12() {
    const BlochComparison r = bloch_comparison(mk(40, 1.0), InitialState::gaussian_packet(20.0, 1.0), 100.0, 4000);
    const double ideal = 2.0 * std::numbers::pi;
    const double period_dev = std::abs(r.real_period - ideal) / ideal;
    const bool ok = r.real_revival && period_dev <= 0.02 && !r.imag_revival && r.imag_profile_distance < 0.05;
    return {ok, fmt("conservative period %.6f vs 2pi/F (dev %.4f, <= 0.02), revival %s; dissipative revival %s, profile sensitivity %.6f (< 0.05)",
                    r.real_period, period_dev, r.real_revival ? "detected" : "MISSING",
                    r.imag_revival ? "FOUND" : "none", r.imag_profile_distance)};
}

}  // namespace

int main(int argc, char** argv) {
    using Fn = Outcome (*)();
    const std::vector<Fn> checks = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11, c12};
    int lo = 1, hi = static_cast<int>(checks.size());
    if (argc > 1) {
        const int which = std::atoi(argv[1]);
        if (which < 1 || which > static_cast<int>(checks.size())) {
            std::fprintf(stderr, "usage: %s [1..%d]\n", argv[0], static_cast<int>(checks.size()));
            return 2;
        }
        lo = hi = which;
    }
    bool all_ok = true;
    for (int k = lo; k <= hi; ++k) {
        Outcome o;
        try {
            o = checks[static_cast<size_t>(k - 1)]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        all_ok = all_ok && o.pass;
    }
    return all_ok ? 0 : 1;
}
