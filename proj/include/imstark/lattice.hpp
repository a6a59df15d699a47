#pragma once

#include <cmath>

#include "errors.hpp"
#include "matrix.hpp"

namespace imstark {

enum class PotentialKind { ImaginaryStark, RealStark };

// Lattice parameters. Site labels are 1-based (j = 1..L); energies are in
// units of the hopping J. J = 0 is accepted so the decoupled-site limit of
// the dissipative dynamics stays reachable.
struct LatticeConfig {
    int L = 40;
    double J = 1.0;
    double F = 0.0;
    PotentialKind kind = PotentialKind::ImaginaryStark;

    void validate() const {
        if (L < 1) throw ConfigError("lattice.L must be >= 1");
        if (!(J >= 0.0) || !std::isfinite(J)) throw ConfigError("lattice.J must be >= 0 and finite");
        if (!(F >= 0.0) || !std::isfinite(F)) throw ConfigError("lattice.F must be >= 0 and finite");
    }
};

// Tridiagonal chain with open boundaries: off-diagonals J/2, on-site
// potential -i*F*j (ImaginaryStark) or -F*j (RealStark), j = 1..L.
inline ComplexMatrix build_hamiltonian(const LatticeConfig& cfg) {
    cfg.validate();
    ComplexMatrix h(cfg.L);
    for (int j = 0; j + 1 < cfg.L; ++j) {
        h(j, j + 1) = cfg.J / 2.0;
        h(j + 1, j) = cfg.J / 2.0;
    }
    for (int j = 0; j < cfg.L; ++j) {
        const double site = static_cast<double>(j + 1);
        if (cfg.kind == PotentialKind::ImaginaryStark)
            h(j, j) = cdouble(0.0, -cfg.F * site);
        else
            h(j, j) = cdouble(-cfg.F * site, 0.0);
    }
    return h;
}

// H' = H + i*F*(L+1)/2 * Id: removes the uniform half of the loss so the
// remaining diagonal i*F*(L+1-2j)/2 is antisymmetric about the chain center.
inline ComplexMatrix build_shifted(const LatticeConfig& cfg) {
    if (cfg.kind != PotentialKind::ImaginaryStark)
        throw ConfigError("energy shift is defined for the imaginary potential only");
    ComplexMatrix h = build_hamiltonian(cfg);
    const cdouble shift(0.0, cfg.F * (cfg.L + 1) / 2.0);
    for (int j = 0; j < cfg.L; ++j) h(j, j) += shift;
    return h;
}

// Diagonal involution U with entries (-1)^j, j = 1..L.
inline ComplexMatrix build_u_transform(int L) {
    if (L < 1) throw ConfigError("lattice.L must be >= 1");
    ComplexMatrix u(L);
    for (int j = 0; j < L; ++j) u(j, j) = ((j + 1) % 2 == 0) ? 1.0 : -1.0;
    return u;
}

// Max-abs-entry norm of U^{-1} H' U + H'^dagger; zero up to rounding for
// every imaginary-potential config.
inline double k_symmetry_residual(const LatticeConfig& cfg) {
    const ComplexMatrix hp = build_shifted(cfg);
    const ComplexMatrix u = build_u_transform(cfg.L);
    const ComplexMatrix lhs = matmul(matmul(u, hp), u);  // U^{-1} = U
    return (lhs + hp.adjoint()).max_abs();
}

// Max-abs-entry norm of P conj(H') P - H', with P the site-reversal
// permutation; zero because the shifted potential satisfies V_n = conj(V_{L+1-n}).
inline double pt_symmetry_residual(const LatticeConfig& cfg) {
    const ComplexMatrix hp = build_shifted(cfg);
    const int n = cfg.L;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const cdouble v = std::conj(hp(n - 1 - i, n - 1 - j)) - hp(i, j);
            worst = std::max(worst, std::abs(v));
        }
    return worst;
}

// Generator of the correlation-matrix flow: X = i * conj(H).
inline ComplexMatrix damping_matrix(const LatticeConfig& cfg) {
    if (cfg.kind != PotentialKind::ImaginaryStark)
        throw ConfigError("damping matrix is defined for the imaginary potential only");
    ComplexMatrix x = build_hamiltonian(cfg).conjugate();
    x *= cdouble(0.0, 1.0);
    return x;
}

}  // namespace imstark
