#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"
#include "matrix.hpp"

namespace imstark {

// Full eigendecomposition of a dense complex matrix.
//   values[m]            eigenvalue m
//   right columns        unit-norm right eigenvectors, phase-gauged so the
//                        largest-magnitude component is real positive
//   left rows            row vectors biorthonormal to the right columns:
//                        left * right = Id as a plain matrix product
//   sort_order           permutation applied by sort_spectrum (identity
//                        until sorting)
// Vector blocks may be absent (has_vectors false) for value-only scans.
struct Spectrum {
    int dim = 0;
    std::vector<cdouble> values;
    ComplexMatrix right;
    ComplexMatrix left;
    bool has_vectors = false;
    std::vector<int> sort_order;

    std::vector<cdouble> right_vector(int m) const {
        std::vector<cdouble> v(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) v[static_cast<size_t>(i)] = right(i, m);
        return v;
    }
    std::vector<cdouble> left_row(int m) const {
        std::vector<cdouble> v(static_cast<size_t>(dim));
        for (int i = 0; i < dim; ++i) v[static_cast<size_t>(i)] = left(m, i);
        return v;
    }
};

namespace detail {

// Unitary reduction to upper Hessenberg form by complex Householder
// reflections. Tridiagonal input passes through unchanged.
inline ComplexMatrix hessenberg(ComplexMatrix a) {
    const int n = a.dim();
    for (int k = 0; k + 2 < n; ++k) {
        double nx = 0.0;
        for (int i = k + 1; i < n; ++i) nx += std::norm(a(i, k));
        nx = std::sqrt(nx);
        if (nx < 1e-300) continue;
        const cdouble x0 = a(k + 1, k);
        const cdouble alpha = (x0 != cdouble(0.0)) ? -(x0 / std::abs(x0)) * nx : cdouble(-nx);
        std::vector<cdouble> v(static_cast<size_t>(n - k - 1));
        for (int i = k + 1; i < n; ++i) v[static_cast<size_t>(i - k - 1)] = a(i, k);
        v[0] -= alpha;
        double nv = 0.0;
        for (const cdouble& z : v) nv += std::norm(z);
        nv = std::sqrt(nv);
        if (nv < 1e-300) continue;
        for (cdouble& z : v) z /= nv;
        // A[k+1:, k:] -= 2 v (v^H A[k+1:, k:])
        for (int j = k; j < n; ++j) {
            cdouble w = 0.0;
            for (int i = k + 1; i < n; ++i) w += std::conj(v[static_cast<size_t>(i - k - 1)]) * a(i, j);
            w *= 2.0;
            for (int i = k + 1; i < n; ++i) a(i, j) -= v[static_cast<size_t>(i - k - 1)] * w;
        }
        // A[:, k+1:] -= 2 (A[:, k+1:] v) v^H
        for (int i = 0; i < n; ++i) {
            cdouble w = 0.0;
            for (int j = k + 1; j < n; ++j) w += a(i, j) * v[static_cast<size_t>(j - k - 1)];
            w *= 2.0;
            for (int j = k + 1; j < n; ++j) a(i, j) -= w * std::conj(v[static_cast<size_t>(j - k - 1)]);
        }
    }
    return a;
}

}  // namespace detail

// Eigenvalues only: implicitly shifted complex QR iteration on the
// Hessenberg form, Wilkinson shift from the trailing 2x2, exceptional shift
// after every 20 stalled sweeps, deflation on negligible subdiagonals.
inline std::vector<cdouble> qr_eigenvalues(const ComplexMatrix& m) {
    const int n = m.dim();
    if (n == 0) return {};
    if (n == 1) return {m(0, 0)};
    ComplexMatrix h = detail::hessenberg(m);
    const double eps = std::numeric_limits<double>::epsilon();
    int hi = n - 1;
    int since_deflate = 0;
    long total = 0;
    const long cap = 100L * n;
    while (hi > 0) {
        int lo = hi;
        while (lo > 0) {
            double s = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
            if (s == 0.0) s = 1.0;
            if (std::abs(h(lo, lo - 1)) <= eps * s) {
                h(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            since_deflate = 0;
            continue;
        }
        ++total;
        ++since_deflate;
        if (total > cap)
            throw NonConvergence("QR iteration cap exceeded near eigenvalue index " + std::to_string(hi));
        cdouble mu;
        if (since_deflate % 20 == 0) {
            mu = h(hi, hi) + 1.5 * std::abs(h(hi, hi - 1));
        } else {
            const cdouble a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
            const cdouble c = h(hi, hi - 1), d = h(hi, hi);
            const cdouble disc = std::sqrt(((a - d) / 2.0) * ((a - d) / 2.0) + b * c);
            const cdouble l1 = (a + d) / 2.0 + disc, l2 = (a + d) / 2.0 - disc;
            mu = (std::abs(l1 - d) < std::abs(l2 - d)) ? l1 : l2;
        }
        cdouble x = h(lo, lo) - mu;
        cdouble y = h(lo + 1, lo);
        for (int k = lo; k < hi; ++k) {
            const double r = std::hypot(std::abs(x), std::abs(y));
            if (r < 1e-300) {
                x = h(k + 1, k);
                y = (k + 2 <= hi) ? h(k + 2, k) : cdouble(0.0);
                continue;
            }
            const double c = std::abs(x) / r;
            const cdouble ph = (std::abs(x) != 0.0) ? x / std::abs(x) : cdouble(1.0);
            const cdouble s = ph * std::conj(y) / r;
            // rows k, k+1 from column max(lo, k-1)
            const int c0 = std::max(lo, k - 1);
            for (int j = c0; j < n; ++j) {
                const cdouble t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = c * t1 + s * t2;
                h(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
            // columns k, k+1 up to row min(hi, k+2)
            const int r1 = std::min(hi, k + 2);
            for (int i = 0; i <= r1; ++i) {
                const cdouble t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = t1 * c + t2 * std::conj(s);
                h(i, k + 1) = -t1 * s + t2 * c;
            }
            if (k < hi - 1) {
                x = h(k + 1, k);
                y = h(k + 2, k);
            }
        }
    }
    std::vector<cdouble> vals(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) vals[static_cast<size_t>(i)] = h(i, i);
    return vals;
}

namespace detail {

inline double spectrum_scale(const std::vector<cdouble>& vals) {
    double s = 1.0;
    for (const cdouble& z : vals) s = std::max(s, std::abs(z));
    return s;
}

// Right eigenvectors by shifted inverse iteration with LU solves.
// Deterministic: the start vectors come from a fixed-seed generator.
inline ComplexMatrix right_vectors(const ComplexMatrix& m, const std::vector<cdouble>& vals) {
    const int n = m.dim();
    const double scale = spectrum_scale(vals);
    ComplexMatrix vmat(n);
    if (n == 1) {
        vmat(0, 0) = 1.0;
        return vmat;
    }
    std::mt19937 rng(12345);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<cdouble>> done;
    done.reserve(static_cast<size_t>(n));
    for (int idx = 0; idx < n; ++idx) {
        const cdouble lam = vals[static_cast<size_t>(idx)];
        std::vector<int> close;
        for (int j = 0; j < idx; ++j)
            if (std::abs(vals[static_cast<size_t>(j)] - lam) < 1e-8 * scale) close.push_back(j);
        std::vector<cdouble> v(static_cast<size_t>(n));
        for (cdouble& z : v) z = cdouble(gauss(rng), gauss(rng));
        double nrm = norm2(v);
        for (cdouble& z : v) z /= nrm;
        double best_res = std::numeric_limits<double>::infinity();
        std::vector<cdouble> best = v;
        for (int attempt = 0; attempt < 3 && best_res > 1e-12 * scale; ++attempt) {
            const double seed_shift = 1e-13 * scale * std::pow(100.0, attempt);
            for (int it = 0; it < 5; ++it) {
                ComplexMatrix a = m;
                const cdouble sh = lam + ((it == 0) ? cdouble(seed_shift) : cdouble(0.0));
                for (int i = 0; i < n; ++i) a(i, i) -= sh;
                LuFactors f = lu_factor(std::move(a));
                if (f.singular) {
                    ComplexMatrix a2 = m;
                    for (int i = 0; i < n; ++i) a2(i, i) -= lam + cdouble(1e-12 * scale);
                    f = lu_factor(std::move(a2));
                    if (f.singular) break;
                }
                std::vector<cdouble> w = lu_solve(f, v);
                for (int j : close) {
                    const cdouble ov = inner(done[static_cast<size_t>(j)], w);
                    for (int i = 0; i < n; ++i) w[static_cast<size_t>(i)] -= ov * done[static_cast<size_t>(j)][static_cast<size_t>(i)];
                }
                const double nw = norm2(w);
                if (nw < 1e-300) {
                    for (cdouble& z : v) z = cdouble(gauss(rng), gauss(rng));
                    const double nv = norm2(v);
                    for (cdouble& z : v) z /= nv;
                    continue;
                }
                for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / nw;
                std::vector<cdouble> mv = matvec(m, v);
                double res = 0.0;
                for (int i = 0; i < n; ++i) res += std::norm(mv[static_cast<size_t>(i)] - lam * v[static_cast<size_t>(i)]);
                res = std::sqrt(res);
                if (res < best_res) {
                    best_res = res;
                    best = v;
                }
                if (res < 1e-12 * scale) break;
            }
        }
        if (!(best_res < 1e-9 * scale))
            throw NonConvergence("inverse iteration failed for eigenvalue index " + std::to_string(idx));
        // phase gauge: largest-magnitude component real positive
        int kmax = 0;
        double amax = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = std::abs(best[static_cast<size_t>(i)]);
            if (a > amax) {
                amax = a;
                kmax = i;
            }
        }
        const cdouble g = std::abs(best[static_cast<size_t>(kmax)]) / best[static_cast<size_t>(kmax)];
        for (cdouble& z : best) z *= g;
        for (int i = 0; i < n; ++i) vmat(i, idx) = best[static_cast<size_t>(i)];
        done.push_back(best);
    }
    return vmat;
}

// Left row vectors by inverse iteration on the adjoint: rows l_m with
// l_m * right_n = delta_mn after rescaling.
inline ComplexMatrix left_rows_general(const ComplexMatrix& m, const std::vector<cdouble>& vals,
                                       const ComplexMatrix& right) {
    const int n = m.dim();
    const ComplexMatrix mh = m.adjoint();
    std::vector<cdouble> cvals(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cvals[static_cast<size_t>(i)] = std::conj(vals[static_cast<size_t>(i)]);
    const ComplexMatrix lv = right_vectors(mh, cvals);  // columns: left kets
    ComplexMatrix rows(n);
    for (int mrow = 0; mrow < n; ++mrow) {
        // bra of the left ket: conj-transpose row, then normalize against right
        cdouble ip = 0.0;
        for (int i = 0; i < n; ++i) ip += std::conj(lv(i, mrow)) * right(i, mrow);
        if (std::abs(ip) < 1e-14)
            throw IllConditioned("left/right eigenvector pairing degenerate at index " + std::to_string(mrow));
        for (int i = 0; i < n; ++i) rows(mrow, i) = std::conj(lv(i, mrow)) / ip;
    }
    return rows;
}

}  // namespace detail

// Complete eigendecomposition. Deterministic for identical input.
inline Spectrum eigendecompose(const ComplexMatrix& m, bool with_vectors = true) {
    if (m.dim() < 1) throw ConfigError("eigendecompose requires dim >= 1");
    if (!m.all_finite()) throw ConfigError("eigendecompose requires finite entries");
    Spectrum s;
    s.dim = m.dim();
    s.values = qr_eigenvalues(m);
    s.sort_order.resize(static_cast<size_t>(s.dim));
    std::iota(s.sort_order.begin(), s.sort_order.end(), 0);
    if (with_vectors) {
        s.right = detail::right_vectors(m, s.values);
        s.left = detail::left_rows_general(m, s.values, s.right);
        s.has_vectors = true;
    }
    return s;
}

// For complex-symmetric M the left eigenvectors are the conjugates of the
// right ones. Replaces the rows of `left` with transpose(right_m)/(v^T v).
// Throws Degenerate when two eigenvalues collide within tolerance (caller
// should keep the general-purpose left vectors) and IllConditioned when
// v^T v is vanishing (exceptional-point neighborhood).
inline void left_vectors_complex_symmetric(Spectrum& s, const ComplexMatrix& m) {
    const int n = s.dim;
    if (!s.has_vectors) throw ConfigError("spectrum carries no vectors");
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(m(i, j) - m(j, i)));
    if (asym > 1e-12 * std::max(1.0, m.max_abs()))
        throw ConfigError("matrix is not complex-symmetric");
    const double scale = detail::spectrum_scale(s.values);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (std::abs(s.values[static_cast<size_t>(a)] - s.values[static_cast<size_t>(b)]) < 1e-10 * scale)
                throw Degenerate("eigenvalues " + std::to_string(a) + " and " + std::to_string(b) +
                                 " collide; keeping general left vectors");
    ComplexMatrix rows(n);
    for (int mrow = 0; mrow < n; ++mrow) {
        cdouble vtv = 0.0;
        for (int i = 0; i < n; ++i) vtv += s.right(i, mrow) * s.right(i, mrow);
        if (std::abs(vtv) < 1e-10)
            throw IllConditioned("self-overlap v^T v vanishes at eigenvalue index " + std::to_string(mrow));
        for (int i = 0; i < n; ++i) rows(mrow, i) = s.right(i, mrow) / vtv;
    }
    s.left = std::move(rows);
}

// Canonical order: Re ascending, then Im descending. Re values are
// quantized by tol*scale first so that rounding fuzz on a degenerate real
// part cannot scramble the Im ordering. Stable on exact ties.
inline Spectrum sort_spectrum(const Spectrum& sp, double tol = 1e-10) {
    const int n = sp.dim;
    const double scale = detail::spectrum_scale(sp.values);
    const double q = tol * scale;
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const cdouble za = sp.values[static_cast<size_t>(a)];
        const cdouble zb = sp.values[static_cast<size_t>(b)];
        const double ra = std::round(za.real() / q);
        const double rb = std::round(zb.real() / q);
        if (ra != rb) return ra < rb;
        return za.imag() > zb.imag();
    });
    Spectrum out;
    out.dim = n;
    out.values.resize(static_cast<size_t>(n));
    out.sort_order.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        out.values[static_cast<size_t>(i)] = sp.values[static_cast<size_t>(order[static_cast<size_t>(i)])];
        out.sort_order[static_cast<size_t>(i)] = order[static_cast<size_t>(i)];
    }
    if (sp.has_vectors) {
        out.right = ComplexMatrix(n);
        out.left = ComplexMatrix(n);
        out.has_vectors = true;
        for (int i = 0; i < n; ++i) {
            const int src = order[static_cast<size_t>(i)];
            for (int r = 0; r < n; ++r) {
                out.right(r, i) = sp.right(r, src);
                out.left(i, r) = sp.left(src, r);
            }
        }
    }
    return out;
}

// Max relative eigen-residual ||M v - E v||_2 / max(1, ||M||_maxabs).
inline double spectrum_residual(const Spectrum& s, const ComplexMatrix& m) {
    if (!s.has_vectors) throw ConfigError("spectrum carries no vectors");
    const double scale = std::max(1.0, m.max_abs());
    double worst = 0.0;
    for (int k = 0; k < s.dim; ++k) {
        const std::vector<cdouble> v = s.right_vector(k);
        const std::vector<cdouble> mv = matvec(m, v);
        double r = 0.0;
        for (int i = 0; i < s.dim; ++i)
            r += std::norm(mv[static_cast<size_t>(i)] - s.values[static_cast<size_t>(k)] * v[static_cast<size_t>(i)]);
        worst = std::max(worst, std::sqrt(r) / scale);
    }
    return worst;
}

}  // namespace imstark
