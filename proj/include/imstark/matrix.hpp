#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "errors.hpp"

namespace imstark {

using cdouble = std::complex<double>;

// Dense square complex matrix, row-major. Indices are 0-based here; public
// site-labelled interfaces (lattice, dynamics, analytic) speak 1-based and
// translate at their boundary.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * static_cast<size_t>(n)) {}

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return n_; }
    bool empty() const { return n_ == 0; }

    cdouble& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
    const cdouble& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }

    ComplexMatrix transpose() const {
        ComplexMatrix r(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    ComplexMatrix conjugate() const {
        ComplexMatrix r(n_);
        for (size_t k = 0; k < a_.size(); ++k) r.a_[k] = std::conj(a_[k]);
        return r;
    }

    ComplexMatrix adjoint() const { return conjugate().transpose(); }

    double max_abs() const {
        double m = 0.0;
        for (const cdouble& z : a_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const {
        for (const cdouble& z : a_)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        for (size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        for (size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }
    ComplexMatrix& operator*=(cdouble s) {
        for (cdouble& z : a_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(cdouble s, ComplexMatrix a) { return a *= s; }

private:
    int n_ = 0;
    std::vector<cdouble> a_;
};

inline ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const cdouble aik = a(i, k);
            if (aik == cdouble(0.0)) continue;
            for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

inline std::vector<cdouble> matvec(const ComplexMatrix& a, const std::vector<cdouble>& x) {
    const int n = a.dim();
    std::vector<cdouble> y(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        cdouble s = 0.0;
        for (int j = 0; j < n; ++j) s += a(i, j) * x[static_cast<size_t>(j)];
        y[static_cast<size_t>(i)] = s;
    }
    return y;
}

inline double norm2(const std::vector<cdouble>& v) {
    double s = 0.0;
    for (const cdouble& z : v) s += std::norm(z);
    return std::sqrt(s);
}

// Euclidean inner product with conjugation on the left argument.
inline cdouble inner(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    cdouble s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

// Plain bilinear dot product (no conjugation).
inline cdouble dot_bilinear(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    cdouble s = 0.0;
    for (size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

// LU factorization with partial pivoting, for the linear solves behind
// inverse iteration and spectral propagation.
struct LuFactors {
    ComplexMatrix lu;
    std::vector<int> piv;
    bool singular = false;
};

inline LuFactors lu_factor(ComplexMatrix a) {
    const int n = a.dim();
    LuFactors f;
    f.piv.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) f.piv[static_cast<size_t>(i)] = i;
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::abs(a(k, k));
        for (int i = k + 1; i < n; ++i) {
            double m = std::abs(a(i, k));
            if (m > best) {
                best = m;
                p = i;
            }
        }
        if (best < 1e-300) {
            f.singular = true;
            f.lu = std::move(a);
            return f;
        }
        if (p != k) {
            for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
            std::swap(f.piv[static_cast<size_t>(k)], f.piv[static_cast<size_t>(p)]);
        }
        const cdouble inv_pivot = 1.0 / a(k, k);
        for (int i = k + 1; i < n; ++i) {
            const cdouble m = a(i, k) * inv_pivot;
            a(i, k) = m;
            if (m == cdouble(0.0)) continue;
            for (int j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
        }
    }
    f.lu = std::move(a);
    return f;
}

inline std::vector<cdouble> lu_solve(const LuFactors& f, const std::vector<cdouble>& b) {
    const int n = f.lu.dim();
    std::vector<cdouble> x(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<size_t>(i)] = b[static_cast<size_t>(f.piv[static_cast<size_t>(i)])];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[static_cast<size_t>(i)] -= f.lu(i, j) * x[static_cast<size_t>(j)];
        x[static_cast<size_t>(i)] /= f.lu(i, i);
    }
    return x;
}

}  // namespace imstark
