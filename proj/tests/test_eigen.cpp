#include <gtest/gtest.h>

#include <complex>
#include <random>

#include <imstark/imstark.hpp>

using namespace imstark;

namespace {

LatticeConfig mk(int L, double F) {
    LatticeConfig c;
    c.L = L;
    c.F = F;
    c.kind = PotentialKind::ImaginaryStark;
    return c;
}

}  // namespace

TEST(Eigen, TwoSiteClosedForm) {
    // E = -(3/2) i F +- (1/2) sqrt(J^2 - F^2)
    for (double f : {0.5, 1.0, 2.0}) {
        LatticeConfig c = mk(2, f);
        std::vector<cdouble> vals = qr_eigenvalues(build_hamiltonian(c));
        const cdouble root = std::sqrt(cdouble(1.0 - f * f, 0.0));
        const cdouble a = cdouble(0.0, -1.5 * f) + 0.5 * root;
        const cdouble b = cdouble(0.0, -1.5 * f) - 0.5 * root;
        const double d1 = std::min(std::abs(vals[0] - a), std::abs(vals[0] - b));
        const double d2 = std::min(std::abs(vals[1] - a), std::abs(vals[1] - b));
        EXPECT_LT(d1, 1e-12) << "F=" << f;
        EXPECT_LT(d2, 1e-12) << "F=" << f;
    }
}

TEST(Eigen, ZeroFieldCosineSpectrum) {
    for (int l : {10, 40}) {
        std::vector<cdouble> vals = qr_eigenvalues(build_hamiltonian(mk(l, 0.0)));
        std::vector<double> re(vals.size());
        for (size_t i = 0; i < vals.size(); ++i) {
            EXPECT_LT(std::abs(vals[i].imag()), 1e-10);
            re[i] = vals[i].real();
        }
        std::sort(re.begin(), re.end());
        for (int m = 1; m <= l; ++m) {
            const double want = std::cos(m * std::numbers::pi / (l + 1));
            const double got = re[static_cast<size_t>(l - m)];  // cos decreases in m
            EXPECT_NEAR(got, want, 1e-10) << "L=" << l << " m=" << m;
        }
    }
}

TEST(Eigen, ResidualSmallAcrossFieldStrengths) {
    for (double f : {1e-5, 0.01, 0.1, 0.5, 1.0, 3.0}) {
        const ComplexMatrix h = build_hamiltonian(mk(40, f));
        const Spectrum sp = eigendecompose(h);
        EXPECT_LT(spectrum_residual(sp, h), 1e-11) << "F=" << f;
    }
}

TEST(Eigen, EigenvalueSumMatchesTrace) {
    std::mt19937 rng(99);
    std::normal_distribution<double> nd;
    ComplexMatrix m(20);
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j) m(i, j) = cdouble(nd(rng), nd(rng));
    const std::vector<cdouble> vals = qr_eigenvalues(m);
    cdouble sum = 0.0, tr = 0.0;
    for (const cdouble& z : vals) sum += z;
    for (int i = 0; i < 20; ++i) tr += m(i, i);
    EXPECT_LT(std::abs(sum - tr), 1e-10 * std::max(1.0, std::abs(tr)));
}

TEST(Eigen, RepeatedEigenvalueUpperTriangular) {
    ComplexMatrix m(2);
    m(0, 0) = 2.0;
    m(0, 1) = 1.0;
    m(1, 1) = 2.0;
    const std::vector<cdouble> vals = qr_eigenvalues(m);
    EXPECT_LT(std::abs(vals[0] - 2.0), 1e-7);
    EXPECT_LT(std::abs(vals[1] - 2.0), 1e-7);
}

TEST(Eigen, OneByOneMatrix) {
    ComplexMatrix m(1);
    m(0, 0) = cdouble(3.0, -4.0);
    const Spectrum sp = eigendecompose(m);
    ASSERT_EQ(sp.dim, 1);
    EXPECT_LT(std::abs(sp.values[0] - cdouble(3.0, -4.0)), 1e-15);
    EXPECT_LT(std::abs(std::abs(sp.right(0, 0)) - 1.0), 1e-15);
}

TEST(Eigen, SortedStrongFieldLadder) {
    Spectrum sp;
    sp.dim = 40;
    sp.values = qr_eigenvalues(build_hamiltonian(mk(40, 1.0)));
    sp = sort_spectrum(sp);
    // edge eigenvalues are pushed off the ladder; interior sits on -i m F
    EXPECT_NEAR(sp.values[0].imag(), -1.296655185, 1e-8);
    EXPECT_NEAR(sp.values[39].imag(), -39.703344815, 1e-8);
    for (int m = 10; m <= 30; ++m) {
        EXPECT_LT(std::abs(sp.values[static_cast<size_t>(m - 1)] - cdouble(0.0, -m)), 1e-12);
        if (m > 10) {
            const double gap =
                std::abs(sp.values[static_cast<size_t>(m - 1)] - sp.values[static_cast<size_t>(m - 2)]);
            EXPECT_NEAR(gap, 1.0, 1e-12);
        }
    }
}

TEST(Eigen, SortPermutationConsistent) {
    const ComplexMatrix h = build_hamiltonian(mk(12, 0.3));
    const Spectrum sp = eigendecompose(h);
    const Spectrum sorted = sort_spectrum(sp);
    ASSERT_EQ(static_cast<int>(sorted.sort_order.size()), 12);
    for (int i = 0; i < 12; ++i) {
        const int src = sorted.sort_order[static_cast<size_t>(i)];
        EXPECT_EQ(sorted.values[static_cast<size_t>(i)], sp.values[static_cast<size_t>(src)]);
        for (int r = 0; r < 12; ++r) EXPECT_EQ(sorted.right(r, i), sp.right(r, src));
    }
}

TEST(Eigen, LeftRightProductNearIdentity) {
    const ComplexMatrix h = build_hamiltonian(mk(20, 1.0));
    Spectrum sp = eigendecompose(h);
    left_vectors_complex_symmetric(sp, h);
    const ComplexMatrix lr = matmul(sp.left, sp.right);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i)
        for (int j = 0; j < 20; ++j)
            worst = std::max(worst, std::abs(lr(i, j) - (i == j ? cdouble(1.0) : cdouble(0.0))));
    EXPECT_LT(worst, 1e-10);
}

TEST(Eigen, RightVectorsSatisfyEigenEquation) {
    const ComplexMatrix h = build_hamiltonian(mk(15, 0.6));
    const Spectrum sp = eigendecompose(h);
    ASSERT_TRUE(sp.has_vectors);
    for (int m = 0; m < 15; ++m) {
        const std::vector<cdouble> v = sp.right_vector(m);
        const std::vector<cdouble> hv = matvec(h, v);
        double r = 0.0;
        for (int i = 0; i < 15; ++i)
            r = std::max(r, std::abs(hv[static_cast<size_t>(i)] - sp.values[static_cast<size_t>(m)] * v[static_cast<size_t>(i)]));
        EXPECT_LT(r, 1e-11) << "m=" << m;
        EXPECT_NEAR(norm2(v), 1.0, 1e-12);
    }
}
