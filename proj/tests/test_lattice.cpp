#include <gtest/gtest.h>

#include <random>

#include <imstark/imstark.hpp>

using namespace imstark;

namespace {

LatticeConfig mk(int L, double F, PotentialKind kind = PotentialKind::ImaginaryStark) {
    LatticeConfig c;
    c.L = L;
    c.F = F;
    c.kind = kind;
    return c;
}

}  // namespace

TEST(Lattice, MatrixStructureImaginaryPotential) {
    LatticeConfig c = mk(5, 0.7);
    c.J = 0.8;
    const ComplexMatrix h = build_hamiltonian(c);
    ASSERT_EQ(h.dim(), 5);
    for (int j = 0; j < 5; ++j) {
        EXPECT_EQ(h(j, j), cdouble(0.0, -0.7 * (j + 1)));
        for (int k = 0; k < 5; ++k) {
            if (k == j + 1 || k == j - 1) {
                EXPECT_EQ(h(j, k), cdouble(0.4, 0.0));
            } else if (k != j) {
                EXPECT_EQ(h(j, k), cdouble(0.0, 0.0));
            }
        }
    }
}

TEST(Lattice, MatrixStructureRealPotential) {
    const ComplexMatrix h = build_hamiltonian(mk(4, 0.3, PotentialKind::RealStark));
    for (int j = 0; j < 4; ++j) {
        EXPECT_EQ(h(j, j), cdouble(-0.3 * (j + 1), 0.0));
        EXPECT_EQ(h(j, j).imag(), 0.0);
    }
}

TEST(Lattice, ZeroFieldMatrixIsRealSymmetric) {
    const ComplexMatrix h = build_hamiltonian(mk(8, 0.0));
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            EXPECT_EQ(h(i, j).imag(), 0.0);
            EXPECT_EQ(h(i, j), h(j, i));
        }
}

TEST(Lattice, ShiftedMatrixRemovesSpectralCenter) {
    const LatticeConfig c = mk(6, 0.9);
    const ComplexMatrix hs = build_shifted(c);
    cdouble tr = 0.0;
    for (int i = 0; i < 6; ++i) tr += hs(i, i);
    EXPECT_NEAR(std::abs(tr), 0.0, 1e-14);
}

TEST(Lattice, SimilaritySymmetryResidualTinyOnRandomConfigs) {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> ld(2, 100);
    std::uniform_real_distribution<double> fd(0.0, 3.0);
    std::uniform_real_distribution<double> jd(0.1, 2.0);
    for (int rep = 0; rep < 20; ++rep) {
        LatticeConfig c = mk(ld(rng), fd(rng));
        c.J = jd(rng);
        EXPECT_LT(k_symmetry_residual(c), 1e-12) << "L=" << c.L << " F=" << c.F;
        EXPECT_LT(pt_symmetry_residual(c), 1e-12) << "L=" << c.L << " F=" << c.F;
    }
}

TEST(Lattice, AlternatingSignTransformIsUnitaryAndDiagonal) {
    const ComplexMatrix u = build_u_transform(7);
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j) {
            if (i != j) {
                EXPECT_EQ(u(i, j), cdouble(0.0, 0.0));
            }
        }
    const ComplexMatrix uu = matmul(u, u.adjoint());
    for (int i = 0; i < 7; ++i)
        for (int j = 0; j < 7; ++j)
            EXPECT_NEAR(std::abs(uu(i, j) - (i == j ? cdouble(1.0) : cdouble(0.0))), 0.0, 1e-15);
}

TEST(Lattice, DampingMatrixIsRotatedConjugate) {
    const LatticeConfig c = mk(6, 0.4);
    const ComplexMatrix x = damping_matrix(c);
    ComplexMatrix want = build_hamiltonian(c).conjugate();
    want *= cdouble(0.0, 1.0);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) EXPECT_NEAR(std::abs(x(i, j) - want(i, j)), 0.0, 1e-15);
}

TEST(Lattice, DampingMatrixRejectsRealPotential) {
    EXPECT_THROW(damping_matrix(mk(6, 0.4, PotentialKind::RealStark)), ConfigError);
}

TEST(Lattice, ValidateRejectsBadParameters) {
    EXPECT_THROW(mk(0, 0.1).validate(), ConfigError);
    EXPECT_THROW(mk(5, -0.1).validate(), ConfigError);
    LatticeConfig c = mk(5, 0.1);
    c.J = -1.0;
    EXPECT_THROW(c.validate(), ConfigError);
    c.J = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_NO_THROW(mk(1, 0.0).validate());
    LatticeConfig z = mk(5, 0.1);
    z.J = 0.0;  // decoupled chain is a legal limit
    EXPECT_NO_THROW(z.validate());
}

TEST(Lattice, ResidualZeroFieldIsExactlySymmetric) {
    EXPECT_LT(k_symmetry_residual(mk(40, 0.0)), 1e-14);
    EXPECT_LT(pt_symmetry_residual(mk(40, 0.0)), 1e-14);
}
