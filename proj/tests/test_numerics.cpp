#include "ehvi/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <vector>

using namespace ehvi;

namespace {

SymMatrix random_spd(RngStream& rng, int m) {
    Matrix b(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) b(i, j) = 2.0 * rng.uniform() - 1.0;
    SymMatrix a(m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double s = (i == j) ? 0.1 * m : 0.0;
            for (int k = 0; k < m; ++k) s += b(i, k) * b(j, k);
            a.set(i, j, s);
        }
    return a;
}

SymMatrix random_symmetric(RngStream& rng, int m) {
    SymMatrix a(m);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) a.set(i, j, 2.0 * rng.uniform() - 1.0);
    return a;
}

}  // namespace

TEST(Cholesky, Identity) {
    const Matrix l = cholesky(SymMatrix::identity(2));
    EXPECT_DOUBLE_EQ(l(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(l(1, 1), 1.0);
    EXPECT_DOUBLE_EQ(l(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(l(1, 0), 0.0);
}

TEST(Cholesky, HandExpanded2x2) {
    const SymMatrix a = SymMatrix::from_rows(2, {4, 2, 2, 5});
    const Matrix l = cholesky(a);
    EXPECT_NEAR(l(0, 0), 2.0, 1e-14);
    EXPECT_NEAR(l(1, 0), 1.0, 1e-14);
    EXPECT_NEAR(l(1, 1), 2.0, 1e-14);
    EXPECT_DOUBLE_EQ(l(0, 1), 0.0);
}

TEST(Cholesky, IndefiniteThrows) {
    const SymMatrix a = SymMatrix::from_rows(2, {1, 2, 2, 1});
    EXPECT_THROW(cholesky(a), NotPositiveDefinite);
}

TEST(Cholesky, ReconstructsRandomSpd) {
    RngStream rng(42);
    for (int m = 2; m <= 6; ++m) {
        for (int rep = 0; rep < 50; ++rep) {
            const SymMatrix a = random_spd(rng, m);
            const Matrix l = cholesky(a);
            for (int i = 0; i < m; ++i) {
                EXPECT_GT(l(i, i), 0.0);
                for (int j = 0; j < m; ++j) {
                    double s = 0.0;
                    for (int k = 0; k < m; ++k) s += l(i, k) * l(j, k);
                    EXPECT_NEAR(s, a(i, j), 1e-10);
                }
            }
        }
    }
}

TEST(Cholesky, TinyUniformScaleStillFactors) {
    // Near-point-mass covariances must factor; the pivot test is relative.
    SymMatrix a(2);
    a.set(0, 0, 1e-18);
    a.set(1, 1, 1e-18);
    const Matrix l = cholesky(a);
    EXPECT_NEAR(l(0, 0), 1e-9, 1e-24);
}

TEST(EigenSym, AlreadyDiagonal) {
    const EigenDecomposition e = eigen_sym(SymMatrix::diagonal({3.0, 1.0}));
    EXPECT_DOUBLE_EQ(e.eigenvalues[0], 3.0);
    EXPECT_DOUBLE_EQ(e.eigenvalues[1], 1.0);
    EXPECT_DOUBLE_EQ(e.eigenvectors(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(e.eigenvectors(1, 1), 1.0);
}

TEST(EigenSym, ClosedForm2x2) {
    const SymMatrix a = SymMatrix::from_rows(2, {1.0, 0.5, 0.5, 1.0});
    const EigenDecomposition e = eigen_sym(a);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(e.eigenvalues[0], 1.5, 1e-12);
    EXPECT_NEAR(e.eigenvalues[1], 0.5, 1e-12);
    EXPECT_NEAR(e.eigenvectors(0, 0), inv_sqrt2, 1e-12);
    EXPECT_NEAR(e.eigenvectors(1, 0), inv_sqrt2, 1e-12);
    EXPECT_NEAR(e.eigenvectors(0, 1), inv_sqrt2, 1e-12);
    EXPECT_NEAR(e.eigenvectors(1, 1), -inv_sqrt2, 1e-12);
}

TEST(EigenSym, DegenerateSpectrumReconstructs) {
    const EigenDecomposition e = eigen_sym(SymMatrix::identity(3));
    for (double lambda : e.eigenvalues) EXPECT_NEAR(lambda, 1.0, 1e-12);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int k = 0; k < 3; ++k)
                s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
            EXPECT_NEAR(s, i == j ? 1.0 : 0.0, 1e-10);
        }
}

TEST(EigenSym, RandomReconstructionOrthonormalityAndConvention) {
    RngStream rng(7);
    for (int rep = 0; rep < 1000; ++rep) {
        const int m = 1 + static_cast<int>(rng.uniform() * 6);
        const SymMatrix a = random_symmetric(rng, m);
        const EigenDecomposition e = eigen_sym(a);
        for (int j = 1; j < m; ++j) EXPECT_GE(e.eigenvalues[j - 1], e.eigenvalues[j]);
        // reconstruction
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) {
                double s = 0.0;
                for (int k = 0; k < m; ++k)
                    s += e.eigenvectors(i, k) * e.eigenvalues[k] * e.eigenvectors(j, k);
                ASSERT_NEAR(s, a(i, j), 1e-10);
            }
        // orthonormal columns
        for (int c1 = 0; c1 < m; ++c1)
            for (int c2 = c1; c2 < m; ++c2) {
                double dot = 0.0;
                for (int k = 0; k < m; ++k)
                    dot += e.eigenvectors(k, c1) * e.eigenvectors(k, c2);
                ASSERT_NEAR(dot, c1 == c2 ? 1.0 : 0.0, 1e-10);
            }
        // sign convention: first component of magnitude > 1e-12 is positive
        for (int c = 0; c < m; ++c) {
            for (int k = 0; k < m; ++k) {
                if (std::abs(e.eigenvectors(k, c)) > 1e-12) {
                    ASSERT_GT(e.eigenvectors(k, c), 0.0);
                    break;
                }
            }
        }
    }
}

TEST(EigenSym, SweepBudgetExhaustedThrows) {
    const SymMatrix a = SymMatrix::from_rows(2, {1.0, 0.5, 0.5, 1.0});
    EXPECT_THROW(eigen_sym(a, 0), NoConvergence);
}

TEST(Rng, SameSeedSameStream) {
    RngStream a(123), b(123);
    for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
    RngStream c(123), d(123);
    const auto za = standard_normal(c, 100);
    const auto zb = standard_normal(d, 100);
    for (int i = 0; i < 100; ++i) ASSERT_EQ(za[i], zb[i]);
}

TEST(Rng, DifferentSeedsDiffer) {
    RngStream a(1), b(2);
    int same = 0;
    for (int i = 0; i < 100; ++i)
        if (a.next_u64() == b.next_u64()) ++same;
    EXPECT_EQ(same, 0);
}

TEST(Rng, StandardNormalMoments) {
    RngStream rng(1);
    const auto z = standard_normal(rng, 100000);
    double mean = 0.0;
    for (double v : z) mean += v;
    mean /= static_cast<double>(z.size());
    double var = 0.0;
    for (double v : z) var += (v - mean) * (v - mean);
    var /= static_cast<double>(z.size() - 1);
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_LT(std::abs(var - 1.0), 0.02);
}

TEST(Rng, SingleDrawFinite) {
    RngStream rng(9);
    const auto z = standard_normal(rng, 1);
    ASSERT_EQ(z.size(), 1u);
    EXPECT_TRUE(std::isfinite(z[0]));
}

TEST(Wishart, OneDimensionalIsChiSquare) {
    RngStream rng(5);
    const int dof = 6;
    double mean = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) mean += sample_wishart(rng, 1, dof)(0, 0);
    mean /= draws;
    EXPECT_NEAR(mean, dof, 0.03 * dof);
}

TEST(Wishart, AlwaysPositiveDefinite) {
    RngStream rng(11);
    for (int rep = 0; rep < 10000; ++rep) {
        const int dim = 2 + rep % 3;
        const SymMatrix w = sample_wishart(rng, dim, dim + 2);
        EXPECT_NO_THROW(cholesky(w));
    }
}

TEST(Wishart, MeanIsDofTimesIdentity) {
    RngStream rng(13);
    const int dof = 5;
    double sum[2][2] = {{0, 0}, {0, 0}};
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const SymMatrix w = sample_wishart(rng, 2, dof);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) sum[a][b] += w(a, b);
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double expected = a == b ? dof : 0.0;
            EXPECT_NEAR(sum[a][b] / draws, expected, 0.05 * dof);
        }
}

TEST(Wishart, DofTooSmallThrows) {
    RngStream rng(1);
    EXPECT_THROW(sample_wishart(rng, 3, 2), DofTooSmall);
}
