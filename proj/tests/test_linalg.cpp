#include <cmath>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "hdmt/linalg.hpp"
#include "hdmt/rng.hpp"
#include "hdmt/statistics.hpp"

using namespace hdmt;

namespace {

Matrix random_psd(RngStream& rng, int d, int rank) {
    Matrix f(d, rank);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < rank; ++j) f(i, j) = rng.normal();
    }
    return f * f.transpose();
}

}  // namespace

TEST(OpNorm, IdentityAndDiagonalExamples) {
    EXPECT_NEAR(op_norm(CovMatrix(Matrix::Identity(7, 7))), 1.0, 1e-12);
    Vector diag(3);
    diag << 4, 1, 1;
    EXPECT_NEAR(op_norm(CovMatrix(Matrix(diag.asDiagonal()))), 4.0, 1e-12);
}

TEST(OpNorm, ZeroMatrixIsZero) {
    EXPECT_EQ(op_norm(CovMatrix(Matrix::Zero(4, 4))), 0.0);
}

TEST(OpNorm, TopEigenvectorOrthogonalToOnesIsFound) {
    // Spectrum {3, 0}: the top eigenvector (1, -1) is orthogonal to the start vector.
    Matrix a(2, 2);
    a << 1.5, -1.5, -1.5, 1.5;
    EXPECT_NEAR(op_norm(CovMatrix(a)), 3.0, 1e-12);
    // Block structure: ones lies inside the small eigenspace.
    Matrix b = Matrix::Zero(4, 4);
    b.topLeftCorner(2, 2) = Matrix::Constant(2, 2, 0.5);
    b.bottomRightCorner(2, 2) << 5, -5, -5, 5;
    EXPECT_NEAR(op_norm(CovMatrix(b)), 10.0, 1e-10);
}

TEST(OpNorm, AgreesWithDenseEigensolver) {
    RngStream rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 40;
        const Matrix a = random_psd(rng, d, 1 + trial % 7);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
        const double expected = solver.eigenvalues().maxCoeff();
        EXPECT_NEAR(largest_eigenvalue(a), expected, 1e-9 * (1.0 + expected)) << "trial " << trial;
    }
}

TEST(OpNorm, RepeatedTopEigenvalue) {
    Vector diag(5);
    diag << 2, 2, 2, 1, 0.5;
    EXPECT_NEAR(largest_eigenvalue(Matrix(diag.asDiagonal())), 2.0, 1e-12);
}

TEST(OpNorm, ImplicitOperatorMatchesMatrix) {
    RngStream rng(12, 0);
    const Matrix a = random_psd(rng, 30, 5);
    const double implicit =
        largest_eigenvalue(30, [&a](const Vector& x, Vector& y) { y.noalias() = a * x; });
    EXPECT_NEAR(implicit, largest_eigenvalue(a), 1e-10 * implicit);
}

TEST(OpNorm, BudgetExhaustionRaisesConvergenceError) {
    Vector diag(6);
    diag << 1, 2, 3, 4, 5, 6;
    OpNormOptions opts;
    opts.max_iter = 1;
    try {
        largest_eigenvalue(Matrix(diag.asDiagonal()), opts);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError& e) {
        EXPECT_GT(e.best_estimate(), 0.0);
        EXPECT_LE(e.best_estimate(), 6.0);
    }
}

TEST(OpNorm, OptionsAreValidated) {
    OpNormOptions opts;
    opts.tol = 0.0;
    EXPECT_THROW(opts.validate(), std::invalid_argument);
    opts.tol = 1e-8;
    opts.max_iter = 0;
    EXPECT_THROW(opts.validate(), std::invalid_argument);
    EXPECT_THROW(largest_eigenvalue(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST(Tridiagonal, KnownSpectrum) {
    // Path graph Laplacian-like matrix: 2 on the diagonal, -1 off it; top eigenvalue 2 + 2 cos(pi / (k + 1)).
    const int k = 8;
    const std::vector<double> diag(k, 2.0);
    const std::vector<double> off(k - 1, -1.0);
    EXPECT_NEAR(tridiagonal_max_eigenvalue(diag, off), 2.0 + 2.0 * std::cos(M_PI / (k + 1)), 1e-12);
    EXPECT_NEAR(tridiagonal_max_eigenvalue({3.0}, {}), 3.0, 1e-15);
}

TEST(CompensatedSumTest, RecoversLostLowOrderBits) {
    CompensatedSum s;
    s += 1.0;
    for (int i = 0; i < 1000; ++i) s += 1e-16;
    s += -1.0;
    EXPECT_NEAR(s.value(), 1e-13, 1e-20);
}
