#include "hdmt/statistics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace hdmt {

namespace {

// Column sums of x (sum over observations), compensated.
Vector column_sums(const Matrix& x) {
    Vector sums(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        CompensatedSum acc;
        for (Eigen::Index i = 0; i < x.rows(); ++i) acc += x(i, j);
        sums(j) = acc.value();
    }
    return sums;
}

Vector column_means(const Matrix& x) {
    return column_sums(x) / static_cast<double>(x.rows());
}

// Sum of squared row norms.
double sum_sq_row_norms(const Matrix& x) {
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < x.rows(); ++i) acc += x.row(i).squaredNorm();
    return acc.value();
}

// Squared norm of the mean minus the unbiased correction
//   sum ||X_i - mean||^2 / (n (n - 1)).
double centered_correction(const Matrix& x, const Vector& mean) {
    const double n = static_cast<double>(x.rows());
    const Matrix dev = x.rowwise() - mean.transpose();
    return sum_sq_row_norms(dev) / (n * (n - 1.0));
}

void require_rows(const Sample& s, std::size_t min_rows, const char* what) {
    if (s.n() < min_rows) {
        std::ostringstream msg;
        msg << what << " needs at least " << min_rows << " observations, got " << s.n();
        throw std::invalid_argument(msg.str());
    }
}

// (1^T K 1 - tr K) for a square block, compensated over rows.
double off_diagonal_total(const Matrix& k) {
    CompensatedSum acc;
    for (Eigen::Index j = 0; j < k.cols(); ++j) acc += k.col(j).sum() - k(j, j);
    return acc.value();
}

double block_total(const Matrix& k) {
    CompensatedSum acc;
    for (Eigen::Index j = 0; j < k.cols(); ++j) acc += k.col(j).sum();
    return acc.value();
}

// Quadruple U-statistic from Gram-level aggregates of any symmetric G:
//   frob_sq   = sum_{a,b} G_ab^2
//   diag      = G_aa
//   row_sums  = sum_b G_ab (diagonal included)
// With r_a the off-diagonal row sums, s = sum r_a, R = sum r_a^2 and
// S2 = sum_{a!=b} G_ab^2, the sum over ordered distinct (i,j,k,l) of
// (G_ij - G_il - G_kj + G_kl)^2 equals
//   4 [ (n-2)(n-3) S2 - 2(n-3)(R - S2) + (s^2 - 4R + 2 S2) ].
double trace_sq_from_aggregates(double frob_sq, const Vector& diag, const Vector& row_sums) {
    const double n = static_cast<double>(diag.size());
    CompensatedSum diag_sq;
    CompensatedSum r_sq;
    CompensatedSum r_total;
    for (Eigen::Index a = 0; a < diag.size(); ++a) {
        const double r = row_sums(a) - diag(a);
        diag_sq += diag(a) * diag(a);
        r_sq += r * r;
        r_total += r;
    }
    const double s2 = frob_sq - diag_sq.value();
    const double big_r = r_sq.value();
    const double s = r_total.value();
    const double paths = big_r - s2;
    const double disjoint = s * s - 4.0 * big_r + 2.0 * s2;
    const double numerator = (n - 2.0) * (n - 3.0) * s2 - 2.0 * (n - 3.0) * paths + disjoint;
    const double value = numerator / (n * (n - 1.0) * (n - 2.0) * (n - 3.0));
    return std::max(value, 0.0);
}

double frobenius_sq(const Matrix& m) {
    CompensatedSum acc;
    for (Eigen::Index j = 0; j < m.cols(); ++j) acc += m.col(j).squaredNorm();
    return acc.value();
}

}  // namespace

double u_stat_two_sample(const Sample& x, const Sample& y) {
    require_rows(x, 2, "two-sample U statistic (first sample)");
    require_rows(y, 2, "two-sample U statistic (second sample)");
    if (x.d() != y.d()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << x.d() << " vs " << y.d();
        throw std::invalid_argument(msg.str());
    }
    const Vector mean_x = column_means(x.data());
    const Vector mean_y = column_means(y.data());
    return (mean_x - mean_y).squaredNorm() - centered_correction(x.data(), mean_x) -
           centered_correction(y.data(), mean_y);
}

double u_stat_one_sample(const Sample& x) {
    require_rows(x, 2, "one-sample U statistic");
    const Vector mean_x = column_means(x.data());
    return mean_x.squaredNorm() - centered_correction(x.data(), mean_x);
}

double u_stat_from_gram(const GramTriple& g) {
    const double n = static_cast<double>(g.kxx().rows());
    if (n < 2) throw std::invalid_argument("Gram U statistic needs at least 2 observations in X");
    double value = off_diagonal_total(g.kxx()) / (n * (n - 1.0));
    if (g.two_sample()) {
        const double m = static_cast<double>(g.kyy()->rows());
        if (m < 2) throw std::invalid_argument("Gram U statistic needs at least 2 observations in Y");
        value += off_diagonal_total(*g.kyy()) / (m * (m - 1.0));
        value -= 2.0 * block_total(*g.kxy()) / (n * m);
    }
    return value;
}

CovMatrix empirical_covariance(const Sample& x) {
    const Matrix& data = x.data();
    const Vector mean = column_means(data);
    const Matrix dev = data.rowwise() - mean.transpose();
    const auto d = static_cast<Eigen::Index>(x.d());
    Matrix cov = Matrix::Zero(d, d);
    cov.selfadjointView<Eigen::Lower>().rankUpdate(dev.transpose(), 1.0 / static_cast<double>(x.n()));
    cov = cov.selfadjointView<Eigen::Lower>();
    return CovMatrix(std::move(cov));
}

double op_norm(const CovMatrix& c, const OpNormOptions& opts) {
    return largest_eigenvalue(c.entries(), opts);
}

Matrix center_gram(const Matrix& k) {
    if (k.rows() != k.cols()) throw std::invalid_argument("Gram matrix must be square");
    const Eigen::Index n = k.rows();
    Vector row_means(n);
    for (Eigen::Index j = 0; j < n; ++j) row_means(j) = k.col(j).sum() / static_cast<double>(n);
    const double grand = row_means.sum() / static_cast<double>(n);
    // H K H entrywise; (r_i + r_j) is symmetric in i and j, so exact input
    // symmetry carries over. The final pass restores it otherwise.
    Matrix centered(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) centered(i, j) = k(i, j) - (row_means(i) + row_means(j)) + grand;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j + 1; i < n; ++i) {
            if (centered(i, j) != centered(j, i)) {
                centered(i, j) = centered(j, i) = 0.5 * (centered(i, j) + centered(j, i));
            }
        }
    }
    return centered;
}

double op_norm_from_centered_gram(const Matrix& centered, const OpNormOptions& opts) {
    if (centered.rows() < 1) throw std::invalid_argument("Gram matrix is empty");
    return std::max(largest_eigenvalue(centered, opts), 0.0) / static_cast<double>(centered.rows());
}

double op_norm_from_gram(const Matrix& kxx, const OpNormOptions& opts) {
    if (kxx.rows() < 1) throw std::invalid_argument("Gram matrix is empty");
    return op_norm_from_centered_gram(center_gram(kxx), opts);
}

double trace_sq_hat_naive(const Sample& x) {
    require_rows(x, 4, "trace estimator");
    const Matrix& data = x.data();
    const auto n = static_cast<Eigen::Index>(x.n());
    CompensatedSum acc;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                for (Eigen::Index l = 0; l < n; ++l) {
                    if (l == i || l == j || l == k) continue;
                    const double inner = (data.row(i) - data.row(k)).dot(data.row(j) - data.row(l));
                    acc += inner * inner;
                }
            }
        }
    }
    const double nd = static_cast<double>(n);
    return acc.value() / (4.0 * nd * (nd - 1.0) * (nd - 2.0) * (nd - 3.0));
}

double trace_sq_hat_fast(const Sample& x) {
    require_rows(x, 4, "trace estimator");
    const Matrix& data = x.data();
    const Matrix dev = data.rowwise() - column_means(data).transpose();
    if (x.d() >= x.n()) {
        return trace_sq_hat_fast_gram(dev * dev.transpose());
    }
    // Work in coordinate space: sum_{a,b} <x_a,x_b>^2 = ||X^T X||_F^2.
    const auto d = static_cast<Eigen::Index>(x.d());
    Matrix scatter = Matrix::Zero(d, d);
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(dev.transpose());
    scatter = scatter.selfadjointView<Eigen::Lower>();
    const Vector diag = dev.rowwise().squaredNorm();
    const Vector total = column_sums(dev);
    const Vector row_sums = dev * total;
    return trace_sq_from_aggregates(frobenius_sq(scatter), diag, row_sums);
}

double trace_sq_hat_from_centered_gram(const Matrix& centered) {
    if (centered.rows() != centered.cols()) throw std::invalid_argument("Gram matrix must be square");
    if (centered.rows() < 4) {
        std::ostringstream msg;
        msg << "trace estimator needs at least 4 observations, got " << centered.rows();
        throw std::invalid_argument(msg.str());
    }
    Vector row_sums(centered.rows());
    for (Eigen::Index a = 0; a < centered.cols(); ++a) row_sums(a) = centered.col(a).sum();
    return trace_sq_from_aggregates(frobenius_sq(centered), centered.diagonal(), row_sums);
}

double trace_sq_hat_fast_gram(const Matrix& kxx) {
    if (kxx.rows() != kxx.cols()) throw std::invalid_argument("Gram matrix must be square");
    if (kxx.rows() < 4) {
        std::ostringstream msg;
        msg << "trace estimator needs at least 4 observations, got " << kxx.rows();
        throw std::invalid_argument(msg.str());
    }
    return trace_sq_hat_from_centered_gram(center_gram(kxx));
}

}  // namespace hdmt
