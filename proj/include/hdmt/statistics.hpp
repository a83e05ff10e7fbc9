#pragma once

#include "hdmt/linalg.hpp"
#include "hdmt/model.hpp"

namespace hdmt {

/// Unbiased estimate of ||mu - nu||^2 from two independent samples:
///   1/(n(n-1)) sum_{i!=j} <X_i,X_j> + 1/(m(m-1)) sum_{i!=j} <Y_i,Y_j>
///     - 2/(nm) sum_{i,j} <X_i,Y_j>.
/// Computed in O((n+m) d) on data shifted by the pooled mean (the statistic is
/// translation invariant). May be negative.
double u_stat_two_sample(const Sample& x, const Sample& y);

/// Unbiased estimate of ||mu||^2: 1/(n(n-1)) sum_{i!=j} <X_i,X_j>.
double u_stat_one_sample(const Sample& x);

/// Same statistics with inner products replaced by Gram entries. For a
/// one-sample Gram triple only K_xx is used.
double u_stat_from_gram(const GramTriple& g);

/// (1/n) sum_i (X_i - mean)(X_i - mean)^T.
CovMatrix empirical_covariance(const Sample& x);

/// Largest eigenvalue of a covariance matrix.
double op_norm(const CovMatrix& c, const OpNormOptions& opts = {});

/// Operator norm of the empirical covariance in feature space:
/// (1/n) lambda_max(H K H) with H the centering projector.
double op_norm_from_gram(const Matrix& kxx, const OpNormOptions& opts = {});

/// Unbiased estimator of Tr Sigma^2 evaluated by enumerating every ordered
/// quadruple of distinct indices. O(n^4 d); kept as the reference
/// implementation for the fast paths.
double trace_sq_hat_naive(const Sample& x);

/// Same estimator in O(n d min(n, d)) from raw data.
double trace_sq_hat_fast(const Sample& x);

/// Same estimator in O(n^2) from a Gram matrix K_xx.
double trace_sq_hat_fast_gram(const Matrix& kxx);

/// Double-centered Gram matrix H K H, exactly symmetric.
Matrix center_gram(const Matrix& k);

/// Variants taking H K H directly, so one centering serves several estimates.
double op_norm_from_centered_gram(const Matrix& centered, const OpNormOptions& opts = {});
double trace_sq_hat_from_centered_gram(const Matrix& centered);

}  // namespace hdmt
