#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

#include "hdmt/model.hpp"

namespace hdmt {

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double value) {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double value) {
        add(value);
        return *this;
    }

    double value() const { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

struct OpNormOptions {
    double tol = 1e-10;
    std::size_t max_iter = 10000;

    /// Throws std::invalid_argument unless tol > 0 and max_iter >= 1.
    void validate() const;
};

/// Raised when the eigenvalue iteration exhausts its budget. Carries the best
/// estimate reached.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double best_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate) {}

    double best_estimate() const { return best_estimate_; }

private:
    double best_estimate_;
};

/// y = A x for an implicit symmetric operator of dimension `dim`.
using SymmetricOperator = std::function<void(const Vector& x, Vector& y)>;

/// Largest eigenvalue of a symmetric positive semidefinite operator.
///
/// Lanczos iteration with full reorthogonalization, started from the
/// normalized all-ones vector (or the first canonical basis vector not in
/// the null space). The largest Ritz value is located by Sturm-sequence
/// bisection on the tridiagonal matrix. Iteration stops once the Ritz value
/// changes by less than `opts.tol` (relative) on two consecutive steps, or
/// when the Krylov space fills the whole space. Result is clamped at zero.
double largest_eigenvalue(std::size_t dim, const SymmetricOperator& apply,
                          const OpNormOptions& opts = {});

double largest_eigenvalue(const Matrix& a, const OpNormOptions& opts = {});

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `diag` and off-diagonal `off` (off.size() == diag.size() - 1).
double tridiagonal_max_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off);

}  // namespace hdmt
