#include "hdmt/linalg.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>
#include <vector>

namespace hdmt {

void OpNormOptions::validate() const {
    if (!(tol > 0.0)) throw std::invalid_argument("op-norm tolerance must be positive");
    if (max_iter < 1) throw std::invalid_argument("op-norm max_iter must be at least 1");
}

namespace {

// Number of eigenvalues of the tridiagonal matrix strictly below x.
std::size_t count_below(const std::vector<double>& diag, const std::vector<double>& off, double x) {
    constexpr double tiny = std::numeric_limits<double>::min();
    std::size_t count = 0;
    double pivot = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        const double coupling = i == 0 ? 0.0 : off[i - 1] * off[i - 1];
        pivot = diag[i] - x - (i == 0 ? 0.0 : coupling / pivot);
        if (pivot == 0.0) pivot = -tiny;
        if (pivot < 0.0) ++count;
    }
    return count;
}

}  // namespace

double tridiagonal_max_eigenvalue(const std::vector<double>& diag, const std::vector<double>& off) {
    const std::size_t k = diag.size();
    if (k == 0) return 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < k ? std::abs(off[i]) : 0.0);
        lo = std::min(lo, diag[i] - radius);
        hi = std::max(hi, diag[i] + radius);
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));
    if (scale == 0.0) return 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_below(diag, off, mid) == k) {
            hi = mid;
        } else {
            lo = mid;
        }
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) break;
    }
    return 0.5 * (lo + hi);
}

double largest_eigenvalue(std::size_t dim, const SymmetricOperator& apply, const OpNormOptions& opts) {
    opts.validate();
    if (dim == 0) return 0.0;
    const auto n = static_cast<Eigen::Index>(dim);

    Vector q(n);
    Vector w(n);

    // Start vector: normalized ones, else the first basis vector outside the null space.
    bool found = false;
    q.setConstant(1.0 / std::sqrt(static_cast<double>(dim)));
    apply(q, w);
    found = w.squaredNorm() > 0.0;
    for (Eigen::Index i = 0; i < n && !found; ++i) {
        q.setZero();
        q(i) = 1.0;
        apply(q, w);
        found = w.squaredNorm() > 0.0;
    }
    if (!found) return 0.0;
    bool have_product = true;

    std::vector<Vector> basis;
    std::vector<double> diag;
    std::vector<double> off;
    double theta = 0.0;
    int stable_steps = 0;
    bool restarted = false;
    double norm_scale = 0.0;

    auto orthogonalize = [&basis](Vector& v) {
        for (int pass = 0; pass < 2; ++pass) {
            for (const Vector& b : basis) v.noalias() -= b.dot(v) * b;
        }
    };

    for (std::size_t step = 0; step < opts.max_iter; ++step) {
        if (!have_product) apply(q, w);
        have_product = false;
        basis.push_back(q);
        const double a = q.dot(w);
        diag.push_back(a);
        orthogonalize(w);
        const double b = w.norm();
        norm_scale = std::max({norm_scale, std::abs(a), b});

        const double previous = theta;
        theta = tridiagonal_max_eigenvalue(diag, off);
        if (basis.size() == dim) return std::max(theta, 0.0);
        if (step > 0 && std::abs(theta - previous) <= opts.tol * std::abs(theta)) {
            if (++stable_steps >= 2) return std::max(theta, 0.0);
        } else {
            stable_steps = 0;
        }

        if (b > 1e-12 * norm_scale) {
            off.push_back(b);
            q = w / b;
            continue;
        }

        // Invariant subspace. Continue once from a fixed generic vector so that
        // eigenvectors orthogonal to the start vector are still reached.
        if (restarted) return std::max(theta, 0.0);
        restarted = true;
        std::uint64_t state = 0x9E3779B97F4A7C15ULL;
        for (Eigen::Index i = 0; i < n; ++i) {
            state = state * 6364136223846793005ULL + 1442695040888963407ULL;
            q(i) = static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
        }
        orthogonalize(q);
        const double norm = q.norm();
        if (norm < 1e-8) return std::max(theta, 0.0);
        q /= norm;
        off.push_back(0.0);
        stable_steps = 0;
    }
    std::ostringstream msg;
    msg << "largest eigenvalue did not converge after " << opts.max_iter
        << " iterations (best estimate " << theta << ")";
    throw ConvergenceError(msg.str(), std::max(theta, 0.0));
}

double largest_eigenvalue(const Matrix& a, const OpNormOptions& opts) {
    if (a.rows() != a.cols()) throw std::invalid_argument("largest_eigenvalue needs a square matrix");
    return largest_eigenvalue(
        static_cast<std::size_t>(a.rows()),
        [&a](const Vector& x, Vector& y) { y.noalias() = a.selfadjointView<Eigen::Lower>() * x; }, opts);
}

}  // namespace hdmt
