#include "hdmt/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hdmt {

namespace {

void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols()) {
        std::ostringstream msg;
        msg << what << " must be square, got " << m.rows() << "x" << m.cols();
        throw std::invalid_argument(msg.str());
    }
}

void require_symmetric(const Matrix& m, const char* what) {
    require_square(m, what);
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + " contains non-finite entries");
    }
    const double asym = asymmetry(m);
    if (asym > kSymmetryTolerance) {
        std::ostringstream msg;
        msg << what << " is not symmetric (relative asymmetry " << asym << ")";
        throw std::invalid_argument(msg.str());
    }
}

void require_psd(const Matrix& m, double rel_tol, const char* what) {
    if (m.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    const double top = std::max(ev.maxCoeff(), 0.0);
    if (ev.minCoeff() < -rel_tol * top || (top == 0.0 && ev.minCoeff() < 0.0)) {
        std::ostringstream msg;
        msg << what << " is not positive semidefinite (smallest eigenvalue " << ev.minCoeff()
            << ", largest " << ev.maxCoeff() << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

double asymmetry(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("asymmetry needs a square matrix");
    const double scale = a.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    // Compare tile (I, J) with the transpose of tile (J, I) so both reads stay in cache.
    constexpr Eigen::Index kTile = 64;
    const Eigen::Index n = a.rows();
    double worst = 0.0;
    for (Eigen::Index j0 = 0; j0 < n; j0 += kTile) {
        const Eigen::Index nj = std::min(kTile, n - j0);
        for (Eigen::Index i0 = j0; i0 < n; i0 += kTile) {
            const Eigen::Index ni = std::min(kTile, n - i0);
            const double diff = (a.block(i0, j0, ni, nj) - a.block(j0, i0, nj, ni).transpose()).cwiseAbs().maxCoeff();
            worst = std::max(worst, diff);
        }
    }
    return worst / scale;
}

Sample::Sample(Matrix data) : data_(std::move(data)) {
    if (data_.rows() < 1 || data_.cols() < 1) {
        std::ostringstream msg;
        msg << "sample must have at least one row and one column, got " << data_.rows() << "x"
            << data_.cols();
        throw std::invalid_argument(msg.str());
    }
    for (Eigen::Index i = 0; i < data_.rows(); ++i) {
        for (Eigen::Index j = 0; j < data_.cols(); ++j) {
            if (!std::isfinite(data_(i, j))) {
                std::ostringstream msg;
                msg << "sample entry (" << i << ", " << j << ") is not finite";
                throw std::invalid_argument(msg.str());
            }
        }
    }
}

CovMatrix::CovMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() < 1) throw std::invalid_argument("covariance matrix is empty");
    require_symmetric(entries_, "covariance matrix");
}

CovMatrix CovMatrix::checked(Matrix entries) {
    CovMatrix c(std::move(entries));
    require_psd(c.entries_, kPsdTolerance, "covariance matrix");
    return c;
}

Setting Setting::bounded(double bound) {
    if (!(bound > 0.0) || !std::isfinite(bound)) {
        throw std::invalid_argument("bounded setting requires a finite norm bound L > 0");
    }
    return Setting(Kind::Bounded, bound);
}

TestConfig::TestConfig(double eta, double alpha, Setting setting, Mode mode,
                       QuantileChoice quantiles)
    : eta_(eta), alpha_(alpha), setting_(setting), mode_(mode), quantiles_(std::move(quantiles)) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        throw std::invalid_argument("eta must be a finite nonnegative number");
    }
    if (const auto* oracle = std::get_if<OracleCovariances>(&quantiles_)) {
        if (oracle->sigma_y && oracle->sigma_y->dim() != oracle->sigma_x.dim()) {
            throw std::invalid_argument("oracle covariances have different dimensions");
        }
    }
}

TestConfig TestConfig::with_alpha(double alpha) const {
    return TestConfig(eta_, alpha, setting_, mode_, quantiles_);
}

TestConfig TestConfig::with_eta(double eta) const {
    return TestConfig(eta, alpha_, setting_, mode_, quantiles_);
}

QuantilePair make_quantile_pair(double q1, double q2, QuantileSource source, double u) {
    if (!(q1 >= 0.0) || !(q2 >= 0.0)) throw std::invalid_argument("quantiles must be nonnegative");
    if (!(u > 0.0)) throw std::invalid_argument("deviation level u must be positive");
    return QuantilePair{q1, q2, source, u};
}

GramTriple::GramTriple(Matrix kxx) : kxx_(std::move(kxx)) {
    require_symmetric(kxx_, "K_xx");
}

GramTriple::GramTriple(Matrix kxx, Matrix kyy, Matrix kxy)
    : kxx_(std::move(kxx)), kyy_(std::move(kyy)), kxy_(std::move(kxy)) {
    require_symmetric(kxx_, "K_xx");
    require_symmetric(*kyy_, "K_yy");
    if (kxy_->rows() != kxx_.rows() || kxy_->cols() != kyy_->rows()) {
        std::ostringstream msg;
        msg << "K_xy has shape " << kxy_->rows() << "x" << kxy_->cols() << ", expected "
            << kxx_.rows() << "x" << kyy_->rows();
        throw std::invalid_argument(msg.str());
    }
    if (!kxy_->allFinite()) throw std::invalid_argument("K_xy contains non-finite entries");
}

void GramTriple::check_psd() const {
    require_psd(kxx_, 1e-9, "K_xx");
    if (kyy_) require_psd(*kyy_, 1e-9, "K_yy");
}

std::vector<std::string> validate_sample(const Sample& sample, const Setting& setting) {
    std::vector<std::string> warnings;
    if (!setting.is_bounded()) return warnings;
    const double limit = setting.bound() * (1.0 + kBoundSlack);
    const Matrix& x = sample.data();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double norm = x.row(i).norm();
        if (norm > limit) {
            std::ostringstream msg;
            msg.precision(6);
            msg << "row " << i << " norm " << norm << " exceeds L = " << setting.bound();
            warnings.push_back(msg.str());
        }
    }
    return warnings;
}

std::string to_string(Mode mode) {
    return mode == Mode::OneSample ? "one" : "two";
}

std::string to_string(QuantileSource source) {
    return source == QuantileSource::Oracle ? "oracle" : "plugin";
}

std::string to_string(const Setting& setting) {
    return setting.is_bounded() ? "bounded" : "gaussian";
}

}  // namespace hdmt
