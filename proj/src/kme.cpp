#include "hdmt/kme.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hdmt/quantiles.hpp"
#include "hdmt/statistics.hpp"
#include "hdmt/testing.hpp"

namespace hdmt {

Kernel::Kernel(Kind kind, std::string name, double gamma, std::optional<double> bound, Evaluator evaluate)
    : kind_(kind), name_(std::move(name)), gamma_(gamma), bound_(bound), evaluate_(std::move(evaluate)) {
    if (bound_ && !(*bound_ > 0.0)) throw std::invalid_argument("kernel bound must be positive");
}

Kernel Kernel::linear(std::optional<double> bound) {
    return Kernel(Kind::Linear, "linear", 0.0, bound, [](const Vector& a, const Vector& b) { return a.dot(b); });
}

Kernel Kernel::rbf(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("RBF gamma must be positive");
    std::ostringstream name;
    name.precision(17);
    name << "rbf:" << gamma;
    return Kernel(Kind::Rbf, name.str(), gamma, 1.0,
                  [gamma](const Vector& a, const Vector& b) { return std::exp(-gamma * (a - b).squaredNorm()); });
}

Kernel Kernel::custom(std::string name, Evaluator evaluate, std::optional<double> bound) {
    if (!evaluate) throw std::invalid_argument("custom kernel needs an evaluator");
    return Kernel(Kind::Custom, std::move(name), 0.0, bound, std::move(evaluate));
}

Kernel Kernel::parse(const std::string& spec) {
    if (spec == "linear") return linear();
    const std::string prefix = "rbf:";
    if (spec.rfind(prefix, 0) == 0) {
        const std::string rest = spec.substr(prefix.size());
        std::size_t used = 0;
        double gamma = 0.0;
        try {
            gamma = std::stod(rest, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != rest.size()) throw std::invalid_argument("invalid RBF bandwidth in '" + spec + "'");
        return rbf(gamma);
    }
    throw std::invalid_argument("unknown kernel '" + spec + "' (expected linear or rbf:GAMMA)");
}

double Kernel::operator()(const Vector& a, const Vector& b) const {
    return evaluate_(a, b);
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const Kernel& k) {
    if (a.cols() != b.cols()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << a.cols() << " vs " << b.cols();
        throw std::invalid_argument(msg.str());
    }
    switch (k.kind()) {
        case Kernel::Kind::Linear:
            return a * b.transpose();
        case Kernel::Kind::Rbf: {
            // Exact squared distances per entry; the expanded form
            // ||a||^2 + ||b||^2 - 2<a,b> would lose the unit diagonal.
            // (a - b)^2 == (b - a)^2 in floating point, so K(a, a) is
            // exactly symmetric.
            Matrix out = Matrix::Zero(a.rows(), b.rows());
            for (Eigen::Index j = 0; j < b.rows(); ++j) {
                auto col = out.col(j).array();
                for (Eigen::Index c = 0; c < a.cols(); ++c) col += (a.col(c).array() - b(j, c)).square();
            }
            out.array() = (-k.gamma() * out.array()).exp();
            return out;
        }
        case Kernel::Kind::Custom:
        default: {
            Matrix out(a.rows(), b.rows());
            for (Eigen::Index i = 0; i < a.rows(); ++i) {
                const Vector ai = a.row(i).transpose();
                for (Eigen::Index j = 0; j < b.rows(); ++j) out(i, j) = k(ai, b.row(j).transpose());
            }
            return out;
        }
    }
}

namespace {

Matrix symmetric_kernel_matrix(const Matrix& a, const Kernel& k) {
    if (k.kind() == Kernel::Kind::Rbf) {
        // Lower triangle only, then mirrored.
        const Eigen::Index n = a.rows();
        Matrix out(n, n);
        for (Eigen::Index j = 0; j < n; ++j) {
            auto col = out.col(j).tail(n - j).array();
            col.setZero();
            for (Eigen::Index c = 0; c < a.cols(); ++c) col += (a.col(c).tail(n - j).array() - a(j, c)).square();
            col = (-k.gamma() * col).exp();
        }
        out.triangularView<Eigen::StrictlyUpper>() = out.transpose();
        return out;
    }
    Matrix out = kernel_matrix(a, a, k);
    if (k.kind() == Kernel::Kind::Custom) out = 0.5 * (out + out.transpose());
    return out;
}

}  // namespace

GramTriple gram(const Sample& x, const Kernel& k) {
    return GramTriple(symmetric_kernel_matrix(x.data(), k));
}

GramTriple gram(const Sample& x, const Sample& y, const Kernel& k) {
    if (x.d() != y.d()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << x.d() << " vs " << y.d();
        throw std::invalid_argument(msg.str());
    }
    return GramTriple(symmetric_kernel_matrix(x.data(), k), symmetric_kernel_matrix(y.data(), k),
                      kernel_matrix(x.data(), y.data(), k));
}

TestConfig kme_config(double eta, double alpha, Mode mode, const Kernel& k, std::optional<double> user_bound) {
    const std::optional<double> bound = user_bound ? user_bound : k.bound();
    if (!bound) {
        throw std::invalid_argument("kernel '" + k.name() +
                                    "' has no finite feature-norm bound; supply one for the bounded setting");
    }
    return TestConfig(eta, alpha, Setting::bounded(*bound), mode, PlugInQuantiles{});
}

TestReport kme_test_from_gram(const TestConfig& cfg, const GramTriple& g) {
    if (!cfg.setting().is_bounded()) {
        throw std::invalid_argument("kernel tests use the bounded setting; Gaussian quantiles do not apply to "
                                    "feature-space data");
    }
    if (cfg.uses_oracle()) {
        throw std::invalid_argument("kernel tests estimate quantiles from the Gram matrices; oracle covariances "
                                    "are not available in feature space");
    }
    if ((cfg.mode() == Mode::TwoSample) != g.two_sample()) {
        throw std::invalid_argument("Gram triple does not match the configured mode");
    }
    std::vector<std::string> warnings;
    const double limit = cfg.setting().bound() * (1.0 + kBoundSlack);
    auto check_diagonal = [&warnings, limit, &cfg](const Matrix& k, const char* label) {
        for (Eigen::Index i = 0; i < k.rows(); ++i) {
            const double norm = std::sqrt(std::max(k(i, i), 0.0));
            if (norm > limit) {
                std::ostringstream msg;
                msg.precision(6);
                msg << label << "row " << i << " norm " << norm << " exceeds L = " << cfg.setting().bound();
                warnings.push_back(msg.str());
            }
        }
    };
    check_diagonal(g.kxx(), "");
    if (g.two_sample()) check_diagonal(*g.kyy(), "Y: ");

    const double u = u_stat_from_gram(g);
    const PlugInEstimates ex = plugin_estimates_from_gram(g.kxx());
    std::optional<PlugInEstimates> ey;
    if (g.two_sample()) ey = plugin_estimates_from_gram(*g.kyy());
    PlugInResult plugin = q_plugin_from_estimates(ex, ey, cfg.setting(), cfg.alpha());

    TestReport report = decide(u, cfg.eta(), plugin.quantiles);
    if (ex.op_norm > 0.0) {
        report.d_e_hat = ex.trace / ex.op_norm;
        report.d_star_hat = ex.trace_sq / (ex.op_norm * ex.op_norm);
    }
    for (auto& w : plugin.warnings) warnings.push_back(std::move(w));
    report.warnings = std::move(warnings);
    return report;
}

TestReport kme_test(const TestConfig& cfg, const Sample& x_raw, const Sample& y_raw, const Kernel& k) {
    if (cfg.mode() != Mode::TwoSample) throw std::invalid_argument("two samples given to a one-sample test");
    return kme_test_from_gram(cfg, gram(x_raw, y_raw, k));
}

TestReport kme_test(const TestConfig& cfg, const Sample& x_raw, const Kernel& k) {
    if (cfg.mode() != Mode::OneSample) throw std::invalid_argument("two-sample test needs a second sample");
    return kme_test_from_gram(cfg, gram(x_raw, k));
}

}  // namespace hdmt
