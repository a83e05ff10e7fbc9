#include "hdmt/quantiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hdmt/statistics.hpp"

namespace hdmt {

namespace {

constexpr double kSummarySlack = 1e-9;

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// Variance and Frobenius parts shared by the Gaussian and bounded formulas:
//   var  = ||Sigma||/n + ||S||/m
//   frob = sqrt(Tr Sigma^2)/n + sqrt(Tr S^2)/m
struct Terms {
    double var = 0.0;
    double frob = 0.0;
    double min_size = 0.0;
};

Terms combine(double op_x, double tsq_x, std::size_t n, std::optional<double> op_y,
              std::optional<double> tsq_y, std::optional<std::size_t> m) {
    if (n == 0) throw std::invalid_argument("sample size must be positive");
    Terms t;
    const double nd = static_cast<double>(n);
    t.var = op_x / nd;
    t.frob = std::sqrt(std::max(tsq_x, 0.0)) / nd;
    t.min_size = nd;
    if (m) {
        if (*m == 0) throw std::invalid_argument("sample size must be positive");
        const double md = static_cast<double>(*m);
        t.var += *op_y / md;
        t.frob += std::sqrt(std::max(*tsq_y, 0.0)) / md;
        t.min_size = std::min(nd, md);
    }
    return t;
}

QuantilePair gaussian_pair(const Terms& t, double alpha, QuantileSource source) {
    const double u = u_level(alpha, Setting::gaussian());
    return make_quantile_pair(std::sqrt(2.0 * t.var * u), 32.0 * t.frob * u, source, u);
}

QuantilePair bounded_pair(const Terms& t, double bound, double alpha, QuantileSource source) {
    if (!(bound > 0.0)) throw std::invalid_argument("norm bound L must be positive");
    const Setting setting = Setting::bounded(bound);
    const double u = u_level(alpha, setting);
    const double q1 = 2.0 * std::sqrt(2.0 * t.var * u) + 4.0 * bound * u / (3.0 * t.min_size);
    const double q2 = 614.0 * t.frob * u +
                      3708.0 * bound * bound * u * u / (t.min_size * t.min_size);
    return make_quantile_pair(q1, q2, source, u);
}

QuantilePair pair_for(const Terms& t, const Setting& setting, double alpha, QuantileSource source) {
    return setting.is_bounded() ? bounded_pair(t, setting.bound(), alpha, source)
                                : gaussian_pair(t, alpha, source);
}

std::optional<std::string> size_warning(const PlugInEstimates& e, double u, const char* label) {
    const double d_e = e.op_norm > 0.0 ? e.trace / e.op_norm : 0.0;
    const SampleSizeCheck check = check_sample_size_condition(static_cast<double>(e.n), d_e, u);
    if (check.satisfied) return std::nullopt;
    return std::string("sample-size condition fails for ") + label + ": " + check.message;
}

}  // namespace

CovSummary::CovSummary(double op_norm, double trace, double trace_sq, std::size_t n)
    : op_norm_(op_norm), trace_(trace), trace_sq_(trace_sq), n_(n) {
    if (!(op_norm >= 0.0) || !(trace >= 0.0) || !(trace_sq >= 0.0)) {
        throw std::invalid_argument("covariance summary entries must be nonnegative");
    }
    if (n < 1) throw std::invalid_argument("covariance summary needs n >= 1");
    const double slack = 1.0 + kSummarySlack;
    if (op_norm > trace * slack || op_norm * op_norm > trace_sq * slack ||
        trace_sq > trace * trace * slack) {
        std::ostringstream msg;
        msg << "inconsistent covariance summary: op_norm " << op_norm << ", trace " << trace
            << ", trace_sq " << trace_sq;
        throw std::invalid_argument(msg.str());
    }
}

CovSummary CovSummary::of(const CovMatrix& sigma, std::size_t n, const OpNormOptions& opts) {
    const Matrix& e = sigma.entries();
    return CovSummary(hdmt::op_norm(sigma, opts), std::max(e.trace(), 0.0), e.squaredNorm(), n);
}

double u_level(double alpha, const Setting& setting) {
    require_alpha(alpha);
    return -std::log(alpha) + std::log(setting.is_bounded() ? 2.0 : 8.0);
}

QuantilePair q_gaussian_oracle(const CovSummary& sx, const std::optional<CovSummary>& sy, double alpha) {
    require_alpha(alpha);
    const Terms t = sy ? combine(sx.op_norm(), sx.trace_sq(), sx.n(), sy->op_norm(), sy->trace_sq(), sy->n())
                       : combine(sx.op_norm(), sx.trace_sq(), sx.n(), {}, {}, {});
    return gaussian_pair(t, alpha, QuantileSource::Oracle);
}

QuantilePair q_bounded_oracle(const CovSummary& sx, const std::optional<CovSummary>& sy, double bound,
                              double alpha) {
    require_alpha(alpha);
    const Terms t = sy ? combine(sx.op_norm(), sx.trace_sq(), sx.n(), sy->op_norm(), sy->trace_sq(), sy->n())
                       : combine(sx.op_norm(), sx.trace_sq(), sx.n(), {}, {}, {});
    return bounded_pair(t, bound, alpha, QuantileSource::Oracle);
}

PlugInEstimates plugin_estimates(const Sample& x, const OpNormOptions& opts) {
    if (x.n() < 4) {
        std::ostringstream msg;
        msg << "plug-in quantiles need at least 4 observations, got " << x.n();
        throw std::invalid_argument(msg.str());
    }
    const CovMatrix sigma_hat = empirical_covariance(x);
    PlugInEstimates e;
    e.op_norm = op_norm(sigma_hat, opts);
    e.trace = std::max(sigma_hat.entries().trace(), 0.0);
    e.trace_sq = x.n() <= 12 ? trace_sq_hat_naive(x) : trace_sq_hat_fast(x);
    e.n = x.n();
    return e;
}

PlugInEstimates plugin_estimates_from_gram(const Matrix& kxx, const OpNormOptions& opts) {
    if (kxx.rows() < 4) {
        std::ostringstream msg;
        msg << "plug-in quantiles need at least 4 observations, got " << kxx.rows();
        throw std::invalid_argument(msg.str());
    }
    PlugInEstimates e;
    const double n = static_cast<double>(kxx.rows());
    const Matrix centered = center_gram(kxx);
    e.op_norm = op_norm_from_centered_gram(centered, opts);
    e.trace = std::max(centered.trace() / n, 0.0);
    e.trace_sq = trace_sq_hat_from_centered_gram(centered);
    e.n = static_cast<std::size_t>(kxx.rows());
    return e;
}

PlugInResult q_plugin_from_estimates(const PlugInEstimates& x, const std::optional<PlugInEstimates>& y,
                                     const Setting& setting, double alpha) {
    require_alpha(alpha);
    const Terms t = y ? combine(x.op_norm, x.trace_sq, x.n, y->op_norm, y->trace_sq, y->n)
                      : combine(x.op_norm, x.trace_sq, x.n, {}, {}, {});
    PlugInResult result{pair_for(t, setting, alpha, QuantileSource::PlugIn), x, y, {}};
    const double u = result.quantiles.u;
    if (auto w = size_warning(x, u, "X")) result.warnings.push_back(*w);
    if (y) {
        if (auto w = size_warning(*y, u, "Y")) result.warnings.push_back(*w);
    }
    return result;
}

PlugInResult q_plugin(const Sample& x, const Sample* y, const Setting& setting, double alpha) {
    require_alpha(alpha);
    const PlugInEstimates ex = plugin_estimates(x);
    std::optional<PlugInEstimates> ey;
    if (y) {
        if (y->d() != x.d()) throw std::invalid_argument("dimension mismatch between samples");
        ey = plugin_estimates(*y);
    }
    return q_plugin_from_estimates(ex, ey, setting, alpha);
}

SampleSizeCheck check_sample_size_condition(double n, double d_e_hat, double u) {
    const double u4 = u * u * u * u;
    const char* binding = "d_e";
    double need = d_e_hat;
    if (u > need) {
        need = u;
        binding = "u";
    }
    if (u4 > need) {
        need = u4;
        binding = "u^4";
    }
    SampleSizeCheck check;
    check.satisfied = n >= need;
    std::ostringstream msg;
    msg.precision(6);
    msg << "n = " << n << (check.satisfied ? " >= " : " < ") << binding << " = " << need << " ("
        << binding << " binds)";
    check.message = msg.str();
    return check;
}

}  // namespace hdmt
