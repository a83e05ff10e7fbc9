#include "hdmt/testing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "hdmt/statistics.hpp"

namespace hdmt {

namespace {

void require_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// max(1, min(d_star^(1/4), sqrt(d_star * level) * sigma / eta))
double rate_factor(double d_star, double level, double sigma, double eta) {
    double inner = std::pow(d_star, 0.25);
    if (eta > 0.0) inner = std::min(inner, std::sqrt(d_star * level) * sigma / eta);
    return std::max(1.0, inner);
}

void check_shapes(const TestConfig& cfg, const Sample& x, const Sample* y) {
    if (cfg.mode() == Mode::TwoSample && !y) throw std::invalid_argument("two-sample test needs a second sample");
    if (cfg.mode() == Mode::OneSample && y) throw std::invalid_argument("one-sample test got a second sample");
    if (y && y->d() != x.d()) {
        std::ostringstream msg;
        msg << "dimension mismatch: " << x.d() << " vs " << y->d();
        throw std::invalid_argument(msg.str());
    }
    if (const auto* oracle = std::get_if<OracleCovariances>(&cfg.quantiles())) {
        if (oracle->sigma_x.dim() != x.d()) {
            std::ostringstream msg;
            msg << "oracle covariance is " << oracle->sigma_x.dim() << "-dimensional but data has " << x.d()
                << " columns";
            throw std::invalid_argument(msg.str());
        }
    }
}

std::optional<double> ratio_or_absent(double num, double den) {
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
}

}  // namespace

TestReport decide(double u_stat, double eta, const QuantilePair& q) {
    TestReport report;
    report.u_stat = u_stat;
    report.threshold = 2.0 * eta * q.q1 + 2.0 * q.q2;
    report.reject = u_stat - eta * eta > report.threshold;
    report.q1_used = q.q1;
    report.q2_used = q.q2;
    return report;
}

EffectiveDims effective_dims(const CovSummary& sx, const std::optional<CovSummary>& sy) {
    if (sy) {
        throw std::invalid_argument(
            "two-sample effective dimensions need full covariance matrices (Tr M^2 is not a function of the "
            "separate summaries)");
    }
    if (!(sx.op_norm() > 0.0)) throw std::invalid_argument("effective dimensions undefined for zero covariance");
    EffectiveDims dims;
    dims.d_e = sx.trace() / sx.op_norm();
    dims.d_star = sx.trace_sq() / (sx.op_norm() * sx.op_norm());
    dims.sigma_sq = sx.op_norm() / static_cast<double>(sx.n());
    return dims;
}

EffectiveDims effective_dims(const CovMatrix& sigma, const CovMatrix& s, std::size_t n, std::size_t m,
                             const OpNormOptions& opts) {
    if (sigma.dim() != s.dim()) throw std::invalid_argument("covariance dimensions differ");
    if (n == 0 || m == 0) throw std::invalid_argument("sample sizes must be positive");
    const Matrix combined = sigma.entries() / static_cast<double>(n) + s.entries() / static_cast<double>(m);
    const double top = largest_eigenvalue(combined, opts);
    if (!(top > 0.0)) throw std::invalid_argument("effective dimensions undefined for zero covariance");
    EffectiveDims dims;
    dims.sigma_sq = top;
    dims.d_e = combined.trace() / top;
    dims.d_star = combined.squaredNorm() / (top * top);
    return dims;
}

double separation_guaranteed(const QuantilePair& q, double eta) {
    double second = 2.0 * std::sqrt(q.q2);
    if (eta > 0.0) second = std::min(second, 2.0 * q.q2 / eta);
    return 2.0 * q.q1 + second;
}

double separation_upper(const EffectiveDims& dims, double alpha, double eta, Mode /*mode*/) {
    require_alpha(alpha);
    const double u = -std::log(alpha) + std::log(60.0);
    const double sigma = std::sqrt(dims.sigma_sq);
    return sigma * std::sqrt(u) * rate_factor(dims.d_star, u, sigma, eta);
}

std::optional<double> separation_lower(const EffectiveDims& dims, double alpha, double eta, Mode mode) {
    require_alpha(alpha);
    if (!(dims.d_star >= 3.0)) return std::nullopt;
    const double divisor = mode == Mode::OneSample ? 12.0 : 48.0;
    const double sigma = std::sqrt(dims.sigma_sq);
    return sigma * std::sqrt((1.0 - alpha) / divisor) * rate_factor(dims.d_star, 1.0 - alpha, sigma, eta);
}

SeparationBounds separation_bounds(const CovMatrix& sigma, std::size_t n, double alpha, double eta,
                                   const Setting& setting) {
    const CovSummary summary = CovSummary::of(sigma, n);
    const EffectiveDims dims = effective_dims(summary);
    const QuantilePair q = setting.is_bounded() ? q_bounded_oracle(summary, std::nullopt, setting.bound(), alpha)
                                                : q_gaussian_oracle(summary, std::nullopt, alpha);
    SeparationBounds b;
    b.delta_upper = separation_upper(dims, alpha, eta, Mode::OneSample);
    b.delta_lower = separation_lower(dims, alpha, eta, Mode::OneSample);
    b.delta_guaranteed = separation_guaranteed(q, eta);
    b.sigma = std::sqrt(dims.sigma_sq);
    b.d_star = dims.d_star;
    b.d_e = dims.d_e;
    return b;
}

SeparationBounds separation_bounds(const CovMatrix& sigma, const CovMatrix& s, std::size_t n, std::size_t m,
                                   double alpha, double eta, const Setting& setting) {
    const EffectiveDims dims = effective_dims(sigma, s, n, m);
    const CovSummary sx = CovSummary::of(sigma, n);
    const CovSummary sy = CovSummary::of(s, m);
    const QuantilePair q = setting.is_bounded() ? q_bounded_oracle(sx, sy, setting.bound(), alpha)
                                                : q_gaussian_oracle(sx, sy, alpha);
    SeparationBounds b;
    b.delta_upper = separation_upper(dims, alpha, eta, Mode::TwoSample);
    b.delta_lower = separation_lower(dims, alpha, eta, Mode::TwoSample);
    b.delta_guaranteed = separation_guaranteed(q, eta);
    b.sigma = std::sqrt(dims.sigma_sq);
    b.d_star = dims.d_star;
    b.d_e = dims.d_e;
    return b;
}

PreparedOracle prepare_oracle(const TestConfig& cfg, std::size_t n, std::optional<std::size_t> m) {
    const auto* oracle = std::get_if<OracleCovariances>(&cfg.quantiles());
    if (!oracle) throw std::invalid_argument("configuration does not carry oracle covariances");
    if (cfg.mode() == Mode::TwoSample && !m) throw std::invalid_argument("two-sample oracle needs m");

    PreparedOracle prepared;
    const CovSummary sx = CovSummary::of(oracle->sigma_x, n);
    std::optional<CovSummary> sy;
    if (cfg.mode() == Mode::TwoSample) sy = CovSummary::of(oracle->sigma_y.value_or(oracle->sigma_x), *m);

    prepared.quantiles = cfg.setting().is_bounded() ? q_bounded_oracle(sx, sy, cfg.setting().bound(), cfg.alpha())
                                                    : q_gaussian_oracle(sx, sy, cfg.alpha());
    if (cfg.mode() == Mode::OneSample) {
        if (sx.op_norm() > 0.0) prepared.dims = effective_dims(sx);
    } else {
        const CovMatrix& s = oracle->sigma_y ? *oracle->sigma_y : oracle->sigma_x;
        if (sx.op_norm() > 0.0 || sy->op_norm() > 0.0) prepared.dims = effective_dims(oracle->sigma_x, s, n, *m);
    }
    return prepared;
}

TestReport run_test(const TestConfig& cfg, const PreparedOracle& oracle, const Sample& x, const Sample* y) {
    check_shapes(cfg, x, y);
    std::vector<std::string> warnings = validate_sample(x, cfg.setting());
    if (y) {
        for (auto& w : validate_sample(*y, cfg.setting())) warnings.push_back("Y: " + w);
    }
    const double u = y ? u_stat_two_sample(x, *y) : u_stat_one_sample(x);
    TestReport report = decide(u, cfg.eta(), oracle.quantiles);
    if (oracle.dims) {
        report.d_e_hat = oracle.dims->d_e;
        report.d_star_hat = oracle.dims->d_star;
    }
    report.warnings = std::move(warnings);
    return report;
}

namespace {

TestReport run_test_impl(const TestConfig& cfg, const Sample& x, const Sample* y) {
    check_shapes(cfg, x, y);
    if (cfg.uses_oracle()) {
        const PreparedOracle prepared = prepare_oracle(cfg, x.n(), y ? std::optional(y->n()) : std::nullopt);
        return run_test(cfg, prepared, x, y);
    }
    std::vector<std::string> warnings = validate_sample(x, cfg.setting());
    if (y) {
        for (auto& w : validate_sample(*y, cfg.setting())) warnings.push_back("Y: " + w);
    }
    const double u = y ? u_stat_two_sample(x, *y) : u_stat_one_sample(x);
    PlugInResult plugin = q_plugin(x, y, cfg.setting(), cfg.alpha());
    TestReport report = decide(u, cfg.eta(), plugin.quantiles);
    report.d_e_hat = ratio_or_absent(plugin.x.trace, plugin.x.op_norm);
    report.d_star_hat = ratio_or_absent(plugin.x.trace_sq, plugin.x.op_norm * plugin.x.op_norm);
    for (auto& w : plugin.warnings) warnings.push_back(std::move(w));
    report.warnings = std::move(warnings);
    return report;
}

}  // namespace

TestReport run_test(const TestConfig& cfg, const Sample& x) {
    return run_test_impl(cfg, x, nullptr);
}

TestReport run_test(const TestConfig& cfg, const Sample& x, const Sample& y) {
    return run_test_impl(cfg, x, &y);
}

std::optional<double> smallest_rejecting_alpha(const TestConfig& cfg, const Sample& x, const Sample* y,
                                               std::span<const double> alphas) {
    std::vector<double> sorted(alphas.begin(), alphas.end());
    std::sort(sorted.begin(), sorted.end());
    for (double alpha : sorted) {
        const TestConfig at_level = cfg.with_alpha(alpha);
        const TestReport report = y ? run_test(at_level, x, *y) : run_test(at_level, x);
        if (report.reject) return alpha;
    }
    return std::nullopt;
}

}  // namespace hdmt
