#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hdmt/linalg.hpp"
#include "hdmt/model.hpp"

namespace hdmt {

/// Spectral summary of a population covariance for a sample of size n.
/// Enforces op_norm^2 <= trace_sq <= trace^2 and op_norm <= trace (relative
/// slack 1e-9).
class CovSummary {
public:
    CovSummary(double op_norm, double trace, double trace_sq, std::size_t n);

    static CovSummary of(const CovMatrix& sigma, std::size_t n, const OpNormOptions& opts = {});

    double op_norm() const { return op_norm_; }
    double trace() const { return trace_; }
    double trace_sq() const { return trace_sq_; }
    std::size_t n() const { return n_; }

private:
    double op_norm_;
    double trace_;
    double trace_sq_;
    std::size_t n_;
};

/// Data-driven estimates entering the plug-in quantiles for one sample:
/// ||Sigma_hat||_op, Tr Sigma_hat and the unbiased T_hat for Tr Sigma^2.
struct PlugInEstimates {
    double op_norm = 0.0;
    double trace = 0.0;
    double trace_sq = 0.0;
    std::size_t n = 0;
};

/// Gaussian: -ln(alpha) + ln 8. Bounded: -ln(alpha) + ln 2.
double u_level(double alpha, const Setting& setting);

QuantilePair q_gaussian_oracle(const CovSummary& sx, const std::optional<CovSummary>& sy, double alpha);

QuantilePair q_bounded_oracle(const CovSummary& sx, const std::optional<CovSummary>& sy, double bound,
                              double alpha);

struct PlugInResult {
    QuantilePair quantiles;
    PlugInEstimates x;
    std::optional<PlugInEstimates> y;
    std::vector<std::string> warnings;
};

/// Plug-in estimates from raw data. n < 13 uses the enumeration estimator of
/// Tr Sigma^2, larger samples the fast expansion.
PlugInEstimates plugin_estimates(const Sample& x, const OpNormOptions& opts = {});

/// Plug-in estimates from a Gram matrix K_xx.
PlugInEstimates plugin_estimates_from_gram(const Matrix& kxx, const OpNormOptions& opts = {});

/// Plug-in quantiles: the oracle formulas of the relevant setting with
/// ||Sigma||_op and sqrt(Tr Sigma^2) replaced by their estimates (T_hat is
/// clamped at zero), L-dependent terms kept exact. Adds a warning for every
/// sample that fails the sample-size condition n >= max(d_e_hat, u, u^4).
PlugInResult q_plugin(const Sample& x, const Sample* y, const Setting& setting, double alpha);

PlugInResult q_plugin_from_estimates(const PlugInEstimates& x, const std::optional<PlugInEstimates>& y,
                                     const Setting& setting, double alpha);

struct SampleSizeCheck {
    bool satisfied = true;
    std::string message;
};

/// n >= max(d_e, u, u^4) with unit constant. The message names the binding term.
SampleSizeCheck check_sample_size_condition(double n, double d_e_hat, double u);

}  // namespace hdmt
