#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "hdmt/model.hpp"
#include "hdmt/quantiles.hpp"

namespace hdmt {

struct EffectiveDims {
    double d_e = 0.0;
    double d_star = 0.0;
    double sigma_sq = 0.0;

    friend bool operator==(const EffectiveDims&, const EffectiveDims&) = default;
};

/// reject iff u_stat - eta^2 > 2 eta q1 + 2 q2; equality accepts.
TestReport decide(double u_stat, double eta, const QuantilePair& q);

/// One-sample effective dimensions: d_e = Tr/op, d_star = Tr^2/op^2,
/// sigma^2 = op/n. Passing a second summary throws: the two-sample quantities
/// need full matrices (see the CovMatrix overload).
EffectiveDims effective_dims(const CovSummary& sx, const std::optional<CovSummary>& sy = std::nullopt);

/// Two-sample effective dimensions of M = Sigma/n + S/m.
EffectiveDims effective_dims(const CovMatrix& sigma, const CovMatrix& s, std::size_t n, std::size_t m,
                             const OpNormOptions& opts = {});

/// 2 q1 + min(2 sqrt(q2), 2 q2 / eta); the second branch is ignored at eta = 0.
double separation_guaranteed(const QuantilePair& q, double eta);

/// sigma sqrt(u) max(1, min(d_star^(1/4), sqrt(d_star u) sigma / eta)) with
/// u = -ln(alpha) + ln 60. Holds up to an unspecified universal constant,
/// reported here as 1. Identical form in both modes.
double separation_upper(const EffectiveDims& dims, double alpha, double eta, Mode mode);

/// sigma sqrt((1-alpha)/c) max(1, min(d_star^(1/4), sqrt(d_star (1-alpha)) sigma / eta))
/// with c = 12 (one-sample) or 48 (two-sample). Absent unless d_star >= 3.
std::optional<double> separation_lower(const EffectiveDims& dims, double alpha, double eta, Mode mode);

/// All separation quantities for known covariances. The guaranteed
/// separation uses the oracle quantiles of `setting`.
SeparationBounds separation_bounds(const CovMatrix& sigma, std::size_t n, double alpha, double eta,
                                   const Setting& setting = Setting::gaussian());

SeparationBounds separation_bounds(const CovMatrix& sigma, const CovMatrix& s, std::size_t n, std::size_t m,
                                   double alpha, double eta, const Setting& setting = Setting::gaussian());

/// Oracle quantities that only depend on the configuration and sample sizes.
struct PreparedOracle {
    QuantilePair quantiles;
    std::optional<EffectiveDims> dims;
};

/// Throws unless the configuration carries oracle covariances.
PreparedOracle prepare_oracle(const TestConfig& cfg, std::size_t n, std::optional<std::size_t> m);

TestReport run_test(const TestConfig& cfg, const Sample& x);
TestReport run_test(const TestConfig& cfg, const Sample& x, const Sample& y);

/// Same as run_test with oracle quantities computed beforehand.
TestReport run_test(const TestConfig& cfg, const PreparedOracle& oracle, const Sample& x, const Sample* y);

/// Smallest level on `alphas` at which the test rejects, quantiles recomputed
/// per level. Absent if no level rejects.
std::optional<double> smallest_rejecting_alpha(const TestConfig& cfg, const Sample& x, const Sample* y,
                                               std::span<const double> alphas);

}  // namespace hdmt
