#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "hdmt/kme.hpp"
#include "hdmt/model.hpp"
#include "hdmt/rng.hpp"

namespace hdmt {

struct GaussianSampler {};

/// Rows are mean + radius * (uniform direction); the scenario means act as
/// the sphere centers. `bound` is the norm bound L the draws must respect.
struct SphereSampler {
    double radius = 0.0;
    double bound = 1.0;
};

using Sampler = std::variant<GaussianSampler, SphereSampler>;

/// Data-generating process for one Monte Carlo replication.
///
/// Gaussian rows are mean + F g with g standard normal, so the covariance is
/// F F^T. Sphere rows ignore the factors and have covariance (r^2 / d) I.
/// Absent Y fields default to the X ones (except the mean, which defaults to 0).
struct Scenario {
    Mode mode = Mode::OneSample;
    Vector mean_x;
    std::optional<Vector> mean_y;
    Matrix cov_factor_x;
    std::optional<Matrix> cov_factor_y;
    Sampler sampler = GaussianSampler{};
    std::size_t n = 0;
    std::size_t m = 0;

    /// Isotropic Gaussian scenario with covariance scale * I_d and zero means.
    static Scenario isotropic(Mode mode, std::size_t d, std::size_t n, std::size_t m = 0, double scale = 1.0);

    /// Throws std::invalid_argument on inconsistent shapes, on a missing m in
    /// two-sample mode, or on a sphere sampler violating ||center|| + r <= L.
    void validate() const;

    std::size_t dim() const { return static_cast<std::size_t>(mean_x.size()); }
    Vector effective_mean_y() const;
    /// ||mu - nu|| (one-sample: ||mu||).
    double mean_distance() const;
    CovMatrix covariance_x() const;
    CovMatrix covariance_y() const;

    /// Copy with the X mean replaced by `mean`.
    Scenario with_mean_x(Vector mean) const;
};

struct McResult {
    std::size_t trials = 0;
    std::optional<double> type1_hat;
    std::optional<double> type2_hat;
    double ci_halfwidth = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const McResult&, const McResult&) = default;
};

struct McOptions {
    /// Worker threads; 0 picks the hardware concurrency.
    std::size_t threads = 0;
};

Sample sample_gaussian(const Vector& mean, const Matrix& cov_factor, std::size_t n, RngStream& rng);

Sample sample_sphere(const Vector& center, double radius, std::size_t n, RngStream& rng);

/// Draws (X, Y) for one replication; Y is absent in one-sample mode.
std::pair<Sample, std::optional<Sample>> draw(const Scenario& sc, RngStream& rng);

/// Runs `trials` replications of `trial(rng, index)` with stream (seed, index)
/// and returns how many returned true. Results are reduced in index order, so
/// the count does not depend on the thread schedule.
std::size_t count_events(std::size_t trials, std::uint64_t seed, const McOptions& opts,
                         const std::function<bool(RngStream&, std::size_t)>& trial);

/// Half-width of 3 standard errors for a frequency p over `trials`.
double ci_halfwidth(double p, std::size_t trials);

/// Rejection (null) or acceptance (alternative) frequency of the test over
/// `trials` replications. The scenario is null when ||mu - nu|| <= eta.
McResult mc_error_rates(const TestConfig& cfg, const Scenario& sc, std::size_t trials, std::uint64_t seed,
                        const McOptions& opts = {});

/// Same for the kernel test on raw records. Whether the scenario is null in
/// feature space is supplied by the caller.
McResult mc_kme_error_rates(const TestConfig& cfg, const Scenario& sc, const Kernel& k, bool null_hypothesis,
                            std::size_t trials, std::uint64_t seed, const McOptions& opts = {});

/// Top eigenvector of the covariance governing the test (Sigma, or
/// Sigma / n + S / m for two samples), sign-normalized; e1 when the
/// covariance is a multiple of the identity.
Vector signal_direction(const Scenario& sc);

/// Rejection frequency as a function of the signal size delta; the X mean is
/// placed at (eta + delta) * v with v the top eigenvector of the relevant
/// covariance. Common random numbers are used across calls with one seed.
class PowerCurve {
public:
    PowerCurve(TestConfig cfg, Scenario sc, std::size_t trials, std::uint64_t seed, McOptions opts = {});

    double operator()(double delta) const;
    const Vector& direction() const { return direction_; }

private:
    TestConfig cfg_;
    Scenario sc_;
    std::size_t trials_;
    std::uint64_t seed_;
    McOptions opts_;
    Vector direction_;
};

/// Bisection for the smallest delta whose rejection frequency reaches
/// `power_target`, starting from [0, 10 * separation_upper]. Stops when the
/// bracket is narrower than tol relative to its upper end. Throws
/// std::runtime_error when the target is not reached at the top of the bracket.
double empirical_separation(const TestConfig& cfg, const Scenario& sc_template, std::size_t trials,
                            double power_target, double tol, std::uint64_t seed, const McOptions& opts = {});

/// Empirical separation under the two error conventions side by side.
struct SeparationConventions {
    /// Power reaches 1 - 3 alpha.
    double per_error = 0.0;
    /// Type I + type II <= alpha, with the type I rate measured at the null.
    std::optional<double> summed;
    double type1_hat = 0.0;
};

SeparationConventions separation_conventions(const TestConfig& cfg, const Scenario& sc_template, std::size_t trials,
                                             double tol, std::uint64_t seed, const McOptions& opts = {});

enum class CoverageEstimator { OpNormSqrt, TraceSqSqrt };

std::string to_string(CoverageEstimator e);
CoverageEstimator parse_coverage_estimator(const std::string& name);

struct CoverageResult {
    double coverage = 0.0;
    /// Probability the concentration bound is stated to hold with, clamped to [0, 1].
    double stated = 0.0;
    /// 3 standard errors at the stated probability.
    double ci_halfwidth = 0.0;
    std::size_t trials = 0;

    bool passes() const { return coverage >= stated - ci_halfwidth; }
};

/// Deviation bound at level u for the estimator and the scenario's sampler
/// (Gaussian or sphere), one-sample X only.
double coverage_bound(CoverageEstimator e, const Scenario& sc, double u);
double coverage_stated_probability(CoverageEstimator e, const Scenario& sc, double u);

/// Fraction of trials in which |sqrt(estimate) - sqrt(truth)| stays within
/// the concentration bound. Requires trials >= 100.
CoverageResult coverage_check(CoverageEstimator e, const Scenario& sc, double u, std::size_t trials,
                              std::uint64_t seed, const McOptions& opts = {});

}  // namespace hdmt
