#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "hdmt/simulate.hpp"
#include "hdmt/statistics.hpp"
#include "hdmt/testing.hpp"

using namespace hdmt;

namespace {

TestConfig oracle_config(const Scenario& sc, double eta = 0.0) {
    return TestConfig(eta, 0.05, Setting::gaussian(), sc.mode, OracleCovariances{sc.covariance_x(), {}});
}

}  // namespace

TEST(SampleGaussian, ZeroFactorRepeatsMean) {
    RngStream rng(51, 0);
    Vector mean(3);
    mean << 1, -2, 0.5;
    const Sample x = sample_gaussian(mean, Matrix::Zero(3, 3), 5, rng);
    for (Eigen::Index i = 0; i < 5; ++i) EXPECT_EQ(x.data().row(i), mean.transpose());
}

TEST(SampleGaussian, IdenticalSeedsAreBitIdentical) {
    RngStream a(52, 1), b(52, 1);
    Matrix f(2, 2);
    f << 1, 0, 0.5, 2;
    EXPECT_EQ(sample_gaussian(Vector::Zero(2), f, 50, a).data(), sample_gaussian(Vector::Zero(2), f, 50, b).data());
}

TEST(SampleGaussian, CovarianceMatchesFactor) {
    RngStream rng(53, 0);
    Matrix f(3, 3);
    f << 1, 0, 0, 0.5, 1, 0, -0.3, 0.2, 0.7;
    const Sample x = sample_gaussian(Vector::Zero(3), f, 50000, rng);
    const Matrix gap = empirical_covariance(x).entries() - f * f.transpose();
    EXPECT_LT(gap.cwiseAbs().maxCoeff(), 0.05);
}

TEST(SampleSphere, RadiusZeroAndNorms) {
    RngStream rng(54, 0);
    Vector c(2);
    c << 0.3, 0.4;
    const Sample point = sample_sphere(c, 0.0, 4, rng);
    for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(point.data().row(i), c.transpose());
    const Sample s = sample_sphere(Vector::Zero(5), 2.0, 100, rng);
    for (Eigen::Index i = 0; i < 100; ++i) EXPECT_NEAR(s.data().row(i).norm(), 2.0, 1e-12);
}

TEST(SampleSphere, CovarianceIsIsotropic) {
    RngStream rng(55, 0);
    const Sample s = sample_sphere(Vector::Zero(4), 1.0, 50000, rng);
    const Matrix gap = empirical_covariance(s).entries() - 0.25 * Matrix::Identity(4, 4);
    EXPECT_LT(gap.cwiseAbs().maxCoeff(), 0.05);
}

TEST(ScenarioTest, ValidateCatchesInconsistencies) {
    Scenario sc = Scenario::isotropic(Mode::TwoSample, 3, 10);
    EXPECT_EQ(sc.m, 10u);
    sc.m = 0;
    EXPECT_THROW(sc.validate(), std::invalid_argument);
    sc.m = 10;
    EXPECT_NO_THROW(sc.validate());
    sc.mean_y = Vector::Zero(2);
    EXPECT_THROW(sc.validate(), std::invalid_argument);

    Scenario sphere = Scenario::isotropic(Mode::OneSample, 3, 10);
    sphere.sampler = SphereSampler{1.0, 1.0};
    sphere.mean_x(0) = 0.5;
    EXPECT_THROW(sphere.validate(), std::invalid_argument);
    EXPECT_THROW(Scenario::isotropic(Mode::OneSample, 0, 10), std::invalid_argument);
}

TEST(ScenarioTest, CovariancesAndDistance) {
    Scenario sc = Scenario::isotropic(Mode::TwoSample, 4, 10, 12, 2.0);
    EXPECT_TRUE(sc.covariance_x().entries().isApprox(2.0 * Matrix::Identity(4, 4)));
    sc.mean_x(1) = 3.0;
    sc.mean_y = Vector::Zero(4);
    sc.mean_y->coeffRef(1) = -1.0;
    EXPECT_DOUBLE_EQ(sc.mean_distance(), 4.0);
    sc.sampler = SphereSampler{0.5, 10.0};
    EXPECT_TRUE(sc.covariance_y().entries().isApprox(0.0625 * Matrix::Identity(4, 4)));
}

TEST(CountEvents, ZeroTrialsIsAnError) {
    EXPECT_THROW(count_events(0, 1, {}, [](RngStream&, std::size_t) { return true; }), std::invalid_argument);
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 3, 20);
    EXPECT_THROW(mc_error_rates(oracle_config(sc), sc, 0, 1), std::invalid_argument);
}

TEST(CountEvents, IndependentOfThreadCount) {
    const auto trial = [](RngStream& rng, std::size_t) { return rng.uniform() < 0.3; };
    const std::size_t one = count_events(1000, 77, McOptions{1}, trial);
    EXPECT_EQ(count_events(1000, 77, McOptions{3}, trial), one);
    EXPECT_EQ(count_events(1000, 77, McOptions{8}, trial), one);
}

TEST(CountEvents, RethrowsWorkerErrors) {
    EXPECT_THROW(count_events(50, 1, McOptions{4},
                              [](RngStream&, std::size_t i) -> bool {
                                  if (i == 17) throw std::runtime_error("boom");
                                  return false;
                              }),
                 std::runtime_error);
}

TEST(McErrorRates, DeterministicAcrossThreadCounts) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 10, 40);
    const TestConfig cfg(0.0, 0.3, Setting::gaussian(), Mode::OneSample, PlugInQuantiles{});
    const McResult a = mc_error_rates(cfg, sc.with_mean_x(Vector::Constant(10, 0.2)), 200, 5, McOptions{1});
    const McResult b = mc_error_rates(cfg, sc.with_mean_x(Vector::Constant(10, 0.2)), 200, 5, McOptions{4});
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.type2_hat.has_value());
    EXPECT_FALSE(a.type1_hat.has_value());
}

TEST(McErrorRates, NullAtBoundaryReportsTypeOne) {
    Scenario sc = Scenario::isotropic(Mode::OneSample, 20, 200);
    sc.mean_x(0) = 0.5;
    const McResult r = mc_error_rates(oracle_config(sc, 0.5), sc, 300, 6);
    ASSERT_TRUE(r.type1_hat.has_value());
    EXPECT_LE(*r.type1_hat, 0.15 + r.ci_halfwidth);
    EXPECT_DOUBLE_EQ(r.ci_halfwidth, ci_halfwidth(*r.type1_hat, 300));
}

TEST(McErrorRates, ModeMismatchIsAnError) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 3, 20);
    const TestConfig two(0.0, 0.05, Setting::gaussian(), Mode::TwoSample, PlugInQuantiles{});
    EXPECT_THROW(mc_error_rates(two, sc, 10, 1), std::invalid_argument);
}

TEST(CiHalfwidth, ThreeStandardErrors) {
    EXPECT_NEAR(ci_halfwidth(0.15, 2000), 3.0 * std::sqrt(0.15 * 0.85 / 2000.0), 1e-15);
    EXPECT_EQ(ci_halfwidth(0.0, 100), 0.0);
}

TEST(SignalDirection, IsotropicAndTopEigenvector) {
    const Scenario iso = Scenario::isotropic(Mode::OneSample, 3, 10);
    EXPECT_EQ(signal_direction(iso), Vector::Unit(3, 0));
    Scenario skewed = iso;
    Vector diag(3);
    diag << 1, 3, 2;
    skewed.cov_factor_x = diag.asDiagonal();
    const Vector v = signal_direction(skewed);
    EXPECT_NEAR(std::abs(v(1)), 1.0, 1e-12);
}

TEST(EmpiricalSeparation, ZeroNoiseIsZero) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 5, 30, 0, 0.0);
    const double delta = empirical_separation(oracle_config(sc), sc, 50, 0.5, 0.05, 7);
    EXPECT_LT(delta, 1e-2);
}

TEST(EmpiricalSeparation, WithinTheoreticalEnvelope) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 16, 200);
    const TestConfig cfg = oracle_config(sc);
    const double delta = empirical_separation(cfg, sc, 200, 0.5, 0.05, 8);
    const double guaranteed = separation_guaranteed(prepare_oracle(cfg, 200, std::nullopt).quantiles, 0.0);
    EXPECT_GT(delta, 0.0);
    EXPECT_LT(delta, guaranteed);
}

TEST(EmpiricalSeparation, ArgumentChecks) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 3, 20);
    EXPECT_THROW(empirical_separation(oracle_config(sc), sc, 10, 1.0, 0.05, 1), std::invalid_argument);
    EXPECT_THROW(empirical_separation(oracle_config(sc), sc, 10, 0.5, 0.0, 1), std::invalid_argument);
}

TEST(SeparationConventionsTest, SummedConventionIsLarger) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 8, 100);
    const SeparationConventions c = separation_conventions(oracle_config(sc), sc, 200, 0.05, 9);
    EXPECT_EQ(c.type1_hat, 0.0);
    ASSERT_TRUE(c.summed.has_value());
    EXPECT_GE(*c.summed, c.per_error * 0.95);
}

TEST(Coverage, ZeroCovarianceAlwaysHolds) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 4, 50, 0, 0.0);
    for (auto e : {CoverageEstimator::OpNormSqrt, CoverageEstimator::TraceSqSqrt}) {
        const CoverageResult r = coverage_check(e, sc, 2.0, 100, 10);
        EXPECT_EQ(r.coverage, 1.0);
        EXPECT_TRUE(r.passes());
    }
}

TEST(Coverage, StatedProbabilities) {
    const Scenario gaussian = Scenario::isotropic(Mode::OneSample, 10, 500);
    Scenario sphere = gaussian;
    sphere.sampler = SphereSampler{1.0, 1.0};
    EXPECT_NEAR(coverage_stated_probability(CoverageEstimator::OpNormSqrt, gaussian, 3.0), 1 - 3 * std::exp(-3.0),
                1e-15);
    EXPECT_NEAR(coverage_stated_probability(CoverageEstimator::OpNormSqrt, sphere, 2.0), 1 - 2 * std::exp(-2.0),
                1e-15);
    EXPECT_EQ(coverage_stated_probability(CoverageEstimator::TraceSqSqrt, gaussian, 3.0), 0.0);
    EXPECT_NEAR(coverage_stated_probability(CoverageEstimator::TraceSqSqrt, gaussian, 6.0), 1 - std::exp(-2.0),
                1e-15);
}

TEST(Coverage, ArgumentChecks) {
    const Scenario sc = Scenario::isotropic(Mode::OneSample, 3, 50);
    EXPECT_THROW(coverage_check(CoverageEstimator::OpNormSqrt, sc, 1.0, 99, 1), std::invalid_argument);
    EXPECT_THROW(coverage_bound(CoverageEstimator::OpNormSqrt, sc, 0.0), std::invalid_argument);
    EXPECT_THROW(parse_coverage_estimator("nope"), std::invalid_argument);
    EXPECT_EQ(parse_coverage_estimator(to_string(CoverageEstimator::TraceSqSqrt)), CoverageEstimator::TraceSqSqrt);
}
