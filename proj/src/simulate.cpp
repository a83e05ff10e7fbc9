#include "hdmt/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "hdmt/statistics.hpp"
#include "hdmt/testing.hpp"

namespace hdmt {

namespace {

bool is_diagonal(const Matrix& f) {
    if (f.rows() != f.cols()) return false;
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        for (Eigen::Index i = 0; i < f.rows(); ++i) {
            if (i != j && f(i, j) != 0.0) return false;
        }
    }
    return true;
}

std::size_t resolve_threads(const McOptions& opts, std::size_t trials) {
    std::size_t threads = opts.threads;
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(threads, trials));
}

bool is_null_scenario(const Scenario& sc, double eta) {
    return sc.mean_distance() <= eta * (1.0 + 1e-12);
}

void check_mode(const TestConfig& cfg, const Scenario& sc) {
    if (cfg.mode() != sc.mode) throw std::invalid_argument("scenario mode does not match the test configuration");
}

McResult summarize(std::size_t events, std::size_t trials, bool null_hypothesis, std::uint64_t seed) {
    McResult result;
    result.trials = trials;
    result.seed = seed;
    const double p = static_cast<double>(events) / static_cast<double>(trials);
    if (null_hypothesis) {
        result.type1_hat = p;
    } else {
        result.type2_hat = 1.0 - p;
    }
    result.ci_halfwidth = ci_halfwidth(p, trials);
    return result;
}

}  // namespace

Vector signal_direction(const Scenario& sc) {
    const auto d = static_cast<Eigen::Index>(sc.dim());
    Matrix m = sc.covariance_x().entries();
    if (sc.mode == Mode::TwoSample) {
        m = m / static_cast<double>(sc.n) + sc.covariance_y().entries() / static_cast<double>(sc.m);
    }
    Vector e1 = Vector::Zero(d);
    e1(0) = 1.0;
    const double diag0 = m(0, 0);
    const bool scalar = (m - diag0 * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0;
    if (scalar) return e1;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    Vector v = solver.eigenvectors().col(d - 1);
    Eigen::Index top = 0;
    v.cwiseAbs().maxCoeff(&top);
    if (v(top) < 0.0) v = -v;
    return v;
}

namespace {

double bracket_top(const TestConfig& cfg, const Scenario& sc) {
    const CovMatrix sx = sc.covariance_x();
    if (sc.mode == Mode::OneSample) {
        const CovSummary summary = CovSummary::of(sx, sc.n);
        if (!(summary.op_norm() > 0.0)) return 0.0;
        return 10.0 * separation_upper(effective_dims(summary), cfg.alpha(), cfg.eta(), sc.mode);
    }
    const CovMatrix sy = sc.covariance_y();
    if (!(sx.entries().cwiseAbs().maxCoeff() > 0.0) && !(sy.entries().cwiseAbs().maxCoeff() > 0.0)) return 0.0;
    return 10.0 * separation_upper(effective_dims(sx, sy, sc.n, sc.m), cfg.alpha(), cfg.eta(), sc.mode);
}

}  // namespace

Scenario Scenario::isotropic(Mode mode, std::size_t d, std::size_t n, std::size_t m, double scale) {
    if (d == 0) throw std::invalid_argument("dimension must be positive");
    if (!(scale >= 0.0)) throw std::invalid_argument("scale must be nonnegative");
    Scenario sc;
    sc.mode = mode;
    sc.mean_x = Vector::Zero(static_cast<Eigen::Index>(d));
    sc.cov_factor_x = std::sqrt(scale) * Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    sc.n = n;
    sc.m = mode == Mode::TwoSample ? (m == 0 ? n : m) : 0;
    return sc;
}

void Scenario::validate() const {
    if (mean_x.size() == 0) throw std::invalid_argument("scenario dimension must be positive");
    if (n == 0) throw std::invalid_argument("scenario needs n > 0");
    if (mode == Mode::TwoSample && m == 0) throw std::invalid_argument("two-sample scenario needs m > 0");
    if (mean_y && mean_y->size() != mean_x.size()) throw std::invalid_argument("mean_y has the wrong dimension");
    if (std::holds_alternative<GaussianSampler>(sampler)) {
        if (cov_factor_x.rows() != mean_x.size()) throw std::invalid_argument("cov_factor_x has the wrong row count");
        if (cov_factor_y && cov_factor_y->rows() != mean_x.size()) {
            throw std::invalid_argument("cov_factor_y has the wrong row count");
        }
    } else {
        const auto& sphere = std::get<SphereSampler>(sampler);
        if (!(sphere.radius >= 0.0)) throw std::invalid_argument("sphere radius must be nonnegative");
        if (!(sphere.bound > 0.0)) throw std::invalid_argument("sphere bound L must be positive");
        auto check = [&sphere](const Vector& center, const char* label) {
            const double reach = center.norm() + sphere.radius;
            if (reach > sphere.bound * (1.0 + kBoundSlack)) {
                std::ostringstream msg;
                msg << label << " center norm plus radius " << reach << " exceeds L = " << sphere.bound;
                throw std::invalid_argument(msg.str());
            }
        };
        check(mean_x, "X");
        if (mode == Mode::TwoSample) check(effective_mean_y(), "Y");
    }
}

Vector Scenario::effective_mean_y() const {
    return mean_y ? *mean_y : Vector::Zero(mean_x.size());
}

double Scenario::mean_distance() const {
    return (mean_x - effective_mean_y()).norm();
}

CovMatrix Scenario::covariance_x() const {
    if (const auto* sphere = std::get_if<SphereSampler>(&sampler)) {
        const auto d = mean_x.size();
        return CovMatrix(sphere->radius * sphere->radius / static_cast<double>(d) * Matrix::Identity(d, d));
    }
    Matrix c = cov_factor_x * cov_factor_x.transpose();
    return CovMatrix(0.5 * (c + c.transpose()));
}

CovMatrix Scenario::covariance_y() const {
    if (std::holds_alternative<SphereSampler>(sampler) || !cov_factor_y) return covariance_x();
    Matrix c = *cov_factor_y * cov_factor_y->transpose();
    return CovMatrix(0.5 * (c + c.transpose()));
}

Scenario Scenario::with_mean_x(Vector mean) const {
    Scenario copy = *this;
    copy.mean_x = std::move(mean);
    return copy;
}

Sample sample_gaussian(const Vector& mean, const Matrix& cov_factor, std::size_t n, RngStream& rng) {
    if (cov_factor.rows() != mean.size()) {
        std::ostringstream msg;
        msg << "covariance factor has " << cov_factor.rows() << " rows but the mean has dimension " << mean.size();
        throw std::invalid_argument(msg.str());
    }
    const auto rows = static_cast<Eigen::Index>(n);
    const Eigen::Index d = mean.size();
    const Eigen::Index k = cov_factor.cols();
    if (is_diagonal(cov_factor)) {
        Matrix out(rows, d);
        for (Eigen::Index i = 0; i < rows; ++i) {
            for (Eigen::Index j = 0; j < d; ++j) out(i, j) = mean(j) + cov_factor(j, j) * rng.normal();
        }
        return Sample(std::move(out));
    }
    Matrix g(rows, k);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) g(i, j) = rng.normal();
    }
    Matrix out = g * cov_factor.transpose();
    out.rowwise() += mean.transpose();
    return Sample(std::move(out));
}

Sample sample_sphere(const Vector& center, double radius, std::size_t n, RngStream& rng) {
    const Eigen::Index d = center.size();
    if (d == 0) throw std::invalid_argument("sphere sampler needs d > 0");
    if (!(radius >= 0.0)) throw std::invalid_argument("sphere radius must be nonnegative");
    const double reach = center.norm() + radius;
    Matrix out(static_cast<Eigen::Index>(n), d);
    Vector g(d);
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        double norm = 0.0;
        while (!(norm > 0.0)) {
            for (Eigen::Index j = 0; j < d; ++j) g(j) = rng.normal();
            norm = g.norm();
        }
        out.row(i) = (center + (radius / norm) * g).transpose();
        if (out.row(i).norm() > reach * (1.0 + 1e-12)) throw std::logic_error("sphere draw exceeds its norm bound");
    }
    return Sample(std::move(out));
}

std::pair<Sample, std::optional<Sample>> draw(const Scenario& sc, RngStream& rng) {
    const bool two = sc.mode == Mode::TwoSample;
    if (const auto* sphere = std::get_if<SphereSampler>(&sc.sampler)) {
        Sample x = sample_sphere(sc.mean_x, sphere->radius, sc.n, rng);
        if (!two) return {std::move(x), std::nullopt};
        Sample y = sample_sphere(sc.effective_mean_y(), sphere->radius, sc.m, rng);
        return {std::move(x), std::move(y)};
    }
    Sample x = sample_gaussian(sc.mean_x, sc.cov_factor_x, sc.n, rng);
    if (!two) return {std::move(x), std::nullopt};
    Sample y = sample_gaussian(sc.effective_mean_y(), sc.cov_factor_y.value_or(sc.cov_factor_x), sc.m, rng);
    return {std::move(x), std::move(y)};
}

std::size_t count_events(std::size_t trials, std::uint64_t seed, const McOptions& opts,
                         const std::function<bool(RngStream&, std::size_t)>& trial) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    std::vector<char> outcome(trials, 0);
    const std::size_t workers = resolve_threads(opts, trials);

    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::size_t first_error_index = trials;

    auto work = [&](std::size_t worker) {
        for (std::size_t t = worker; t < trials; t += workers) {
            try {
                RngStream rng(seed, t);
                outcome[t] = trial(rng, t) ? 1 : 0;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (t < first_error_index) {
                    first_error_index = t;
                    first_error = std::current_exception();
                }
                return;
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::size_t events = 0;
    for (char o : outcome) events += static_cast<std::size_t>(o);
    return events;
}

double ci_halfwidth(double p, std::size_t trials) {
    if (trials == 0) return 0.0;
    return 3.0 * std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

McResult mc_error_rates(const TestConfig& cfg, const Scenario& sc, std::size_t trials, std::uint64_t seed,
                        const McOptions& opts) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    check_mode(cfg, sc);
    sc.validate();
    std::optional<PreparedOracle> oracle;
    if (cfg.uses_oracle()) {
        oracle = prepare_oracle(cfg, sc.n, sc.mode == Mode::TwoSample ? std::optional(sc.m) : std::nullopt);
    }
    const std::size_t rejections = count_events(trials, seed, opts, [&](RngStream& rng, std::size_t) {
        const auto [x, y] = draw(sc, rng);
        const Sample* yp = y ? &*y : nullptr;
        if (oracle) return run_test(cfg, *oracle, x, yp).reject;
        return (yp ? run_test(cfg, x, *yp) : run_test(cfg, x)).reject;
    });
    return summarize(rejections, trials, is_null_scenario(sc, cfg.eta()), seed);
}

McResult mc_kme_error_rates(const TestConfig& cfg, const Scenario& sc, const Kernel& k, bool null_hypothesis,
                            std::size_t trials, std::uint64_t seed, const McOptions& opts) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    check_mode(cfg, sc);
    sc.validate();
    const std::size_t rejections = count_events(trials, seed, opts, [&](RngStream& rng, std::size_t) {
        const auto [x, y] = draw(sc, rng);
        return (y ? kme_test(cfg, x, *y, k) : kme_test(cfg, x, k)).reject;
    });
    return summarize(rejections, trials, null_hypothesis, seed);
}

PowerCurve::PowerCurve(TestConfig cfg, Scenario sc, std::size_t trials, std::uint64_t seed, McOptions opts)
    : cfg_(std::move(cfg)), sc_(std::move(sc)), trials_(trials), seed_(seed), opts_(opts) {
    if (trials_ == 0) throw std::invalid_argument("trials must be positive");
    check_mode(cfg_, sc_);
    sc_.validate();
    direction_ = signal_direction(sc_);
}

double PowerCurve::operator()(double delta) const {
    if (!(delta >= 0.0)) throw std::invalid_argument("signal size must be nonnegative");
    const Vector base = sc_.mode == Mode::TwoSample ? sc_.effective_mean_y() : Vector::Zero(sc_.mean_x.size());
    const Scenario shifted = sc_.with_mean_x(base + (cfg_.eta() + delta) * direction_);
    const McResult r = mc_error_rates(cfg_, shifted, trials_, seed_, opts_);
    return r.type1_hat ? *r.type1_hat : 1.0 - *r.type2_hat;
}

double empirical_separation(const TestConfig& cfg, const Scenario& sc_template, std::size_t trials,
                            double power_target, double tol, std::uint64_t seed, const McOptions& opts) {
    if (!(power_target > 0.0 && power_target < 1.0)) throw std::invalid_argument("power_target must lie in (0, 1)");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    const PowerCurve power(cfg, sc_template, trials, seed, opts);

    double top = bracket_top(cfg, sc_template);
    if (!(top > 0.0)) top = 1.0;
    std::map<double, double> probes;
    auto probe = [&](double delta) {
        const double p = power(delta);
        probes[delta] = p;
        return p;
    };
    if (probe(top) < power_target) {
        std::ostringstream msg;
        msg << "bracket failure: power " << probes[top] << " at delta = " << top << " is below the target "
            << power_target;
        throw std::runtime_error(msg.str());
    }
    double lo = 0.0;
    double hi = top;
    for (int iter = 0; iter < 200; ++iter) {
        if (hi - lo <= tol * hi || hi <= tol * tol * top) break;
        const double mid = 0.5 * (lo + hi);
        if (probe(mid) >= power_target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    // Spot-check monotonicity over the probed points with 3-standard-error slack.
    const double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(trials));
    double running_max = 0.0;
    for (const auto& [delta, p] : probes) {
        if (p < running_max - 2.0 * slack) {
            std::ostringstream msg;
            msg << "empirical power is not monotone in delta near " << delta;
            throw std::runtime_error(msg.str());
        }
        running_max = std::max(running_max, p);
    }
    return 0.5 * (lo + hi);
}

SeparationConventions separation_conventions(const TestConfig& cfg, const Scenario& sc_template, std::size_t trials,
                                             double tol, std::uint64_t seed, const McOptions& opts) {
    SeparationConventions out;
    const double alpha = cfg.alpha();
    if (3.0 * alpha < 1.0) {
        out.per_error = empirical_separation(cfg, sc_template, trials, 1.0 - 3.0 * alpha, tol, seed, opts);
    } else {
        out.per_error = 0.0;
    }
    const PowerCurve power(cfg, sc_template, trials, seed, opts);
    out.type1_hat = power(0.0);
    const double budget = alpha - out.type1_hat;
    if (budget > 0.0) {
        out.summed = empirical_separation(cfg, sc_template, trials, 1.0 - budget, tol, seed, opts);
    }
    return out;
}

std::string to_string(CoverageEstimator e) {
    return e == CoverageEstimator::OpNormSqrt ? "op_norm" : "trace_sq";
}

CoverageEstimator parse_coverage_estimator(const std::string& name) {
    if (name == "op_norm" || name == "op_norm_sqrt") return CoverageEstimator::OpNormSqrt;
    if (name == "trace_sq" || name == "trace_sq_sqrt") return CoverageEstimator::TraceSqSqrt;
    throw std::invalid_argument("unknown estimator '" + name + "' (expected op_norm or trace_sq)");
}

double coverage_bound(CoverageEstimator e, const Scenario& sc, double u) {
    if (!(u > 0.0)) throw std::invalid_argument("u must be positive");
    const double n = static_cast<double>(sc.n);
    const Matrix sigma = sc.covariance_x().entries();
    const double trace = sigma.trace();
    const double top = sigma.size() ? std::max(largest_eigenvalue(sigma), 0.0) : 0.0;
    const auto* sphere = std::get_if<SphereSampler>(&sc.sampler);
    if (e == CoverageEstimator::OpNormSqrt) {
        if (sphere) {
            const double d_e = top > 0.0 ? trace / top : 0.0;
            const double l = sphere->bound;
            return 4.0 * l * (2.0 * std::sqrt(d_e / n) + std::sqrt(2.0 * u / n) + u / (3.0 * n));
        }
        // sqrt(||S||) * sqrt(d_e / n) rewritten as sqrt(Tr S / n) so that S = 0 is allowed.
        return 3.0 * std::sqrt(2.0) * (std::sqrt(trace / n) + std::sqrt(top * u / n));
    }
    if (sphere) return 12.0 * sphere->bound * sphere->bound * std::sqrt(u / n);
    return 30.0 * std::sqrt(sigma.squaredNorm() / n) * u * u;
}

double coverage_stated_probability(CoverageEstimator e, const Scenario& sc, double u) {
    const bool sphere = std::holds_alternative<SphereSampler>(sc.sampler);
    double p = 0.0;
    if (e == CoverageEstimator::OpNormSqrt) {
        p = 1.0 - (sphere ? 2.0 : 3.0) * std::exp(-u);
    } else {
        p = sphere ? 1.0 - 2.0 * std::exp(-u) : 1.0 - std::exp(4.0 - u);
    }
    return std::clamp(p, 0.0, 1.0);
}

CoverageResult coverage_check(CoverageEstimator e, const Scenario& sc, double u, std::size_t trials,
                              std::uint64_t seed, const McOptions& opts) {
    if (trials < 100) throw std::invalid_argument("coverage checks need at least 100 trials");
    if (sc.mode != Mode::OneSample) throw std::invalid_argument("coverage checks use one-sample scenarios");
    sc.validate();
    const double bound = coverage_bound(e, sc, u);
    const Matrix sigma = sc.covariance_x().entries();
    const double truth = e == CoverageEstimator::OpNormSqrt ? std::sqrt(std::max(largest_eigenvalue(sigma), 0.0))
                                                            : std::sqrt(sigma.squaredNorm());
    // The trace bounds are stated for the failure event deviation >= bound,
    // so the holding event is strict there.
    const bool strict = e == CoverageEstimator::TraceSqSqrt;
    const std::size_t held = count_events(trials, seed, opts, [&](RngStream& rng, std::size_t) {
        const auto [x, y] = draw(sc, rng);
        const double estimate = e == CoverageEstimator::OpNormSqrt ? std::sqrt(op_norm(empirical_covariance(x)))
                                                                   : std::sqrt(trace_sq_hat_fast(x));
        const double deviation = std::abs(estimate - truth);
        return deviation == 0.0 || (strict ? deviation < bound : deviation <= bound);
    });
    CoverageResult result;
    result.trials = trials;
    result.coverage = static_cast<double>(held) / static_cast<double>(trials);
    result.stated = coverage_stated_probability(e, sc, u);
    result.ci_halfwidth = ci_halfwidth(result.stated, trials);
    return result;
}

}  // namespace hdmt
