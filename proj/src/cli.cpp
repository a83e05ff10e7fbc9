#include "hdmt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hdmt/csv.hpp"
#include "hdmt/kme.hpp"
#include "hdmt/report.hpp"
#include "hdmt/simulate.hpp"
#include "hdmt/testing.hpp"

namespace hdmt {

namespace {

// Usage or data problem; reported on stderr with exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr int kExitError = 2;

void require_alpha(double alpha, const char* flag = "--alpha") {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        std::ostringstream msg;
        msg << flag << " must lie in (0, 1), got " << alpha;
        throw UsageError(msg.str());
    }
}

void require_eta(double eta, const char* flag = "--eta") {
    if (!(eta >= 0.0) || !std::isfinite(eta)) {
        std::ostringstream msg;
        msg << flag << " must be a finite nonnegative number, got " << eta;
        throw UsageError(msg.str());
    }
}

// Writes to --out when given, otherwise to the command's stdout.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw UsageError("cannot write to '" + path + "'");
            stream_ = file_.get();
        }
    }
    std::ostream& stream() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_;
};

std::size_t resolve_threads(std::optional<std::size_t> flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("HDMT_THREADS")) {
        try {
            std::size_t used = 0;
            const long value = std::stol(env, &used);
            if (used == std::string(env).size() && value >= 0) return static_cast<std::size_t>(value);
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("HDMT_THREADS must be a nonnegative integer, got '") + env + "'");
    }
    return 0;
}

std::string cell(const std::optional<double>& v) {
    return v ? format_number(*v) : std::string();
}

// Covariance from --isotropic D or --oracle-cov FILE [FILE2], times --scale.
struct CovarianceFlags {
    std::optional<std::size_t> isotropic;
    std::vector<std::string> files;
    double scale = 1.0;

    bool present() const { return isotropic.has_value() || !files.empty(); }

    std::pair<CovMatrix, std::optional<CovMatrix>> load() const {
        if (!(scale >= 0.0) || !std::isfinite(scale)) throw UsageError("--scale must be finite and nonnegative");
        if (isotropic && !files.empty()) throw UsageError("--isotropic and --oracle-cov are mutually exclusive");
        if (isotropic) {
            if (*isotropic == 0) throw UsageError("--isotropic needs a positive dimension");
            const auto d = static_cast<Eigen::Index>(*isotropic);
            return {CovMatrix(scale * Matrix::Identity(d, d)), std::nullopt};
        }
        if (files.empty()) throw UsageError("a covariance is required: --isotropic D or --oracle-cov FILE");
        const CovMatrix x = read_covariance_file(files[0]);
        std::optional<CovMatrix> y;
        if (files.size() > 1) y = CovMatrix(scale * read_covariance_file(files[1]).entries());
        return {CovMatrix(scale * x.entries()), std::move(y)};
    }
};

void add_covariance_flags(CLI::App* cmd, CovarianceFlags& flags) {
    cmd->add_option("--isotropic", flags.isotropic, "Covariance scale * I_D");
    cmd->add_option("--oracle-cov", flags.files, "Covariance CSV for X (and Y)")->expected(1, 2);
    cmd->add_option("--scale", flags.scale, "Multiplier applied to the covariance");
}

// ---- test -------------------------------------------------------------

struct TestArgs {
    std::string mode = "one";
    double alpha = 0.05;
    double eta = 0.0;
    std::optional<std::string> setting;
    std::optional<double> bound;
    std::optional<std::string> kernel;
    bool plugin = false;
    CovarianceFlags cov;
    std::vector<double> alpha_grid;
    std::vector<std::string> files;
    std::string out;
};

int cmd_test(const TestArgs& a, std::ostream& out, std::ostream& err) {
    require_alpha(a.alpha);
    require_eta(a.eta);
    for (double g : a.alpha_grid) require_alpha(g, "--alpha-grid");
    const Mode mode = parse_mode(a.mode);
    const std::size_t expected_files = mode == Mode::TwoSample ? 2 : 1;
    if (a.files.size() != expected_files) {
        std::ostringstream msg;
        msg << "--mode " << a.mode << " needs " << expected_files << " data file(s), got " << a.files.size();
        throw UsageError(msg.str());
    }
    if (a.plugin && a.cov.present()) throw UsageError("--plugin conflicts with --oracle-cov / --isotropic");

    const Sample x = read_sample_file(a.files[0]);
    std::optional<Sample> y;
    if (mode == Mode::TwoSample) y = read_sample_file(a.files[1]);

    TestReport report;
    std::optional<TestConfig> cfg;
    std::optional<std::string> kernel_name;
    if (a.kernel) {
        if (a.cov.present()) throw UsageError("--kernel uses plug-in quantiles; drop --oracle-cov / --isotropic");
        if (a.setting && *a.setting != "bounded") throw UsageError("--kernel requires --setting bounded");
        const Kernel k = Kernel::parse(*a.kernel);
        kernel_name = k.name();
        cfg = kme_config(a.eta, a.alpha, mode, k, a.bound);
        report = y ? kme_test(*cfg, x, *y, k) : kme_test(*cfg, x, k);
    } else {
        const Setting setting = parse_setting(a.setting.value_or("gaussian"), a.bound);
        QuantileChoice quantiles = PlugInQuantiles{};
        if (a.cov.present()) {
            auto [sx, sy] = a.cov.load();
            if (sy && mode == Mode::OneSample) throw UsageError("--oracle-cov got two files in one-sample mode");
            quantiles = OracleCovariances{std::move(sx), std::move(sy)};
        }
        cfg = TestConfig(a.eta, a.alpha, setting, mode, std::move(quantiles));
        report = y ? run_test(*cfg, x, *y) : run_test(*cfg, x);
    }

    Json doc = test_report_document(report, *cfg, kernel_name);
    if (!a.alpha_grid.empty()) {
        std::optional<double> smallest;
        if (a.kernel) {
            std::vector<double> sorted = a.alpha_grid;
            std::sort(sorted.begin(), sorted.end());
            const Kernel k = Kernel::parse(*a.kernel);
            for (double level : sorted) {
                const TestConfig at = cfg->with_alpha(level);
                if ((y ? kme_test(at, x, *y, k) : kme_test(at, x, k)).reject) {
                    smallest = level;
                    break;
                }
            }
        } else {
            smallest = smallest_rejecting_alpha(*cfg, x, y ? &*y : nullptr, a.alpha_grid);
        }
        doc["smallest_rejecting_alpha"] = smallest ? Json(*smallest) : Json(nullptr);
    }

    Output sink(a.out, out);
    sink.stream() << doc.dump(2) << '\n';
    err << std::setprecision(6) << (report.reject ? "reject" : "accept") << ": U = " << report.u_stat
        << ", eta^2 + threshold = " << a.eta * a.eta + report.threshold << '\n';
    return report.reject ? 1 : 0;
}

// ---- simulate ---------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> threads;
    std::string out;
};

template <typename T>
std::vector<T> grid(const Json& j, const char* key, std::vector<T> fallback) {
    if (!j.contains(key)) return fallback;
    const Json& v = j.at(key);
    if (v.is_array()) {
        if (v.empty()) throw UsageError(std::string("config: '") + key + "' is empty");
        return v.get<std::vector<T>>();
    }
    return {v.get<T>()};
}

struct SimulationPlan {
    Mode mode = Mode::OneSample;
    Setting setting = Setting::gaussian();
    bool oracle = true;
    bool sphere = false;
    double radius = 1.0;
    double scale = 1.0;
    std::optional<Matrix> cov;
    std::vector<std::size_t> d, n, m;
    std::vector<double> alpha, eta;
    // Absent entries mean "use the guaranteed separation".
    std::vector<std::optional<double>> delta;
    bool separation = false;
    bool conventions = false;
    double power_target = 0.5;
    double tol = 0.05;
    std::size_t trials = 1000;
};

SimulationPlan parse_plan(const Json& j) {
    static const std::set<std::string> known = {"mode",  "setting", "bound",      "quantiles",    "sampler",
                                                "radius", "scale",  "cov_file",   "d",            "n",
                                                "m",      "alpha",  "eta",        "delta",        "experiment",
                                                "power_target", "tol", "trials", "conventions"};
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) throw UsageError("config: unknown key '" + item.key() + "'");
    }
    SimulationPlan p;
    p.mode = parse_mode(j.value("mode", std::string("one")));
    const std::optional<double> bound = j.contains("bound") ? std::optional(j.at("bound").get<double>()) : std::nullopt;
    p.setting = parse_setting(j.value("setting", std::string("gaussian")), bound);
    const std::string quantiles = j.value("quantiles", std::string("oracle"));
    if (quantiles != "oracle" && quantiles != "plugin") throw UsageError("config: quantiles must be oracle or plugin");
    p.oracle = quantiles == "oracle";
    const std::string sampler = j.value("sampler", std::string("gaussian"));
    if (sampler != "gaussian" && sampler != "sphere") throw UsageError("config: sampler must be gaussian or sphere");
    p.sphere = sampler == "sphere";
    if (p.sphere && !p.setting.is_bounded()) throw UsageError("config: the sphere sampler needs setting bounded");
    p.radius = j.value("radius", 1.0);
    p.scale = j.value("scale", 1.0);
    if (j.contains("cov_file")) p.cov = read_covariance_file(j.at("cov_file").get<std::string>()).entries();
    p.d = grid<std::size_t>(j, "d", {p.cov ? static_cast<std::size_t>(p.cov->rows()) : 10});
    p.n = grid<std::size_t>(j, "n", {100});
    p.m = grid<std::size_t>(j, "m", {0});
    p.alpha = grid<double>(j, "alpha", {0.05});
    p.eta = grid<double>(j, "eta", {0.0});
    for (double a : p.alpha) require_alpha(a, "config alpha");
    for (double e : p.eta) require_eta(e, "config eta");
    if (j.contains("delta")) {
        const Json& v = j.at("delta");
        const Json list = v.is_array() ? v : Json::array({v});
        for (const Json& item : list) {
            if (item.is_string()) {
                if (item.get<std::string>() != "guaranteed") throw UsageError("config: delta strings must be 'guaranteed'");
                p.delta.emplace_back(std::nullopt);
            } else {
                const double value = item.get<double>();
                if (!(value >= 0.0)) throw UsageError("config: delta must be nonnegative");
                p.delta.emplace_back(value);
            }
        }
    } else {
        p.delta.emplace_back(0.0);
    }
    const std::string experiment = j.value("experiment", std::string("error_rates"));
    if (experiment != "error_rates" && experiment != "separation") {
        throw UsageError("config: experiment must be error_rates or separation");
    }
    p.separation = experiment == "separation";
    p.conventions = j.value("conventions", false);
    p.power_target = j.value("power_target", 0.5);
    p.tol = j.value("tol", 0.05);
    p.trials = j.value("trials", std::size_t{1000});
    return p;
}

Matrix psd_factor(const Matrix& cov) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(cov);
    const Vector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal();
}

Scenario build_scenario(const SimulationPlan& p, std::size_t d, std::size_t n, std::size_t m) {
    Scenario sc;
    if (p.cov) {
        if (static_cast<std::size_t>(p.cov->rows()) != d) throw UsageError("config: d does not match cov_file");
        sc.mode = p.mode;
        sc.mean_x = Vector::Zero(static_cast<Eigen::Index>(d));
        sc.cov_factor_x = psd_factor(p.scale * *p.cov);
        sc.n = n;
        sc.m = p.mode == Mode::TwoSample ? (m == 0 ? n : m) : 0;
    } else {
        sc = Scenario::isotropic(p.mode, d, n, m, p.scale);
    }
    if (p.sphere) sc.sampler = SphereSampler{p.radius, p.setting.bound()};
    return sc;
}

TestConfig build_config(const SimulationPlan& p, const Scenario& sc, double alpha, double eta, bool oracle) {
    QuantileChoice quantiles = PlugInQuantiles{};
    if (oracle) {
        std::optional<CovMatrix> sy;
        if (sc.mode == Mode::TwoSample) sy = sc.covariance_y();
        quantiles = OracleCovariances{sc.covariance_x(), std::move(sy)};
    }
    return TestConfig(eta, alpha, p.setting, sc.mode, std::move(quantiles));
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    if (!a.seed) throw UsageError("--seed is required: simulations must be reproducible");
    std::ifstream in(a.config);
    if (!in) throw UsageError("cannot open config '" + a.config + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::exception& e) {
        throw UsageError("config '" + a.config + "': " + e.what());
    }
    SimulationPlan p;
    try {
        p = parse_plan(j);
    } catch (const Json::exception& e) {
        throw UsageError("config '" + a.config + "': " + e.what());
    }
    if (a.trials) p.trials = *a.trials;
    if (p.trials == 0) throw UsageError("--trials must be positive");
    const McOptions opts{resolve_threads(a.threads)};
    const std::uint64_t seed = *a.seed;

    Output sink(a.out, out);
    std::ostream& o = sink.stream();
    o << "d,n,alpha,eta,delta,type1_hat,type2_hat,ci,seed";
    if (p.mode == Mode::TwoSample) o << ",m";
    if (p.separation && p.conventions) o << ",delta_3alpha,delta_summed";
    o << '\n';

    for (std::size_t d : p.d) {
        for (std::size_t n : p.n) {
            for (std::size_t m : p.m) {
                const Scenario base = build_scenario(p, d, n, m);
                for (double alpha : p.alpha) {
                    for (double eta : p.eta) {
                        const TestConfig cfg = build_config(p, base, alpha, eta, p.oracle);
                        auto row_prefix = [&](double delta) {
                            o << d << ',' << n << ',' << format_number(alpha) << ',' << format_number(eta) << ','
                              << format_number(delta) << ',';
                        };
                        auto row_suffix = [&]() {
                            o << ',' << seed;
                            if (p.mode == Mode::TwoSample) o << ',' << base.m;
                        };
                        if (p.separation) {
                            const double delta_hat =
                                empirical_separation(cfg, base, p.trials, p.power_target, p.tol, seed, opts);
                            row_prefix(delta_hat);
                            o << ",,";
                            row_suffix();
                            if (p.conventions) {
                                const SeparationConventions c =
                                    separation_conventions(cfg, base, p.trials, p.tol, seed, opts);
                                o << ',' << format_number(c.per_error) << ',' << cell(c.summed);
                            }
                            o << '\n';
                            continue;
                        }
                        const Vector v = signal_direction(base);
                        const Vector origin =
                            base.mode == Mode::TwoSample ? base.effective_mean_y() : Vector::Zero(base.mean_x.size());
                        for (const auto& entry : p.delta) {
                            double delta = 0.0;
                            if (entry) {
                                delta = *entry;
                            } else {
                                const TestConfig oracle_cfg = build_config(p, base, alpha, eta, true);
                                const PreparedOracle prepared = prepare_oracle(
                                    oracle_cfg, base.n,
                                    base.mode == Mode::TwoSample ? std::optional(base.m) : std::nullopt);
                                delta = separation_guaranteed(prepared.quantiles, eta);
                            }
                            const Scenario sc = base.with_mean_x(origin + (eta + delta) * v);
                            const McResult r = mc_error_rates(cfg, sc, p.trials, seed, opts);
                            row_prefix(delta);
                            o << cell(r.type1_hat) << ',' << cell(r.type2_hat) << ',' << format_number(r.ci_halfwidth);
                            row_suffix();
                            o << '\n';
                        }
                    }
                }
            }
        }
    }
    return 0;
}

// ---- separation -------------------------------------------------------

struct SeparationArgs {
    std::string mode = "one";
    std::string setting = "gaussian";
    std::optional<double> bound;
    CovarianceFlags cov;
    std::vector<std::size_t> n{100};
    std::vector<std::size_t> m;
    std::vector<double> alpha{0.05};
    std::vector<double> eta{0.0};
    std::string out;
};

int cmd_separation(const SeparationArgs& a, std::ostream& out, std::ostream& err) {
    const Mode mode = parse_mode(a.mode);
    const Setting setting = parse_setting(a.setting, a.bound);
    for (double al : a.alpha) require_alpha(al);
    for (double e : a.eta) require_eta(e);
    for (std::size_t n : a.n) {
        if (n == 0) throw UsageError("--n must be positive");
    }
    const auto [sx, sy] = a.cov.load();
    Output sink(a.out, out);
    std::ostream& o = sink.stream();
    o << "alpha,eta,n,sigma,d_e,d_star,delta_lower,delta_guaranteed,delta_upper";
    if (mode == Mode::TwoSample) o << ",m";
    o << '\n';
    const std::vector<std::size_t> ms = a.m.empty() ? std::vector<std::size_t>{0} : a.m;
    for (double alpha : a.alpha) {
        for (double eta : a.eta) {
            for (std::size_t n : a.n) {
                for (std::size_t m_flag : ms) {
                    SeparationBounds b;
                    const std::size_t m = m_flag == 0 ? n : m_flag;
                    if (mode == Mode::OneSample) {
                        b = separation_bounds(sx, n, alpha, eta, setting);
                    } else {
                        b = separation_bounds(sx, sy.value_or(sx), n, m, alpha, eta, setting);
                    }
                    o << format_number(alpha) << ',' << format_number(eta) << ',' << n << ','
                      << format_number(b.sigma) << ',' << format_number(b.d_e) << ',' << format_number(b.d_star)
                      << ',' << cell(b.delta_lower) << ',' << format_number(b.delta_guaranteed) << ','
                      << format_number(b.delta_upper);
                    if (mode == Mode::TwoSample) o << ',' << m;
                    o << '\n';
                    if (mode == Mode::OneSample) break;
                }
            }
        }
    }
    err << "note: delta_lower and delta_upper hold up to a universal constant, taken as 1\n";
    return 0;
}

// ---- coverage ---------------------------------------------------------

struct CoverageArgs {
    std::string estimator = "op_norm";
    std::string sampler = "gaussian";
    std::size_t isotropic = 10;
    double scale = 1.0;
    double radius = 1.0;
    double bound = 1.0;
    std::size_t n = 500;
    std::vector<double> u{1.0, 2.0, 3.0};
    std::size_t trials = 1000;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string out;
};

int cmd_coverage(const CoverageArgs& a, std::ostream& out) {
    if (!a.seed) throw UsageError("--seed is required: simulations must be reproducible");
    const CoverageEstimator estimator = parse_coverage_estimator(a.estimator);
    if (a.sampler != "gaussian" && a.sampler != "sphere") throw UsageError("--sampler must be gaussian or sphere");
    if (a.isotropic == 0) throw UsageError("--isotropic needs a positive dimension");
    if (a.trials < 100) throw UsageError("--trials must be at least 100 for coverage checks");
    for (double u : a.u) {
        if (!(u > 0.0)) throw UsageError("--u values must be positive");
    }
    Scenario sc = Scenario::isotropic(Mode::OneSample, a.isotropic, a.n, 0, a.scale);
    if (a.sampler == "sphere") sc.sampler = SphereSampler{a.radius, a.bound};
    const McOptions opts{resolve_threads(a.threads)};

    Output sink(a.out, out);
    std::ostream& o = sink.stream();
    o << "estimator,sampler,u,n,coverage,stated,ci,pass\n";
    for (double u : a.u) {
        const CoverageResult r = coverage_check(estimator, sc, u, a.trials, *a.seed, opts);
        o << to_string(estimator) << ',' << a.sampler << ',' << format_number(u) << ',' << a.n << ','
          << format_number(r.coverage) << ',' << format_number(r.stated) << ',' << format_number(r.ci_halfwidth)
          << ',' << (r.passes() ? "true" : "false") << '\n';
    }
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"High-dimensional mean testing with covariance-adaptive thresholds"};
    app.name("hdmt");
    app.require_subcommand(1);

    TestArgs test_args;
    CLI::App* test = app.add_subcommand("test", "Run the test on CSV data and print a JSON report");
    test->add_option("--mode", test_args.mode, "one | two")->check(CLI::IsMember({"one", "two"}));
    test->add_option("--alpha", test_args.alpha, "Level in (0, 1)");
    test->add_option("--eta", test_args.eta, "Null radius");
    test->add_option("--setting", test_args.setting, "gaussian | bounded")
        ->check(CLI::IsMember({"gaussian", "bounded"}));
    test->add_option("--bound", test_args.bound, "Norm bound L for the bounded setting");
    test->add_option("--kernel", test_args.kernel, "linear | rbf:GAMMA");
    test->add_flag("--plugin", test_args.plugin, "Estimate the quantiles from the data (default)");
    add_covariance_flags(test, test_args.cov);
    test->add_option("--alpha-grid", test_args.alpha_grid, "Also report the smallest rejecting level on this grid");
    test->add_option("--out", test_args.out, "Write the report here instead of stdout");
    test->add_option("files", test_args.files, "x.csv [y.csv]")->required()->expected(1, 2);

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo error rates or empirical separation (CSV)");
    sim->add_option("--config", sim_args.config, "Scenario JSON")->required();
    sim->add_option("--seed", sim_args.seed, "Master seed (required)");
    sim->add_option("--trials", sim_args.trials, "Replications per grid point");
    sim->add_option("--threads", sim_args.threads, "Worker threads (default: HDMT_THREADS, else all cores)");
    sim->add_option("--out", sim_args.out, "Write the table here instead of stdout");

    SeparationArgs sep_args;
    CLI::App* sep = app.add_subcommand("separation", "Table of separation bounds (CSV)");
    sep->add_option("--mode", sep_args.mode, "one | two")->check(CLI::IsMember({"one", "two"}));
    sep->add_option("--setting", sep_args.setting, "gaussian | bounded")->check(CLI::IsMember({"gaussian", "bounded"}));
    sep->add_option("--bound", sep_args.bound, "Norm bound L for the bounded setting");
    add_covariance_flags(sep, sep_args.cov);
    sep->add_option("--n", sep_args.n, "Sample sizes")->delimiter(',');
    sep->add_option("--m", sep_args.m, "Second sample sizes (two-sample; default n)")->delimiter(',');
    sep->add_option("--alpha", sep_args.alpha, "Levels")->delimiter(',');
    sep->add_option("--eta", sep_args.eta, "Null radii")->delimiter(',');
    sep->add_option("--out", sep_args.out, "Write the table here instead of stdout");

    CoverageArgs cov_args;
    CLI::App* cov = app.add_subcommand("coverage", "Monte Carlo coverage of the concentration bounds (CSV)");
    cov->add_option("--estimator", cov_args.estimator, "op_norm | trace_sq");
    cov->add_option("--sampler", cov_args.sampler, "gaussian | sphere");
    cov->add_option("--isotropic", cov_args.isotropic, "Dimension D (covariance scale * I_D)");
    cov->add_option("--scale", cov_args.scale, "Gaussian covariance scale");
    cov->add_option("--radius", cov_args.radius, "Sphere radius");
    cov->add_option("--bound", cov_args.bound, "Norm bound L for the sphere sampler");
    cov->add_option("--n", cov_args.n, "Sample size");
    cov->add_option("--u", cov_args.u, "Deviation levels")->delimiter(',');
    cov->add_option("--trials", cov_args.trials, "Replications");
    cov->add_option("--seed", cov_args.seed, "Master seed (required)");
    cov->add_option("--threads", cov_args.threads, "Worker threads (default: HDMT_THREADS, else all cores)");
    cov->add_option("--out", cov_args.out, "Write the table here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kExitError;
    }

    try {
        if (*test) return cmd_test(test_args, out, err);
        if (*sim) return cmd_simulate(sim_args, out);
        if (*sep) return cmd_separation(sep_args, out, err);
        if (*cov) return cmd_coverage(cov_args, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}

}  // namespace hdmt
