#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace hdmt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// An n x d data matrix; rows are observations. Entries are always finite.
class Sample {
public:
    explicit Sample(Matrix data);

    std::size_t n() const { return static_cast<std::size_t>(data_.rows()); }
    std::size_t d() const { return static_cast<std::size_t>(data_.cols()); }
    const Matrix& data() const { return data_; }

private:
    Matrix data_;
};

/// Symmetric d x d matrix used for population and empirical covariances.
/// Symmetry is enforced on construction; positive semidefiniteness is only
/// checked by `checked()` since it costs an eigendecomposition.
class CovMatrix {
public:
    explicit CovMatrix(Matrix entries);

    /// Also rejects matrices whose smallest eigenvalue is below -1e-10 * ||C||_op.
    static CovMatrix checked(Matrix entries);

    std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kPsdTolerance = 1e-10;
inline constexpr double kBoundSlack = 1e-9;

class Setting {
public:
    enum class Kind { Gaussian, Bounded };

    static Setting gaussian() { return Setting(Kind::Gaussian, 0.0); }
    static Setting bounded(double bound);

    Kind kind() const { return kind_; }
    bool is_bounded() const { return kind_ == Kind::Bounded; }
    /// Norm bound L; only meaningful for the bounded setting.
    double bound() const { return bound_; }

    friend bool operator==(const Setting&, const Setting&) = default;

private:
    Setting(Kind kind, double bound) : kind_(kind), bound_(bound) {}

    Kind kind_;
    double bound_;
};

enum class Mode { OneSample, TwoSample };

enum class QuantileSource { Oracle, PlugIn };

struct PlugInQuantiles {};

/// Known population covariances. When `sigma_y` is absent in a two-sample
/// test the second sample is assumed to share `sigma_x`.
struct OracleCovariances {
    CovMatrix sigma_x;
    std::optional<CovMatrix> sigma_y;
};

using QuantileChoice = std::variant<PlugInQuantiles, OracleCovariances>;

class TestConfig {
public:
    TestConfig(double eta, double alpha, Setting setting, Mode mode, QuantileChoice quantiles);

    double eta() const { return eta_; }
    double alpha() const { return alpha_; }
    const Setting& setting() const { return setting_; }
    Mode mode() const { return mode_; }
    const QuantileChoice& quantiles() const { return quantiles_; }
    bool uses_oracle() const { return std::holds_alternative<OracleCovariances>(quantiles_); }

    TestConfig with_alpha(double alpha) const;
    TestConfig with_eta(double eta) const;

private:
    double eta_;
    double alpha_;
    Setting setting_;
    Mode mode_;
    QuantileChoice quantiles_;
};

struct QuantilePair {
    double q1 = 0.0;
    double q2 = 0.0;
    QuantileSource source = QuantileSource::Oracle;
    double u = 1.0;

    friend bool operator==(const QuantilePair&, const QuantilePair&) = default;
};

/// Throws std::invalid_argument unless q1, q2 >= 0 and u > 0.
QuantilePair make_quantile_pair(double q1, double q2, QuantileSource source, double u);

/// Kernel Gram matrices. `kyy` and `kxy` are absent for one-sample use.
class GramTriple {
public:
    explicit GramTriple(Matrix kxx);
    GramTriple(Matrix kxx, Matrix kyy, Matrix kxy);

    const Matrix& kxx() const { return kxx_; }
    const std::optional<Matrix>& kyy() const { return kyy_; }
    const std::optional<Matrix>& kxy() const { return kxy_; }
    bool two_sample() const { return kyy_.has_value(); }

    /// Throws unless kxx (and kyy) have smallest eigenvalue >= -1e-9 * lambda_max.
    void check_psd() const;

private:
    Matrix kxx_;
    std::optional<Matrix> kyy_;
    std::optional<Matrix> kxy_;
};

struct TestReport {
    double u_stat = 0.0;
    double threshold = 0.0;
    bool reject = false;
    double q1_used = 0.0;
    double q2_used = 0.0;
    std::optional<double> d_e_hat;
    std::optional<double> d_star_hat;
    std::vector<std::string> warnings;

    friend bool operator==(const TestReport&, const TestReport&) = default;
};

struct SeparationBounds {
    double delta_upper = 0.0;
    std::optional<double> delta_lower;
    double delta_guaranteed = 0.0;
    double sigma = 0.0;
    double d_star = 0.0;
    double d_e = 0.0;

    friend bool operator==(const SeparationBounds&, const SeparationBounds&) = default;
};

/// Warnings for a sample under the given setting: one per row whose norm
/// exceeds L * (1 + 1e-9) in the bounded setting.
std::vector<std::string> validate_sample(const Sample& sample, const Setting& setting);

/// Largest absolute entry of a - a^T relative to the largest absolute entry.
double asymmetry(const Matrix& a);

std::string to_string(Mode mode);
std::string to_string(QuantileSource source);
std::string to_string(const Setting& setting);

}  // namespace hdmt
