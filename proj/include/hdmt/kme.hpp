#pragma once

#include <functional>
#include <optional>
#include <string>

#include "hdmt/model.hpp"

namespace hdmt {

/// A positive definite kernel k(a, b) = <Phi(a), Phi(b)> with an optional
/// feature-norm bound L = sup_z sqrt(k(z, z)).
class Kernel {
public:
    using Evaluator = std::function<double(const Vector& a, const Vector& b)>;

    enum class Kind { Linear, Rbf, Custom };

    /// k(a, b) = <a, b>. Unbounded unless the caller knows a bound on the data.
    static Kernel linear(std::optional<double> bound = std::nullopt);

    /// k(a, b) = exp(-gamma ||a - b||^2); bound exactly 1.
    static Kernel rbf(double gamma);

    static Kernel custom(std::string name, Evaluator evaluate, std::optional<double> bound);

    /// Parses "linear" or "rbf:GAMMA".
    static Kernel parse(const std::string& spec);

    Kind kind() const { return kind_; }
    double gamma() const { return gamma_; }
    const std::optional<double>& bound() const { return bound_; }
    const std::string& name() const { return name_; }

    double operator()(const Vector& a, const Vector& b) const;

private:
    Kernel(Kind kind, std::string name, double gamma, std::optional<double> bound, Evaluator evaluate);

    Kind kind_;
    std::string name_;
    double gamma_ = 0.0;
    std::optional<double> bound_;
    Evaluator evaluate_;
};

/// Cross Gram matrix K[i][j] = k(a_i, b_j) for the rows of a and b.
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const Kernel& k);

/// Gram triple of one sample (K_xx only) or two samples.
GramTriple gram(const Sample& x, const Kernel& k);
GramTriple gram(const Sample& x, const Sample& y, const Kernel& k);

/// Test configuration for kernel data: bounded setting with L taken from
/// `user_bound` if given, else from the kernel. Throws when neither exists.
TestConfig kme_config(double eta, double alpha, Mode mode, const Kernel& k,
                      std::optional<double> user_bound = std::nullopt);

/// Mean-embedding test on raw records: U is the unbiased squared-MMD
/// estimate and the plug-in quantiles are computed from Gram matrices only.
/// Requires the bounded setting with plug-in quantiles.
TestReport kme_test(const TestConfig& cfg, const Sample& x_raw, const Sample& y_raw, const Kernel& k);
TestReport kme_test(const TestConfig& cfg, const Sample& x_raw, const Kernel& k);

/// Same from precomputed Gram matrices.
TestReport kme_test_from_gram(const TestConfig& cfg, const GramTriple& g);

}  // namespace hdmt
