#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hdmt/cli.hpp"
#include "hdmt/csv.hpp"
#include "hdmt/report.hpp"
#include "hdmt/simulate.hpp"

using namespace hdmt;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "hdmt");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("hdmt_cli_" + name)).string();
}

std::string write_file(const std::string& name, const std::string& body) {
    const std::string path = temp_path(name);
    std::ofstream(path) << body;
    return path;
}

std::string write_matrix(const std::string& name, const Matrix& m) {
    const std::string path = temp_path(name);
    std::ofstream f(path);
    write_csv(f, m);
    return path;
}

Matrix cloud(std::uint64_t stream, Eigen::Index n, Eigen::Index d, double shift) {
    RngStream rng(71, stream);
    Vector mean = Vector::Zero(d);
    mean(0) = shift;
    return sample_gaussian(mean, Matrix::Identity(d, d), static_cast<std::size_t>(n), rng).data();
}

std::vector<std::vector<std::string>> parse_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream cs(line);
        while (std::getline(cs, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

}  // namespace

TEST(CliTest, ZeroDataAcceptsWithZeroU) {
    const std::string x = write_file("zeros.csv", "a,b\n0,0\n0,0\n0,0\n0,0\n0,0\n");
    const CliRun r = run({"test", "--mode", "one", "--alpha", "0.05", "--eta", "0", "--setting", "gaussian", "--plugin", x});
    EXPECT_EQ(r.code, 0) << r.err;
    const Json doc = Json::parse(r.out);
    EXPECT_EQ(doc.at("u_stat").get<double>(), 0.0);
    EXPECT_FALSE(doc.at("reject").get<bool>());
    EXPECT_NE(r.err.find("accept"), std::string::npos);
}

TEST(CliTest, LargeShiftRejectsWithExitOne) {
    const std::string x = write_matrix("shifted.csv", cloud(0, 100, 3, 5.0));
    const CliRun r = run({"test", "--isotropic", "3", x});
    EXPECT_EQ(r.code, 1) << r.err;
    const Json doc = Json::parse(r.out);
    EXPECT_TRUE(doc.at("reject").get<bool>());
    EXPECT_EQ(doc.at("quantile_source").get<std::string>(), "oracle");
}

TEST(CliTest, KernelDispatch) {
    const std::string x = write_matrix("kx.csv", cloud(1, 30, 2, 0.0));
    const std::string y = write_matrix("ky.csv", cloud(2, 30, 2, 0.0));
    const CliRun r = run({"test", "--mode", "two", "--setting", "bounded", "--bound", "1", "--kernel", "rbf:0.5", x, y});
    EXPECT_EQ(r.code, 0) << r.err;
    const Json doc = Json::parse(r.out);
    EXPECT_EQ(doc.at("kernel").get<std::string>(), "rbf:0.5");
    EXPECT_EQ(doc.at("setting").get<std::string>(), "bounded");
    EXPECT_EQ(run({"test", "--mode", "two", "--setting", "gaussian", "--kernel", "rbf:1", x, y}).code, 2);
    EXPECT_EQ(run({"test", "--mode", "two", "--kernel", "linear", x, y}).code, 2);
}

TEST(CliTest, InvalidAlphaNamesTheFlag) {
    const std::string x = write_file("small.csv", "1,2\n3,4\n5,6\n7,8\n");
    const CliRun r = run({"test", "--alpha", "1.5", x});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--alpha"), std::string::npos);
}

TEST(CliTest, MalformedCsvReportsLine) {
    const std::string x = write_file("bad.csv", "1,2\n3,4\n5,x\n");
    const CliRun r = run({"test", x});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 3"), std::string::npos);
    const std::string ragged = write_file("ragged.csv", "1,2\n3\n");
    EXPECT_EQ(run({"test", ragged}).code, 2);
    EXPECT_EQ(run({"test", temp_path("missing.csv")}).code, 2);
}

TEST(CliTest, UsageErrorsExitTwo) {
    const std::string x = write_file("ok.csv", "1,2\n3,4\n5,6\n7,8\n");
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"test", "--bogus", x}).code, 2);
    EXPECT_EQ(run({"test", "--mode", "two", x}).code, 2);
    EXPECT_EQ(run({"test", "--plugin", "--isotropic", "2", x}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(CliTest, AlphaGridReportsSmallestRejectingLevel) {
    const std::string x = write_matrix("grid.csv", cloud(3, 100, 3, 5.0));
    const CliRun r = run({"test", "--isotropic", "3", "--alpha-grid", "0.1", "--alpha-grid", "0.001", x});
    const Json doc = Json::parse(r.out);
    EXPECT_DOUBLE_EQ(doc.at("smallest_rejecting_alpha").get<double>(), 0.001);
}

TEST(CliTest, OutFlagWritesFile) {
    const std::string x = write_file("zeros2.csv", "0,0\n0,0\n0,0\n0,0\n");
    const std::string out = temp_path("report.json");
    std::filesystem::remove(out);
    const CliRun r = run({"test", "--out", out, x});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(out);
    EXPECT_EQ(Json::parse(f).at("u_stat").get<double>(), 0.0);
}

TEST(CliSimulate, RepeatedSeedIsByteIdentical) {
    const std::string cfg = write_file("sim.json", R"({"mode": "one", "d": [4, 8], "n": 40, "alpha": 0.1,
        "eta": [0, 0.5], "delta": [0, "guaranteed"], "quantiles": "plugin"})");
    const CliRun a = run({"simulate", "--config", cfg, "--seed", "5", "--trials", "50", "--threads", "1"});
    const CliRun b = run({"simulate", "--config", cfg, "--seed", "5", "--trials", "50", "--threads", "3"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto rows = parse_rows(a.out);
    ASSERT_EQ(rows.size(), 1u + 2 * 2 * 2);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"d", "n", "alpha", "eta", "delta", "type1_hat", "type2_hat", "ci",
                                                 "seed"}));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!rows[i][5].empty()) {
            EXPECT_LE(std::stod(rows[i][5]), 0.3 + std::stod(rows[i][7]));
        }
    }
}

TEST(CliSimulate, MissingSeedAndBadConfigExitTwo) {
    const std::string cfg = write_file("sim2.json", R"({"d": 4, "n": 40})");
    EXPECT_EQ(run({"simulate", "--config", cfg}).code, 2);
    const std::string unknown = write_file("sim3.json", R"({"d": 4, "n": 40, "colour": 1})");
    EXPECT_EQ(run({"simulate", "--config", unknown, "--seed", "1"}).code, 2);
    const std::string broken = write_file("sim4.json", "{ not json");
    EXPECT_EQ(run({"simulate", "--config", broken, "--seed", "1"}).code, 2);
    EXPECT_EQ(run({"simulate", "--config", temp_path("absent.json"), "--seed", "1"}).code, 2);
}

TEST(CliSimulate, ThreadsEnvironmentFallback) {
    const std::string cfg = write_file("sim5.json", R"({"d": 3, "n": 30, "delta": 0})");
    ::setenv("HDMT_THREADS", "banana", 1);
    EXPECT_EQ(run({"simulate", "--config", cfg, "--seed", "2", "--trials", "20"}).code, 2);
    ::setenv("HDMT_THREADS", "2", 1);
    const CliRun env = run({"simulate", "--config", cfg, "--seed", "2", "--trials", "20"});
    ::unsetenv("HDMT_THREADS");
    EXPECT_EQ(env.code, 0);
    EXPECT_EQ(env.out, run({"simulate", "--config", cfg, "--seed", "2", "--trials", "20", "--threads", "1"}).out);
}

TEST(CliSeparation, IsotropicSixteenLowerBound) {
    const CliRun r = run({"separation", "--isotropic", "16", "--n", "100", "--alpha", "0.05", "--eta", "0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_rows(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0][6], "delta_lower");
    EXPECT_NEAR(std::stod(rows[1][6]), 0.0562731433871137739, 1e-15);
    EXPECT_NE(r.err.find("universal constant"), std::string::npos);
}

TEST(CliSeparation, BlankLowerBoundBelowThreeEffectiveDims) {
    const std::string cov = write_file("diag411.csv", "4,0,0\n0,1,0\n0,0,1\n");
    const CliRun r = run({"separation", "--oracle-cov", cov, "--n", "100"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_rows(r.out);
    EXPECT_TRUE(rows[1][6].empty());
    EXPECT_NEAR(std::stod(rows[1][8]), 0.548458279710185473, 1e-14);
}

TEST(CliSeparation, ScaleMultipliesDeltas) {
    const std::string cov = write_file("diag5.csv", "3,0,0,0\n0,2,0,0\n0,0,1,0\n0,0,0,1\n");
    const auto base = parse_rows(run({"separation", "--oracle-cov", cov, "--n", "50,500"}).out);
    const auto scaled = parse_rows(run({"separation", "--oracle-cov", cov, "--scale", "4", "--n", "50,500"}).out);
    ASSERT_EQ(base.size(), 3u);
    for (std::size_t i = 1; i < base.size(); ++i) {
        for (std::size_t c : {3u, 6u, 7u, 8u}) {
            if (base[i][c].empty()) continue;
            EXPECT_NEAR(std::stod(scaled[i][c]), 2.0 * std::stod(base[i][c]), 1e-12 * std::stod(scaled[i][c]));
        }
    }
}

TEST(CliSeparation, NonPsdCovarianceExitsTwo) {
    const std::string cov = write_file("indef.csv", "1,2\n2,1\n");
    EXPECT_EQ(run({"separation", "--oracle-cov", cov}).code, 2);
    EXPECT_EQ(run({"separation"}).code, 2);
}

TEST(CliSeparation, TwoSampleAddsColumn) {
    const CliRun r = run({"separation", "--mode", "two", "--isotropic", "8", "--n", "100", "--m", "50,200"});
    const auto rows = parse_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].back(), "m");
    EXPECT_EQ(rows[2].back(), "200");
}

TEST(CliCoverage, ProducesPassingRows) {
    const CliRun r = run({"coverage", "--estimator", "op_norm", "--n", "100", "--trials", "100", "--seed", "3",
                       "--u", "2,3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = parse_rows(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].back(), "true");
    EXPECT_EQ(run({"coverage", "--trials", "100"}).code, 2);
    EXPECT_EQ(run({"coverage", "--seed", "1", "--estimator", "nope"}).code, 2);
}
