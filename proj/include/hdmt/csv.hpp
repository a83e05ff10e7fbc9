#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdmt/model.hpp"

namespace hdmt {

/// Malformed numeric CSV; `line()` is 1-based.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& what, std::size_t line) : std::runtime_error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

struct CsvTable {
    std::vector<std::string> header;
    Matrix values;
};

/// Comma-separated numeric table, one observation per line. The first row is
/// a header when any of its cells is not a number. Blank lines are skipped.
CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Writes values with 17 significant digits, so read_csv recovers them exactly.
void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header = {});

/// Shortest round-trip representation at 17 significant digits.
std::string format_number(double value);

Sample read_sample_file(const std::string& path);
CovMatrix read_covariance_file(const std::string& path);

}  // namespace hdmt
