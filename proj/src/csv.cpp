#include "hdmt/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

namespace hdmt {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = split(line);
        std::vector<double> row;
        row.reserve(cells.size());
        std::optional<std::size_t> bad;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const auto v = parse_number(cells[c]);
            if (!v) {
                if (!bad) bad = c;
                continue;
            }
            row.push_back(*v);
        }
        if (first) {
            first = false;
            width = cells.size();
            if (bad) {
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    if (cells[c].empty()) {
                        std::ostringstream msg;
                        msg << "line " << line_no << ": empty header cell in column " << (c + 1);
                        throw CsvError(msg.str(), line_no);
                    }
                }
                table.header = cells;
                continue;
            }
        }
        if (bad) {
            std::ostringstream msg;
            msg << "line " << line_no << ": non-numeric cell '" << cells[*bad] << "' in column " << (*bad + 1);
            throw CsvError(msg.str(), line_no);
        }
        if (cells.size() != width) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected " << width << " columns, found " << cells.size();
            throw CsvError(msg.str(), line_no);
        }
        rows.push_back(std::move(row));
    }
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return read_csv(in);
    } catch (const CsvError& e) {
        throw CsvError(path + ": " + e.what(), e.line());
    }
}

std::string format_number(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

void write_csv(std::ostream& out, const Matrix& values, const std::vector<std::string>& header) {
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
        out << '\n';
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) out << (j ? "," : "") << format_number(values(i, j));
        out << '\n';
    }
}

Sample read_sample_file(const std::string& path) {
    CsvTable table = read_csv_file(path);
    if (table.values.rows() == 0) throw std::runtime_error("'" + path + "' contains no observations");
    return Sample(std::move(table.values));
}

CovMatrix read_covariance_file(const std::string& path) {
    CsvTable table = read_csv_file(path);
    if (table.values.rows() != table.values.cols()) {
        std::ostringstream msg;
        msg << "'" << path << "' is not a square matrix (" << table.values.rows() << " x " << table.values.cols()
            << ")";
        throw std::runtime_error(msg.str());
    }
    return CovMatrix::checked(std::move(table.values));
}

}  // namespace hdmt
