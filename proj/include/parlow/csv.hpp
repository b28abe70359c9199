#pragma once

// Headerless numeric CSV: comma separated, one matrix row per line. Reading
// is strict: every row needs the same field count and every field must be a
// complete finite number. Writing round-trips doubles exactly via %.17g.

#include <parlow/types.hpp>

#include <Eigen/Core>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace parlow {

namespace detail {

inline double parse_csv_field(const std::string& field, const std::string& where) {
    size_t b = 0, e = field.size();
    while (b < e && (field[b] == ' ' || field[b] == '\t')) ++b;
    while (e > b && (field[e - 1] == ' ' || field[e - 1] == '\t')) --e;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data() + b, field.data() + e, value);
    if (ec != std::errc() || ptr != field.data() + e || b == e) {
        throw std::invalid_argument(where + ": bad numeric field '" + field + "'");
    }
    return value;
}

}  // namespace detail

inline Matrix read_csv(std::istream& in, const std::string& name = "csv") {
    std::vector<std::vector<double>> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            throw std::invalid_argument(name + ": blank line " + std::to_string(lineno));
        }
        const std::string where = name + " line " + std::to_string(lineno);
        std::vector<double> row;
        size_t start = 0;
        while (true) {
            const size_t comma = line.find(',', start);
            const std::string field = comma == std::string::npos
                                          ? line.substr(start)
                                          : line.substr(start, comma - start);
            row.push_back(detail::parse_csv_field(field, where));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::invalid_argument(where + ": expected " +
                                        std::to_string(rows.front().size()) +
                                        " fields, got " + std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw std::invalid_argument(name + ": no data rows");
    }
    Matrix m(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
    }
    return m;
}

inline Matrix read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("read_csv_file: cannot open '" + path + "'");
    }
    return read_csv(in, path);
}

inline std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_csv(std::ostream& out, const Matrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

inline void write_csv_file(const std::string& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("write_csv_file: cannot open '" + path + "'");
    }
    write_csv(out, m);
    if (!out) {
        throw std::runtime_error("write_csv_file: write failed for '" + path + "'");
    }
}

}  // namespace parlow
