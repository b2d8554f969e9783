#ifndef SFADE_IO_HPP
#define SFADE_IO_HPP

// Table writers shared by the CLI: RFC 4180 CSV (CRLF line endings, quoted
// fields where needed, numbers at 17 significant digits) and the equivalent
// JSON encoding.

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sfade {

using TableCell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<TableCell>> rows;
};

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string cell_text(const TableCell& c) {
    if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
    if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
    return csv_escape(std::get<std::string>(c));
}

} // namespace detail

inline void write_csv(const Table& t, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out << ',';
        out << detail::csv_escape(t.columns[i]);
    }
    out << "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << detail::cell_text(row[i]);
        }
        out << "\r\n";
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline nlohmann::json table_to_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
            const auto& cell = row[i];
            if (std::holds_alternative<double>(cell))
                obj[t.columns[i]] = std::get<double>(cell);
            else if (std::holds_alternative<long long>(cell))
                obj[t.columns[i]] = std::get<long long>(cell);
            else
                obj[t.columns[i]] = std::get<std::string>(cell);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

/// Dump a dense matrix as CSV, row-major, 17 significant digits.
template <class Derived>
void write_matrix_csv(const Eigen::MatrixBase<Derived>& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << format_number(m(i, j));
        }
        out << "\r\n";
    }
}

} // namespace sfade

#endif
