#include "jellynet/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace jellynet {

std::string ExperimentReport::csv() const {
    std::ostringstream out;
    out << "# experiment=" << name << '\n';
    for (const auto& [k, v] : config) out << "# " << k << '=' << v << '\n';
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

std::size_t ExperimentReport::column(const std::string& col) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == col) return i;
    throw std::out_of_range("no column " + col);
}

double ExperimentReport::number(std::size_t row, const std::string& col) const {
    return std::stod(rows.at(row).at(column(col)));
}

std::string format_real(double value, int digits) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    std::string s(buf);
    if (s == "-0." + std::string(static_cast<std::size_t>(digits), '0')) s.erase(0, 1);
    return s;
}

}  // namespace jellynet
