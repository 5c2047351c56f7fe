#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace jellynet {

/// Tabular experiment output. Every row carries the seeds that produced it.
struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    double wall_time_seconds = 0.0;

    /// Config echo as `# key=value` lines, then the header and rows. Wall
    /// time is excluded so identical configs give identical bytes.
    std::string csv() const;

    /// Column index by name; throws if absent.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& col) const;
};

/// Fixed-precision decimal used for every real-valued CSV cell.
std::string format_real(double value, int digits = 6);

}  // namespace jellynet
