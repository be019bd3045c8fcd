#pragma once

#include <string>

#include "rislink/harness/experiments.hpp"

namespace rislink::harness {

inline constexpr const char* kToolName = "rislink";
inline constexpr const char* kToolVersion = "0.1.0";

/// Header line plus one line per row, floats at 9 significant digits.
std::string format_csv(const Table& table);

void write_csv(const Table& table, const std::string& path);

/// JSON sidecar with the experiment name, row count, tool version and the
/// SHA-256 of the resolved config.
void write_meta(const Table& table, const std::string& config_text, const std::string& path);

/// Gnuplot script for the table, referencing `csv_name` relative to its own
/// directory. Never executed.
std::string plot_script(const Table& table, const std::string& csv_name, double contour_level = 0.1);

void write_plot_script(const Table& table, const std::string& csv_name, const std::string& path,
                       double contour_level = 0.1);

}  // namespace rislink::harness
