// Copyright 2026 The bosedyn Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file report.hpp
 * @brief CSV tables and a minimal SVG line-plot emitter.
 */

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace bosedyn::report {

struct Column {
  std::string name;
  std::vector<double> values;
};

/// Header row then one row per index, full round-trip precision. All
/// columns must have equal length.
void write_csv(const std::filesystem::path& path, const std::vector<Column>& columns);

/// Polyline plot of every series against x, with axis extents and a legend.
/// Non-finite points are skipped.
std::string svg_line_plot(const std::string& title, const Column& x, const std::vector<Column>& series);

void write_text(const std::filesystem::path& path, const std::string& text);

/// Rounds to `digits` significant digits (non-finite values pass through).
double round_significant(double value, int digits = 12);

}  // namespace bosedyn::report
