// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace rmsim::svg {

// Self-contained SVG emitters, so reports need no external renderer. Every
// plotted datum carries a data-value attribute holding exactly the number
// written to the matching CSV; charts are views of the CSVs, never
// recomputations.

struct Series {
    std::string name;
    std::vector<std::pair<double, double>> points; // (x, y)
};

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label, const std::vector<Series>& series);

struct BarGroup {
    std::string label;                                 // group label (x axis)
    std::vector<std::pair<std::string, double>> bars;  // (series name, value)
};

std::string grouped_bar_chart(const std::string& title, const std::string& y_label,
                              const std::vector<BarGroup>& groups);

} // namespace rmsim::svg
