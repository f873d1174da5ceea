// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace rmsim::platform {

// Lattice RC model of a thermal test grid: a rows x cols array of cells,
// each with a power injector, a vertical conductance to ambient and lateral
// conductances to its 4-neighbours. Defaults follow the 4x4 / 12 W-per-cell
// test-chip geometry (192 W total).
struct ThermalConfig {
    int rows = 4;
    int cols = 4;
    double ambient_k = 318.0;
    double g_vertical_w_per_k = 0.8;  // cell -> ambient
    double g_lateral_w_per_k = 2.0;   // cell -> neighbour cell
    double heat_capacity_j_per_k = 0.5;
    double max_cell_power_w = 12.0;
};

class ThermalGrid {
public:
    explicit ThermalGrid(const ThermalConfig& cfg = {});

    int rows() const { return cfg_.rows; }
    int cols() const { return cfg_.cols; }
    int cells() const { return cfg_.rows * cfg_.cols; }
    const ThermalConfig& config() const { return cfg_; }

    // Per-cell power, clamped validated against the cell and grid budget.
    void set_power(int row, int col, double watts);
    void set_power_flat(const std::vector<double>& watts); // row-major, size cells()
    double power(int row, int col) const;
    double total_power() const;

    double temperature(int row, int col) const;
    const std::vector<double>& temperatures() const { return temp_; }
    double max_temperature() const;

    // Solves the linear network at the current power map:
    //   P_i = g_v (T_i - T_amb) + sum_j g_l (T_i - T_j)
    // Returns the 16 (rows*cols) temperatures without touching the
    // transient state.
    std::vector<double> steady_state() const;

    // Explicit first-order update over dt. Rejects dt at or above the
    // stability bound (reported in the error message).
    void step(double dt);

    // Stability limit of the explicit update: 2 C / max_i(g_v + 2 deg_i g_l).
    double stable_dt_bound() const;

    // Integrates over `duration` using stable substeps.
    void advance(double duration);

    void reset_to_ambient();

private:
    int index(int row, int col) const { return row * cfg_.cols + col; }
    std::vector<int> neighbours(int cell) const;

    ThermalConfig cfg_;
    std::vector<double> power_;
    std::vector<double> temp_;
};

} // namespace rmsim::platform
