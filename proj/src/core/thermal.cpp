// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace rmsim::platform {

ThermalGrid::ThermalGrid(const ThermalConfig& cfg) : cfg_(cfg) {
    if (cfg_.rows <= 0 || cfg_.cols <= 0)
        throw ConfigError("thermal: grid dimensions must be positive");
    if (!(cfg_.g_vertical_w_per_k > 0.0) || !(cfg_.g_lateral_w_per_k > 0.0))
        throw ConfigError("thermal: conductances must be positive");
    if (!(cfg_.heat_capacity_j_per_k > 0.0))
        throw ConfigError("thermal: heat capacity must be positive");
    power_.assign(static_cast<std::size_t>(cells()), 0.0);
    temp_.assign(static_cast<std::size_t>(cells()), cfg_.ambient_k);
}

void ThermalGrid::set_power(int row, int col, double watts) {
    if (row < 0 || row >= cfg_.rows || col < 0 || col >= cfg_.cols)
        throw Error("thermal: cell out of range");
    if (watts < 0.0) throw ConfigError("thermal: cell power must be non-negative");
    if (watts > cfg_.max_cell_power_w) {
        std::ostringstream msg;
        msg << "thermal: cell power " << watts << " W exceeds per-cell limit "
            << cfg_.max_cell_power_w << " W";
        throw ConfigError(msg.str());
    }
    power_[static_cast<std::size_t>(index(row, col))] = watts;
}

void ThermalGrid::set_power_flat(const std::vector<double>& watts) {
    if (watts.size() != power_.size())
        throw Error("thermal: power map size mismatch");
    for (int r = 0; r < cfg_.rows; ++r)
        for (int c = 0; c < cfg_.cols; ++c)
            set_power(r, c, watts[static_cast<std::size_t>(index(r, c))]);
}

double ThermalGrid::power(int row, int col) const {
    return power_[static_cast<std::size_t>(index(row, col))];
}

double ThermalGrid::total_power() const {
    double sum = 0.0;
    for (double p : power_) sum += p;
    return sum;
}

double ThermalGrid::temperature(int row, int col) const {
    return temp_[static_cast<std::size_t>(index(row, col))];
}

double ThermalGrid::max_temperature() const {
    return *std::max_element(temp_.begin(), temp_.end());
}

std::vector<int> ThermalGrid::neighbours(int cell) const {
    const int r = cell / cfg_.cols;
    const int c = cell % cfg_.cols;
    std::vector<int> out;
    if (r > 0) out.push_back(index(r - 1, c));
    if (r + 1 < cfg_.rows) out.push_back(index(r + 1, c));
    if (c > 0) out.push_back(index(r, c - 1));
    if (c + 1 < cfg_.cols) out.push_back(index(r, c + 1));
    return out;
}

std::vector<double> ThermalGrid::steady_state() const {
    // Assemble (g_v I + g_l L) T' = P with T' = T - T_amb, L the lattice
    // Laplacian, then solve by Gaussian elimination with partial pivoting.
    // The system is small (16 unknowns for the default grid).
    const int n = cells();
    std::vector<std::vector<double>> a(static_cast<std::size_t>(n),
                                       std::vector<double>(static_cast<std::size_t>(n) + 1, 0.0));
    for (int i = 0; i < n; ++i) {
        auto& row = a[static_cast<std::size_t>(i)];
        const auto nb = neighbours(i);
        row[static_cast<std::size_t>(i)] =
            cfg_.g_vertical_w_per_k + cfg_.g_lateral_w_per_k * static_cast<double>(nb.size());
        for (int j : nb) row[static_cast<std::size_t>(j)] -= cfg_.g_lateral_w_per_k;
        row[static_cast<std::size_t>(n)] = power_[static_cast<std::size_t>(i)];
    }

    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::fabs(a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::fabs(a[static_cast<std::size_t>(pivot)][static_cast<std::size_t>(col)]))
                pivot = r;
        std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
        const double diag = a[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
        if (std::fabs(diag) < 1e-300) throw Error("thermal: singular steady-state system");
        for (int r = col + 1; r < n; ++r) {
            const double f =
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] / diag;
            if (f == 0.0) continue;
            for (int c2 = col; c2 <= n; ++c2)
                a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] -=
                    f * a[static_cast<std::size_t>(col)][static_cast<std::size_t>(c2)];
        }
    }
    std::vector<double> t(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double acc = a[static_cast<std::size_t>(r)][static_cast<std::size_t>(n)];
        for (int c2 = r + 1; c2 < n; ++c2)
            acc -= a[static_cast<std::size_t>(r)][static_cast<std::size_t>(c2)] *
                   t[static_cast<std::size_t>(c2)];
        t[static_cast<std::size_t>(r)] =
            acc / a[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)];
    }
    for (double& v : t) v += cfg_.ambient_k;
    return t;
}

double ThermalGrid::stable_dt_bound() const {
    const int max_deg = (cfg_.rows > 1 ? 2 : 0) + (cfg_.cols > 1 ? 2 : 0);
    const double lambda_max =
        cfg_.g_vertical_w_per_k + 2.0 * cfg_.g_lateral_w_per_k * static_cast<double>(max_deg);
    return 2.0 * cfg_.heat_capacity_j_per_k / lambda_max;
}

void ThermalGrid::step(double dt) {
    if (!(dt > 0.0)) throw Error("thermal: dt must be positive");
    const double bound = stable_dt_bound();
    if (dt >= bound) {
        std::ostringstream msg;
        msg << "thermal: dt=" << dt << " s is unstable for the explicit update; require dt < "
            << bound << " s";
        throw Error(msg.str());
    }
    std::vector<double> next = temp_;
    for (int i = 0; i < cells(); ++i) {
        const double ti = temp_[static_cast<std::size_t>(i)];
        double flux = power_[static_cast<std::size_t>(i)] -
                      cfg_.g_vertical_w_per_k * (ti - cfg_.ambient_k);
        for (int j : neighbours(i))
            flux -= cfg_.g_lateral_w_per_k * (ti - temp_[static_cast<std::size_t>(j)]);
        next[static_cast<std::size_t>(i)] = ti + dt / cfg_.heat_capacity_j_per_k * flux;
    }
    temp_ = std::move(next);
}

void ThermalGrid::advance(double duration) {
    if (duration <= 0.0) return;
    const double dt = 0.5 * stable_dt_bound();
    double remaining = duration;
    while (remaining > 1e-12) {
        const double h = std::min(dt, remaining);
        step(h);
        remaining -= h;
    }
}

void ThermalGrid::reset_to_ambient() {
    std::fill(temp_.begin(), temp_.end(), cfg_.ambient_k);
}

} // namespace rmsim::platform
