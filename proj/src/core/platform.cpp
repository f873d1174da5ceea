// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/platform.hpp"

#include <fstream>
#include <sstream>

#include "core/errors.hpp"

namespace rmsim::platform {

const char* to_string(DeviceKind kind) {
    switch (kind) {
        case DeviceKind::Cpu: return "CPU";
        case DeviceKind::Gpu: return "GPU";
        case DeviceKind::Manycore: return "MANYCORE";
        case DeviceKind::Fpga: return "FPGA";
    }
    return "?";
}

DeviceKind device_kind_from_string(std::string_view name) {
    if (name == "CPU") return DeviceKind::Cpu;
    if (name == "GPU") return DeviceKind::Gpu;
    if (name == "MANYCORE") return DeviceKind::Manycore;
    if (name == "FPGA") return DeviceKind::Fpga;
    throw ConfigError("unknown device kind '" + std::string(name) +
                      "' (expected CPU|GPU|MANYCORE|FPGA)");
}

Topology::Topology(std::vector<Node> nodes, std::vector<Device> devices,
                   std::vector<std::vector<int>> hops)
    : nodes_(std::move(nodes)), devices_(std::move(devices)), hops_(std::move(hops)) {
    validate();
}

void Topology::validate() const {
    const std::size_t n = nodes_.size();
    if (n == 0) throw ConfigError("topology: at least one node required");
    if (hops_.size() != n) throw ConfigError("topology: hop matrix must be NxN (missing rows)");
    for (std::size_t i = 0; i < n; ++i) {
        if (hops_[i].size() != n)
            throw ConfigError("topology: hop matrix must be NxN (row " + std::to_string(i) +
                              " has wrong length)");
        for (std::size_t j = 0; j < n; ++j) {
            if (hops_[i][j] < 0)
                throw ConfigError("topology: missing hop entry between node " + std::to_string(i) +
                                  " and node " + std::to_string(j) + " (disconnected)");
        }
        if (hops_[i][i] != 0) throw ConfigError("topology: hop matrix diagonal must be zero");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (hops_[i][j] != hops_[j][i])
                throw ConfigError("topology: hop matrix must be symmetric");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (hops_[i][j] > hops_[i][k] + hops_[k][j])
                    throw ConfigError("topology: hop matrix violates the triangle inequality");

    for (std::size_t d = 0; d < devices_.size(); ++d) {
        const Device& dev = devices_[d];
        if (dev.id != static_cast<std::int64_t>(d))
            throw ConfigError("topology: device ids must be dense and ordered");
        if (dev.node < 0 || dev.node >= static_cast<std::int64_t>(n))
            throw ConfigError("topology: device '" + dev.name + "' references unknown node");
        if (!(dev.speed_factor > 0.0))
            throw ConfigError("topology: device '" + dev.name + "' needs speed_factor > 0");
        if (dev.idle_w < 0.0 || dev.busy_w < 0.0)
            throw ConfigError("topology: device '" + dev.name + "' has negative power");
    }
}

const Device& Topology::device(std::int64_t id) const {
    if (id < 0 || id >= static_cast<std::int64_t>(devices_.size()))
        throw Error("unknown device id " + std::to_string(id));
    return devices_[static_cast<std::size_t>(id)];
}

int Topology::hops(std::int64_t a, std::int64_t b) const {
    if (a < 0 || b < 0 || a >= static_cast<std::int64_t>(nodes_.size()) ||
        b >= static_cast<std::int64_t>(nodes_.size()))
        throw Error("hop lookup outside topology");
    return hops_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
}

Topology Topology::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes") || !j.contains("hops"))
        throw ConfigError("topology: expected {nodes:[...], hops:[[...]]}");

    std::vector<Node> nodes;
    std::vector<Device> devices;
    for (const auto& jn : j.at("nodes")) {
        Node node;
        node.id = static_cast<std::int64_t>(nodes.size());
        node.name = jn.contains("id") ? jn.at("id").is_string()
                                            ? jn.at("id").get<std::string>()
                                            : std::to_string(jn.at("id").get<std::int64_t>())
                                      : "node" + std::to_string(node.id);
        for (const auto& jd : jn.value("devices", nlohmann::json::array())) {
            Device dev;
            dev.id = static_cast<std::int64_t>(devices.size());
            dev.name = jd.contains("id") ? jd.at("id").is_string()
                                               ? jd.at("id").get<std::string>()
                                               : std::to_string(jd.at("id").get<std::int64_t>())
                                         : node.name + "/dev" + std::to_string(node.devices.size());
            dev.kind = device_kind_from_string(jd.at("kind").get<std::string>());
            dev.node = node.id;
            dev.speed_factor = jd.value("speed_factor", 1.0);
            dev.idle_w = jd.value("idle_w", 0.0);
            dev.busy_w = jd.value("busy_w", 0.0);
            node.devices.push_back(dev.id);
            devices.push_back(std::move(dev));
        }
        nodes.push_back(std::move(node));
    }

    std::vector<std::vector<int>> hops;
    for (const auto& row : j.at("hops")) {
        std::vector<int> r;
        for (const auto& v : row) r.push_back(v.get<int>());
        hops.push_back(std::move(r));
    }
    return Topology(std::move(nodes), std::move(devices), std::move(hops));
}

Topology Topology::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("topology: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("topology: invalid JSON in '" + path + "': " + e.what());
    }
    return from_json(j);
}

std::vector<GlobalResourceView> discover(const Topology& topo) {
    std::vector<GlobalResourceView> views;
    views.reserve(topo.nodes().size());
    for (const Node& node : topo.nodes()) {
        GlobalResourceView view;
        view.observer = node.id;
        view.entries.reserve(topo.devices().size());
        for (const Device& dev : topo.devices())
            view.entries.push_back(ViewEntry{dev, topo.hops(node.id, dev.node), DeviceStatus::Free});
        views.push_back(std::move(view));
    }
    return views;
}

int comm_cost(const GlobalResourceView& view, std::int64_t device_id) {
    for (const ViewEntry& e : view.entries)
        if (e.device.id == device_id) return e.hops;
    throw Error("comm_cost: device id " + std::to_string(device_id) + " not present in view");
}

} // namespace rmsim::platform
