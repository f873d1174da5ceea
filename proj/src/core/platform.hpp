// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rmsim::platform {

enum class DeviceKind { Cpu, Gpu, Manycore, Fpga };

const char* to_string(DeviceKind kind);
DeviceKind device_kind_from_string(std::string_view name);

struct Device {
    std::int64_t id = 0;
    std::string name;
    DeviceKind kind = DeviceKind::Cpu;
    std::int64_t node = 0;          // index into Topology::nodes()
    double speed_factor = 1.0;      // multiplier on kernel base time (> 0)
    double idle_w = 0.0;
    double busy_w = 0.0;
};

struct Node {
    std::int64_t id = 0;
    std::string name;
    std::vector<std::int64_t> devices; // device ids attached to this node
};

// Cluster description: nodes with attached devices plus the all-pairs hop
// matrix. The matrix must be symmetric with zero diagonal and satisfy the
// triangle inequality; a negative entry marks a missing (disconnected) pair.
class Topology {
public:
    Topology(std::vector<Node> nodes, std::vector<Device> devices,
             std::vector<std::vector<int>> hops);

    static Topology from_json(const nlohmann::json& j);
    static Topology load_file(const std::string& path);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Device>& devices() const { return devices_; }
    const Device& device(std::int64_t id) const;
    int hops(std::int64_t node_a, std::int64_t node_b) const;

private:
    void validate() const;

    std::vector<Node> nodes_;
    std::vector<Device> devices_; // indexed by device id
    std::vector<std::vector<int>> hops_;
};

enum class DeviceStatus { Free, Busy };

struct ViewEntry {
    Device device;
    int hops = 0;
    DeviceStatus status = DeviceStatus::Free;
};

// The per-node view of every device in the system. All observers see the
// same device set; only the hop costs differ.
struct GlobalResourceView {
    std::int64_t observer = 0;
    std::vector<ViewEntry> entries;
};

// Computes one view per node from the topology description. The discovery
// protocol itself is not simulated; the artifact consumed by scheduling is
// the view plus its access costs.
std::vector<GlobalResourceView> discover(const Topology& topo);

// Hop count from the view's observer to the device. Throws on unknown ids.
int comm_cost(const GlobalResourceView& view, std::int64_t device_id);

} // namespace rmsim::platform
