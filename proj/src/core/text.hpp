// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <string>

namespace rmsim {

// Shortest round-trip decimal representation of a double. Used everywhere a
// number ends up in a file so re-runs are byte-identical and charts can
// carry exactly the values the CSVs carry.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace rmsim
