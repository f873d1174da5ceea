// Copyright 2026 the rmsim authors
// SPDX-License-Identifier: Apache-2.0

#include "core/rng.hpp"

#include <cassert>
#include <cmath>

namespace rmsim::engine {

namespace {

// splitmix64, used to decorrelate the user seed from the stream hash.
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t hash_stream_id(std::string_view id) {
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : id) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::string_view stream_id)
    : seed_(seed), stream_id_(stream_id) {
    std::uint64_t s = splitmix64(seed ^ hash_stream_id(stream_id));
    // Warm the Mersenne state with a couple of mixed words via seed_seq-free
    // seeding: a single splitmix pass is enough to avoid correlated states
    // for adjacent (seed, id) pairs.
    gen_.seed(splitmix64(s));
}

std::uint64_t RngStream::next_u64() {
    return gen_();
}

double RngStream::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double a, double b) {
    return a + (b - a) * uniform01();
}

double RngStream::uniform_signed() {
    return -1.0 + 2.0 * uniform01();
}

double RngStream::exponential(double mean) {
    assert(mean > 0.0);
    // uniform01 < 1, so the log argument is in (0, 1].
    return -mean * std::log1p(-uniform01());
}

} // namespace rmsim::engine
