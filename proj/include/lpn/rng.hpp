#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

#include "lpn/bitvec.hpp"

namespace lpn {

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view text);

/// Seed for a named lane: splitmix64(master ^ fnv1a64(label)).
std::uint64_t lane_seed(std::uint64_t master, std::string_view label);

/// mt19937_64 with distributions built directly on its raw output, so a
/// recorded seed replays identically with any standard library.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static constexpr result_type min() { return std::numeric_limits<result_type>::min(); }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer in [0, n); n > 0.
    std::uint64_t below(std::uint64_t n);
    /// Uniform vector of `len` bits.
    BitVec bits(std::size_t len);

private:
    std::mt19937_64 engine_;
};

}  // namespace lpn
