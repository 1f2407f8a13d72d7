#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "lpn/bitvec.hpp"
#include "lpn/errors.hpp"
#include "lpn/rng.hpp"

namespace lpn {

/// Secret parity vector c; c(x) = x . c mod 2.
struct ParityTarget {
    BitVec bits;

    std::size_t size() const { return bits.size(); }
    bool operator()(const BitVec& x) const { return dot_mod2(x, bits); }
    bool operator==(const ParityTarget&) const = default;
};

/// Label flip probability, 0 <= eta < 1/2.
class NoiseRate {
public:
    explicit NoiseRate(double eta);
    double value() const { return eta_; }
    /// 1 - 2*eta.
    double correlation() const { return 1.0 - 2.0 * eta_; }

private:
    double eta_;
};

struct UniformDist {};

/// Finite support with probabilities summing to 1.
struct ExplicitDist {
    std::vector<BitVec> support;
    std::vector<double> probabilities;
};

/// Externally supplied inputs, consumed in order.
struct StreamDist {
    std::vector<BitVec> xs;
};

using Distribution = std::variant<UniformDist, ExplicitDist, StreamDist>;

struct RandomTarget {};
using TargetSpec = std::variant<ParityTarget, RandomTarget>;

struct LabeledExample {
    BitVec x;
    std::uint8_t label = 0;
    std::uint64_t index = 0;
};

/// Seeded noisy-example oracle. Independent lanes feed inputs, noise and the
/// random target, so equal seeds give identical streams.
class ExampleSource {
public:
    static ExampleSource create(std::size_t k, NoiseRate eta, Distribution distribution, std::uint64_t seed,
                                TargetSpec target);

    /// Replays recorded (already noisy) examples; the planted target may be unknown.
    static ExampleSource replay(std::size_t k, NoiseRate eta, std::vector<LabeledExample> examples,
                                std::optional<ParityTarget> target, std::uint64_t seed = 0);

    LabeledExample draw();

    std::size_t k() const { return k_; }
    NoiseRate eta() const { return eta_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t draw_count() const { return draw_count_; }
    bool has_target() const { return target_.has_value(); }
    /// Throws std::logic_error when the target is unknown.
    const ParityTarget& target() const;
    /// Remaining examples for finite streams; nullopt when unbounded.
    std::optional<std::uint64_t> remaining() const;

private:
    ExampleSource(std::size_t k, NoiseRate eta, std::uint64_t seed);

    BitVec draw_input();

    std::size_t k_;
    NoiseRate eta_;
    std::uint64_t seed_;
    std::uint64_t draw_count_ = 0;
    std::optional<ParityTarget> target_;
    Distribution distribution_;
    std::vector<double> cumulative_;
    std::vector<LabeledExample> recorded_;
    bool replaying_ = false;
    Rng input_rng_;
    Rng noise_rng_;
};

ExampleSource new_source(std::size_t k, NoiseRate eta, Distribution distribution, std::uint64_t seed,
                         TargetSpec target);

/// Fraction of the sample whose label disagrees with h.
double empirical_error(const ParityTarget& h, std::span<const LabeledExample> sample);

}  // namespace lpn
