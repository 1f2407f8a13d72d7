#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "lpn/bitvec.hpp"
#include "lpn/errors.hpp"
#include "lpn/instance.hpp"
#include "lpn/rng.hpp"

namespace lpn {

/// One vector of an i-sample with its folded label. `provenance` is the
/// XOR-set (sorted draw indices) of the original examples summed into it,
/// kept only when tracking is on.
struct SampleEntry {
    BitVec vector;
    std::uint8_t label = 0;
    std::vector<std::uint64_t> provenance;
};

/// Vectors uniform over V_level: the last `level` blocks are zero.
struct ISample {
    std::size_t level = 0;
    BlockLayout layout;
    bool track_provenance = false;
    std::vector<SampleEntry> entries;
};

bool in_subspace(const BitVec& v, const BlockLayout& layout, std::size_t level);

/// Builds a 0-sample; examples are zero-padded to layout.length().
ISample make_zero_sample(const BlockLayout& layout, std::span<const LabeledExample> examples, bool track_provenance);

/// Chooses the representative of a class of the given size; returns an index in [0, size).
using RepresentativePicker = std::function<std::size_t(std::size_t class_size)>;

/// Zeroes block (blocks - level) by XORing a representative into each classmate.
/// Output classes appear in increasing block value, members in input order.
ISample merge_step(const ISample& input, const RepresentativePicker& pick);
ISample merge_step(const ISample& input, Rng& rng);

/// XOR-set union of two sorted index sets.
std::vector<std::uint64_t> symmetric_difference(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b);

/// Probability that the XOR of s noisy labels equals the true parity: 1/2 + 1/2 (1-2 eta)^s.
double predicted_bias(NoiseRate eta, std::size_t s);

/// Monte Carlo estimate of the same probability from s independent flips per trial.
double xor_chain_oracle(NoiseRate eta, std::size_t s, std::uint64_t trials, std::uint64_t seed);

inline constexpr std::size_t kMleMaxBits = 24;

/// Exhaustive maximum-likelihood parity: argmin of empirical error over all
/// 2^k candidates, ties to the numerically smallest candidate.
ParityTarget mle_bruteforce(std::span<const LabeledExample> samples, std::size_t k);

enum class ParameterProfile {
    Balanced,  // a = round(lg(k)/2)
    LogLog,    // a = ceil(lg(lg(n))/2)
};

struct SolverConfig {
    BlockLayout layout;
    double delta = 0.1;
    std::optional<std::size_t> repetitions;  // nullopt = automatic
    std::uint64_t max_examples = 0;          // 0 = unlimited
    bool track_provenance = false;
    std::uint64_t seed = 0;                  // representative selection
    std::size_t max_redraws = 50;
};

/// ceil(2 ln(2k/delta) / (1-2 eta)^(2^a)).
std::size_t auto_repetitions(std::size_t k, NoiseRate eta, double delta, std::size_t blocks);

/// `n` is the ambient input length used by the LogLog profile; 0 means k.
SolverConfig choose_parameters(std::size_t k, NoiseRate eta, double delta,
                               ParameterProfile profile = ParameterProfile::Balanced, std::size_t n = 0);

struct VoteTally {
    std::size_t ones = 0;
    std::size_t zeros = 0;

    std::size_t total() const { return ones + zeros; }
    std::uint8_t majority() const { return ones > zeros ? 1 : 0; }
};

/// One pipeline pass that found (1,0,...,0).
struct Vote {
    std::uint8_t bit = 0;
    std::size_t depth = 0;          // |provenance| when tracked, else 2^(a-1)
    std::uint64_t first_index = 0;  // draw indices consumed, including discarded passes
    std::uint64_t last_index = 0;
    std::vector<std::uint64_t> provenance;
};

struct BitRecovery {
    std::uint8_t bit = 0;
    VoteTally votes;
    std::vector<Vote> vote_log;
};

/// Draws blocks*2^width examples, rotates each by `shift` after padding,
/// runs blocks-1 merges and returns the label of (1,0,...,0) if present.
std::optional<Vote> vote_pass(ExampleSource& source, const SolverConfig& config, Rng& rng, std::size_t shift = 0);

/// A vote from fresh passes, redrawing up to config.max_redraws times.
Vote cast_vote(ExampleSource& source, const SolverConfig& config, Rng& rng, std::size_t shift = 0);

/// Majority over `repetitions` votes for coordinate shift+1 (default: coordinate 1).
BitRecovery recover_first_bit(ExampleSource& source, const SolverConfig& config, std::size_t shift = 0);

enum class SolveStatus { Recovered, BudgetExceeded };

struct SolverResult {
    ParityTarget c_hat;
    std::uint64_t examples_used = 0;
    double wall_time_ms = 0.0;
    std::vector<VoteTally> per_bit_votes;
    SolveStatus status = SolveStatus::Recovered;
    std::size_t repetitions = 0;
};

SolverResult recover_target(ExampleSource& source, const SolverConfig& config);

}  // namespace lpn
