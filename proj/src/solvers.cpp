#include "lpn/solvers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace lpn {

namespace {

constexpr std::size_t kMaxBucketWidth = 20;

void validate(const SolverConfig& config) {
    if (!(config.delta > 0.0 && config.delta < 1.0)) throw std::invalid_argument("solver: delta must be in (0, 1)");
    if (config.repetitions && *config.repetitions == 0) throw std::invalid_argument("solver: repetitions must be >= 1");
    if (config.layout.width >= BitVec::kWordBits) throw std::invalid_argument("solver: block width must be < 64");
}

bool is_first_unit(const BitVec& v) { return v.lowest_set() == std::size_t{0} && v.popcount() == 1; }

}  // namespace

bool in_subspace(const BitVec& v, const BlockLayout& layout, std::size_t level) {
    if (v.size() != layout.length()) return false;
    const std::size_t start = (layout.blocks - std::min(level, layout.blocks)) * layout.width;
    for (std::size_t i = start; i < v.size(); ++i) {
        if (v.get(i)) return false;
    }
    return true;
}

ISample make_zero_sample(const BlockLayout& layout, std::span<const LabeledExample> examples, bool track_provenance) {
    ISample sample{0, layout, track_provenance, {}};
    sample.entries.reserve(examples.size());
    for (const auto& e : examples) {
        if (e.x.size() > layout.length()) throw std::invalid_argument("make_zero_sample: example longer than layout");
        SampleEntry entry{e.x.size() == layout.length() ? e.x : e.x.resized(layout.length()), e.label, {}};
        if (track_provenance) entry.provenance.push_back(e.index);
        sample.entries.push_back(std::move(entry));
    }
    return sample;
}

std::vector<std::uint64_t> symmetric_difference(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
    std::vector<std::uint64_t> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

ISample merge_step(const ISample& input, const RepresentativePicker& pick) {
    const BlockLayout& layout = input.layout;
    if (input.level + 2 > layout.blocks) throw std::invalid_argument("merge_step: level must be <= blocks - 2");
    if (layout.width >= BitVec::kWordBits) throw std::invalid_argument("merge_step: block width must be < 64");
    const std::size_t target_block = layout.blocks - input.level;

    const std::size_t s = input.entries.size();
    std::vector<BitVec::Word> key(s);
    for (std::size_t i = 0; i < s; ++i) key[i] = input.entries[i].vector.block_value(layout, target_block);

    // Stable grouping by block value.
    std::vector<std::size_t> order(s);
    if (layout.width <= kMaxBucketWidth) {
        std::vector<std::size_t> start((std::size_t{1} << layout.width) + 1, 0);
        for (auto kv : key) ++start[kv + 1];
        std::partial_sum(start.begin(), start.end(), start.begin());
        for (std::size_t i = 0; i < s; ++i) order[start[key[i]]++] = i;
    } else {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key[x] < key[y]; });
    }

    ISample out{input.level + 1, layout, input.track_provenance, {}};
    out.entries.reserve(s);
    for (std::size_t lo = 0; lo < s;) {
        std::size_t hi = lo + 1;
        while (hi < s && key[order[hi]] == key[order[lo]]) ++hi;
        const std::size_t size = hi - lo;
        const std::size_t rep_pos = pick(size);
        if (rep_pos >= size) throw std::out_of_range("merge_step: representative index out of class");
        const SampleEntry& rep = input.entries[order[lo + rep_pos]];
        for (std::size_t p = lo; p < hi; ++p) {
            if (p == lo + rep_pos) continue;
            const SampleEntry& member = input.entries[order[p]];
            SampleEntry merged{member.vector ^ rep.vector, static_cast<std::uint8_t>(member.label ^ rep.label), {}};
            if (input.track_provenance) merged.provenance = symmetric_difference(member.provenance, rep.provenance);
            out.entries.push_back(std::move(merged));
        }
        lo = hi;
    }
    return out;
}

ISample merge_step(const ISample& input, Rng& rng) {
    return merge_step(input, [&rng](std::size_t size) { return static_cast<std::size_t>(rng.below(size)); });
}

double predicted_bias(NoiseRate eta, std::size_t s) {
    if (s == 0) throw std::invalid_argument("predicted_bias: s must be >= 1");
    return 0.5 + 0.5 * std::pow(eta.correlation(), static_cast<double>(s));
}

double xor_chain_oracle(NoiseRate eta, std::size_t s, std::uint64_t trials, std::uint64_t seed) {
    if (s == 0) throw std::invalid_argument("xor_chain_oracle: s must be >= 1");
    if (trials == 0) throw std::invalid_argument("xor_chain_oracle: trials must be >= 1");
    Rng rng(lane_seed(seed, "xor-chain"));
    std::uint64_t even = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        bool parity = false;
        for (std::size_t i = 0; i < s; ++i) parity ^= rng.bernoulli(eta.value());
        if (!parity) ++even;
    }
    return static_cast<double>(even) / static_cast<double>(trials);
}

ParityTarget mle_bruteforce(std::span<const LabeledExample> samples, std::size_t k) {
    if (k > kMleMaxBits) throw std::invalid_argument("mle_bruteforce: k exceeds cap of " + std::to_string(kMleMaxBits));
    if (samples.empty()) throw std::invalid_argument("mle_bruteforce: empty sample");
    if (samples.size() > static_cast<std::size_t>(INT32_MAX)) throw std::invalid_argument("mle_bruteforce: sample too large");

    // corr[c] = agreements - disagreements, via a Walsh-Hadamard transform of the signed histogram.
    const std::size_t n = std::size_t{1} << k;
    std::vector<std::int32_t> corr(n, 0);
    for (const auto& e : samples) {
        if (e.x.size() != k) throw std::invalid_argument("mle_bruteforce: example length != k");
        corr[k == 0 ? 0 : e.x.to_word()] += e.label ? -1 : 1;
    }
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t i = 0; i < n; i += len << 1) {
            for (std::size_t j = i; j < i + len; ++j) {
                const std::int32_t u = corr[j];
                const std::int32_t v = corr[j + len];
                corr[j] = u + v;
                corr[j + len] = u - v;
            }
        }
    }
    const auto best = std::max_element(corr.begin(), corr.end());  // first maximum = smallest c
    return ParityTarget{BitVec::from_word(static_cast<BitVec::Word>(best - corr.begin()), k)};
}

std::size_t auto_repetitions(std::size_t k, NoiseRate eta, double delta, std::size_t blocks) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("auto_repetitions: delta must be in (0, 1)");
    if (k == 0 || blocks == 0) throw std::invalid_argument("auto_repetitions: k and blocks must be positive");
    const double squared_bias = std::pow(eta.correlation(), std::ldexp(1.0, static_cast<int>(blocks)));
    const double reps = std::ceil(2.0 * std::log(2.0 * static_cast<double>(k) / delta) / squared_bias);
    return std::max<std::size_t>(1, static_cast<std::size_t>(reps));
}

SolverConfig choose_parameters(std::size_t k, NoiseRate eta, double delta, ParameterProfile profile, std::size_t n) {
    if (k < 2) throw std::invalid_argument("choose_parameters: k must be >= 2");
    std::size_t a = 1;
    if (profile == ParameterProfile::Balanced) {
        a = static_cast<std::size_t>(std::max<long long>(1, std::llround(0.5 * std::log2(static_cast<double>(k)))));
    } else {
        const double ambient = static_cast<double>(n == 0 ? k : n);
        const double loglog = std::log2(std::max(1.0, std::log2(ambient)));
        a = static_cast<std::size_t>(std::max(1.0, std::ceil(0.5 * loglog)));
    }
    const std::size_t b = (k + a - 1) / a;
    SolverConfig config;
    config.layout = BlockLayout(a, b);
    config.delta = delta;
    config.repetitions = auto_repetitions(k, eta, delta, a);
    return config;
}

std::optional<Vote> vote_pass(ExampleSource& source, const SolverConfig& config, Rng& rng, std::size_t shift) {
    validate(config);
    const BlockLayout& layout = config.layout;
    const std::size_t length = layout.length();
    if (source.k() > length) throw std::invalid_argument("vote_pass: source has more bits than the block layout");

    const std::uint64_t needed = layout.blocks << layout.width;
    if (config.max_examples != 0 && source.draw_count() + needed > config.max_examples) {
        throw BudgetExceeded("example budget of " + std::to_string(config.max_examples) + " exhausted");
    }

    ISample sample{0, layout, config.track_provenance, {}};
    sample.entries.reserve(needed);
    const std::uint64_t first = source.draw_count();
    for (std::uint64_t i = 0; i < needed; ++i) {
        LabeledExample e = source.draw();
        BitVec x = e.x.size() == length ? std::move(e.x) : e.x.resized(length);
        if (shift != 0) x = x.rotated(shift);
        SampleEntry entry{std::move(x), e.label, {}};
        if (config.track_provenance) entry.provenance.push_back(e.index);
        sample.entries.push_back(std::move(entry));
    }
    for (std::size_t step = 0; step + 1 < layout.blocks; ++step) sample = merge_step(sample, rng);

    for (auto& entry : sample.entries) {
        if (!is_first_unit(entry.vector)) continue;
        Vote vote;
        vote.bit = entry.label;
        vote.depth = config.track_provenance ? entry.provenance.size() : (std::size_t{1} << (layout.blocks - 1));
        vote.first_index = first;
        vote.last_index = source.draw_count() - 1;
        vote.provenance = std::move(entry.provenance);
        return vote;
    }
    return std::nullopt;
}

Vote cast_vote(ExampleSource& source, const SolverConfig& config, Rng& rng, std::size_t shift) {
    const std::uint64_t first = source.draw_count();
    for (std::size_t attempt = 0; attempt <= config.max_redraws; ++attempt) {
        if (auto vote = vote_pass(source, config, rng, shift)) {
            vote->first_index = first;
            return *vote;
        }
    }
    throw BudgetExceeded("(1,0,...,0) not produced after " + std::to_string(config.max_redraws) + " redraws");
}

BitRecovery recover_first_bit(ExampleSource& source, const SolverConfig& config, std::size_t shift) {
    validate(config);
    const std::size_t reps =
        config.repetitions.value_or(auto_repetitions(source.k(), source.eta(), config.delta, config.layout.blocks));
    Rng rng(lane_seed(config.seed, "merge/" + std::to_string(shift)));
    BitRecovery out;
    out.vote_log.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        Vote vote = cast_vote(source, config, rng, shift);
        (vote.bit ? out.votes.ones : out.votes.zeros)++;
        out.vote_log.push_back(std::move(vote));
    }
    out.bit = out.votes.majority();
    return out;
}

SolverResult recover_target(ExampleSource& source, const SolverConfig& config) {
    validate(config);
    const auto started = std::chrono::steady_clock::now();
    const std::uint64_t first = source.draw_count();
    const std::size_t k = source.k();

    SolverResult result;
    result.c_hat = ParityTarget{BitVec(k)};
    result.per_bit_votes.resize(k);
    result.repetitions =
        config.repetitions.value_or(auto_repetitions(k, source.eta(), config.delta, config.layout.blocks));
    try {
        for (std::size_t bit = 0; bit < k; ++bit) {
            Rng rng(lane_seed(config.seed, "merge/" + std::to_string(bit)));
            VoteTally& tally = result.per_bit_votes[bit];
            for (std::size_t r = 0; r < result.repetitions; ++r) {
                (cast_vote(source, config, rng, bit).bit ? tally.ones : tally.zeros)++;
            }
            result.c_hat.bits.set(bit, tally.majority() != 0);
        }
    } catch (const BudgetExceeded&) {
        result.status = SolveStatus::BudgetExceeded;
    } catch (const StreamExhausted&) {
        result.status = SolveStatus::BudgetExceeded;
    }
    result.examples_used = source.draw_count() - first;
    result.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace lpn
