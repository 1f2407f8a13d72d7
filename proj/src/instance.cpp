#include "lpn/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace lpn {

NoiseRate::NoiseRate(double eta) : eta_(eta) {
    if (!(eta >= 0.0 && eta < 0.5)) {
        throw std::invalid_argument("noise rate must satisfy 0 <= eta < 1/2, got " + std::to_string(eta));
    }
}

ExampleSource::ExampleSource(std::size_t k, NoiseRate eta, std::uint64_t seed)
    : k_(k),
      eta_(eta),
      seed_(seed),
      input_rng_(lane_seed(seed, "inputs")),
      noise_rng_(lane_seed(seed, "noise")) {}

ExampleSource ExampleSource::create(std::size_t k, NoiseRate eta, Distribution distribution, std::uint64_t seed,
                                    TargetSpec target) {
    ExampleSource src(k, eta, seed);
    if (auto* fixed = std::get_if<ParityTarget>(&target)) {
        if (fixed->size() != k) throw std::invalid_argument("target length does not match k");
        src.target_ = *fixed;
    } else {
        Rng target_rng(lane_seed(seed, "target"));
        src.target_ = ParityTarget{target_rng.bits(k)};
    }

    if (auto* ex = std::get_if<ExplicitDist>(&distribution)) {
        if (ex->support.empty() || ex->support.size() != ex->probabilities.size()) {
            throw std::invalid_argument("explicit distribution: support and probabilities must be nonempty and parallel");
        }
        double total = 0.0;
        for (std::size_t i = 0; i < ex->support.size(); ++i) {
            if (ex->support[i].size() != k) throw std::invalid_argument("explicit distribution: support vector length != k");
            if (!(ex->probabilities[i] >= 0.0)) throw std::invalid_argument("explicit distribution: negative probability");
            total += ex->probabilities[i];
            src.cumulative_.push_back(total);
        }
        if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("explicit distribution: probabilities must sum to 1");
    } else if (auto* st = std::get_if<StreamDist>(&distribution)) {
        for (const BitVec& x : st->xs) {
            if (x.size() != k) throw std::invalid_argument("stream distribution: vector length != k");
        }
    }
    src.distribution_ = std::move(distribution);
    return src;
}

ExampleSource ExampleSource::replay(std::size_t k, NoiseRate eta, std::vector<LabeledExample> examples,
                                    std::optional<ParityTarget> target, std::uint64_t seed) {
    ExampleSource src(k, eta, seed);
    if (target && target->size() != k) throw std::invalid_argument("target length does not match k");
    for (const auto& e : examples) {
        if (e.x.size() != k) throw std::invalid_argument("replayed example length != k");
    }
    src.target_ = std::move(target);
    src.recorded_ = std::move(examples);
    src.replaying_ = true;
    return src;
}

ExampleSource new_source(std::size_t k, NoiseRate eta, Distribution distribution, std::uint64_t seed,
                         TargetSpec target) {
    return ExampleSource::create(k, eta, std::move(distribution), seed, std::move(target));
}

const ParityTarget& ExampleSource::target() const {
    if (!target_) throw std::logic_error("example source has no known target");
    return *target_;
}

std::optional<std::uint64_t> ExampleSource::remaining() const {
    if (replaying_) return recorded_.size() - draw_count_;
    if (auto* st = std::get_if<StreamDist>(&distribution_)) return st->xs.size() - draw_count_;
    return std::nullopt;
}

BitVec ExampleSource::draw_input() {
    return std::visit(
        [&](const auto& dist) -> BitVec {
            using T = std::decay_t<decltype(dist)>;
            if constexpr (std::is_same_v<T, UniformDist>) {
                return input_rng_.bits(k_);
            } else if constexpr (std::is_same_v<T, ExplicitDist>) {
                const double u = input_rng_.uniform() * cumulative_.back();
                auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
                if (it == cumulative_.end()) --it;
                return dist.support[static_cast<std::size_t>(it - cumulative_.begin())];
            } else {
                if (draw_count_ >= dist.xs.size()) throw StreamExhausted("example stream exhausted");
                return dist.xs[draw_count_];
            }
        },
        distribution_);
}

LabeledExample ExampleSource::draw() {
    if (replaying_) {
        if (draw_count_ >= recorded_.size()) throw StreamExhausted("recorded example stream exhausted");
        LabeledExample e = recorded_[draw_count_];
        e.index = draw_count_++;
        return e;
    }
    LabeledExample e;
    e.x = draw_input();
    const bool flip = noise_rng_.bernoulli(eta_.value());
    e.label = static_cast<std::uint8_t>((*target_)(e.x) ^ flip);
    e.index = draw_count_++;
    return e;
}

double empirical_error(const ParityTarget& h, std::span<const LabeledExample> sample) {
    if (sample.empty()) throw std::invalid_argument("empirical_error: empty sample");
    std::size_t wrong = 0;
    for (const auto& e : sample) {
        if (h(e.x) != (e.label != 0)) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(sample.size());
}

}  // namespace lpn
