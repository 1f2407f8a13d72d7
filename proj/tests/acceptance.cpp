// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lpn/harness.hpp"
#include "lpn/online.hpp"
#include "lpn/solvers.hpp"
#include "lpn/sq.hpp"

using namespace lpn;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

double sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

std::vector<LabeledExample> draw_n(ExampleSource& src, std::size_t n) {
    std::vector<LabeledExample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(src.draw());
    return out;
}

// Runs body(seed) for seeds 1..n and counts successes.
std::size_t count_successes(std::size_t n, const std::function<bool(std::uint64_t)>& body) {
    std::vector<char> ok(n, 0);
    parallel_for(n, [&](std::size_t i) { ok[i] = body(i + 1) ? 1 : 0; });
    std::size_t hits = 0;
    for (char c : ok) hits += c;
    return hits;
}

Verdict ac1() {
    const NoiseRate eta(0.125);
    const std::size_t hits = count_successes(100, [&](std::uint64_t seed) {
        auto src = new_source(24, eta, UniformDist{}, seed, RandomTarget{});
        SolverConfig config;
        config.layout = BlockLayout(3, 8);
        config.delta = 0.1;
        config.seed = lane_seed(seed, "solver");
        const auto result = recover_target(src, config);
        return result.status == SolveStatus::Recovered && result.c_hat == src.target();
    });
    return {hits >= 90, fmt("bkw k=24 a=3 b=8 eta=0.125: recovered %zu/100 (need >= 90), repetitions=%zu", hits,
                            auto_repetitions(24, eta, 0.1, 3))};
}

Verdict ac2() {
    const NoiseRate eta(0.2);
    const std::size_t hits = count_successes(100, [&](std::uint64_t seed) {
        auto src = new_source(16, eta, UniformDist{}, seed, RandomTarget{});
        SolverConfig config;
        config.layout = BlockLayout(2, 8);
        config.delta = 0.1;
        config.seed = lane_seed(seed, "solver");
        const auto bkw = recover_target(src, config);
        const auto mle = mle_bruteforce(draw_n(src, 2000), 16);
        return bkw.status == SolveStatus::Recovered && bkw.c_hat == src.target() && mle == src.target();
    });
    return {hits >= 95, fmt("k=16 a=2 b=8 eta=0.2: bkw == mle == planted in %zu/100 (need >= 95)", hits)};
}

Verdict ac3() {
    const double trials = 1e6;
    std::size_t ok = 0;
    double worst = 0;
    std::uint64_t seed = 1;
    for (double e : {0.05, 0.125, 0.25, 0.4}) {
        for (std::size_t s : {1, 2, 4, 8, 16}) {
            const double p = predicted_bias(NoiseRate(e), s);
            const double mc = xor_chain_oracle(NoiseRate(e), s, static_cast<std::uint64_t>(trials), seed++);
            const double z = std::abs(mc - p) / sigma(p, trials);
            worst = std::max(worst, z);
            ok += z <= 3.0;
        }
    }
    return {ok == 20, fmt("%zu/20 (eta, s) pairs within 3 sigma, worst |z| = %.2f", ok, worst)};
}

Verdict ac4() {
    Rng rng(lane_seed(4, "ac4"));
    std::size_t cases = 0;
    std::size_t violations = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t width = 1 + rng.below(6);
        const std::size_t blocks = 2 + rng.below(3);
        const BlockLayout layout(blocks, width);
        const std::size_t s = 1 + rng.below(4096);
        const std::size_t level = rng.below(blocks - 1);
        auto src = new_source(layout.length(), NoiseRate(0.2), UniformDist{}, rng(), RandomTarget{});
        const auto examples = draw_n(src, s + level * (std::size_t{1} << width));
        ISample sample = make_zero_sample(layout, examples, true);
        for (std::size_t i = 0; i < level; ++i) sample = merge_step(sample, rng);

        const std::size_t before = sample.entries.size();
        const ISample out = merge_step(sample, rng);
        ++cases;
        bool ok = out.level == level + 1 && out.entries.size() + (std::size_t{1} << width) >= before;
        for (const auto& e : out.entries) {
            ok = ok && in_subspace(e.vector, layout, out.level) && e.provenance.size() <= (std::size_t{1} << out.level);
            BitVec acc(layout.length());
            std::uint8_t label = 0;
            for (auto idx : e.provenance) {
                acc ^= examples[idx].x;
                label ^= examples[idx].label;
            }
            ok = ok && acc == e.vector && label == e.label;
        }
        violations += !ok;
    }
    return {violations == 0, fmt("%zu random i-samples (b <= 6, s <= 4096): %zu violations", cases, violations)};
}

Verdict ac5() {
    const BlockLayout layout(3, 4);
    const std::size_t s = 100 * 16;
    const std::size_t cells = std::size_t{1} << 8;  // V_1: blocks 1..2 free
    const double critical =
        boost::math::quantile(boost::math::complement(boost::math::chi_squared(static_cast<double>(cells - 1)), 0.001));
    std::size_t passes = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto src = new_source(12, NoiseRate(0.1), UniformDist{}, seed, RandomTarget{});
        Rng rng(lane_seed(seed, "ac5"));
        const ISample out = merge_step(make_zero_sample(layout, draw_n(src, s), false), rng);
        std::vector<double> counts(cells, 0.0);
        for (const auto& e : out.entries) counts[e.vector.extract(0, 8)] += 1;
        const double expected = static_cast<double>(out.entries.size()) / static_cast<double>(cells);
        double chi = 0;
        for (double c : counts) chi += (c - expected) * (c - expected) / expected;
        passes += chi <= critical;
    }
    return {passes >= 18, fmt("chi-square over V_1 (255 dof, critical %.1f): %zu/20 pass (need >= 18)", critical, passes)};
}

struct OnlineRuns {
    OnlineReport noisy;
    OnlineReport control;
};

const OnlineRuns& online_runs() {
    static const OnlineRuns runs = [] {
        const std::uint64_t n = std::uint64_t{1} << 16;
        const auto t = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0) - 1e-9));
        OnlineRuns r;
        auto noisy = new_source(8, NoiseRate(0.25), UniformDist{}, 6, RandomTarget{});
        r.noisy = run_online(noisy, 2, 4, t, n);
        auto clean = new_source(8, NoiseRate(0.0), UniformDist{}, 7, RandomTarget{});
        r.control = run_online(clean, 2, 4, t, n);
        return r;
    }();
    return runs;
}

Verdict ac6() {
    const auto& r = online_runs();
    const double rate = r.noisy.predicted ? static_cast<double>(r.noisy.errors) / static_cast<double>(r.noisy.predicted) : 1.0;
    const bool pass = r.noisy.unknown <= r.noisy.unknown_bound && r.control.unknown <= r.control.unknown_bound &&
                      r.noisy.predicted > 0 && rate <= 0.01 && r.control.errors == 0;
    return {pass, fmt("t=%zu: unknown %llu <= bound %llu, error rate %.5f over %llu predictions; control errors %llu",
                      r.noisy.fill.size(), static_cast<unsigned long long>(r.noisy.unknown),
                      static_cast<unsigned long long>(r.noisy.unknown_bound), rate,
                      static_cast<unsigned long long>(r.noisy.predicted),
                      static_cast<unsigned long long>(r.control.errors))};
}

Verdict ac7() {
    const auto& r = online_runs();
    const std::size_t worst = std::max(r.noisy.max_depth, r.control.max_depth);
    return {worst <= 4, fmt("max zeroed depth %zu (bound 2^g = 4)", worst)};
}

Verdict ac8() {
    bool pass = true;
    std::string found;
    for (std::size_t j = 2; j <= 8; ++j) {
        const auto cls = sq::make_class("parity:" + std::to_string(j) + "-of-" + std::to_string(j));
        const auto report = sq::sq_dimension(cls.concepts, cls.dist);
        // Independent check: every pair of class members agrees on exactly half the domain.
        bool zero = true;
        for (std::size_t a = 0; a < cls.concepts.size() && zero; ++a) {
            for (std::size_t b = a + 1; b < cls.concepts.size() && zero; ++b) {
                std::size_t agree = 0;
                for (const auto& x : cls.dist.domain) agree += cls.concepts[a](x) == cls.concepts[b](x);
                zero = 2 * agree == cls.dist.domain.size();
            }
        }
        const bool ok = report.d == (std::size_t{1} << j) && report.max_pairwise_correlation == 0.0 && zero &&
                        sq::verify_witness(cls.concepts, report.witness, cls.dist);
        pass = pass && ok;
        found += (found.empty() ? "" : ",") + std::to_string(report.d);
    }
    return {pass, "parity:j-of-j for j=2..8 gives d = " + found + ", pairwise correlations 0"};
}

sq::KWiseQuery labels_equal() {
    return {2, [](std::span<const BitVec>, std::span<const std::uint8_t> l) { return l[0] == l[1]; }, 0.01};
}

Verdict ac9() {
    const double eps = 0.05;
    const double bound = 4 * eps * 3.0 / 4.0;
    const auto dist = sq::FiniteDistribution::uniform(4);
    std::size_t ok = 0;
    double worst = 0;
    for (std::uint64_t v = 1; v < 16; ++v) {
        const auto c = sq::parity_concept(BitVec::from_word(v, 4));
        Rng rng(lane_seed(v, "ac9"));
        sq::ReductionConfig config;
        config.eps = eps;
        const auto out = sq::kwise_to_unary_reduce(
            labels_equal(), config, [&](const sq::SqQuery& q) { return sq::sq_answer(q, c, dist); },
            [&] { return dist.sample(rng); }, &dist);
        const auto* est = std::get_if<sq::Estimate>(&out.result);
        if (est == nullptr) continue;
        const double err = std::abs(est->value - sq::kwise_answer(labels_equal(), c, dist));
        worst = std::max(worst, err);
        ok += err <= bound;
    }
    return {ok == 15, fmt("%zu/15 nonzero parities returned an estimate within %.3f (worst error %.3g)", ok, bound, worst)};
}

Verdict ac10() {
    const auto dist = sq::FiniteDistribution::uniform(4);
    const auto c = sq::parity_concept(BitVec::from_string("1000"));
    const sq::KWiseQuery q{1,
                           [](std::span<const BitVec> xs, std::span<const std::uint8_t> l) {
                               return (l[0] != 0) == xs[0].get(0);
                           },
                           0.01};
    Rng rng(10);
    sq::ReductionConfig config;
    config.eps = 0.05;
    const auto out = sq::kwise_to_unary_reduce(
        q, config, [&](const sq::SqQuery& sq) { return sq::sq_answer(sq, c, dist); }, [&] { return dist.sample(rng); },
        &dist);
    const auto* wh = std::get_if<sq::WeakHypothesis>(&out.result);
    if (wh == nullptr) return {false, "returned an estimate instead of a weak hypothesis"};
    const double truth = sq::weak_advantage(wh->h, c, dist);
    return {wh->advantage >= 0.45 && truth >= 0.45,
            fmt("weak hypothesis %s, measured advantage %.3f, true advantage %.3f", wh->h.id.c_str(), wh->advantage, truth)};
}

Verdict ac11() {
    std::size_t total = 0;
    std::size_t ok = 0;
    for (std::size_t k = 2; k <= 4; ++k) {
        const auto dist = sq::FiniteDistribution::uniform(k);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
            const BitVec c = BitVec::from_word(v, k);
            ++total;
            ok += sq::basis_query_learner(k, sq::parity_concept(c), dist).bits == c;
        }
    }
    return {ok == total, fmt("exact recovery of %zu/%zu targets for k = 2, 3, 4", ok, total)};
}

Verdict ac12() {
    const NoiseRate eta(0.1);
    const std::size_t k = 24;
    const std::size_t votes = 10000;
    const std::uint64_t budget = 4000000;

    SolverConfig config;
    config.layout = BlockLayout(3, 8);
    config.max_examples = budget;
    config.seed = lane_seed(12, "solver");
    auto solve_src = new_source(k, eta, UniformDist{}, 12, RandomTarget{});
    const auto solved = recover_target(solve_src, config);
    const bool bkw_solves = solved.status == SolveStatus::Recovered && solved.c_hat == solve_src.target();

    // BKW single votes, depths from provenance.
    config.max_examples = 0;
    config.track_provenance = true;
    auto bkw_src = new_source(k, eta, UniformDist{}, 13, RandomTarget{});
    Rng rng(lane_seed(13, "merge"));
    const bool c1 = bkw_src.target().bits.get(0);
    double bkw_expected = 0, bkw_var = 0;
    std::size_t bkw_correct = 0;
    for (std::size_t i = 0; i < votes; ++i) {
        const Vote v = cast_vote(bkw_src, config, rng);
        const double p = predicted_bias(eta, v.depth);
        bkw_expected += p;
        bkw_var += p * (1 - p);
        bkw_correct += v.bit == c1;
    }

    // Single-pass elimination votes: fold the labels of the examples expressing e1.
    auto gauss_src = new_source(k, eta, UniformDist{}, 14, RandomTarget{});
    const bool g1 = gauss_src.target().bits.get(0);
    const BitVec e1 = BitVec::unit(k, 0);
    double gauss_expected = 0, gauss_var = 0, depth_sum = 0;
    std::size_t gauss_correct = 0;
    std::uint64_t gauss_examples = 0;
    for (std::size_t i = 0; i < votes;) {
        const auto batch = draw_n(gauss_src, k);
        gauss_examples += k;
        std::vector<BitVec> rows;
        for (const auto& e : batch) rows.push_back(e.x);
        const auto coeffs = express_in(rows, e1);
        if (!coeffs) continue;
        std::uint8_t label = 0;
        for (std::size_t r = 0; r < k; ++r)
            if (coeffs->get(r)) label ^= batch[r].label;
        const std::size_t depth = coeffs->popcount();
        const double p = predicted_bias(eta, depth);
        gauss_expected += p;
        gauss_var += p * (1 - p);
        depth_sum += static_cast<double>(depth);
        gauss_correct += label == g1;
        ++i;
    }
    const double n = static_cast<double>(votes);
    const double bkw_rate = static_cast<double>(bkw_correct) / n;
    const double gauss_rate = static_cast<double>(gauss_correct) / n;
    const bool bkw_ok = std::abs(static_cast<double>(bkw_correct) - bkw_expected) <= 3 * std::sqrt(bkw_var);
    const bool bkw_headline = std::abs(bkw_rate - predicted_bias(eta, 4)) <= 3 * sigma(predicted_bias(eta, 4), n);
    const bool gauss_ok = std::abs(static_cast<double>(gauss_correct) - gauss_expected) <= 3 * std::sqrt(gauss_var);
    return {bkw_solves && bkw_ok && bkw_headline && gauss_ok,
            fmt("budget %llu: bkw %s k=24 using %llu examples; per-vote bkw %.4f vs %.4f, elimination %.4f vs %.4f "
                "(mean depth %.2f)",
                static_cast<unsigned long long>(budget), bkw_solves ? "solves" : "fails",
                static_cast<unsigned long long>(solved.examples_used), bkw_rate, bkw_expected / n, gauss_rate,
                gauss_expected / n, depth_sum / n)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Verdict (*)()>> criteria = {
        {"AC-1", ac1}, {"AC-2", ac2}, {"AC-3", ac3}, {"AC-4", ac4},   {"AC-5", ac5},   {"AC-6", ac6},
        {"AC-7", ac7}, {"AC-8", ac8}, {"AC-9", ac9}, {"AC-10", ac10}, {"AC-11", ac11}, {"AC-12", ac12},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        const auto started = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        std::printf("%-5s %s  %s  [%.1fs]\n", name, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !v.pass;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
