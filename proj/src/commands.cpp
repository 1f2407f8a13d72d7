#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>

#include "lpn/harness.hpp"
#include "lpn/io.hpp"
#include "lpn/online.hpp"
#include "lpn/solvers.hpp"
#include "lpn/sq.hpp"

namespace lpn {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultSampleCount = 2000;

NoiseRate checked_eta(double eta) {
    try {
        return NoiseRate(eta);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open instance file: " + path);
    try {
        return read_instance(in);
    } catch (const ParseError& e) {
        throw IoError(path + ": " + e.what());
    }
}

// One solve row, keyed by kSolveColumns.
struct RunRecord {
    json algo, seed, k, eta, a, b, blocks, width, matrices, delta, repetitions, max_examples, count;
    json status, success, examples_used, bit_errors, predicted, unknown, errors, ties, wall_time_ms;
    bool completed = true;

    std::vector<json> row() const {
        return {algo,     seed,    k,          eta,         a,       b,       blocks, width,
                matrices, delta,   repetitions, max_examples, count, status, success, examples_used,
                bit_errors, predicted, unknown, errors, ties,   wall_time_ms};
    }
};

ExampleSource make_source(const SolveOptions& o, const Instance* inst, std::uint64_t seed) {
    if (inst != nullptr) return instance_source(*inst);
    return ExampleSource::create(o.k, checked_eta(o.eta), UniformDist{}, seed, RandomTarget{});
}

std::vector<LabeledExample> draw_all(ExampleSource& src, std::optional<std::size_t> count) {
    std::size_t n = count.value_or(kDefaultSampleCount);
    if (const auto left = src.remaining()) n = count ? std::min<std::size_t>(*count, *left) : *left;
    std::vector<LabeledExample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(src.draw());
    return out;
}

RunRecord solve_one(const SolveOptions& o, const Instance* inst, std::uint64_t seed) {
    RunRecord rec;
    ExampleSource src = make_source(o, inst, seed);
    const std::size_t k = src.k();
    rec.algo = o.algo;
    rec.seed = seed;
    rec.k = k;
    rec.eta = src.eta().value();
    rec.delta = o.delta;
    rec.max_examples = o.max_examples;
    const auto started = std::chrono::steady_clock::now();
    auto score = [&](const BitVec& guess) {
        if (!src.has_target()) return;
        rec.bit_errors = (guess ^ src.target().bits).popcount();
        rec.success = rec.success.get<bool>() && rec.bit_errors.get<std::size_t>() == 0;
    };

    if (o.algo == "bkw") {
        SolverConfig config = choose_parameters(std::max<std::size_t>(k, 2), src.eta(), o.delta);
        if (o.a || o.b) {
            const std::size_t a = o.a.value_or(config.layout.blocks);
            const std::size_t b = o.b.value_or((k + a - 1) / a);
            if (a * b < k) throw UsageError("--a * --b must be at least k");
            config.layout = BlockLayout(a, b);
            config.repetitions = auto_repetitions(k, src.eta(), o.delta, a);
        }
        if (o.repetitions) config.repetitions = *o.repetitions;
        config.max_examples = o.max_examples;
        config.seed = lane_seed(seed, "solver");
        rec.a = config.layout.blocks;
        rec.b = config.layout.width;
        const SolverResult res = recover_target(src, config);
        rec.repetitions = res.repetitions;
        rec.examples_used = res.examples_used;
        rec.completed = res.status == SolveStatus::Recovered;
        rec.status = rec.completed ? "recovered" : "budget_exceeded";
        rec.success = rec.completed;
        score(res.c_hat.bits);
    } else if (o.algo == "mle") {
        if (k > kMleMaxBits) throw UsageError("mle supports k <= " + std::to_string(kMleMaxBits));
        const auto sample = draw_all(src, o.count);
        if (sample.empty()) throw UsageError("mle needs at least one example");
        rec.count = sample.size();
        rec.examples_used = sample.size();
        const ParityTarget guess = mle_bruteforce(sample, k);
        rec.status = "solved";
        rec.success = true;
        score(guess.bits);
    } else if (o.algo == "gauss") {
        const auto sample = draw_all(src, o.count);
        rec.count = sample.size();
        rec.examples_used = sample.size();
        BitMatrix system(k);
        for (const auto& e : sample) system.add_row(e.x, e.label != 0);
        const GaussResult g = gaussian_solve(system);
        rec.success = g.status == GaussStatus::Solved;
        rec.status = g.status == GaussStatus::Solved          ? "solved"
                     : g.status == GaussStatus::Inconsistent ? "inconsistent"
                                                             : "underdetermined";
        if (g.status == GaussStatus::Solved) score(g.solution);
    } else if (o.algo == "online") {
        rec.blocks = o.blocks;
        rec.width = o.width;
        rec.matrices = o.matrices;
        if (o.blocks * o.width < k) throw UsageError("--blocks * --width must be at least k");
        std::uint64_t n = o.count.value_or(0);
        if (n == 0 && !src.remaining()) n = std::uint64_t{1} << 16;
        const OnlineReport r = run_online(src, o.blocks, o.width, o.matrices, n);
        rec.count = r.processed;
        rec.examples_used = r.processed;
        rec.predicted = r.predicted;
        rec.unknown = r.unknown;
        rec.ties = r.ties;
        rec.status = "completed";
        rec.success = r.unknown <= r.unknown_bound;
        if (r.has_target) {
            rec.errors = r.errors;
            rec.success = rec.success.get<bool>() && r.errors == 0;
        }
    } else {
        throw UsageError("unknown --algo '" + o.algo + "' (bkw, mle, gauss, online)");
    }
    rec.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

}  // namespace

void cmd_gen(const GenOptions& o) {
    checked_eta(o.eta);
    if (o.k == 0) throw UsageError("--k must be >= 1");
    const Instance inst = generate_instance(o.k, o.count, o.eta, o.seed, o.with_target);
    if (o.out.empty() || o.out == "-") {
        write_instance(std::cout, inst);
        return;
    }
    std::ofstream out(o.out);
    if (!out) throw IoError("cannot open output file: " + o.out);
    write_instance(out, inst);
    if (!out) throw IoError("failed writing output file: " + o.out);
}

SolveRun cmd_solve(const SolveOptions& o) {
    std::optional<Instance> inst;
    if (o.in) {
        inst = load_instance(*o.in);
    } else {
        if (o.k == 0) throw UsageError("solve needs --in FILE or --k/--eta");
        checked_eta(o.eta);
    }
    if (o.seeds.empty()) throw UsageError("no seeds given");

    std::vector<RunRecord> records(o.seeds.size());
    parallel_for(o.seeds.size(), [&](std::size_t i) {
        records[i] = solve_one(o, inst ? &*inst : nullptr, o.seeds[i]);
    });

    SolveRun run;
    run.table.columns = kSolveColumns;
    for (const auto& r : records) {
        run.table.rows.push_back(r.row());
        run.all_completed = run.all_completed && r.completed;
    }
    return run;
}

namespace {

sq::KWiseQuery registered_query(const std::string& name) {
    using Xs = std::span<const BitVec>;
    using Ls = std::span<const std::uint8_t>;
    if (name == "labels-equal") return {2, [](Xs, Ls l) { return l[0] == l[1]; }, 0.01};
    if (name == "label-is-x1") return {1, [](Xs x, Ls l) { return (l[0] != 0) == x[0].get(0); }, 0.01};
    if (name == "inputs-agree") return {2, [](Xs x, Ls) { return x[0].get(0) == x[1].get(0); }, 0.01};
    throw UsageError("unknown query '" + name + "' (labels-equal, label-is-x1, inputs-agree)");
}

sq::ConceptClass checked_class(const std::string& name) {
    try {
        return sq::make_class(name);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? std::string(1, sep) : "") + parts[i];
    return out;
}

Table sq_dim(const SqOptions& o) {
    const auto cls = checked_class(o.class_name);
    const auto report = sq::sq_dimension(cls.concepts, cls.dist);
    Table t;
    t.columns = {"class", "size", "d", "exact_d", "max_pairwise_correlation", "certified", "witness"};
    t.rows.push_back({cls.name, cls.concepts.size(), report.d,
                      report.exact_d ? json(*report.exact_d) : json(nullptr), report.max_pairwise_correlation,
                      sq::verify_witness(cls.concepts, report.witness, cls.dist), join(report.witness, ';')});
    return t;
}

Table sq_reduce(const SqOptions& o) {
    const auto cls = checked_class(o.class_name);
    const auto query = registered_query(o.query);
    Table t;
    t.columns = {"class",  "concept",  "query",         "eps",           "outcome",        "value",
                 "advantage", "error_bound", "per_term_bound", "true_value", "unary_queries", "tuples_tried"};
    for (const auto& c : cls.concepts) {
        Rng rng(lane_seed(o.seed, "unlabeled/" + c.id));
        sq::ReductionConfig config;
        config.eps = o.eps;
        config.tuples = o.tuples;
        const auto oracle = [&](const sq::SqQuery& q) { return sq::sq_answer(q, c, cls.dist); };
        const auto unlabeled = [&] { return cls.dist.sample(rng); };
        const auto out = sq::kwise_to_unary_reduce(query, config, oracle, unlabeled, &cls.dist);
        const double truth = sq::kwise_answer(query, c, cls.dist);
        std::vector<json> row{cls.name, c.id, o.query, o.eps};
        if (const auto* w = std::get_if<sq::WeakHypothesis>(&out.result)) {
            row.insert(row.end(), {"weak_hypothesis", w->h.id, w->advantage, nullptr, nullptr});
        } else {
            const auto& e = std::get<sq::Estimate>(out.result);
            row.insert(row.end(), {"estimate", e.value, nullptr, e.error_bound, e.per_term_bound});
        }
        row.insert(row.end(), {truth, out.unary_queries, out.tuples_tried});
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table sq_basis_learn(const SqOptions& o) {
    std::vector<ParityTarget> targets;
    std::size_t k = o.k;
    if (!o.class_name.empty()) {
        const auto cls = checked_class(o.class_name);
        if (cls.name.rfind("parity:", 0) != 0) throw UsageError("basis-learn needs a parity class");
        k = cls.dist.domain.front().size();
        for (std::size_t v = 0; v < cls.concepts.size(); ++v) targets.push_back(ParityTarget{BitVec::from_word(v, k)});
    } else {
        if (k == 0 || k > 4) throw UsageError("basis-learn needs --k in [1, 4] (exact oracle enumerates 2^(k*k) tuples)");
        if (o.target == "random") {
            Rng rng(lane_seed(o.seed, "target"));
            targets.push_back(ParityTarget{rng.bits(k)});
        } else {
            try {
                targets.push_back(ParityTarget{BitVec::from_string(o.target)});
            } catch (const std::invalid_argument& e) {
                throw UsageError(e.what());
            }
            if (targets.back().size() != k) throw UsageError("--target length must equal --k");
        }
    }
    if (k * k > 16) throw UsageError("basis-learn exact oracle supports k <= 4");
    const auto dist = sq::FiniteDistribution::uniform(k);
    Table t;
    t.columns = {"k", "target", "recovered", "success"};
    for (const auto& target : targets) {
        const auto got = sq::basis_query_learner(k, sq::parity_concept(target.bits), dist);
        t.rows.push_back({k, target.bits.to_string(), got.bits.to_string(), got == target});
    }
    return t;
}

}  // namespace

Table cmd_sq(const SqOptions& o) {
    if (o.subcommand == "dim") return sq_dim(o);
    if (o.subcommand == "reduce") return sq_reduce(o);
    if (o.subcommand == "basis-learn") return sq_basis_learn(o);
    throw UsageError("unknown sq subcommand '" + o.subcommand + "' (dim, reduce, basis-learn)");
}

Table cmd_bias(const BiasOptions& o) {
    const NoiseRate eta = checked_eta(o.eta);
    if (o.trials == 0) throw UsageError("--trials must be >= 1");
    Table t;
    t.columns = {"eta", "s", "trials", "seed", "predicted", "monte_carlo", "sigma", "z"};
    for (std::size_t s : o.s) {
        if (s == 0) throw UsageError("--s must be >= 1");
        const double p = predicted_bias(eta, s);
        const double mc = xor_chain_oracle(eta, s, o.trials, o.seed);
        const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(o.trials));
        t.rows.push_back({o.eta, s, o.trials, o.seed, p, mc, sigma, sigma > 0 ? (mc - p) / sigma : 0.0});
    }
    return t;
}

}  // namespace lpn
