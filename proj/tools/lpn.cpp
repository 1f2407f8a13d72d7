// Command-line front end: gen, solve, sq, bias.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lpn/errors.hpp"
#include "lpn/harness.hpp"
#include "lpn/io.hpp"

namespace {

lpn::Format parse_format(const std::string& f) {
    if (f == "csv") return lpn::Format::Csv;
    if (f == "json") return lpn::Format::Json;
    throw lpn::UsageError("--format must be csv or json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Learning parity with noise: solvers, online decoder and statistical-query lab"};
    app.require_subcommand(1);

    lpn::GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a random instance file");
    gen_cmd->add_option("--k", gen.k, "Bits per example")->required();
    gen_cmd->add_option("--count", gen.count, "Number of examples")->required();
    gen_cmd->add_option("--eta", gen.eta, "Noise rate in [0, 0.5)")->required();
    gen_cmd->add_option("--seed", gen.seed, "Master seed")->required();
    gen_cmd->add_option("--out", gen.out, "Output path ('-' for stdout)")->required();
    gen_cmd->add_flag("--with-target", gen.with_target, "Append the TARGET line");

    lpn::SolveOptions solve;
    std::string seeds = "1";
    std::string solve_out = "-";
    std::string solve_format = "csv";
    std::size_t a = 0, b = 0, reps = 0, count = 0;
    auto* solve_cmd = app.add_subcommand("solve", "Run a solver over one or more seeds");
    solve_cmd->add_option("--algo", solve.algo, "bkw | mle | gauss | online")->required();
    auto* in_opt = solve_cmd->add_option("--in", "Instance file");
    solve_cmd->add_option("--k", solve.k, "Bits per example (live source)")->excludes(in_opt);
    solve_cmd->add_option("--eta", solve.eta, "Noise rate (live source)")->excludes(in_opt);
    solve_cmd->add_option("--a", a, "BKW block count");
    solve_cmd->add_option("--b", b, "BKW block width");
    solve_cmd->add_option("--blocks", solve.blocks, "Online decoder block count");
    solve_cmd->add_option("--width", solve.width, "Online decoder block width");
    solve_cmd->add_option("--matrices", solve.matrices, "Online decoder matrix count");
    solve_cmd->add_option("--seeds", seeds, "N (seeds 1..N) or a comma-separated list");
    solve_cmd->add_option("--delta", solve.delta, "Failure probability budget");
    solve_cmd->add_option("--max-examples", solve.max_examples, "Example budget per run (0 = unlimited)");
    solve_cmd->add_option("--repetitions", reps, "Votes per bit (default: automatic)");
    solve_cmd->add_option("--count", count, "Examples drawn by mle/gauss/online");
    solve_cmd->add_option("--out", solve_out, "Output path ('-' for stdout)");
    solve_cmd->add_option("--format", solve_format, "csv | json");

    lpn::SqOptions sq;
    std::string sq_out = "-";
    std::string sq_format = "csv";
    auto* sq_cmd = app.add_subcommand("sq", "Statistical-query experiments");
    sq_cmd->add_option("subcommand", sq.subcommand, "dim | reduce | basis-learn")->required();
    sq_cmd->add_option("--class", sq.class_name, "parity:j-of-n or conjunction:j-of-n");
    sq_cmd->add_option("--query", sq.query, "labels-equal | label-is-x1 | inputs-agree");
    sq_cmd->add_option("--eps", sq.eps, "Weak-hypothesis threshold");
    sq_cmd->add_option("--tuples", sq.tuples, "Random k-tuples to try (0 = automatic)");
    sq_cmd->add_option("--seed", sq.seed, "Master seed");
    sq_cmd->add_option("--k", sq.k, "basis-learn dimension");
    sq_cmd->add_option("--target", sq.target, "basis-learn target: 'random' or a bit string");
    sq_cmd->add_option("--out", sq_out, "Output path ('-' for stdout)");
    sq_cmd->add_option("--format", sq_format, "csv | json");

    lpn::BiasOptions bias;
    std::string bias_out = "-";
    std::string bias_format = "csv";
    auto* bias_cmd = app.add_subcommand("bias", "Predicted vs Monte Carlo correctness of XORed noisy labels");
    bias_cmd->add_option("--eta", bias.eta, "Noise rate")->required();
    bias_cmd->add_option("--s", bias.s, "Number of labels XORed (repeatable)")->required();
    bias_cmd->add_option("--trials", bias.trials, "Monte Carlo trials");
    bias_cmd->add_option("--seed", bias.seed, "Master seed");
    bias_cmd->add_option("--out", bias_out, "Output path ('-' for stdout)");
    bias_cmd->add_option("--format", bias_format, "csv | json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? lpn::kExitOk : lpn::kExitUsage;
    }

    try {
        if (*gen_cmd) {
            lpn::cmd_gen(gen);
        } else if (*solve_cmd) {
            if (*in_opt) solve.in = in_opt->as<std::string>();
            if (a) solve.a = a;
            if (b) solve.b = b;
            if (reps) solve.repetitions = reps;
            if (count) solve.count = count;
            solve.seeds = lpn::parse_seeds(seeds);
            const auto run = lpn::cmd_solve(solve);
            lpn::emit(run.table, solve_out, parse_format(solve_format));
            if (!run.all_completed) return lpn::kExitBudget;
        } else if (*sq_cmd) {
            lpn::emit(lpn::cmd_sq(sq), sq_out, parse_format(sq_format));
        } else if (*bias_cmd) {
            lpn::emit(lpn::cmd_bias(bias), bias_out, parse_format(bias_format));
        }
    } catch (const lpn::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return lpn::kExitUsage;
    } catch (const lpn::IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return lpn::kExitIo;
    } catch (const lpn::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return lpn::kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return lpn::kExitUsage;
    }
    return lpn::kExitOk;
}
