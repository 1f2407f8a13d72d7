#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lpn/harness.hpp"
#include "lpn/io.hpp"
#include "lpn/online.hpp"
#include "lpn/solvers.hpp"
#include "lpn/sq.hpp"

namespace py = pybind11;
using namespace lpn;

namespace {

std::string table_json(const Table& t) {
    std::ostringstream out;
    write_json(out, t);
    return out.str();
}

std::string gauss_status(GaussStatus s) {
    switch (s) {
        case GaussStatus::Solved: return "solved";
        case GaussStatus::Inconsistent: return "inconsistent";
        case GaussStatus::Underdetermined: return "underdetermined";
    }
    return "unknown";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Learning parity with noise: solvers, online decoder and SQ tools";

    m.def("predicted_bias", [](double eta, std::size_t s) { return predicted_bias(NoiseRate(eta), s); },
          py::arg("eta"), py::arg("s"));
    m.def("xor_chain_oracle",
          [](double eta, std::size_t s, std::uint64_t trials, std::uint64_t seed) {
              return xor_chain_oracle(NoiseRate(eta), s, trials, seed);
          },
          py::arg("eta"), py::arg("s"), py::arg("trials"), py::arg("seed") = 1);
    m.def("auto_repetitions",
          [](std::size_t k, double eta, double delta, std::size_t a) {
              return auto_repetitions(k, NoiseRate(eta), delta, a);
          },
          py::arg("k"), py::arg("eta"), py::arg("delta"), py::arg("a"));

    m.def("gaussian_solve",
          [](const std::vector<std::string>& rows, const std::vector<int>& labels) {
              if (rows.empty() || rows.size() != labels.size()) throw py::value_error("rows and labels must match");
              BitMatrix system(rows.front().size());
              for (std::size_t i = 0; i < rows.size(); ++i) system.add_row(BitVec::from_string(rows[i]), labels[i] != 0);
              const GaussResult r = gaussian_solve(system);
              return py::make_tuple(gauss_status(r.status),
                                    r.status == GaussStatus::Solved ? py::object(py::str(r.solution.to_string()))
                                                                    : py::object(py::none()));
          },
          py::arg("rows"), py::arg("labels"), "Returns (status, solution bit string or None).");

    m.def("mle",
          [](const std::vector<std::pair<std::string, int>>& examples, std::size_t k) {
              std::vector<LabeledExample> sample;
              for (std::size_t i = 0; i < examples.size(); ++i) {
                  sample.push_back({BitVec::from_string(examples[i].first), static_cast<std::uint8_t>(examples[i].second != 0), i});
              }
              return mle_bruteforce(sample, k).bits.to_string();
          },
          py::arg("examples"), py::arg("k"));

    m.def("generate_instance",
          [](std::size_t k, std::size_t count, double eta, std::uint64_t seed, bool with_target) {
              std::ostringstream out;
              write_instance(out, generate_instance(k, count, eta, seed, with_target));
              return out.str();
          },
          py::arg("k"), py::arg("count"), py::arg("eta"), py::arg("seed"), py::arg("with_target") = false,
          "Instance file text.");

    m.def("solve_bkw",
          [](std::size_t k, double eta, std::size_t a, std::size_t b, std::uint64_t seed, double delta,
             std::optional<std::size_t> repetitions) {
              py::gil_scoped_release release;
              auto src = new_source(k, NoiseRate(eta), UniformDist{}, seed, RandomTarget{});
              SolverConfig config;
              config.layout = BlockLayout(a, b);
              config.delta = delta;
              config.repetitions = repetitions;
              config.seed = lane_seed(seed, "solver");
              const auto r = recover_target(src, config);
              py::gil_scoped_acquire acquire;
              py::dict out;
              out["c_hat"] = r.c_hat.bits.to_string();
              out["target"] = src.target().bits.to_string();
              out["recovered"] = r.status == SolveStatus::Recovered;
              out["examples_used"] = r.examples_used;
              out["repetitions"] = r.repetitions;
              return out;
          },
          py::arg("k"), py::arg("eta"), py::arg("a"), py::arg("b"), py::arg("seed"), py::arg("delta") = 0.1,
          py::arg("repetitions") = py::none());

    m.def("run_online",
          [](std::size_t blocks, std::size_t width, std::size_t matrices, std::uint64_t count, double eta,
             std::uint64_t seed) {
              auto src = new_source(blocks * width, NoiseRate(eta), UniformDist{}, seed, RandomTarget{});
              const auto r = run_online(src, blocks, width, matrices, count);
              py::dict out;
              out["processed"] = r.processed;
              out["predicted"] = r.predicted;
              out["unknown"] = r.unknown;
              out["errors"] = r.errors;
              out["ties"] = r.ties;
              out["max_depth"] = r.max_depth;
              out["unknown_bound"] = r.unknown_bound;
              return out;
          },
          py::arg("blocks"), py::arg("width"), py::arg("matrices"), py::arg("count"), py::arg("eta"), py::arg("seed"));

    m.def("basis_learn",
          [](const std::string& target) {
              const BitVec c = BitVec::from_string(target);
              return sq::basis_query_learner(c.size(), sq::parity_concept(c), sq::FiniteDistribution::uniform(c.size()))
                  .bits.to_string();
          },
          py::arg("target"));

    m.def("_sq_json",
          [](const std::string& subcommand, const std::string& class_name, const std::string& query, double eps,
             std::uint64_t seed) {
              SqOptions o;
              o.subcommand = subcommand;
              o.class_name = class_name;
              o.query = query;
              o.eps = eps;
              o.seed = seed;
              return table_json(cmd_sq(o));
          },
          py::arg("subcommand"), py::arg("class_name"), py::arg("query") = "labels-equal", py::arg("eps") = 0.05,
          py::arg("seed") = 1);

    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
}
