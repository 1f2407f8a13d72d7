#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace lpn {

/// Bad flags or incompatible parameters (exit code 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable input or unwritable output (exit code 2).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitIo = 2, kExitBudget = 3 };

/// Fixed-column result table; cells are JSON scalars (null = not applicable).
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
};

enum class Format { Csv, Json };

void write_csv(std::ostream& out, const Table& table);
/// Array of objects keyed by column name.
void write_json(std::ostream& out, const Table& table);
/// Writes to `path`, or stdout when path is empty or "-".
void emit(const Table& table, const std::string& path, Format format);

/// "N" -> 1..N, "a,b,c" -> that list. Seeds must be distinct.
std::vector<std::uint64_t> parse_seeds(std::string_view text);

/// min(hardware threads, LPN_THREADS if set), at least 1.
std::size_t worker_count();

/// Runs body(i) for i in [0, n) on up to worker_count() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// ---- commands -------------------------------------------------------------

struct GenOptions {
    std::size_t k = 0;
    std::size_t count = 0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    std::string out;
    bool with_target = false;
};

void cmd_gen(const GenOptions& options);

struct SolveOptions {
    std::string algo;  // bkw | mle | gauss | online
    std::optional<std::string> in;
    std::size_t k = 0;
    double eta = 0.0;
    std::optional<std::size_t> a;
    std::optional<std::size_t> b;
    std::size_t blocks = 2;
    std::size_t width = 4;
    std::size_t matrices = 1;
    std::vector<std::uint64_t> seeds{1};
    double delta = 0.1;
    std::uint64_t max_examples = 0;
    std::optional<std::size_t> repetitions;
    std::optional<std::size_t> count;  // examples drawn by mle, gauss and online
};

inline const std::vector<std::string> kSolveColumns = {
    "algo",      "seed",     "k",           "eta",          "a",            "b",         "blocks",
    "width",     "matrices", "delta",       "repetitions",  "max_examples", "count",     "status",
    "success",   "examples_used", "bit_errors", "predicted", "unknown",     "errors",    "ties",
    "wall_time_ms"};

struct SolveRun {
    Table table;
    bool all_completed = true;
};

SolveRun cmd_solve(const SolveOptions& options);

struct SqOptions {
    std::string subcommand;  // dim | reduce | basis-learn
    std::string class_name;
    std::string query = "labels-equal";
    double eps = 0.05;
    std::size_t tuples = 0;
    std::uint64_t seed = 1;
    std::size_t k = 0;
    std::string target = "random";
};

Table cmd_sq(const SqOptions& options);

struct BiasOptions {
    double eta = 0.0;
    std::vector<std::size_t> s{1};
    std::uint64_t trials = 1000000;
    std::uint64_t seed = 1;
};

Table cmd_bias(const BiasOptions& options);

}  // namespace lpn
