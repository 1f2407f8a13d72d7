#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lpn/bitvec.hpp"
#include "lpn/instance.hpp"
#include "lpn/rng.hpp"

namespace lpn::sq {

/// A total boolean function on the domain, with a reporting id.
struct Concept {
    std::string id;
    std::function<bool(const BitVec&)> eval;

    bool operator()(const BitVec& x) const { return eval(x); }
};

Concept parity_concept(const BitVec& c);
Concept constant_concept(bool value);

/// Weighted finite domain of n-bit vectors.
struct FiniteDistribution {
    std::vector<BitVec> domain;
    std::vector<double> weights;

    static FiniteDistribution uniform(std::size_t n);
    /// Throws unless weights are nonnegative, parallel to the domain and sum to 1.
    void validate() const;
    BitVec sample(Rng& rng) const;
};

/// Pr[Q(x, c(x))] requested within +-tau.
struct SqQuery {
    std::function<bool(const BitVec& x, bool label)> predicate;
    double tau = 0.01;
};

/// Pr[Q(x_1..x_k, c(x_1)..c(x_k))] over k independent draws.
struct KWiseQuery {
    std::size_t arity = 1;
    std::function<bool(std::span<const BitVec> xs, std::span<const std::uint8_t> labels)> predicate;
    double tau = 0.01;
};

struct Exact {};
/// Exact value moved by tau away from 1/2, clamped to [0, 1].
struct AdversarialWorst {};
/// Empirical frequency over `samples` correctly labeled draws.
struct SampledNoisy {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 0;
};
using OracleMode = std::variant<Exact, AdversarialWorst, SampledNoisy>;

/// Largest product space enumerated by exact k-wise answers.
inline constexpr std::uint64_t kMaxExactTuples = std::uint64_t{1} << 24;

double sq_answer(const SqQuery& query, const Concept& c, const FiniteDistribution& dist, const OracleMode& mode = Exact{});
double kwise_answer(const KWiseQuery& query, const Concept& c, const FiniteDistribution& dist,
                    const OracleMode& mode = Exact{});

/// Pr[h = c] - Pr[h != c].
double correlation(const Concept& h, const Concept& c, const FiniteDistribution& dist);
/// Pr[h = c] - 1/2.
double weak_advantage(const Concept& h, const Concept& c, const FiniteDistribution& dist);

struct SqDimReport {
    std::size_t d = 0;
    std::vector<std::string> witness;
    double max_pairwise_correlation = 0.0;
    std::optional<std::size_t> exact_d;  // exhaustive maximum, classes of <= 16 concepts
};

inline constexpr std::size_t kExactDimensionClassLimit = 16;

/// Certified lower bound on the SQ dimension: the largest d for which greedy
/// insertion in class order finds d concepts with pairwise |correlation| <= 1/d^3.
SqDimReport sq_dimension(std::span<const Concept> concepts, const FiniteDistribution& dist);

/// True iff every pair of the witness satisfies the 1/d^3 bound.
bool verify_witness(std::span<const Concept> concepts, std::span<const std::string> witness,
                    const FiniteDistribution& dist);

struct WeakHypothesis {
    Concept h;
    double advantage = 0.0;  // measured Pr[h = c] - 1/2
};

struct Estimate {
    double value = 0.0;
    double per_term_bound = 0.0;  // 4 eps (1 - 2^-k), per label pattern
    double error_bound = 0.0;     // 2^k * per_term_bound, whole sum
};

struct ReductionOutcome {
    std::variant<WeakHypothesis, Estimate> result;
    std::uint64_t unary_queries = 0;
    std::uint64_t tuples_tried = 0;

    bool is_weak_hypothesis() const { return std::holds_alternative<WeakHypothesis>(result); }
};

struct ReductionConfig {
    double eps = 0.05;
    double delta = 0.05;
    std::size_t tuples = 0;              // 0 = ceil(4/eps * ln(1/delta))
    std::uint64_t max_queries = 0;       // 0 = unlimited
    std::uint64_t estimate_samples = 10000;  // unlabeled tuples when no exact distribution is given
    std::size_t max_arity = 12;
};

std::size_t default_tuple_count(double eps, double delta);

using UnaryOracle = std::function<double(const SqQuery&)>;
using UnlabeledSampler = std::function<BitVec()>;

/// Answers a k-wise query with unary queries: either finds a hypothesis h
/// (or its complement) with |Pr[h & c=1] - Pr[h]/2| >= eps, or estimates the
/// query from unlabeled data as sum over label patterns of 2^-k Pr[Q(z, l)].
/// With `exact_unlabeled` the unlabeled estimate is an exact sum.
ReductionOutcome kwise_to_unary_reduce(const KWiseQuery& query, const ReductionConfig& config,
                                       const UnaryOracle& oracle, const UnlabeledSampler& unlabeled,
                                       const FiniteDistribution* exact_unlabeled = nullptr);

/// "The k tuple is a basis".
KWiseQuery basis_query(std::size_t k);
/// "The k tuple is a basis and elimination yields a target with bit i set" (i 0-based).
KWiseQuery basis_bit_query(std::size_t k, std::size_t i);

/// Recovers a parity on {0,1}^k from k-wise basis queries.
ParityTarget basis_query_learner(std::size_t k, const Concept& c, const FiniteDistribution& dist,
                                 const OracleMode& mode = Exact{});

/// Registered classes: "parity:j-of-n" (2^j parities on the first j bits) and
/// "conjunction:j-of-n" (2^j monotone conjunctions of the first j bits), both
/// under the uniform distribution on {0,1}^n.
struct ConceptClass {
    std::string name;
    std::vector<Concept> concepts;
    FiniteDistribution dist;
};

ConceptClass make_class(std::string_view name);

}  // namespace lpn::sq
