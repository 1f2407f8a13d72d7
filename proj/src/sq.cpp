#include "lpn/sq.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <charconv>
#include <stdexcept>

#include "lpn/errors.hpp"

namespace lpn::sq {

namespace {

constexpr double kCorrelationSlack = 1e-12;
constexpr std::size_t kMaxDomainBits = 20;

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double adversarial(double exact, double tau) { return clamp01(exact >= 0.5 ? exact + tau : exact - tau); }

// Calls f(tuple, weight) for every k-tuple of the domain.
template <class F>
void for_each_tuple(const FiniteDistribution& dist, std::size_t k, F&& f) {
    const std::size_t m = dist.domain.size();
    const double total = std::pow(static_cast<double>(m), static_cast<double>(k));
    if (total > static_cast<double>(kMaxExactTuples)) {
        throw std::invalid_argument("k-wise exact enumeration over cap (" + std::to_string(m) + "^" +
                                    std::to_string(k) + " tuples)");
    }
    std::vector<std::size_t> idx(k, 0);
    std::vector<BitVec> tuple(k, m > 0 ? dist.domain[0] : BitVec{});
    if (m == 0) return;
    while (true) {
        double w = 1.0;
        for (std::size_t i = 0; i < k; ++i) w *= dist.weights[idx[i]];
        f(std::span<const BitVec>(tuple), w);
        std::size_t pos = 0;
        while (pos < k && ++idx[pos] == m) {
            idx[pos] = 0;
            tuple[pos] = dist.domain[0];
            ++pos;
        }
        if (pos == k) break;
        tuple[pos] = dist.domain[idx[pos]];
    }
}

std::vector<std::uint8_t> labels_of(const Concept& c, std::span<const BitVec> xs) {
    std::vector<std::uint8_t> labels(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) labels[i] = c(xs[i]) ? 1 : 0;
    return labels;
}

std::vector<std::uint8_t> pattern_labels(std::uint64_t pattern, std::size_t k) {
    std::vector<std::uint8_t> labels(k);
    for (std::size_t i = 0; i < k; ++i) labels[i] = (pattern >> i) & 1u;
    return labels;
}

}  // namespace

Concept parity_concept(const BitVec& c) {
    return Concept{"parity:" + c.to_string(), [c](const BitVec& x) { return dot_mod2(x, c); }};
}

Concept constant_concept(bool value) {
    return Concept{value ? "const:1" : "const:0", [value](const BitVec&) { return value; }};
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
    if (n > kMaxDomainBits) throw std::invalid_argument("uniform distribution: n exceeds " + std::to_string(kMaxDomainBits));
    FiniteDistribution d;
    const std::size_t size = std::size_t{1} << n;
    d.domain.reserve(size);
    for (std::size_t v = 0; v < size; ++v) d.domain.push_back(BitVec::from_word(v, n));
    d.weights.assign(size, 1.0 / static_cast<double>(size));
    return d;
}

void FiniteDistribution::validate() const {
    if (domain.empty() || domain.size() != weights.size()) {
        throw std::invalid_argument("distribution: domain and weights must be nonempty and parallel");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("distribution: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("distribution: weights must sum to 1");
}

BitVec FiniteDistribution::sample(Rng& rng) const {
    double u = rng.uniform();
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (u < weights[i]) return domain[i];
        u -= weights[i];
    }
    return domain.back();
}

double sq_answer(const SqQuery& query, const Concept& c, const FiniteDistribution& dist, const OracleMode& mode) {
    if (!(query.tau > 0.0)) throw std::invalid_argument("sq_answer: tolerance must be positive");
    if (const auto* sampled = std::get_if<SampledNoisy>(&mode)) {
        if (sampled->samples == 0) throw std::invalid_argument("sq_answer: samples must be positive");
        Rng rng(lane_seed(sampled->seed, "sq-sample"));
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < sampled->samples; ++s) {
            const BitVec x = dist.sample(rng);
            if (query.predicate(x, c(x))) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(sampled->samples);
    }
    double p = 0.0;
    for (std::size_t i = 0; i < dist.domain.size(); ++i) {
        if (query.predicate(dist.domain[i], c(dist.domain[i]))) p += dist.weights[i];
    }
    p = clamp01(p);
    return std::holds_alternative<AdversarialWorst>(mode) ? adversarial(p, query.tau) : p;
}

double kwise_answer(const KWiseQuery& query, const Concept& c, const FiniteDistribution& dist, const OracleMode& mode) {
    if (query.arity == 0) throw std::invalid_argument("kwise_answer: arity must be >= 1");
    if (!(query.tau > 0.0)) throw std::invalid_argument("kwise_answer: tolerance must be positive");
    if (const auto* sampled = std::get_if<SampledNoisy>(&mode)) {
        if (sampled->samples == 0) throw std::invalid_argument("kwise_answer: samples must be positive");
        Rng rng(lane_seed(sampled->seed, "kwise-sample"));
        std::vector<BitVec> xs(query.arity);
        std::uint64_t hits = 0;
        for (std::uint64_t s = 0; s < sampled->samples; ++s) {
            for (auto& x : xs) x = dist.sample(rng);
            if (query.predicate(xs, labels_of(c, xs))) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(sampled->samples);
    }
    double p = 0.0;
    for_each_tuple(dist, query.arity, [&](std::span<const BitVec> xs, double w) {
        if (query.predicate(xs, labels_of(c, xs))) p += w;
    });
    p = clamp01(p);
    return std::holds_alternative<AdversarialWorst>(mode) ? adversarial(p, query.tau) : p;
}

double correlation(const Concept& h, const Concept& c, const FiniteDistribution& dist) {
    double agree = 0.0;
    for (std::size_t i = 0; i < dist.domain.size(); ++i) {
        agree += (h(dist.domain[i]) == c(dist.domain[i]) ? 1.0 : -1.0) * dist.weights[i];
    }
    return agree;
}

double weak_advantage(const Concept& h, const Concept& c, const FiniteDistribution& dist) {
    return 0.5 * correlation(h, c, dist);
}

namespace {

std::vector<std::vector<double>> correlation_matrix(std::span<const Concept> concepts, const FiniteDistribution& dist) {
    const std::size_t n = concepts.size();
    std::vector<std::vector<std::uint8_t>> values(n, std::vector<std::uint8_t>(dist.domain.size()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t x = 0; x < dist.domain.size(); ++x) values[i][x] = concepts[i](dist.domain[x]) ? 1 : 0;
    }
    std::vector<std::vector<double>> corr(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t x = 0; x < dist.domain.size(); ++x) {
                acc += (values[i][x] == values[j][x] ? 1.0 : -1.0) * dist.weights[x];
            }
            corr[i][j] = corr[j][i] = std::abs(acc);
        }
    }
    return corr;
}

double threshold(std::size_t d) {
    const double dd = static_cast<double>(d);
    return 1.0 / (dd * dd * dd) + kCorrelationSlack;
}

}  // namespace

SqDimReport sq_dimension(std::span<const Concept> concepts, const FiniteDistribution& dist) {
    dist.validate();
    SqDimReport report;
    const std::size_t n = concepts.size();
    if (n == 0) return report;
    const auto corr = correlation_matrix(concepts, dist);

    std::vector<std::size_t> witness;
    for (std::size_t d = n; d >= 1; --d) {
        const double limit = threshold(d);
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < n && chosen.size() < d; ++i) {
            const bool ok = std::all_of(chosen.begin(), chosen.end(), [&](std::size_t j) { return corr[i][j] <= limit; });
            if (ok) chosen.push_back(i);
        }
        if (chosen.size() == d) {
            witness = std::move(chosen);
            break;
        }
    }
    report.d = witness.size();
    for (std::size_t a = 0; a < witness.size(); ++a) {
        report.witness.push_back(concepts[witness[a]].id);
        for (std::size_t b = a + 1; b < witness.size(); ++b) {
            report.max_pairwise_correlation = std::max(report.max_pairwise_correlation, corr[witness[a]][witness[b]]);
        }
    }

    if (n <= kExactDimensionClassLimit) {
        std::size_t best = 0;
        for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << n); ++mask) {
            const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
            if (size <= best) continue;
            const double limit = threshold(size);
            bool ok = true;
            for (std::size_t i = 0; i < n && ok; ++i) {
                if (!((mask >> i) & 1u)) continue;
                for (std::size_t j = i + 1; j < n && ok; ++j) {
                    if (((mask >> j) & 1u) && corr[i][j] > limit) ok = false;
                }
            }
            if (ok) best = size;
        }
        report.exact_d = best;
    }
    return report;
}

bool verify_witness(std::span<const Concept> concepts, std::span<const std::string> witness,
                    const FiniteDistribution& dist) {
    std::vector<const Concept*> chosen;
    for (const auto& id : witness) {
        auto it = std::find_if(concepts.begin(), concepts.end(), [&](const Concept& c) { return c.id == id; });
        if (it == concepts.end()) return false;
        chosen.push_back(&*it);
    }
    const double limit = threshold(chosen.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        for (std::size_t j = i + 1; j < chosen.size(); ++j) {
            if (std::abs(correlation(*chosen[i], *chosen[j], dist)) > limit) return false;
        }
    }
    return true;
}

std::size_t default_tuple_count(double eps, double delta) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("reduction: eps must be in (0, 1]");
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("reduction: delta must be in (0, 1)");
    return static_cast<std::size_t>(std::ceil(4.0 / eps * std::log(1.0 / delta)));
}

ReductionOutcome kwise_to_unary_reduce(const KWiseQuery& query, const ReductionConfig& config,
                                       const UnaryOracle& oracle, const UnlabeledSampler& unlabeled,
                                       const FiniteDistribution* exact_unlabeled) {
    const std::size_t k = query.arity;
    if (k == 0 || k > config.max_arity) throw std::invalid_argument("reduction: arity outside [1, max_arity]");
    const double eps = config.eps;
    const std::size_t tuples = config.tuples != 0 ? config.tuples : default_tuple_count(eps, config.delta);
    const double tau = eps / 4.0;

    ReductionOutcome outcome;
    auto ask = [&](SqQuery q) {
        if (config.max_queries != 0 && outcome.unary_queries >= config.max_queries) {
            throw BudgetExceeded("reduction: unary query budget exhausted");
        }
        ++outcome.unary_queries;
        return oracle(q);
    };
    auto measured = [&](const Concept& h) {
        return ask(SqQuery{[h](const BitVec& x, bool label) { return h(x) == label; }, tau}) - 0.5;
    };

    // Unbalanced targets are weakly learned by a constant.
    const double positive = ask(SqQuery{[](const BitVec&, bool label) { return label; }, eps / 2.0});
    if (std::abs(positive - 0.5) >= eps) {
        Concept h = constant_concept(positive > 0.5);
        const double adv = measured(h);
        outcome.result = WeakHypothesis{std::move(h), adv};
        return outcome;
    }

    const std::uint64_t patterns = std::uint64_t{1} << k;
    for (std::size_t t = 0; t < tuples; ++t) {
        ++outcome.tuples_tried;
        std::vector<BitVec> z(k);
        for (auto& v : z) v = unlabeled();
        for (std::size_t i = 0; i < k; ++i) {
            for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
                const auto labels = pattern_labels(pattern, k);
                auto h = [z, i, labels, q = query.predicate](const BitVec& x) {
                    std::vector<BitVec> xs = z;
                    xs[i] = x;
                    return q(xs, labels);
                };
                const double joint = ask(SqQuery{[h](const BitVec& x, bool label) { return label && h(x); }, tau});
                const double marginal = ask(SqQuery{[h](const BitVec& x, bool) { return h(x); }, tau});
                const double stat = joint - 0.5 * marginal;
                if (std::abs(stat) < eps) continue;
                const std::string id = "h[t=" + std::to_string(t) + ",i=" + std::to_string(i + 1) +
                                       ",l=" + std::to_string(pattern) + "]";
                Concept hyp = stat > 0 ? Concept{id, h} : Concept{"not " + id, [h](const BitVec& x) { return !h(x); }};
                const double adv = measured(hyp);
                outcome.result = WeakHypothesis{std::move(hyp), adv};
                return outcome;
            }
        }
    }

    // No label mattered: estimate each pattern's term from unlabeled tuples.
    std::vector<double> pr(patterns, 0.0);
    if (exact_unlabeled != nullptr) {
        for_each_tuple(*exact_unlabeled, k, [&](std::span<const BitVec> xs, double w) {
            for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
                if (query.predicate(xs, pattern_labels(pattern, k))) pr[pattern] += w;
            }
        });
    } else {
        if (config.estimate_samples == 0) throw std::invalid_argument("reduction: estimate_samples must be positive");
        std::vector<BitVec> xs(k);
        for (std::uint64_t s = 0; s < config.estimate_samples; ++s) {
            for (auto& x : xs) x = unlabeled();
            for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
                if (query.predicate(xs, pattern_labels(pattern, k))) pr[pattern] += 1.0;
            }
        }
        for (auto& p : pr) p /= static_cast<double>(config.estimate_samples);
    }
    Estimate est;
    for (double p : pr) est.value += p / static_cast<double>(patterns);
    est.per_term_bound = 4.0 * eps * (1.0 - 1.0 / static_cast<double>(patterns));
    est.error_bound = static_cast<double>(patterns) * est.per_term_bound;
    outcome.result = est;
    return outcome;
}

KWiseQuery basis_query(std::size_t k) {
    return KWiseQuery{k, [](std::span<const BitVec> xs, std::span<const std::uint8_t>) { return is_basis(xs); }, 0.01};
}

KWiseQuery basis_bit_query(std::size_t k, std::size_t i) {
    if (i >= k) throw std::out_of_range("basis_bit_query: bit index out of range");
    return KWiseQuery{k,
                      [i](std::span<const BitVec> xs, std::span<const std::uint8_t> labels) {
                          if (!is_basis(xs)) return false;
                          BitMatrix system(xs.size());
                          for (std::size_t r = 0; r < xs.size(); ++r) system.add_row(xs[r], labels[r] != 0);
                          const GaussResult g = gaussian_solve(system);
                          return g.status == GaussStatus::Solved && g.solution.get(i);
                      },
                      0.01};
}

ParityTarget basis_query_learner(std::size_t k, const Concept& c, const FiniteDistribution& dist, const OracleMode& mode) {
    if (k == 0) throw std::invalid_argument("basis_query_learner: k must be >= 1");
    for (const auto& x : dist.domain) {
        if (x.size() != k) throw std::invalid_argument("basis_query_learner: domain vectors must have length k");
    }
    const double p_basis = kwise_answer(basis_query(k), c, dist, mode);
    ParityTarget out{BitVec(k)};
    for (std::size_t i = 0; i < k; ++i) {
        const double p = kwise_answer(basis_bit_query(k, i), c, dist, mode);
        out.bits.set(i, p > 0.5 * p_basis);
    }
    return out;
}

namespace {

std::pair<std::size_t, std::size_t> parse_j_of_n(std::string_view text, std::string_view name) {
    const auto sep = text.find("-of-");
    if (sep == std::string_view::npos) throw std::invalid_argument("unknown concept class: " + std::string(name));
    std::size_t j = 0;
    std::size_t n = 0;
    const auto jpart = text.substr(0, sep);
    const auto npart = text.substr(sep + 4);
    if (std::from_chars(jpart.data(), jpart.data() + jpart.size(), j).ec != std::errc{} ||
        std::from_chars(npart.data(), npart.data() + npart.size(), n).ec != std::errc{} || j > n || n == 0 ||
        n > kMaxDomainBits) {
        throw std::invalid_argument("bad concept class parameters: " + std::string(name));
    }
    return {j, n};
}

}  // namespace

ConceptClass make_class(std::string_view name) {
    ConceptClass cls;
    cls.name = std::string(name);
    const auto colon = name.find(':');
    if (colon == std::string_view::npos) throw std::invalid_argument("unknown concept class: " + std::string(name));
    const auto family = name.substr(0, colon);
    const auto [j, n] = parse_j_of_n(name.substr(colon + 1), name);
    cls.dist = FiniteDistribution::uniform(n);
    const std::size_t count = std::size_t{1} << j;
    if (family == "parity") {
        for (std::size_t v = 0; v < count; ++v) cls.concepts.push_back(parity_concept(BitVec::from_word(v, n)));
    } else if (family == "conjunction") {
        for (std::size_t v = 0; v < count; ++v) {
            const BitVec mask = BitVec::from_word(v, n);
            cls.concepts.push_back(Concept{"conjunction:" + mask.to_string(), [mask](const BitVec& x) {
                                               for (std::size_t i = 0; i < mask.size(); ++i) {
                                                   if (mask.get(i) && !x.get(i)) return false;
                                               }
                                               return true;
                                           }});
        }
    } else {
        throw std::invalid_argument("unknown concept class: " + std::string(name));
    }
    return cls;
}

}  // namespace lpn::sq
