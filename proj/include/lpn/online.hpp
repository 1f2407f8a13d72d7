#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "lpn/bitvec.hpp"
#include "lpn/instance.hpp"

namespace lpn {

/// A stored row of an elimination matrix. Its key is (block, value) of the
/// first nonzero block of `residual`.
struct EliminationRow {
    BitVec residual;
    std::uint8_t label = 0;
    std::size_t depth = 0;                  // original examples XORed in
    std::vector<std::uint64_t> provenance;  // XOR-set of draw indices, when tracked
};

/// Gaussian elimination whose entries are width-bit blocks: at most one row
/// per (block, nonzero value).
class EliminationMatrix {
public:
    static constexpr std::size_t kMaxWidth = 20;

    EliminationMatrix(std::size_t blocks, std::size_t width, bool track_provenance = false);

    const BlockLayout& layout() const { return layout_; }
    bool tracks_provenance() const { return track_; }
    std::size_t row_count() const { return row_count_; }
    /// blocks * (2^width - 1).
    std::size_t capacity() const;

    /// Row keyed (j, value), j 1-based; nullptr if absent or value == 0.
    const EliminationRow* find(std::size_t j, std::uint64_t value) const;
    void insert(std::size_t j, std::uint64_t value, EliminationRow row);
    /// Every row has blocks < j zero and block j equal to its key.
    bool check_invariants() const;

private:
    BlockLayout layout_;
    bool track_;
    std::size_t row_count_ = 0;
    std::vector<std::vector<std::optional<EliminationRow>>> rows_;  // [block][value]
};

struct Zeroed {
    std::uint8_t folded_label = 0;
    std::size_t depth = 0;                  // includes the example itself
    std::vector<std::uint64_t> provenance;  // stored rows used (excludes the example)
};

struct Captured {
    std::size_t block = 0;  // 1-based
};

using ReduceOutcome = std::variant<Zeroed, Captured>;

/// Reduces (x, label) block by block. On a missing row the current residual
/// is stored under that key and the outcome is Captured.
ReduceOutcome reduce_through(EliminationMatrix& m, const BitVec& x, std::uint8_t label, std::uint64_t index = 0);

class MatrixBank {
public:
    MatrixBank(std::size_t blocks, std::size_t width, std::size_t matrices, bool track_provenance = false);

    std::size_t size() const { return matrices_.size(); }
    const BlockLayout& layout() const { return matrices_.front().layout(); }
    EliminationMatrix& operator[](std::size_t i) { return matrices_[i]; }
    const EliminationMatrix& operator[](std::size_t i) const { return matrices_[i]; }

private:
    std::vector<EliminationMatrix> matrices_;
};

struct MatrixVote {
    std::uint8_t bit = 0;
    std::size_t depth = 0;
    std::vector<std::uint64_t> provenance;
};

struct Predicted {
    std::uint8_t bit = 0;
    std::size_t votes_for = 0;
    std::size_t votes_against = 0;
    bool tie = false;  // split vote, resolved to 0
};

struct Unknown {
    std::size_t captured_in_matrix = 0;  // 1-based
};

struct Prediction {
    std::variant<Predicted, Unknown> outcome;
    std::vector<MatrixVote> votes;  // one per matrix the example passed through
};

/// Supplies the (noisy) label of the current example; only called when the
/// example is captured.
using LabelSupplier = std::function<std::uint8_t()>;

Prediction process_example(MatrixBank& bank, const BitVec& x, std::uint64_t index, const LabelSupplier& label);

struct DepthTally {
    std::uint64_t votes = 0;
    std::uint64_t correct = 0;  // against the noiseless label
};

struct OnlineReport {
    std::uint64_t processed = 0;
    std::uint64_t predicted = 0;
    std::uint64_t unknown = 0;
    std::uint64_t errors = 0;  // predictions disagreeing with the noiseless label
    std::uint64_t ties = 0;
    bool has_target = false;
    std::size_t max_depth = 0;
    std::uint64_t unknown_bound = 0;     // matrices * blocks * (2^width - 1)
    std::vector<std::size_t> fill;       // rows per matrix
    std::vector<DepthTally> depth_votes; // indexed by depth
};

/// Feeds `count` examples (0 = until a finite stream ends) through a fresh bank.
OnlineReport run_online(ExampleSource& source, std::size_t blocks, std::size_t width, std::size_t matrices,
                        std::uint64_t count, bool track_provenance = false);

}  // namespace lpn
