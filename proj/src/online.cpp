#include "lpn/online.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "lpn/solvers.hpp"

namespace lpn {

EliminationMatrix::EliminationMatrix(std::size_t blocks, std::size_t width, bool track_provenance)
    : layout_(blocks, width), track_(track_provenance) {
    if (width > kMaxWidth) throw std::invalid_argument("EliminationMatrix: width exceeds " + std::to_string(kMaxWidth));
    rows_.assign(blocks, std::vector<std::optional<EliminationRow>>(std::size_t{1} << width));
}

std::size_t EliminationMatrix::capacity() const { return layout_.blocks * ((std::size_t{1} << layout_.width) - 1); }

const EliminationRow* EliminationMatrix::find(std::size_t j, std::uint64_t value) const {
    if (j < 1 || j > layout_.blocks || value == 0 || value >= rows_[j - 1].size()) return nullptr;
    const auto& slot = rows_[j - 1][value];
    return slot ? &*slot : nullptr;
}

void EliminationMatrix::insert(std::size_t j, std::uint64_t value, EliminationRow row) {
    if (j < 1 || j > layout_.blocks || value == 0) throw std::out_of_range("EliminationMatrix::insert: bad key");
    auto& slot = rows_[j - 1][value];
    if (slot) throw std::logic_error("EliminationMatrix::insert: key already occupied");
    slot = std::move(row);
    ++row_count_;
}

bool EliminationMatrix::check_invariants() const {
    std::size_t count = 0;
    for (std::size_t j = 1; j <= layout_.blocks; ++j) {
        for (std::size_t value = 0; value < rows_[j - 1].size(); ++value) {
            const auto& slot = rows_[j - 1][value];
            if (!slot) continue;
            ++count;
            if (value == 0) return false;
            for (std::size_t i = 1; i < j; ++i) {
                if (slot->residual.block_value(layout_, i) != 0) return false;
            }
            if (slot->residual.block_value(layout_, j) != value) return false;
            if (slot->depth == 0 || slot->depth > (std::size_t{1} << (j - 1))) return false;
        }
    }
    return count == row_count_ && count <= capacity();
}

namespace {

// `own_label` is consulted only when the example is captured; a Zeroed
// outcome folds in `zeroed_own_label` (the caller's label, or 0 to predict).
ReduceOutcome reduce_impl(EliminationMatrix& m, const BitVec& x, std::uint64_t index, const LabelSupplier& own_label,
                          std::uint8_t zeroed_own_label) {
    const BlockLayout& layout = m.layout();
    if (x.size() != layout.length()) throw std::invalid_argument("reduce_through: example length != blocks*width");
    BitVec residual = x;
    std::uint8_t rows_label = 0;
    std::size_t depth = 1;
    std::vector<std::uint64_t> provenance;
    for (std::size_t j = 1; j <= layout.blocks; ++j) {
        const std::uint64_t value = residual.block_value(layout, j);
        if (value == 0) continue;
        if (const EliminationRow* row = m.find(j, value)) {
            residual ^= row->residual;
            rows_label ^= row->label;
            depth += row->depth;
            if (m.tracks_provenance()) provenance = symmetric_difference(provenance, row->provenance);
            continue;
        }
        EliminationRow stored{std::move(residual), static_cast<std::uint8_t>(rows_label ^ own_label()), depth, {}};
        if (m.tracks_provenance()) {
            const std::uint64_t self[] = {index};
            stored.provenance = symmetric_difference(provenance, self);
        }
        m.insert(j, value, std::move(stored));
        return Captured{j};
    }
    return Zeroed{static_cast<std::uint8_t>(rows_label ^ zeroed_own_label), depth, std::move(provenance)};
}

}  // namespace

ReduceOutcome reduce_through(EliminationMatrix& m, const BitVec& x, std::uint8_t label, std::uint64_t index) {
    return reduce_impl(m, x, index, [label] { return label; }, label);
}

MatrixBank::MatrixBank(std::size_t blocks, std::size_t width, std::size_t matrices, bool track_provenance) {
    if (matrices == 0) throw std::invalid_argument("MatrixBank: need at least one matrix");
    matrices_.reserve(matrices);
    for (std::size_t i = 0; i < matrices; ++i) matrices_.emplace_back(blocks, width, track_provenance);
}

Prediction process_example(MatrixBank& bank, const BitVec& x, std::uint64_t index, const LabelSupplier& label) {
    Prediction p;
    p.votes.reserve(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) {
        ReduceOutcome r = reduce_impl(bank[i], x, index, label, 0);
        if (std::holds_alternative<Captured>(r)) {
            p.outcome = Unknown{i + 1};
            return p;
        }
        auto& z = std::get<Zeroed>(r);
        p.votes.push_back(MatrixVote{z.folded_label, z.depth, std::move(z.provenance)});
    }
    std::size_t ones = 0;
    for (const auto& v : p.votes) ones += v.bit;
    const std::size_t zeros = p.votes.size() - ones;
    Predicted pred;
    pred.tie = ones == zeros;
    pred.bit = ones > zeros ? 1 : 0;
    pred.votes_for = pred.bit ? ones : zeros;
    pred.votes_against = pred.bit ? zeros : ones;
    p.outcome = pred;
    return p;
}

OnlineReport run_online(ExampleSource& source, std::size_t blocks, std::size_t width, std::size_t matrices,
                        std::uint64_t count, bool track_provenance) {
    MatrixBank bank(blocks, width, matrices, track_provenance);
    const std::size_t length = bank.layout().length();
    if (source.k() > length) throw std::invalid_argument("run_online: examples longer than blocks*width");
    if (count == 0) {
        const auto left = source.remaining();
        if (!left) throw std::invalid_argument("run_online: count required for an unbounded source");
        count = *left;
    }

    OnlineReport report;
    report.has_target = source.has_target();
    report.unknown_bound = static_cast<std::uint64_t>(matrices) * bank[0].capacity();
    for (std::uint64_t n = 0; n < count; ++n) {
        LabeledExample e = source.draw();
        const BitVec x = e.x.size() == length ? e.x : e.x.resized(length);
        Prediction p = process_example(bank, x, e.index, [&e] { return e.label; });
        ++report.processed;
        const int truth = report.has_target ? static_cast<int>(source.target()(e.x)) : -1;
        for (const auto& v : p.votes) {
            report.max_depth = std::max(report.max_depth, v.depth);
            if (report.depth_votes.size() <= v.depth) report.depth_votes.resize(v.depth + 1);
            auto& tally = report.depth_votes[v.depth];
            ++tally.votes;
            if (truth == v.bit) ++tally.correct;
        }
        if (const auto* pred = std::get_if<Predicted>(&p.outcome)) {
            ++report.predicted;
            if (pred->tie) ++report.ties;
            if (report.has_target && truth != pred->bit) ++report.errors;
        } else {
            ++report.unknown;
        }
    }
    report.fill.reserve(bank.size());
    for (std::size_t i = 0; i < bank.size(); ++i) report.fill.push_back(bank[i].row_count());
    return report;
}

}  // namespace lpn
