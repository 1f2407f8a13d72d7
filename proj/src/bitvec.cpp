#include "lpn/bitvec.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <utility>

namespace lpn {

namespace {

std::size_t words_for(std::size_t len) { return (len + BitVec::kWordBits - 1) / BitVec::kWordBits; }

void require_same_length(const BitVec& u, const BitVec& v, const char* what) {
    if (u.size() != v.size()) {
        throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(u.size()) +
                                    " vs " + std::to_string(v.size()) + ")");
    }
}

}  // namespace

BlockLayout::BlockLayout(std::size_t blocks, std::size_t width) : blocks(blocks), width(width) {
    if (blocks == 0 || width == 0) {
        throw std::invalid_argument("BlockLayout: blocks and width must be >= 1");
    }
}

BitVec::BitVec(std::size_t len) : len_(len), words_(words_for(len), Word{0}) {}

BitVec BitVec::from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            v.set(i);
        } else if (bits[i] != '0') {
            throw std::invalid_argument("BitVec::from_string: expected only '0' and '1'");
        }
    }
    return v;
}

BitVec BitVec::from_word(Word w, std::size_t len) {
    if (len > kWordBits) throw std::invalid_argument("BitVec::from_word: len > 64");
    BitVec v(len);
    if (len > 0) {
        v.words_[0] = w;
        v.clear_tail();
    }
    return v;
}

BitVec BitVec::unit(std::size_t len, std::size_t index) {
    if (index >= len) throw std::out_of_range("BitVec::unit: index out of range");
    BitVec v(len);
    v.set(index);
    return v;
}

void BitVec::set(std::size_t i, bool value) {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
        words_[i / kWordBits] |= mask;
    } else {
        words_[i / kWordBits] &= ~mask;
    }
}

bool BitVec::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

std::size_t BitVec::popcount() const {
    std::size_t n = 0;
    for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::optional<std::size_t> BitVec::lowest_set() const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] != 0) return i * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[i]));
    }
    return std::nullopt;
}

BitVec& BitVec::operator^=(const BitVec& other) {
    require_same_length(*this, other, "xor");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
    return *this;
}

bool BitVec::operator==(const BitVec& other) const {
    return len_ == other.len_ && std::equal(words_.begin(), words_.end(), other.words_.begin());
}

BitVec::Word BitVec::extract(std::size_t start, std::size_t count) const {
    if (count > kWordBits || start + count > len_) {
        throw std::out_of_range("BitVec::extract: range out of bounds");
    }
    if (count == 0) return 0;
    const std::size_t w = start / kWordBits;
    const std::size_t off = start % kWordBits;
    Word value = words_[w] >> off;
    if (off != 0 && off + count > kWordBits) value |= words_[w + 1] << (kWordBits - off);
    if (count < kWordBits) value &= (Word{1} << count) - 1;
    return value;
}

BitVec::Word BitVec::to_word() const {
    if (len_ > kWordBits) throw std::invalid_argument("BitVec::to_word: more than 64 bits");
    return len_ == 0 ? 0 : words_[0];
}

BitVec::Word BitVec::block_value(const BlockLayout& layout, std::size_t j) const {
    if (len_ != layout.length()) throw std::invalid_argument("block_value: vector length != blocks*width");
    if (j < 1 || j > layout.blocks) throw std::out_of_range("block_value: block index out of range");
    return extract((j - 1) * layout.width, layout.width);
}

BitVec BitVec::rotated(std::size_t shift) const {
    BitVec out(len_);
    if (len_ == 0) return out;
    shift %= len_;
    // Two bulk copies: [shift, len) -> [0, len-shift), [0, shift) -> [len-shift, len).
    auto copy_range = [&](std::size_t src, std::size_t dst, std::size_t count) {
        while (count > 0) {
            const std::size_t chunk = std::min<std::size_t>(count, kWordBits);
            const Word bits = extract(src, chunk);
            for (std::size_t done = 0; done < chunk;) {
                const std::size_t pos = dst + done;
                const std::size_t off = pos % kWordBits;
                const std::size_t take = std::min(chunk - done, kWordBits - off);
                Word piece = bits >> done;
                if (take < kWordBits) piece &= (Word{1} << take) - 1;
                out.words_[pos / kWordBits] |= piece << off;
                done += take;
            }
            src += chunk;
            dst += chunk;
            count -= chunk;
        }
    };
    copy_range(shift, 0, len_ - shift);
    copy_range(0, len_ - shift, shift);
    return out;
}

BitVec BitVec::resized(std::size_t len) const {
    BitVec out(len);
    const std::size_t n = std::min(words_.size(), out.words_.size());
    std::copy_n(words_.begin(), n, out.words_.begin());
    out.clear_tail();
    return out;
}

std::string BitVec::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

void BitVec::clear_tail() {
    const std::size_t rem = len_ % kWordBits;
    if (rem != 0 && !words_.empty()) words_.back() &= (Word{1} << rem) - 1;
}

bool dot_mod2(const BitVec& u, const BitVec& v) {
    require_same_length(u, v, "dot_mod2");
    const auto uw = u.words();
    const auto vw = v.words();
    BitVec::Word acc = 0;
    for (std::size_t i = 0; i < uw.size(); ++i) acc ^= uw[i] & vw[i];
    return std::popcount(acc) & 1;
}

BitVec add_mod2(const BitVec& u, const BitVec& v) { return u ^ v; }

BitVec block(const BitVec& v, const BlockLayout& layout, std::size_t j) {
    if (v.size() != layout.length()) throw std::invalid_argument("block: vector length != blocks*width");
    if (j < 1 || j > layout.blocks) throw std::out_of_range("block: block index out of range");
    BitVec out(layout.width);
    const std::size_t start = (j - 1) * layout.width;
    for (std::size_t done = 0; done < layout.width; done += BitVec::kWordBits) {
        const std::size_t count = std::min(BitVec::kWordBits, layout.width - done);
        out.words()[done / BitVec::kWordBits] = v.extract(start + done, count);
    }
    return out;
}

void BitMatrix::add_row(BitVec row) {
    if (!labels_.empty()) throw std::invalid_argument("BitMatrix: mixing labeled and unlabeled rows");
    if (rows_.empty() && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("BitMatrix: row length mismatch");
    rows_.push_back(std::move(row));
}

void BitMatrix::add_row(BitVec row, bool label) {
    if (labels_.size() != rows_.size()) throw std::invalid_argument("BitMatrix: mixing labeled and unlabeled rows");
    if (rows_.empty() && cols_ == 0) cols_ = row.size();
    if (row.size() != cols_) throw std::invalid_argument("BitMatrix: row length mismatch");
    rows_.push_back(std::move(row));
    labels_.push_back(label ? 1 : 0);
}

namespace {

// In-place reduced row echelon form; returns the pivot column of each leading row.
std::vector<std::size_t> eliminate(std::vector<BitVec>& rows, std::vector<std::uint8_t>& labels, std::size_t cols) {
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t col = 0; col < cols && r < rows.size(); ++col) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p].get(col)) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[r], rows[p]);
        std::swap(labels[r], labels[p]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != r && rows[i].get(col)) {
                rows[i] ^= rows[r];
                labels[i] ^= labels[r];
            }
        }
        pivot_col.push_back(col);
        ++r;
    }
    return pivot_col;
}

bool consistent_tail(const std::vector<std::uint8_t>& labels, std::size_t rank) {
    return std::all_of(labels.begin() + static_cast<std::ptrdiff_t>(rank), labels.end(),
                       [](std::uint8_t l) { return l == 0; });
}

}  // namespace

GaussResult gaussian_solve(const BitMatrix& system) {
    if (system.rows() > 0 && !system.has_labels()) {
        throw std::invalid_argument("gaussian_solve: system has no labels");
    }
    const std::size_t n = system.cols();
    std::vector<BitVec> rows = system.row_data();
    std::vector<std::uint8_t> labels = system.labels();
    const std::vector<std::size_t> pivot_col = eliminate(rows, labels, n);
    const std::size_t r = pivot_col.size();

    GaussResult result;
    result.rank = r;
    if (!consistent_tail(labels, r)) {
        result.status = GaussStatus::Inconsistent;
    } else if (r < n) {
        result.status = GaussStatus::Underdetermined;
    } else {
        result.status = GaussStatus::Solved;
        result.solution = BitVec(n);
        for (std::size_t i = 0; i < r; ++i) result.solution.set(pivot_col[i], labels[i] != 0);
    }
    return result;
}

std::size_t rank(std::span<const BitVec> vectors) {
    // Echelon basis indexed by leading coordinate.
    std::vector<BitVec> basis;
    std::vector<std::size_t> lead;
    for (const BitVec& v : vectors) {
        BitVec cur = v;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (cur.get(lead[i])) cur ^= basis[i];
        }
        if (auto low = cur.lowest_set()) {
            for (std::size_t i = 0; i < basis.size(); ++i) {
                if (basis[i].get(*low)) basis[i] ^= cur;
            }
            basis.push_back(std::move(cur));
            lead.push_back(*low);
        }
    }
    return basis.size();
}

bool is_basis(std::span<const BitVec> vectors) {
    const std::size_t k = vectors.size();
    for (const BitVec& v : vectors) {
        if (v.size() != k) throw std::invalid_argument("is_basis: expected k vectors of length k");
    }
    return rank(vectors) == k;
}

std::optional<BitVec> express_in(std::span<const BitVec> vectors, const BitVec& target) {
    // Columns of the system are the input vectors; solve sum z_i v_i = target.
    const std::size_t m = vectors.size();
    const std::size_t n = target.size();
    BitMatrix system(m);
    for (std::size_t coord = 0; coord < n; ++coord) {
        BitVec row(m);
        for (std::size_t i = 0; i < m; ++i) {
            if (vectors[i].size() != n) throw std::invalid_argument("express_in: length mismatch");
            if (vectors[i].get(coord)) row.set(i);
        }
        system.add_row(std::move(row), target.get(coord));
    }
    // Free variables are set to zero; pick one particular solution.
    std::vector<BitVec> rows = system.row_data();
    std::vector<std::uint8_t> labels = system.labels();
    const std::vector<std::size_t> pivot_col = eliminate(rows, labels, m);
    const std::size_t r = pivot_col.size();
    if (!consistent_tail(labels, r)) return std::nullopt;
    BitVec z(m);
    for (std::size_t i = 0; i < r; ++i) z.set(pivot_col[i], labels[i] != 0);
    return z;
}

}  // namespace lpn
