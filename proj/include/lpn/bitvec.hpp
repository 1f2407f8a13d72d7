#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace lpn {

/// Splits a vector of `blocks * width` bits into equal blocks.
/// Block 1 is the first `width` coordinates.
struct BlockLayout {
    std::size_t blocks = 1;
    std::size_t width = 1;

    BlockLayout() = default;
    BlockLayout(std::size_t blocks, std::size_t width);

    std::size_t length() const { return blocks * width; }
    bool operator==(const BlockLayout&) const = default;
};

/// Packed GF(2) vector. Coordinate 1 lives in bit 0 of word 0.
/// Bits past size() are always zero.
class BitVec {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    BitVec() = default;
    explicit BitVec(std::size_t len);

    /// "1010" -> coordinates 1..4 = 1,0,1,0.
    static BitVec from_string(std::string_view bits);
    /// Bit j of `w` becomes coordinate j+1. Requires len <= 64.
    static BitVec from_word(Word w, std::size_t len);
    static BitVec unit(std::size_t len, std::size_t index);

    std::size_t size() const { return len_; }
    bool get(std::size_t i) const { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

    bool is_zero() const;
    std::size_t popcount() const;
    /// Index of the first set coordinate (0-based), or nullopt.
    std::optional<std::size_t> lowest_set() const;

    BitVec& operator^=(const BitVec& other);
    friend BitVec operator^(BitVec lhs, const BitVec& rhs) { return lhs ^= rhs; }
    bool operator==(const BitVec& other) const;

    std::span<const Word> words() const { return {words_.data(), words_.size()}; }
    std::span<Word> words() { return {words_.data(), words_.size()}; }

    /// Up to 64 consecutive bits starting at 0-based coordinate `start`.
    Word extract(std::size_t start, std::size_t count) const;
    /// Packs the vector into one word. Requires size() <= 64.
    Word to_word() const;

    /// Value of block j (1-based) as an integer; coordinate order is LSB-first.
    Word block_value(const BlockLayout& layout, std::size_t j) const;

    /// result[i] = this[(i + shift) mod size()], so coordinate shift+1 moves to coordinate 1.
    BitVec rotated(std::size_t shift) const;
    /// Zero-extends or truncates to `len` bits.
    BitVec resized(std::size_t len) const;

    std::string to_string() const;

private:
    void clear_tail();

    std::size_t len_ = 0;
    boost::container::small_vector<Word, 2> words_;
};

bool dot_mod2(const BitVec& u, const BitVec& v);
BitVec add_mod2(const BitVec& u, const BitVec& v);
BitVec block(const BitVec& v, const BlockLayout& layout, std::size_t j);

/// Rows plus an optional parallel label column.
class BitMatrix {
public:
    BitMatrix() = default;
    explicit BitMatrix(std::size_t cols) : cols_(cols) {}

    void add_row(BitVec row);
    void add_row(BitVec row, bool label);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    bool has_labels() const { return !rows_.empty() && labels_.size() == rows_.size(); }

    const BitVec& row(std::size_t i) const { return rows_[i]; }
    const std::vector<BitVec>& row_data() const { return rows_; }
    const std::vector<std::uint8_t>& labels() const { return labels_; }

private:
    std::size_t cols_ = 0;
    std::vector<BitVec> rows_;
    std::vector<std::uint8_t> labels_;
};

enum class GaussStatus { Solved, Underdetermined, Inconsistent };

struct GaussResult {
    GaussStatus status = GaussStatus::Underdetermined;
    BitVec solution;  // valid when Solved
    std::size_t rank = 0;
};

/// Reduced row echelon elimination; pivot = lowest-index row with the
/// lowest-index nonzero column.
GaussResult gaussian_solve(const BitMatrix& system);

std::size_t rank(std::span<const BitVec> vectors);

/// True iff the k vectors of length k span {0,1}^k.
bool is_basis(std::span<const BitVec> vectors);

/// Coefficients z with XOR_{i: z_i=1} vectors[i] == target, if any.
std::optional<BitVec> express_in(std::span<const BitVec> vectors, const BitVec& target);

}  // namespace lpn
