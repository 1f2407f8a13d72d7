#include <doctest.h>

#include <stdexcept>
#include <vector>

#include "lpn/bitvec.hpp"
#include "lpn/rng.hpp"
#include "oracles.hpp"

using lpn::BitMatrix;
using lpn::BitVec;
using lpn::BlockLayout;
using lpn::GaussStatus;

namespace {

BitVec bv(const char* s) { return BitVec::from_string(s); }

}  // namespace

TEST_CASE("dot_mod2 examples") {
    CHECK(oracle::dot("1010", "1110") == 0);
    CHECK(lpn::dot_mod2(bv("1010"), bv("1110")) == false);
    CHECK(lpn::dot_mod2(bv("1011"), bv("0000")) == false);
    CHECK(lpn::dot_mod2(bv("1000"), bv("1000")) == true);
    CHECK_THROWS_AS(lpn::dot_mod2(bv("10"), bv("100")), std::invalid_argument);
}

TEST_CASE("xor examples") {
    CHECK((bv("1010") ^ bv("1010")) == bv("0000"));
    CHECK((bv("0110") ^ bv("0000")) == bv("0110"));
    CHECK(oracle::xor_str("1100", "0110") == "1010");
    CHECK(lpn::add_mod2(bv("1100"), bv("0110")) == bv("1010"));
    CHECK_THROWS_AS(bv("1") ^ bv("10"), std::invalid_argument);
}

TEST_CASE("block slicing") {
    const BlockLayout layout(3, 2);
    CHECK(lpn::block(bv("110100"), layout, 2) == bv("01"));
    CHECK(lpn::block(bv("110100"), layout, 1) == bv("11"));
    CHECK(lpn::block(bv("000000"), layout, 3) == bv("00"));
    CHECK(bv("110100").block_value(layout, 2) == 0b10);  // coordinate 3 = 0 is the LSB
    CHECK_THROWS_AS(lpn::block(bv("110100"), layout, 0), std::out_of_range);
    CHECK_THROWS_AS(lpn::block(bv("110100"), layout, 4), std::out_of_range);
    CHECK_THROWS_AS(BlockLayout(0, 2), std::invalid_argument);
}

TEST_CASE("blocks across word boundaries") {
    lpn::Rng rng(5);
    const BlockLayout layout(3, 50);
    for (int t = 0; t < 50; ++t) {
        const BitVec v = rng.bits(150);
        for (std::size_t j = 1; j <= 3; ++j) {
            const BitVec b = lpn::block(v, layout, j);
            for (std::size_t i = 0; i < 50; ++i) REQUIRE(b.get(i) == v.get((j - 1) * 50 + i));
            REQUIRE(b.to_word() == v.block_value(layout, j));
        }
    }
}

TEST_CASE("rotation moves coordinate shift+1 to coordinate 1") {
    lpn::Rng rng(11);
    for (std::size_t len : {1u, 7u, 64u, 65u, 130u}) {
        const BitVec v = rng.bits(len);
        for (std::size_t shift = 0; shift < len; shift += 3) {
            const BitVec r = v.rotated(shift);
            for (std::size_t i = 0; i < len; ++i) REQUIRE(r.get(i) == v.get((i + shift) % len));
        }
    }
}

TEST_CASE("tail bits stay zero") {
    BitVec v = BitVec::from_word(~0ULL, 5);
    CHECK(v.popcount() == 5);
    CHECK(v.resized(3).popcount() == 3);
    CHECK(v.resized(70).popcount() == 5);
}

TEST_CASE("gaussian_solve examples") {
    SUBCASE("identity system") {
        const BitVec c = bv("1011");
        BitMatrix m(4);
        for (std::size_t i = 0; i < 4; ++i) m.add_row(BitVec::unit(4, i), c.get(i));
        const auto r = lpn::gaussian_solve(m);
        REQUIRE(r.status == GaussStatus::Solved);
        CHECK(r.solution == c);
    }
    SUBCASE("hand elimination") {
        const std::vector<std::string> rows{"1100", "0100", "0010", "0001"};
        const std::vector<int> labels{1, 1, 0, 0};
        const auto expected = oracle::consistent_targets(rows, labels, 4);
        REQUIRE(expected.size() == 1);
        CHECK(expected[0] == "0100");
        BitMatrix m(4);
        for (std::size_t i = 0; i < rows.size(); ++i) m.add_row(BitVec::from_string(rows[i]), labels[i] != 0);
        const auto r = lpn::gaussian_solve(m);
        REQUIRE(r.status == GaussStatus::Solved);
        CHECK(r.solution.to_string() == expected[0]);
    }
    SUBCASE("contradiction") {
        BitMatrix m(4);
        m.add_row(bv("1000"), false);
        m.add_row(bv("1000"), true);
        CHECK(lpn::gaussian_solve(m).status == GaussStatus::Inconsistent);
    }
    SUBCASE("rank deficient") {
        BitMatrix m(3);
        m.add_row(bv("110"), true);
        m.add_row(bv("011"), false);
        const auto r = lpn::gaussian_solve(m);
        CHECK(r.status == GaussStatus::Underdetermined);
        CHECK(r.rank == 2);
    }
    SUBCASE("labels required") {
        BitMatrix m(2);
        m.add_row(bv("10"));
        CHECK_THROWS_AS(lpn::gaussian_solve(m), std::invalid_argument);
    }
}

TEST_CASE("is_basis examples") {
    const std::vector<BitVec> standard{bv("100"), bv("010"), bv("001")};
    CHECK(lpn::is_basis(standard));
    const std::vector<BitVec> with_zero{bv("100"), bv("000"), bv("001")};
    CHECK_FALSE(lpn::is_basis(with_zero));
    CHECK(oracle::span_rank({"110", "011", "101"}) == 2);
    const std::vector<BitVec> dependent{bv("110"), bv("011"), bv("101")};
    CHECK_FALSE(lpn::is_basis(dependent));
    const std::vector<BitVec> wrong_len{bv("10"), bv("01"), bv("11")};
    CHECK_THROWS_AS(lpn::is_basis(wrong_len), std::invalid_argument);
}

TEST_CASE("rank agrees with span enumeration") {
    lpn::Rng rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t m = 1 + rng.below(6);
        const std::size_t len = 1 + rng.below(6);
        std::vector<BitVec> vs;
        std::vector<std::string> strs;
        for (std::size_t i = 0; i < m; ++i) {
            vs.push_back(rng.bits(len));
            strs.push_back(vs.back().to_string());
        }
        REQUIRE(lpn::rank(vs) == oracle::span_rank(strs));
    }
}

TEST_CASE("xor algebra properties") {
    lpn::Rng rng(42);
    for (int t = 0; t < 500; ++t) {
        const std::size_t len = 1 + rng.below(200);
        const BitVec u = rng.bits(len), v = rng.bits(len), w = rng.bits(len), c = rng.bits(len);
        REQUIRE(((u ^ v) ^ w) == (u ^ (v ^ w)));
        REQUIRE((u ^ v) == (v ^ u));
        REQUIRE((u ^ u).is_zero());
        REQUIRE(lpn::dot_mod2(u ^ v, c) == (lpn::dot_mod2(u, c) != lpn::dot_mod2(v, c)));
    }
}

TEST_CASE("gaussian_solve recovers the labeling target of random full-rank systems") {
    lpn::Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        const std::size_t k = 1 + rng.below(64);
        const BitVec c = rng.bits(k);
        BitMatrix m(k);
        std::vector<BitVec> rows;
        while (lpn::rank(rows) < k) {
            BitVec x = rng.bits(k);
            m.add_row(x, lpn::dot_mod2(x, c));
            rows.push_back(std::move(x));
        }
        const auto r = lpn::gaussian_solve(m);
        REQUIRE(r.status == GaussStatus::Solved);
        REQUIRE(r.solution == c);
    }
}

TEST_CASE("express_in finds a subset summing to the target") {
    lpn::Rng rng(9);
    for (int t = 0; t < 100; ++t) {
        const std::size_t k = 2 + rng.below(20);
        std::vector<BitVec> vs;
        for (std::size_t i = 0; i < k; ++i) vs.push_back(rng.bits(k));
        const BitVec target = BitVec::unit(k, 0);
        const auto z = lpn::express_in(vs, target);
        if (!z) {
            REQUIRE(lpn::rank(vs) < k);
            continue;
        }
        BitVec acc(k);
        for (std::size_t i = 0; i < k; ++i) {
            if (z->get(i)) acc ^= vs[i];
        }
        REQUIRE(acc == target);
    }
}
