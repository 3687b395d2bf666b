#include <doctest.h>

#include <bit>
#include <cstdint>
#include <vector>

#include "ufn/bits.hpp"
#include "ufn/field.hpp"

using namespace ufn;

namespace {

// Elimination over a dense 0/1 integer matrix; the rank oracle.
uint32_t naive_rank(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    uint32_t rows = uint32_t(m.size()), cols = uint32_t(m[0].size());
    uint32_t rank = 0;
    for (uint32_t c = 0; c < cols && rank < rows; ++c) {
        uint32_t pivot = rank;
        while (pivot < rows && m[pivot][c] == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        for (uint32_t r = 0; r < rows; ++r) {
            if (r != rank && m[r][c]) {
                for (uint32_t j = 0; j < cols; ++j) m[r][j] ^= m[rank][j];
            }
        }
        ++rank;
    }
    return rank;
}

}  // namespace

TEST_CASE("bit vector basics") {
    BitVector v(70);
    v.set(0, 1);
    v.set(69, 1);
    v.flip(3);
    CHECK(v.get(0) == 1);
    CHECK(v.get(3) == 1);
    CHECK(v.get(69) == 1);
    CHECK(v.popcount() == 3);
    v.flip(3);
    CHECK(v.popcount() == 2);

    BitVector w = BitVector::from_word(8, 0b10110100);
    CHECK(w.popcount() == 4);
    CHECK(w.word0() == 0b10110100);
    CHECK(v.dot(v) == 0);
    CHECK(w.dot(BitVector::from_word(8, 0b00000100)) == 1);
    CHECK(!w.is_zero());
    CHECK(BitVector(8).is_zero());
    CHECK(w.xored(w).is_zero());
}

TEST_CASE("bit matrix rank equals elimination oracle") {
    RandomSource rng(31);
    for (int t = 0; t < 100; ++t) {
        uint32_t n = 1 + uint32_t(rng.below(12));
        BitMatrix m(n, n);
        std::vector<std::vector<int>> dense(n, std::vector<int>(n, 0));
        for (uint32_t i = 0; i < n; ++i) {
            for (uint32_t j = 0; j < n; ++j) {
                int b = int(rng.bits(1));
                m.set(i, j, b);
                dense[i][j] = b;
            }
        }
        CHECK(m.rank() == naive_rank(dense));
    }
}

TEST_CASE("identity and zero matrix ranks") {
    BitMatrix id(8, 8);
    for (uint32_t i = 0; i < 8; ++i) id.set(i, i, 1);
    CHECK(id.rank() == 8);
    CHECK(BitMatrix(8, 8).rank() == 0);
    CHECK(id.is_symmetric());
    CHECK(!id.is_zero_diagonal());
}

TEST_CASE("rank of symmetric zero-diagonal matrices is even") {
    RandomSource rng(32);
    for (int t = 0; t < 200; ++t) {
        uint32_t n = 2 + uint32_t(rng.below(15));
        BitMatrix m(n, n);
        for (uint32_t i = 0; i < n; ++i) {
            for (uint32_t j = i + 1; j < n; ++j) {
                int b = int(rng.bits(1));
                m.set(i, j, b);
                m.set(j, i, b);
            }
        }
        CHECK(m.rank() % 2 == 0);
    }
}

TEST_CASE("matrix apply and outer products") {
    BitMatrix m(3, 3);
    m.set(0, 1, 1);
    m.set(1, 2, 1);
    BitVector x = BitVector::from_word(3, 0b110);
    BitVector y = m.apply(x);
    CHECK(y.get(0) == 1);  // row 0 selects x(1)
    CHECK(y.get(1) == 1);  // row 1 selects x(2)
    CHECK(y.get(2) == 0);

    BitMatrix outer(3, 3);
    outer.add_outer(BitVector::from_word(3, 0b011), BitVector::from_word(3, 0b101));
    for (uint32_t i = 0; i < 3; ++i) {
        for (uint32_t j = 0; j < 3; ++j) {
            int expect = ((0b011 >> i) & 1) & ((0b101 >> j) & 1);
            CHECK(outer.get(i, j) == expect);
        }
    }
}

TEST_CASE("single-word row rank helper") {
    std::vector<uint64_t> rows = {0b001, 0b010, 0b011};
    CHECK(gf2_rank_words(rows, 3) == 2);
    std::vector<uint64_t> empty;
    CHECK(gf2_rank_words(empty, 5) == 0);
}

TEST_CASE("anf transform is an involution and matches direct expansion") {
    RandomSource rng(33);
    for (uint32_t n : {3u, 6u, 8u}) {
        uint64_t size = uint64_t(1) << n;
        std::vector<uint8_t> table(size);
        for (auto& v : table) v = uint8_t(rng.bits(1));
        std::vector<uint64_t> packed = pack_table(table);
        std::vector<uint64_t> twice = packed;
        anf_transform(twice, n);
        anf_transform(twice, n);
        CHECK(twice == packed);

        // Coefficients reproduce the table through subset sums.
        std::vector<uint64_t> coef = packed;
        anf_transform(coef, n);
        for (uint64_t x = 0; x < size; ++x) {
            int acc = 0;
            for (uint64_t s = x;; s = (s - 1) & x) {
                acc ^= int((coef[s >> 6] >> (s & 63)) & 1);
                if (s == 0) break;
            }
            CHECK(acc == int(table[x]));
        }
    }
}

TEST_CASE("walsh transform matches direct character sums") {
    RandomSource rng(34);
    uint32_t n = 6;
    uint64_t size = uint64_t(1) << n;
    std::vector<uint8_t> table(size);
    for (auto& v : table) v = uint8_t(rng.bits(1));
    std::vector<int64_t> a(size);
    for (uint64_t x = 0; x < size; ++x) a[x] = table[x] ? -1 : 1;
    walsh_transform(a);
    for (uint64_t alpha = 0; alpha < size; alpha += 7) {
        int64_t direct = 0;
        for (uint64_t x = 0; x < size; ++x) {
            int sign = (std::popcount(alpha & x) & 1) ^ table[x];
            direct += sign ? -1 : 1;
        }
        CHECK(a[alpha] == direct);
    }
}

TEST_CASE("pack table preserves order and popcount") {
    std::vector<uint8_t> vals(130, 0);
    vals[0] = 1;
    vals[64] = 1;
    vals[129] = 1;
    std::vector<uint64_t> w = pack_table(vals);
    REQUIRE(w.size() == 3);
    CHECK((w[0] & 1) == 1);
    CHECK((w[1] & 1) == 1);
    CHECK(((w[2] >> 1) & 1) == 1);
    CHECK(popcount_words(w) == 3);
}
