#include <doctest.h>

#include <cstdint>
#include <vector>

#include "ufn/field.hpp"

using namespace ufn;

namespace {

// Pascal-triangle binomials mod p via exact unsigned 128-bit rows; the
// independent oracle for the digitwise evaluation.
uint8_t pascal_binomial_mod(uint32_t n, uint32_t k, uint32_t p) {
    if (k > n) return 0;
    std::vector<unsigned __int128> row(n + 1, 0);
    row[0] = 1;
    for (uint32_t i = 1; i <= n; ++i) {
        for (uint32_t j = i; j > 0; --j) row[j] += row[j - 1];
    }
    return uint8_t(row[k] % p);
}

FieldVector vec(uint32_t p, std::initializer_list<uint8_t> entries) {
    FieldVector v(p, uint32_t(entries.size()));
    uint32_t i = 0;
    for (uint8_t e : entries) v.set(i++, e);
    return v;
}

}  // namespace

TEST_CASE("prime field arithmetic") {
    PrimeField f5(5);
    CHECK(f5.add(3, 4) == 2);
    CHECK(f5.sub(1, 3) == 3);
    CHECK(f5.neg(0) == 0);
    CHECK(f5.mul(3, 4) == 2);
    CHECK(f5.pow(2, 10) == 4);
    for (uint8_t a = 1; a < 5; ++a) CHECK(f5.mul(a, f5.inv(a)) == 1);
    CHECK(f5.factorial(4) == 4);
    CHECK(f5.factorial(5) == 0);
    CHECK(f5.factorial(100) == 0);
    CHECK(f5.reduce(-7) == 3);
    CHECK_THROWS(PrimeField(4));
    CHECK(is_supported_prime(2));
    CHECK(is_supported_prime(3));
    CHECK(!is_supported_prime(6));
}

TEST_CASE("power_vector entrywise powers") {
    FieldVector x = vec(3, {0, 1, 2});
    FieldVector sq = power_vector(x, 2);
    CHECK(sq.get(0) == 0);
    CHECK(sq.get(1) == 1);
    CHECK(sq.get(2) == 1);

    FieldVector ones = power_vector(x, 0);
    for (uint32_t i = 0; i < 3; ++i) CHECK(ones.get(i) == 1);

    FieldVector b = vec(2, {1, 0, 1});
    CHECK(power_vector(b, 1) == b);
    CHECK_THROWS(power_vector(x, 3));
}

TEST_CASE("power_vector equals repeated multiplication") {
    RandomSource rng(11);
    for (uint32_t p : {2u, 3u, 5u}) {
        for (int t = 0; t < 20; ++t) {
            FieldVector x = rng.field_vector(p, 9);
            PrimeField field(p);
            for (uint32_t e = 0; e < p; ++e) {
                FieldVector xe = power_vector(x, e);
                for (uint32_t j = 0; j < 9; ++j) {
                    uint8_t manual = 1;
                    for (uint32_t t2 = 0; t2 < e; ++t2) {
                        manual = field.mul(manual, x.get(j));
                    }
                    CHECK(xe.get(j) == manual);
                }
                if (e == p - 1) CHECK((xe.get(0) == 0 || xe.get(0) == 1));
            }
        }
    }
}

TEST_CASE("product_functional products and sums") {
    std::vector<FieldVector> rows = {vec(2, {1, 0, 1}), vec(2, {1, 1, 0})};
    std::vector<uint32_t> both = {0, 1};
    auto [r, s] = product_functional(rows, both);
    CHECK(r == vec(2, {1, 0, 0}));
    CHECK(s == 1);

    auto [empty_r, empty_s] = product_functional(rows, {});
    CHECK(empty_r == FieldVector::all_ones(2, 3));
    CHECK(empty_s == 1);  // N = 3 mod 2

    std::vector<FieldVector> f3rows = {vec(3, {2, 2})};
    std::vector<uint32_t> one = {0};
    auto [r3, s3] = product_functional(f3rows, one);
    CHECK(r3 == vec(3, {2, 2}));
    CHECK(s3 == 1);  // 2 + 2 = 4 = 1 mod 3

    std::vector<uint32_t> bad = {5};
    CHECK_THROWS(product_functional(rows, bad));
}

TEST_CASE("product_functional multiplicative over disjoint subsets") {
    RandomSource rng(7);
    for (int t = 0; t < 30; ++t) {
        uint32_t p = (t % 2 == 0) ? 3 : 5;
        std::vector<FieldVector> rows;
        for (int i = 0; i < 4; ++i) rows.push_back(rng.field_vector(p, 6));
        std::vector<uint32_t> a = {0, 2}, b = {1, 3}, u = {0, 1, 2, 3};
        auto [ra, sa] = product_functional(rows, a);
        auto [rb, sb] = product_functional(rows, b);
        auto [ru, su] = product_functional(rows, u);
        CHECK(ra.pointwise_mul(rb) == ru);
        (void)sa;
        (void)sb;
        (void)su;
    }
}

TEST_CASE("lucas binomial spot values") {
    CHECK(lucas_binomial(5, 4, 2) == 1);
    CHECK(lucas_binomial(10, 2, 3) == 0);
    for (uint32_t p : {2u, 3u, 5u}) {
        CHECK(lucas_binomial(17, 0, p) == 1);
        CHECK(lucas_binomial(3, 9, p) == 0);
    }
}

TEST_CASE("lucas binomial equals exact binomials up to n = 40") {
    for (uint32_t p : {2u, 3u, 5u}) {
        for (uint32_t n = 0; n <= 40; ++n) {
            for (uint32_t k = 0; k <= n; ++k) {
                CHECK(lucas_binomial(n, k, p) == pascal_binomial_mod(n, k, p));
            }
        }
    }
}

TEST_CASE("base-p digits least significant first") {
    CHECK(base_p_digits(45, 3, 4) == std::vector<uint8_t>{0, 0, 2, 1});
    CHECK(base_p_digits(13, 3, 3) == std::vector<uint8_t>{1, 1, 1});
    CHECK(base_p_digits(0, 2, 3) == std::vector<uint8_t>{0, 0, 0});
}

TEST_CASE("field vector index round trip") {
    for (uint32_t p : {2u, 3u, 5u}) {
        uint64_t size = 1;
        for (int i = 0; i < 4; ++i) size *= p;
        for (uint64_t idx = 0; idx < size; ++idx) {
            FieldVector x = FieldVector::from_index(p, 4, idx);
            CHECK(x.to_index() == idx);
            // Coordinate 0 varies fastest.
            CHECK(x.get(0) == idx % p);
        }
    }
    FieldVector w = FieldVector::from_word(6, 0b101101);
    CHECK(w.word() == 0b101101);
    CHECK(w.to_index() == 0b101101);
    CHECK(w.coordinate_sum() == 0);  // weight 4
}

TEST_CASE("field vector dot and pointwise ops") {
    FieldVector a = vec(3, {1, 2, 0, 1});
    FieldVector b = vec(3, {2, 2, 1, 1});
    CHECK(a.dot(b) == (2 + 4 + 0 + 1) % 3);
    CHECK(a.add(b) == vec(3, {0, 1, 1, 2}));
    CHECK(a.pointwise_mul(b) == vec(3, {2, 1, 0, 1}));
    CHECK(a.pow_entries(0) == FieldVector::all_ones(3, 4));
    CHECK(!a.is_zero());
    CHECK(FieldVector(3, 4).is_zero());
}

TEST_CASE("random source determinism and shard decorrelation") {
    RandomSource a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomSource s0(123, 0), s1(123, 1);
    int agree = 0;
    for (int i = 0; i < 64; ++i) agree += s0.bits(1) == s1.bits(1);
    CHECK(agree < 64);

    RandomSource c(5);
    for (int i = 0; i < 200; ++i) {
        CHECK(c.below(7) < 7);
        CHECK(c.field_element(5) < 5);
        CHECK(c.bits(3) < 8);
    }
    FieldVector v = c.field_vector(3, 10);
    CHECK(v.p() == 3);
    CHECK(v.size() == 10);
}
