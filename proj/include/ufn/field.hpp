#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace ufn {

// Arithmetic mod a small prime p. Values live in [0, p).
class PrimeField {
public:
    explicit PrimeField(uint32_t p);

    uint32_t p() const { return p_; }

    uint8_t add(uint8_t a, uint8_t b) const { return narrow((a + b) % p_); }
    uint8_t sub(uint8_t a, uint8_t b) const { return narrow((a + p_ - b) % p_); }
    uint8_t neg(uint8_t a) const { return narrow((p_ - a) % p_); }
    uint8_t mul(uint8_t a, uint8_t b) const {
        return narrow((uint32_t(a) * uint32_t(b)) % p_);
    }
    uint8_t pow(uint8_t a, uint64_t e) const;
    // Inverse of a nonzero element.
    uint8_t inv(uint8_t a) const;
    // n! mod p. Zero whenever n >= p.
    uint8_t factorial(uint64_t n) const;
    // Reduce a signed integer into [0, p).
    uint8_t reduce(int64_t v) const {
        int64_t r = v % int64_t(p_);
        return narrow(uint32_t(r < 0 ? r + p_ : r));
    }

private:
    static uint8_t narrow(uint32_t v) { return uint8_t(v); }
    uint32_t p_;
};

bool is_supported_prime(uint32_t p);

// Vector over F_p^n. For p = 2 the entries are bit-packed into 64-bit words
// and coordinate sums use popcount; for p > 2 one byte per entry.
class FieldVector {
public:
    FieldVector() : p_(2), n_(0) {}
    FieldVector(uint32_t p, uint32_t n);

    // Decodes a table index: coordinate 0 varies fastest, entry j is
    // (index / p^j) mod p.
    static FieldVector from_index(uint32_t p, uint32_t n, uint64_t index);
    // p = 2 with n <= 64: coordinate j is bit j.
    static FieldVector from_word(uint32_t n, uint64_t bits);
    static FieldVector all_ones(uint32_t p, uint32_t n);

    uint32_t p() const { return p_; }
    uint32_t size() const { return n_; }

    uint8_t get(uint32_t i) const;
    void set(uint32_t i, uint8_t v);

    // Inverse of from_index; requires p^n to fit in 64 bits.
    uint64_t to_index() const;
    // p = 2, n <= 64 only.
    uint64_t word() const;

    FieldVector add(const FieldVector& o) const;
    FieldVector pointwise_mul(const FieldVector& o) const;
    // Entrywise a_i^e with 0 <= e < p; e = 0 gives the all-ones vector.
    FieldVector pow_entries(uint32_t e) const;
    // Sum of entries mod p.
    uint8_t coordinate_sum() const;
    // Inner product mod p.
    uint8_t dot(const FieldVector& o) const;
    bool is_zero() const;

    bool operator==(const FieldVector& o) const;

private:
    void check_same_shape(const FieldVector& o) const;
    uint32_t p_;
    uint32_t n_;
    std::vector<uint64_t> w_;  // p == 2
    std::vector<uint8_t> b_;   // p > 2
};

// x^(i) entrywise; rejects e >= p so the Frobenius collapse stays visible.
FieldVector power_vector(const FieldVector& x, uint32_t e);

// r_tau = pointwise product of the selected rows (all-ones for empty tau),
// paired with its coordinate sum <r_tau>.
std::pair<FieldVector, uint8_t> product_functional(
    std::span<const FieldVector> rows, std::span<const uint32_t> tau);

// Base-p digits of w, least significant first, padded to `count`.
std::vector<uint8_t> base_p_digits(uint64_t w, uint32_t p, uint32_t count);

// C(n, k) mod p by digitwise reduction.
uint8_t lucas_binomial(uint64_t n, uint64_t k, uint32_t p);

// Deterministic stream of raw bits. Shard streams are decorrelated by
// folding the shard id into the seed sequence, so results depend only on
// (seed, shard) and never on thread scheduling.
class RandomSource {
public:
    explicit RandomSource(uint64_t seed);
    RandomSource(uint64_t seed, uint64_t shard);

    uint64_t next_u64();
    // Uniform in [0, bound) by rejection; bound >= 1.
    uint64_t below(uint64_t bound);
    uint8_t field_element(uint32_t p);
    uint64_t bits(uint32_t count);
    FieldVector field_vector(uint32_t p, uint32_t n);

private:
    std::mt19937_64 eng_;
};

}  // namespace ufn
