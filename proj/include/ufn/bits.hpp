#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace ufn {

// Dense vector over F_2, bit-packed, used by the quadratic and search paths.
class BitVector {
public:
    BitVector() : n_(0) {}
    explicit BitVector(uint32_t n) : n_(n), w_((n + 63) / 64, 0) {}
    static BitVector from_word(uint32_t n, uint64_t bits);

    uint32_t size() const { return n_; }
    int get(uint32_t i) const { return int((w_[i / 64] >> (i % 64)) & 1); }
    void set(uint32_t i, int v);
    void flip(uint32_t i) { w_[i / 64] ^= uint64_t(1) << (i % 64); }

    void xor_inplace(const BitVector& o);
    BitVector xored(const BitVector& o) const;
    BitVector anded(const BitVector& o) const;
    uint64_t popcount() const;
    // Inner product mod 2.
    int dot(const BitVector& o) const;
    bool is_zero() const;
    uint64_t word(uint32_t i) const { return w_[i]; }
    uint64_t word0() const { return w_.empty() ? 0 : w_[0]; }

    bool operator==(const BitVector& o) const = default;

private:
    uint32_t n_;
    std::vector<uint64_t> w_;
};

// Row-major packed matrix over F_2.
class BitMatrix {
public:
    BitMatrix() : rows_(0), cols_(0), wpr_(0) {}
    BitMatrix(uint32_t rows, uint32_t cols);

    uint32_t rows() const { return rows_; }
    uint32_t cols() const { return cols_; }

    int get(uint32_t r, uint32_t c) const;
    void set(uint32_t r, uint32_t c, int v);
    void xor_entry(uint32_t r, uint32_t c, int v);
    void xor_row_into(uint32_t src, uint32_t dst);
    void xor_inplace(const BitMatrix& o);

    BitVector row(uint32_t r) const;
    // y = M x over F_2.
    BitVector apply(const BitVector& x) const;
    bool is_symmetric() const;
    bool is_zero_diagonal() const;
    uint32_t rank() const;

    // rank of u (x) v^T + v (x) u^T style updates is handled by callers;
    // this just adds the outer product u v^T entrywise.
    void add_outer(const BitVector& u, const BitVector& v);

    bool operator==(const BitMatrix& o) const = default;

private:
    uint32_t rows_, cols_, wpr_;
    std::vector<uint64_t> w_;
};

// Rank of a list of single-word rows with cols <= 64.
uint32_t gf2_rank_words(std::span<const uint64_t> rows, uint32_t cols);

// ---- packed 2^N truth-table helpers ----

// Packs a byte table of 0/1 values into words, index order preserved.
std::vector<uint64_t> pack_table(std::span<const uint8_t> vals);

uint64_t popcount_words(std::span<const uint64_t> w);

// In-place multilinear (ANF) transform: table of values -> coefficients.
// Self-inverse, so it also turns coefficient tables into value tables.
void anf_transform(std::span<uint64_t> w, uint32_t N);

// In-place Walsh transform of the +-1 lift: input a[x] = (-1)^{f(x)} as
// integers, output a[alpha] = sum_x (-1)^{f(x) + <alpha, x>}.
void walsh_transform(std::span<int64_t> a);

}  // namespace ufn
