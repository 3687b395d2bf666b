#include "ufn/bits.hpp"

#include <bit>
#include <stdexcept>

namespace ufn {

BitVector BitVector::from_word(uint32_t n, uint64_t bits) {
    if (n > 64) throw std::invalid_argument("from_word needs n <= 64");
    if (n < 64 && (bits >> n) != 0) throw std::invalid_argument("bits out of range");
    BitVector v(n);
    if (n) v.w_[0] = bits;
    return v;
}

void BitVector::set(uint32_t i, int v) {
    uint64_t mask = uint64_t(1) << (i % 64);
    if (v) w_[i / 64] |= mask; else w_[i / 64] &= ~mask;
}

void BitVector::xor_inplace(const BitVector& o) {
    if (n_ != o.n_) throw std::invalid_argument("mismatched BitVector sizes");
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
}

BitVector BitVector::xored(const BitVector& o) const {
    BitVector r = *this;
    r.xor_inplace(o);
    return r;
}

BitVector BitVector::anded(const BitVector& o) const {
    if (n_ != o.n_) throw std::invalid_argument("mismatched BitVector sizes");
    BitVector r = *this;
    for (size_t i = 0; i < w_.size(); ++i) r.w_[i] &= o.w_[i];
    return r;
}

uint64_t BitVector::popcount() const {
    uint64_t c = 0;
    for (uint64_t w : w_) c += std::popcount(w);
    return c;
}

int BitVector::dot(const BitVector& o) const {
    if (n_ != o.n_) throw std::invalid_argument("mismatched BitVector sizes");
    uint64_t c = 0;
    for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
    return int(c & 1);
}

bool BitVector::is_zero() const {
    for (uint64_t w : w_) if (w) return false;
    return true;
}

BitMatrix::BitMatrix(uint32_t rows, uint32_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), w_(uint64_t(rows) * wpr_, 0) {}

int BitMatrix::get(uint32_t r, uint32_t c) const {
    return int((w_[uint64_t(r) * wpr_ + c / 64] >> (c % 64)) & 1);
}

void BitMatrix::set(uint32_t r, uint32_t c, int v) {
    uint64_t& word = w_[uint64_t(r) * wpr_ + c / 64];
    uint64_t mask = uint64_t(1) << (c % 64);
    if (v) word |= mask; else word &= ~mask;
}

void BitMatrix::xor_entry(uint32_t r, uint32_t c, int v) {
    if (v) w_[uint64_t(r) * wpr_ + c / 64] ^= uint64_t(1) << (c % 64);
}

void BitMatrix::xor_row_into(uint32_t src, uint32_t dst) {
    for (uint32_t i = 0; i < wpr_; ++i) {
        w_[uint64_t(dst) * wpr_ + i] ^= w_[uint64_t(src) * wpr_ + i];
    }
}

void BitMatrix::xor_inplace(const BitMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw std::invalid_argument("mismatched BitMatrix shapes");
    }
    for (size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
}

BitVector BitMatrix::row(uint32_t r) const {
    BitVector v(cols_);
    for (uint32_t c = 0; c < cols_; ++c) v.set(c, get(r, c));
    return v;
}

BitVector BitMatrix::apply(const BitVector& x) const {
    if (x.size() != cols_) throw std::invalid_argument("apply: size mismatch");
    BitVector y(rows_);
    for (uint32_t r = 0; r < rows_; ++r) {
        uint64_t acc = 0;
        for (uint32_t i = 0; i < wpr_; ++i) {
            acc ^= w_[uint64_t(r) * wpr_ + i] & x.word(i);
        }
        y.set(r, int(std::popcount(acc) & 1));
    }
    return y;
}

bool BitMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (uint32_t r = 0; r < rows_; ++r) {
        for (uint32_t c = r + 1; c < cols_; ++c) {
            if (get(r, c) != get(c, r)) return false;
        }
    }
    return true;
}

bool BitMatrix::is_zero_diagonal() const {
    for (uint32_t r = 0; r < rows_ && r < cols_; ++r) {
        if (get(r, r)) return false;
    }
    return true;
}

uint32_t BitMatrix::rank() const {
    if (cols_ <= 64) {
        std::vector<uint64_t> rows(rows_);
        for (uint32_t r = 0; r < rows_; ++r) rows[r] = w_[uint64_t(r) * wpr_];
        return gf2_rank_words(rows, cols_);
    }
    std::vector<std::vector<uint64_t>> m(rows_);
    for (uint32_t r = 0; r < rows_; ++r) {
        m[r].assign(w_.begin() + uint64_t(r) * wpr_, w_.begin() + uint64_t(r + 1) * wpr_);
    }
    uint32_t rank = 0;
    for (uint32_t c = 0; c < cols_ && rank < rows_; ++c) {
        uint32_t wi = c / 64, bi = c % 64;
        uint32_t pivot = rank;
        while (pivot < rows_ && !((m[pivot][wi] >> bi) & 1)) ++pivot;
        if (pivot == rows_) continue;
        std::swap(m[pivot], m[rank]);
        for (uint32_t r = 0; r < rows_; ++r) {
            if (r != rank && ((m[r][wi] >> bi) & 1)) {
                for (uint32_t i = 0; i < wpr_; ++i) m[r][i] ^= m[rank][i];
            }
        }
        ++rank;
    }
    return rank;
}

void BitMatrix::add_outer(const BitVector& u, const BitVector& v) {
    if (u.size() != rows_ || v.size() != cols_) {
        throw std::invalid_argument("add_outer: size mismatch");
    }
    for (uint32_t r = 0; r < rows_; ++r) {
        if (!u.get(r)) continue;
        for (uint32_t i = 0; i < wpr_; ++i) w_[uint64_t(r) * wpr_ + i] ^= v.word(i);
    }
}

uint32_t gf2_rank_words(std::span<const uint64_t> rows, uint32_t cols) {
    if (cols > 64) throw std::invalid_argument("gf2_rank_words needs cols <= 64");
    uint64_t basis[64] = {0};
    uint32_t rank = 0;
    for (uint64_t row : rows) {
        for (uint32_t b = 0; b < cols && row; ++b) {
            uint32_t hi = 63 - uint32_t(std::countl_zero(row));
            if (basis[hi]) {
                row ^= basis[hi];
            } else {
                basis[hi] = row;
                ++rank;
                break;
            }
        }
    }
    return rank;
}

std::vector<uint64_t> pack_table(std::span<const uint8_t> vals) {
    std::vector<uint64_t> w((vals.size() + 63) / 64, 0);
    for (size_t i = 0; i < vals.size(); ++i) {
        if (vals[i] & 1) w[i / 64] |= uint64_t(1) << (i % 64);
    }
    return w;
}

uint64_t popcount_words(std::span<const uint64_t> w) {
    uint64_t c = 0;
    for (uint64_t v : w) c += std::popcount(v);
    return c;
}

void anf_transform(std::span<uint64_t> w, uint32_t N) {
    if (w.size() != (size_t(1) << (N > 6 ? N - 6 : 0))) {
        throw std::invalid_argument("anf_transform: size mismatch");
    }
    static constexpr uint64_t kMask[6] = {
        0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
        0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
    };
    uint32_t inword = N < 6 ? N : 6;
    for (uint32_t b = 0; b < inword; ++b) {
        for (uint64_t& v : w) v ^= (v & kMask[b]) << (1u << b);
    }
    for (uint32_t b = 6; b < N; ++b) {
        size_t half = size_t(1) << (b - 6);
        for (size_t base = 0; base < w.size(); base += 2 * half) {
            for (size_t i = 0; i < half; ++i) w[base + half + i] ^= w[base + i];
        }
    }
    if (N < 6) {
        // Mask off the unused high region so callers can compare tables.
        w[0] &= (uint64_t(1) << (1u << N)) - 1;
    }
}

void walsh_transform(std::span<int64_t> a) {
    size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("walsh_transform needs a power-of-two size");
    }
    for (size_t len = 1; len < n; len <<= 1) {
        for (size_t base = 0; base < n; base += 2 * len) {
            for (size_t i = base; i < base + len; ++i) {
                int64_t u = a[i], v = a[i + len];
                a[i] = u + v;
                a[i + len] = u - v;
            }
        }
    }
}

}  // namespace ufn
