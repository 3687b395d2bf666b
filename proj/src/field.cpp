#include "ufn/field.hpp"

#include <bit>
#include <string>

namespace ufn {

namespace {

uint64_t words_for(uint32_t n) { return (uint64_t(n) + 63) / 64; }

void check_prime(uint32_t p) {
    if (!is_supported_prime(p)) {
        throw std::invalid_argument("p must be a prime in [2, 31], got " +
                                    std::to_string(p));
    }
}

}  // namespace

bool is_supported_prime(uint32_t p) {
    switch (p) {
        case 2: case 3: case 5: case 7: case 11: case 13:
        case 17: case 19: case 23: case 29: case 31:
            return true;
        default:
            return false;
    }
}

PrimeField::PrimeField(uint32_t p) : p_(p) { check_prime(p); }

uint8_t PrimeField::pow(uint8_t a, uint64_t e) const {
    uint32_t base = a % p_;
    uint32_t acc = 1;
    while (e) {
        if (e & 1) acc = (acc * base) % p_;
        base = (base * base) % p_;
        e >>= 1;
    }
    return narrow(acc);
}

uint8_t PrimeField::inv(uint8_t a) const {
    if (a % p_ == 0) throw std::invalid_argument("inverse of zero");
    return pow(a, p_ - 2);
}

uint8_t PrimeField::factorial(uint64_t n) const {
    if (n >= p_) return 0;
    uint32_t acc = 1;
    for (uint64_t i = 2; i <= n; ++i) acc = (acc * uint32_t(i)) % p_;
    return narrow(acc);
}

FieldVector::FieldVector(uint32_t p, uint32_t n) : p_(p), n_(n) {
    check_prime(p);
    if (p == 2) {
        w_.assign(words_for(n), 0);
    } else {
        b_.assign(n, 0);
    }
}

FieldVector FieldVector::from_index(uint32_t p, uint32_t n, uint64_t index) {
    FieldVector v(p, n);
    if (p == 2) {
        for (uint32_t i = 0; i < n; ++i) {
            if ((index >> i) & 1) v.set(i, 1);
        }
        // Indices beyond 2^n would silently alias; reject them.
        if (n < 64 && (index >> n) != 0) {
            throw std::invalid_argument("point index out of range");
        }
    } else {
        for (uint32_t i = 0; i < n; ++i) {
            v.b_[i] = uint8_t(index % p);
            index /= p;
        }
        if (index != 0) throw std::invalid_argument("point index out of range");
    }
    return v;
}

FieldVector FieldVector::from_word(uint32_t n, uint64_t bits) {
    if (n > 64) throw std::invalid_argument("from_word needs n <= 64");
    FieldVector v(2, n);
    if (n < 64 && (bits >> n) != 0) {
        throw std::invalid_argument("bits out of range");
    }
    if (n > 0) v.w_[0] = bits;
    return v;
}

FieldVector FieldVector::all_ones(uint32_t p, uint32_t n) {
    FieldVector v(p, n);
    for (uint32_t i = 0; i < n; ++i) v.set(i, 1);
    return v;
}

uint8_t FieldVector::get(uint32_t i) const {
    if (i >= n_) throw std::out_of_range("FieldVector index");
    if (p_ == 2) return uint8_t((w_[i / 64] >> (i % 64)) & 1);
    return b_[i];
}

void FieldVector::set(uint32_t i, uint8_t v) {
    if (i >= n_) throw std::out_of_range("FieldVector index");
    if (v >= p_) throw std::invalid_argument("entry not reduced mod p");
    if (p_ == 2) {
        uint64_t mask = uint64_t(1) << (i % 64);
        if (v) w_[i / 64] |= mask; else w_[i / 64] &= ~mask;
    } else {
        b_[i] = v;
    }
}

uint64_t FieldVector::to_index() const {
    if (p_ == 2) {
        if (n_ > 64) throw std::invalid_argument("index exceeds 64 bits");
        return n_ ? w_[0] : 0;
    }
    uint64_t idx = 0;
    // Horner from the most significant coordinate.
    for (uint32_t i = n_; i-- > 0;) {
        uint64_t next = idx * p_ + b_[i];
        if (next < idx) throw std::invalid_argument("index exceeds 64 bits");
        idx = next;
    }
    return idx;
}

uint64_t FieldVector::word() const {
    if (p_ != 2 || n_ > 64) throw std::invalid_argument("word() needs p = 2, n <= 64");
    return n_ ? w_[0] : 0;
}

void FieldVector::check_same_shape(const FieldVector& o) const {
    if (p_ != o.p_ || n_ != o.n_) {
        throw std::invalid_argument("mismatched vector shapes");
    }
}

FieldVector FieldVector::add(const FieldVector& o) const {
    check_same_shape(o);
    FieldVector r(p_, n_);
    if (p_ == 2) {
        for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] ^ o.w_[i];
    } else {
        for (uint32_t i = 0; i < n_; ++i) r.b_[i] = uint8_t((b_[i] + o.b_[i]) % p_);
    }
    return r;
}

FieldVector FieldVector::pointwise_mul(const FieldVector& o) const {
    check_same_shape(o);
    FieldVector r(p_, n_);
    if (p_ == 2) {
        for (size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    } else {
        for (uint32_t i = 0; i < n_; ++i) {
            r.b_[i] = uint8_t((uint32_t(b_[i]) * o.b_[i]) % p_);
        }
    }
    return r;
}

FieldVector FieldVector::pow_entries(uint32_t e) const {
    if (e >= p_) throw std::invalid_argument("entry power must satisfy e < p");
    if (e == 0) return all_ones(p_, n_);
    if (p_ == 2 || e == 1) return *this;
    PrimeField f(p_);
    FieldVector r(p_, n_);
    for (uint32_t i = 0; i < n_; ++i) r.b_[i] = f.pow(b_[i], e);
    return r;
}

uint8_t FieldVector::coordinate_sum() const {
    if (p_ == 2) {
        uint64_t c = 0;
        for (uint64_t w : w_) c += std::popcount(w);
        return uint8_t(c & 1);
    }
    uint32_t s = 0;
    for (uint8_t v : b_) s += v;
    return uint8_t(s % p_);
}

uint8_t FieldVector::dot(const FieldVector& o) const {
    check_same_shape(o);
    if (p_ == 2) {
        uint64_t c = 0;
        for (size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
        return uint8_t(c & 1);
    }
    uint32_t s = 0;
    for (uint32_t i = 0; i < n_; ++i) s = (s + uint32_t(b_[i]) * o.b_[i]) % p_;
    return uint8_t(s);
}

bool FieldVector::is_zero() const {
    if (p_ == 2) {
        for (uint64_t w : w_) if (w) return false;
        return true;
    }
    for (uint8_t v : b_) if (v) return false;
    return true;
}

bool FieldVector::operator==(const FieldVector& o) const {
    return p_ == o.p_ && n_ == o.n_ && w_ == o.w_ && b_ == o.b_;
}

FieldVector power_vector(const FieldVector& x, uint32_t e) {
    return x.pow_entries(e);
}

std::pair<FieldVector, uint8_t> product_functional(
    std::span<const FieldVector> rows, std::span<const uint32_t> tau) {
    if (rows.empty()) throw std::invalid_argument("product_functional needs rows");
    FieldVector acc = FieldVector::all_ones(rows[0].p(), rows[0].size());
    for (uint32_t i : tau) {
        if (i >= rows.size()) throw std::out_of_range("row index in tau");
        acc = acc.pointwise_mul(rows[i]);
    }
    uint8_t sum = acc.coordinate_sum();
    return {std::move(acc), sum};
}

std::vector<uint8_t> base_p_digits(uint64_t w, uint32_t p, uint32_t count) {
    check_prime(p);
    std::vector<uint8_t> d(count, 0);
    for (uint32_t i = 0; i < count && w; ++i) {
        d[i] = uint8_t(w % p);
        w /= p;
    }
    if (w) throw std::invalid_argument("digit count too small for w");
    return d;
}

uint8_t lucas_binomial(uint64_t n, uint64_t k, uint32_t p) {
    check_prime(p);
    if (k > n) return 0;
    PrimeField f(p);
    uint8_t acc = 1;
    while (n || k) {
        uint64_t nd = n % p, kd = k % p;
        if (kd > nd) return 0;
        // C(nd, kd) with nd < p, exact in 64 bits.
        uint64_t c = 1;
        for (uint64_t i = 0; i < kd; ++i) c = c * (nd - i) / (i + 1);
        acc = f.mul(acc, uint8_t(c % p));
        n /= p;
        k /= p;
    }
    return acc;
}

namespace {

std::mt19937_64 seeded_engine(std::initializer_list<uint32_t> parts) {
    std::seed_seq seq(parts);
    return std::mt19937_64(seq);
}

}  // namespace

RandomSource::RandomSource(uint64_t seed)
    : eng_(seeded_engine({uint32_t(seed), uint32_t(seed >> 32), 0x9e3779b9u})) {}

RandomSource::RandomSource(uint64_t seed, uint64_t shard)
    : eng_(seeded_engine({uint32_t(seed), uint32_t(seed >> 32),
                          uint32_t(shard), uint32_t(shard >> 32),
                          0x85ebca6bu})) {}

uint64_t RandomSource::next_u64() { return eng_(); }

uint64_t RandomSource::below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("below(0)");
    if ((bound & (bound - 1)) == 0) return next_u64() & (bound - 1);
    // Mask to the next power of two, then reject.
    uint64_t mask = bound - 1;
    mask |= mask >> 1; mask |= mask >> 2; mask |= mask >> 4;
    mask |= mask >> 8; mask |= mask >> 16; mask |= mask >> 32;
    uint64_t v;
    do { v = next_u64() & mask; } while (v >= bound);
    return v;
}

uint8_t RandomSource::field_element(uint32_t p) { return uint8_t(below(p)); }

uint64_t RandomSource::bits(uint32_t count) {
    if (count > 64) throw std::invalid_argument("bits(count > 64)");
    if (count == 0) return 0;
    return next_u64() >> (64 - count);
}

FieldVector RandomSource::field_vector(uint32_t p, uint32_t n) {
    FieldVector v(p, n);
    if (p == 2) {
        uint32_t i = 0;
        for (; i + 64 <= n; i += 64) {
            uint64_t w = next_u64();
            for (uint32_t j = 0; j < 64; ++j) v.set(i + j, uint8_t((w >> j) & 1));
        }
        if (i < n) {
            uint64_t w = bits(n - i);
            for (uint32_t j = 0; i + j < n; ++j) v.set(i + j, uint8_t((w >> j) & 1));
        }
    } else {
        for (uint32_t i = 0; i < n; ++i) v.set(i, field_element(p));
    }
    return v;
}

}  // namespace ufn
