#include "ufn/correlation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <stdexcept>

#include "ufn/bits.hpp"
#include "ufn/parallel.hpp"

namespace ufn {

namespace {

// Multilinear monomials of degree <= d as support masks, sorted by
// (degree, mask). Index order is the coefficient-bit order of the search.
std::vector<uint32_t> monomial_masks(uint32_t N, uint32_t d) {
    std::vector<uint32_t> masks;
    for (uint64_t m = 0; m < (uint64_t(1) << N); ++m) {
        if (uint32_t(std::popcount(m)) <= d) masks.push_back(uint32_t(m));
    }
    std::sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
        uint32_t pa = uint32_t(std::popcount(a)), pb = uint32_t(std::popcount(b));
        return pa != pb ? pa < pb : a < b;
    });
    return masks;
}

// Packed truth table of x -> prod_{i in mask} x(i) over all 2^N points.
std::vector<uint64_t> monomial_table(uint32_t N, uint32_t mask,
                                     const std::vector<std::vector<uint64_t>>& vt,
                                     uint64_t words) {
    std::vector<uint64_t> t(words, ~uint64_t(0));
    if (N < 6) t[0] = (uint64_t(1) << (uint64_t(1) << N)) - 1;
    for (uint32_t i = 0; i < N; ++i) {
        if (!(mask & (uint32_t(1) << i))) continue;
        for (uint64_t w = 0; w < words; ++w) t[w] &= vt[i][w];
    }
    return t;
}

// Packed table of the single variable x(i).
std::vector<uint64_t> variable_table(uint32_t N, uint32_t i, uint64_t words) {
    std::vector<uint64_t> t(words);
    if (i < 6) {
        static constexpr uint64_t kPattern[6] = {
            0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
            0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull};
        for (uint64_t w = 0; w < words; ++w) t[w] = kPattern[i];
    } else {
        for (uint64_t w = 0; w < words; ++w) {
            t[w] = (w >> (i - 6)) & 1 ? ~uint64_t(0) : 0;
        }
    }
    return t;
}

MultiIndexPolynomial mask_to_polynomial(uint32_t N, uint64_t coeff_mask,
                                        const std::vector<uint32_t>& masks) {
    MultiIndexPolynomial poly(2, N);
    for (uint32_t j = 0; j < masks.size(); ++j) {
        if (!(coeff_mask & (uint64_t(1) << j))) continue;
        std::vector<uint8_t> exp(N, 0);
        for (uint32_t i = 0; i < N; ++i) {
            if (masks[j] & (uint32_t(1) << i)) exp[i] = 1;
        }
        poly.add_term(exp, 1);
    }
    return poly;
}

void exponents_below_degree(uint32_t p, uint32_t N, uint32_t budget,
                            std::vector<uint8_t>& cur, uint32_t at,
                            std::vector<std::vector<uint8_t>>& out) {
    if (at == N) {
        out.push_back(cur);
        return;
    }
    uint32_t top = std::min(budget, p - 1);
    for (uint32_t e = 0; e <= top; ++e) {
        cur[at] = uint8_t(e);
        exponents_below_degree(p, N, budget - e, cur, at + 1, out);
    }
    cur[at] = 0;
}

struct QuantileSpec {
    const char* label;
    double q;
};

constexpr QuantileSpec kQuantiles[] = {{"p50", 0.5}, {"p90", 0.9}, {"p99", 0.99}};

std::vector<ProfileQuantile> quantile_rows(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    uint64_t n = values.size();
    std::vector<ProfileQuantile> rows;
    for (const auto& spec : kQuantiles) {
        uint64_t rank = uint64_t(std::ceil(spec.q * double(n)));
        if (rank == 0) rank = 1;
        uint64_t r = rank - 1;
        auto delta = uint64_t(std::ceil(std::sqrt(spec.q * (1 - spec.q) * double(n))));
        uint64_t lo = r > delta ? r - delta : 0;
        uint64_t hi = std::min(n - 1, r + delta);
        rows.push_back({spec.label, values[r], (values[hi] - values[lo]) / 2.0});
    }
    rows.push_back({"max", values[n - 1], 0.0});
    return rows;
}

}  // namespace

CorrelationResult max_correlation_exhaustive(const FiniteFunction& f, uint32_t d,
                                             uint32_t threads) {
    if (f.p() != 2) {
        throw std::invalid_argument("exhaustive search is supported for p = 2 only");
    }
    if (!f.is_dense()) throw std::invalid_argument("needs a dense table");
    if (threads == 0) threads = default_thread_count();
    uint32_t N = f.N();
    uint32_t d_eff = std::min(d, N);
    uint64_t dim = 0, binom = 1;
    for (uint32_t j = 0; j <= d_eff && dim <= kMaxSearchBits; ++j) {
        dim += binom;
        binom = binom * (N - j) / (j + 1);
    }
    if (dim > kMaxSearchBits) {
        throw std::invalid_argument(
            "coefficient space of dimension " + std::to_string(dim) +
            " exceeds the 2^" + std::to_string(kMaxSearchBits) + " search cap");
    }
    uint32_t D = uint32_t(dim);
    std::vector<uint32_t> masks = monomial_masks(N, d_eff);

    uint64_t size = f.size();
    uint64_t words = (size + 63) / 64;
    std::vector<std::vector<uint64_t>> vt(N);
    for (uint32_t i = 0; i < N; ++i) vt[i] = variable_table(N, i, words);
    std::vector<std::vector<uint64_t>> tables(D);
    for (uint32_t j = 0; j < D; ++j) {
        tables[j] = monomial_table(N, masks[j], vt, words);
    }
    std::vector<uint64_t> f_packed = pack_table(f.table());
    // High bits of the last word beyond 2^N must stay zero so popcounts of
    // the disagreement mask are exact.
    if (size % 64) f_packed.back() &= (uint64_t(1) << (size % 64)) - 1;
    uint64_t tail_mask = size % 64 ? (uint64_t(1) << (size % 64)) - 1 : ~uint64_t(0);

    uint32_t shard_bits = std::min<uint32_t>(6, D);
    uint32_t low_bits = D - shard_bits;
    struct Best {
        int64_t numer = -1;
        uint64_t mask = 0;
    };
    std::vector<Best> best(kShardCount);

    run_sharded(kShardCount, threads, [&](uint32_t shard) {
        if (shard >= (uint32_t(1) << shard_bits)) return;
        uint64_t high = uint64_t(shard) << low_bits;
        std::vector<uint64_t> u = f_packed;
        for (uint32_t j = low_bits; j < D; ++j) {
            if (!(high & (uint64_t(1) << j))) continue;
            for (uint64_t w = 0; w < words; ++w) u[w] ^= tables[j][w];
        }
        u.back() &= tail_mask;
        uint64_t diff = popcount_words(u);
        Best b;
        b.numer = std::abs(int64_t(size) - 2 * int64_t(diff));
        b.mask = high;
        for (uint64_t t = 1; t < (uint64_t(1) << low_bits); ++t) {
            uint32_t j = uint32_t(std::countr_zero(t));
            const std::vector<uint64_t>& tab = tables[j];
            diff = 0;
            for (uint64_t w = 0; w < words; ++w) {
                u[w] ^= tab[w];
                diff += uint64_t(std::popcount(u[w]));
            }
            int64_t numer = std::abs(int64_t(size) - 2 * int64_t(diff));
            if (numer > b.numer) {
                b.numer = numer;
                b.mask = high | (t ^ (t >> 1));
            }
        }
        best[shard] = b;
    });

    Best overall;
    for (const Best& b : best) {
        if (b.numer > overall.numer) overall = b;
    }
    CorrelationResult res;
    res.method = "exhaustive";
    res.exact = true;
    res.numer = overall.numer;
    res.denom_log2 = N;
    res.max_abs = double(overall.numer) / double(size);
    res.dimension = D;
    res.candidates = uint64_t(1) << D;
    res.witness = mask_to_polynomial(N, overall.mask, masks);
    return res;
}

CorrelationResult max_correlation_spectral(const FiniteFunction& f) {
    if (f.p() != 2) {
        throw std::invalid_argument("spectral search is supported for p = 2 only");
    }
    std::vector<int64_t> w = walsh_coefficients(f);
    int64_t numer = 0;
    for (int64_t v : w) numer = std::max(numer, std::abs(v));
    CorrelationResult res;
    res.method = "spectral";
    res.exact = true;
    res.numer = numer;
    res.denom_log2 = f.N();
    res.max_abs = double(numer) / double(f.size());
    res.dimension = f.N() + 1;
    res.candidates = uint64_t(2) * f.size();
    return res;
}

MultiIndexPolynomial random_polynomial(uint32_t p, uint32_t N, uint32_t d,
                                       RandomSource& rng) {
    MultiIndexPolynomial poly(p, N);
    std::vector<std::vector<uint8_t>> exps;
    std::vector<uint8_t> cur(N, 0);
    exponents_below_degree(p, N, d, cur, 0, exps);
    for (const auto& e : exps) {
        uint8_t c = rng.field_element(p);
        if (c) poly.add_term(e, c);
    }
    return poly;
}

CorrelationProfile sampled_correlation_profile(const FiniteFunction& f,
                                               uint32_t d, uint64_t trials,
                                               uint64_t seed, uint32_t threads,
                                               uint64_t sample_points) {
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (threads == 0) threads = default_thread_count();
    uint32_t p = f.p(), N = f.N();
    std::vector<double> values(trials);
    CorrelationProfile out;
    out.trials = trials;

    if (f.is_dense() && p == 2) {
        uint64_t size = f.size();
        uint64_t words = (size + 63) / 64;
        std::vector<uint32_t> masks = monomial_masks(N, std::min(d, N));
        std::vector<uint64_t> f_packed = pack_table(f.table());
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            auto [lo, hi] = shard_range(trials, shard);
            if (lo >= hi) return;
            RandomSource rng(seed, shard);
            std::vector<uint64_t> buf(words);
            for (uint64_t t = lo; t < hi; ++t) {
                std::fill(buf.begin(), buf.end(), 0);
                for (uint32_t m : masks) {
                    if (rng.bits(1)) buf[m / 64] |= uint64_t(1) << (m % 64);
                }
                anf_transform(buf, N);
                uint64_t diff = 0;
                for (uint64_t w = 0; w < words; ++w) {
                    diff += uint64_t(std::popcount(buf[w] ^ f_packed[w]));
                }
                values[t] =
                    std::abs(double(size) - 2.0 * double(diff)) / double(size);
            }
        });
        out.sample_points = 0;
    } else if (f.is_dense()) {
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            auto [lo, hi] = shard_range(trials, shard);
            if (lo >= hi) return;
            RandomSource rng(seed, shard);
            for (uint64_t t = lo; t < hi; ++t) {
                MultiIndexPolynomial g = random_polynomial(p, N, d, rng);
                FiniteFunction gf = from_polynomial(g, N, TableMode::Dense);
                values[t] = correlation(f, gf).abs();
            }
        });
        out.sample_points = 0;
    } else {
        if (sample_points == 0) {
            throw std::invalid_argument("lazy profile needs sample points");
        }
        PrimeField field(p);
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            auto [lo, hi] = shard_range(trials, shard);
            if (lo >= hi) return;
            RandomSource rng(seed, shard);
            for (uint64_t t = lo; t < hi; ++t) {
                MultiIndexPolynomial g = random_polynomial(p, N, d, rng);
                if (p == 2) {
                    uint64_t disagree = 0;
                    for (uint64_t s = 0; s < sample_points; ++s) {
                        FieldVector x = rng.field_vector(p, N);
                        if (f.eval(x) != g.eval(x)) ++disagree;
                    }
                    values[t] = std::abs(1.0 - 2.0 * double(disagree) /
                                                   double(sample_points));
                } else {
                    std::complex<double> acc{0.0, 0.0};
                    for (uint64_t s = 0; s < sample_points; ++s) {
                        FieldVector x = rng.field_vector(p, N);
                        acc += character_value(p, field.sub(f.eval(x), g.eval(x)));
                    }
                    values[t] = std::abs(acc) / double(sample_points);
                }
            }
        });
        out.sample_points = sample_points;
    }
    out.quantiles = quantile_rows(values);
    return out;
}

DerivativeInequality derivative_inequality_check(const FiniteFunction& f,
                                                 const FiniteFunction& g,
                                                 uint64_t pair_budget) {
    if (f.p() != 2 || g.p() != 2) {
        throw std::invalid_argument("derivative inequality is for p = 2");
    }
    if (f.N() != g.N()) throw std::invalid_argument("dimension mismatch");
    if (!f.is_dense() || !g.is_dense()) {
        throw std::invalid_argument("needs dense tables");
    }
    uint32_t N = f.N();
    uint64_t size = f.size();
    if (size * size > pair_budget) {
        throw std::invalid_argument("direction-pair sweep exceeds its budget");
    }
    if (8 * N > 120) throw std::invalid_argument("N too large for exact eighth powers");

    std::vector<uint8_t> h(size);
    for (uint64_t x = 0; x < size; ++x) h[x] = uint8_t(f.at_index(x) ^ g.at_index(x));
    int64_t ones = 0;
    for (uint8_t v : h) ones += v;
    int64_t c0 = int64_t(size) - 2 * ones;
    unsigned __int128 abs_c0 = c0 < 0 ? -(unsigned __int128)(c0) : (unsigned __int128)(c0);

    unsigned __int128 rhs1_num = 0, rhs2_num = 0;
    std::vector<uint8_t> hy(size);
    for (uint64_t y = 0; y < size; ++y) {
        for (uint64_t x = 0; x < size; ++x) hy[x] = uint8_t(h[x] ^ h[x ^ y]);
        int64_t d1 = 0;
        for (uint8_t v : hy) d1 += v;
        int64_t cy = int64_t(size) - 2 * d1;
        rhs1_num += (unsigned __int128)(uint64_t(cy * cy));
        for (uint64_t z = 0; z < size; ++z) {
            int64_t d2 = 0;
            for (uint64_t x = 0; x < size; ++x) d2 += hy[x] ^ hy[x ^ z];
            int64_t cyz = int64_t(size) - 2 * d2;
            rhs2_num += (unsigned __int128)(uint64_t(cyz * cyz));
        }
    }

    unsigned __int128 c0_4 = abs_c0 * abs_c0 * abs_c0 * abs_c0;
    DerivativeInequality out;
    // lhs1 = (c0 / 2^N)^4 vs rhs1 = rhs1_num / 2^{3N}: compare over 2^{4N}.
    out.holds_order1 = c0_4 <= rhs1_num << N;
    // lhs2 = (c0 / 2^N)^8 vs rhs2 = rhs2_num / 2^{4N}: compare over 2^{8N}.
    out.holds_order2 = c0_4 * c0_4 <= rhs2_num << (4 * N);
    out.holds = out.holds_order1 && out.holds_order2;
    long double scale = exp2l((long double)(N));
    long double corr = (long double)(c0) / scale;
    out.lhs_order1 = double(corr * corr * corr * corr);
    out.lhs_order2 = out.lhs_order1 * out.lhs_order1;
    long double r1 = 0, r2 = 0;
    r1 = (long double)(uint64_t(rhs1_num >> 64)) * 18446744073709551616.0L +
         (long double)(uint64_t(rhs1_num));
    r2 = (long double)(uint64_t(rhs2_num >> 64)) * 18446744073709551616.0L +
         (long double)(uint64_t(rhs2_num));
    out.rhs_order1 = double(r1 / (scale * scale * scale));
    out.rhs_order2 = double(r2 / (scale * scale * scale * scale));
    return out;
}

}  // namespace ufn
