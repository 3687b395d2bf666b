#include "ufn/gowers.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "ufn/bits.hpp"
#include "ufn/parallel.hpp"
#include "ufn/path_sums.hpp"
#include "ufn/symmetric.hpp"

namespace ufn {

namespace {

uint64_t ipow(uint64_t base, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

long double u128_to_ld(unsigned __int128 v) {
    return (long double)(uint64_t(v >> 64)) * 18446744073709551616.0L +
           (long double)(uint64_t(v));
}

void check_budget(uint32_t p, uint32_t N, uint32_t k, uint64_t budget) {
    // p^{(k-2)N} * N * p^N, with overflow treated as over budget.
    long double cost = k >= 2 ? powl((long double)p, (long double)(k - 2) * N) *
                                    N * powl((long double)p, N)
                              : powl((long double)p, N);
    if (cost > (long double)budget) {
        throw std::invalid_argument(
            "exact sweep of order " + std::to_string(k) + " at p = " +
            std::to_string(p) + ", N = " + std::to_string(N) +
            " exceeds the work budget");
    }
}

// Index of x + y in point order, digits mod p.
uint64_t shifted_index(uint64_t x, const FieldVector& y, uint32_t p, uint32_t N) {
    uint64_t rem = x, idx = 0, scale = 1;
    for (uint32_t j = 0; j < N; ++j) {
        uint64_t d = rem % p;
        rem /= p;
        idx += ((d + y.get(j)) % p) * scale;
        scale *= p;
    }
    return idx;
}

// sum_alpha W(alpha)^4 of the +-1 lift of a 0/1 table.
unsigned __int128 fourth_power_sum(const std::vector<uint8_t>& table,
                                   std::vector<int64_t>& scratch) {
    for (size_t i = 0; i < table.size(); ++i) scratch[i] = table[i] ? -1 : 1;
    walsh_transform(scratch);
    unsigned __int128 acc = 0;
    for (int64_t v : scratch) {
        uint64_t sq = uint64_t(v * v);
        acc += (unsigned __int128)(sq) * sq;
    }
    return acc;
}

// Recursive sweep over derivative directions for p = 2. `depth` counts the
// directions already applied; at full depth the inner U^2 power is summed.
void exact_sweep2(const std::vector<uint8_t>& cur, uint32_t depth,
                  uint32_t total_depth, uint64_t y_lo, uint64_t y_hi,
                  std::vector<std::vector<uint8_t>>& tables,
                  std::vector<int64_t>& scratch, unsigned __int128& acc) {
    if (depth == total_depth) {
        acc += fourth_power_sum(cur, scratch);
        return;
    }
    std::vector<uint8_t>& next = tables[depth];
    uint64_t size = cur.size();
    for (uint64_t y = y_lo; y < y_hi; ++y) {
        for (uint64_t x = 0; x < size; ++x) {
            next[x] = uint8_t(cur[x] ^ cur[x ^ y]);
        }
        exact_sweep2(next, depth + 1, total_depth, 0, size, tables, scratch, acc);
    }
}

double fourth_power_sum_complex(const std::vector<uint8_t>& table, uint32_t p,
                                uint32_t N,
                                std::vector<std::complex<double>>& buf) {
    for (size_t i = 0; i < table.size(); ++i) {
        buf[i] = character_value(p, table[i]);
    }
    char_transform(buf, p, N);
    double acc = 0.0;
    for (const auto& c : buf) {
        double n2 = std::norm(c);
        acc += n2 * n2;
    }
    return acc;
}

void exact_sweep_p(const std::vector<uint8_t>& cur, uint32_t depth,
                   uint32_t total_depth, uint64_t y_lo, uint64_t y_hi,
                   uint32_t p, uint32_t N, PrimeField field,
                   std::vector<std::vector<uint8_t>>& tables,
                   std::vector<std::complex<double>>& buf, double& acc) {
    if (depth == total_depth) {
        acc += fourth_power_sum_complex(cur, p, N, buf);
        return;
    }
    std::vector<uint8_t>& next = tables[depth];
    uint64_t size = cur.size();
    for (uint64_t yi = y_lo; yi < y_hi; ++yi) {
        FieldVector y = FieldVector::from_index(p, N, yi);
        for (uint64_t x = 0; x < size; ++x) {
            next[x] = field.sub(cur[shifted_index(x, y, p, N)], cur[x]);
        }
        exact_sweep_p(next, depth + 1, total_depth, 0, size, p, N, field,
                      tables, buf, acc);
    }
}

GowersEstimate exact_order2_or_less(const FiniteFunction& f, uint32_t k) {
    GowersEstimate est;
    est.order = k;
    est.exact = true;
    uint64_t size = f.size();
    est.samples = size;
    uint32_t p = f.p();
    if (p == 2) {
        if (k == 1) {
            int64_t sum = 0;
            const auto& t = f.table();
            for (uint8_t v : t) sum += v ? -1 : 1;
            unsigned __int128 num =
                (unsigned __int128)(uint64_t(sum < 0 ? -sum : sum)) *
                uint64_t(sum < 0 ? -sum : sum);
            est.raw_numer = num;
            est.raw_denom_log2 = 2 * f.N();
            est.raw_power = double(u128_to_ld(num) / exp2l(2.0L * f.N()));
            est.value = std::abs(double(sum)) / double(size);
            return est;
        }
        std::vector<int64_t> scratch(size);
        unsigned __int128 num = fourth_power_sum(f.table(), scratch);
        est.raw_numer = num;
        est.raw_denom_log2 = 4 * f.N();
        est.raw_power = double(u128_to_ld(num) / exp2l(4.0L * f.N()));
        est.value = std::pow(est.raw_power, 0.25);
        return est;
    }
    if (k == 1) {
        std::complex<double> acc{0.0, 0.0};
        const auto& t = f.table();
        for (uint8_t v : t) acc += character_value(p, v);
        double mod = std::abs(acc) / double(size);
        est.raw_power = mod * mod;
        est.value = mod;
        return est;
    }
    std::vector<std::complex<double>> buf(size);
    double s4 = fourth_power_sum_complex(f.table(), p, f.N(), buf);
    est.raw_power = s4 / std::pow(double(size), 4.0);
    est.value = std::pow(std::max(est.raw_power, 0.0), 0.25);
    return est;
}

}  // namespace

GowersEstimate gowers_norm_exact(const FiniteFunction& f, uint32_t k,
                                 uint32_t threads, uint64_t budget) {
    if (k == 0) throw std::invalid_argument("order must be at least 1");
    if (!f.is_dense()) {
        throw std::invalid_argument("exact norm needs a dense table");
    }
    uint32_t p = f.p(), N = f.N();
    check_budget(p, N, k, budget);
    if (k <= 2) return exact_order2_or_less(f, k);
    if (threads == 0) threads = default_thread_count();

    uint64_t size = f.size();
    uint32_t depth = k - 2;
    GowersEstimate est;
    est.order = k;
    est.exact = true;
    est.samples = 1;
    for (uint32_t i = 0; i < depth; ++i) est.samples *= size;

    if (p == 2) {
        std::vector<unsigned __int128> partial(kShardCount, 0);
        const std::vector<uint8_t>& base = f.table();
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            auto [lo, hi] = shard_range(size, shard);
            if (lo >= hi) return;
            std::vector<std::vector<uint8_t>> tables(depth,
                                                     std::vector<uint8_t>(size));
            std::vector<int64_t> scratch(size);
            unsigned __int128 acc = 0;
            exact_sweep2(base, 0, depth, lo, hi, tables, scratch, acc);
            partial[shard] = acc;
        });
        unsigned __int128 num = 0;
        for (unsigned __int128 v : partial) num += v;
        est.raw_numer = num;
        est.raw_denom_log2 = (depth + 4) * N;
        est.raw_power =
            double(u128_to_ld(num) / exp2l((long double)(est.raw_denom_log2)));
        est.value = std::pow(est.raw_power, 1.0 / double(uint64_t(1) << k));
        return est;
    }

    PrimeField field(p);
    std::vector<double> partial(kShardCount, 0.0);
    const std::vector<uint8_t>& base = f.table();
    run_sharded(kShardCount, threads, [&](uint32_t shard) {
        auto [lo, hi] = shard_range(size, shard);
        if (lo >= hi) return;
        std::vector<std::vector<uint8_t>> tables(depth,
                                                 std::vector<uint8_t>(size));
        std::vector<std::complex<double>> buf(size);
        double acc = 0.0;
        exact_sweep_p(base, 0, depth, lo, hi, p, N, field, tables, buf, acc);
        partial[shard] = acc;
    });
    double total = 0.0;
    for (double v : partial) total += v;  // fixed merge order
    double denom = std::pow(double(size), 4.0) * double(est.samples);
    est.raw_power = total / denom;
    est.value = std::pow(std::max(est.raw_power, 0.0),
                         1.0 / double(uint64_t(1) << k));
    return est;
}

GowersEstimate gowers_norm_mc(const FiniteFunction& f, uint32_t k,
                              uint64_t samples, uint64_t seed,
                              uint32_t threads) {
    if (k == 0) throw std::invalid_argument("order must be at least 1");
    if (k > 16) throw std::invalid_argument("MC order cap is 16");
    if (samples == 0) throw std::invalid_argument("samples must be positive");
    if (threads == 0) threads = default_thread_count();
    uint32_t p = f.p(), N = f.N();
    GowersEstimate est;
    est.order = k;
    est.samples = samples;

    if (p == 2 && N <= 64) {
        std::vector<int64_t> partial(kShardCount, 0);
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            uint64_t count = shard_samples(samples, shard);
            if (!count) return;
            RandomSource rng(seed, shard);
            std::vector<uint64_t> shifts(uint64_t(1) << k);
            std::vector<uint64_t> dirs(k);
            int64_t acc = 0;
            for (uint64_t s = 0; s < count; ++s) {
                uint64_t x = rng.bits(N);
                for (uint32_t i = 0; i < k; ++i) dirs[i] = rng.bits(N);
                shifts[0] = 0;
                for (uint64_t a = 1; a < shifts.size(); ++a) {
                    shifts[a] = shifts[a & (a - 1)] ^
                                dirs[std::countr_zero(a)];
                }
                uint8_t parity = 0;
                for (uint64_t sh : shifts) parity ^= f.at_index(x ^ sh);
                acc += parity ? -1 : 1;
            }
            partial[shard] = acc;
        });
        int64_t total = 0;
        for (int64_t v : partial) total += v;
        double mean = double(total) / double(samples);
        est.raw_power = mean;
        est.std_error = std::sqrt(std::max(0.0, 1.0 - mean * mean) /
                                  double(samples));
        est.value = std::pow(std::max(mean, 0.0), 1.0 / double(uint64_t(1) << k));
        return est;
    }

    PrimeField field(p);
    struct Moments {
        double re = 0, re2 = 0, im = 0, im2 = 0;
    };
    std::vector<Moments> partial(kShardCount);
    run_sharded(kShardCount, threads, [&](uint32_t shard) {
        uint64_t count = shard_samples(samples, shard);
        if (!count) return;
        RandomSource rng(seed, shard);
        std::vector<FieldVector> dirs(k, FieldVector(p, N));
        Moments m;
        for (uint64_t s = 0; s < count; ++s) {
            FieldVector x = rng.field_vector(p, N);
            for (uint32_t i = 0; i < k; ++i) dirs[i] = rng.field_vector(p, N);
            uint8_t value = 0;
            for (uint64_t a = 0; a < (uint64_t(1) << k); ++a) {
                FieldVector pt = x;
                uint32_t members = 0;
                for (uint32_t i = 0; i < k; ++i) {
                    if (a & (uint64_t(1) << i)) {
                        pt = pt.add(dirs[i]);
                        ++members;
                    }
                }
                uint8_t term = f.eval(pt);
                if ((k - members) % 2 == 1) term = field.neg(term);
                value = field.add(value, term);
            }
            std::complex<double> e = character_value(p, value);
            m.re += e.real();
            m.re2 += e.real() * e.real();
            m.im += e.imag();
            m.im2 += e.imag() * e.imag();
        }
        partial[shard] = m;
    });
    Moments total;
    for (const Moments& m : partial) {
        total.re += m.re;
        total.re2 += m.re2;
        total.im += m.im;
        total.im2 += m.im2;
    }
    double n = double(samples);
    double mean_re = total.re / n, mean_im = total.im / n;
    double var_re = std::max(0.0, total.re2 / n - mean_re * mean_re);
    double var_im = std::max(0.0, total.im2 / n - mean_im * mean_im);
    double se_im = std::sqrt(var_im / n);
    if (std::abs(mean_im) >= 5.0 * std::max(se_im, 1e-300)) {
        throw std::runtime_error(
            "MC mean has a non-vanishing imaginary part; estimator is broken");
    }
    est.raw_power = mean_re;
    est.std_error = std::sqrt(var_re / n);
    est.value =
        std::pow(std::max(mean_re, 0.0), 1.0 / double(uint64_t(1) << k));
    return est;
}

ConstraintSet& ConstraintSet::add(uint32_t exponent, const FieldVector& y,
                                  uint8_t target) {
    if (exponent < 1 || exponent >= p_) {
        throw std::invalid_argument("constraint exponent must be in [1, p-1]");
    }
    if (y.p() != p_ || y.size() != N_) {
        throw std::invalid_argument("constraint vector shape mismatch");
    }
    if (target >= p_) throw std::invalid_argument("target not reduced mod p");
    list_.push_back({exponent, y, target});
    return *this;
}

ConstraintSet& ConstraintSet::require_weight_constraint() {
    weight_constraint_ = true;
    return *this;
}

bool ConstraintSet::contains(const FieldVector& x) const {
    if (weight_constraint_ && N_ % p_ != 0) return false;
    for (const auto& c : list_) {
        if (x.pow_entries(c.exponent).dot(c.y) != c.target) return false;
    }
    return true;
}

FixedSetBound fixed_set_bound_check(const FiniteFunction& f,
                                    const ConstraintSet& constraints,
                                    uint32_t threads) {
    if (f.p() != constraints.p() || f.N() != constraints.N()) {
        throw std::invalid_argument("constraint set shape mismatch");
    }
    if (!f.is_dense()) throw std::invalid_argument("needs a dense table");
    uint64_t size = f.size();
    uint64_t members = 0;
    bool have_value = false;
    uint8_t value = 0;
    for (uint64_t i = 0; i < size; ++i) {
        FieldVector x = FieldVector::from_index(f.p(), f.N(), i);
        if (!constraints.contains(x)) continue;
        ++members;
        uint8_t v = f.at_index(i);
        if (!have_value) {
            value = v;
            have_value = true;
        } else if (v != value) {
            throw std::invalid_argument("f is not constant on the constraint set");
        }
    }
    if (members == 0) {
        throw std::invalid_argument("constraint set is empty");
    }
    FixedSetBound out;
    out.set_size = members;
    out.density = double(members) / double(size);
    out.norm = gowers_norm_exact(f, f.p(), threads).value;
    out.bound = out.density * out.density;
    out.holds = out.norm > out.bound;
    return out;
}

PowerProductDistribution power_product_distribution(uint32_t p, uint32_t n,
                                                    uint32_t N, uint64_t samples,
                                                    uint64_t seed,
                                                    uint32_t threads) {
    if (!is_supported_prime(p)) throw std::invalid_argument("unsupported p");
    if (n == 0 || samples == 0) {
        throw std::invalid_argument("need n >= 1 and samples >= 1");
    }
    double nlog = double(n) * std::log2(double(p));
    if (nlog > 12.0) {
        throw std::invalid_argument("power sum family needs n log2(p) <= 12");
    }
    if (threads == 0) threads = default_thread_count();
    uint64_t kappa_count = ipow(p, n);  // fits: p^n <= 4096
    uint64_t K = kappa_count - 1;

    // Joint value tables are only kept dense when p^K is small; otherwise
    // observed cells go into a map keyed by the digit string.
    double cells_log2 = double(K) * std::log2(double(p));
    bool dense = cells_log2 <= 16.0;
    uint64_t cells = dense ? ipow(p, uint32_t(K)) : 0;

    std::vector<std::vector<uint64_t>> dense_parts;
    std::vector<std::map<std::vector<uint8_t>, uint64_t>> map_parts(kShardCount);
    if (dense) {
        dense_parts.assign(kShardCount, {});
    }

    run_sharded(kShardCount, threads, [&](uint32_t shard) {
        uint64_t count = shard_samples(samples, shard);
        if (!count) return;
        RandomSource rng(seed, shard);
        std::vector<FieldVector> r(n, FieldVector(p, N));
        std::vector<uint8_t> x_kappa(K);
        std::vector<uint8_t> powers(n * p);
        PrimeField field(p);
        std::vector<uint64_t>* counts = nullptr;
        if (dense) {
            dense_parts[shard].assign(cells, 0);
            counts = &dense_parts[shard];
        }
        for (uint64_t s = 0; s < count; ++s) {
            for (uint32_t i = 0; i < n; ++i) r[i] = rng.field_vector(p, N);
            std::fill(x_kappa.begin(), x_kappa.end(), 0);
            for (uint32_t j = 0; j < N; ++j) {
                for (uint32_t i = 0; i < n; ++i) {
                    uint8_t v = r[i].get(j);
                    powers[i * p] = 1;
                    for (uint32_t e = 1; e < p; ++e) {
                        powers[i * p + e] = field.mul(powers[i * p + e - 1], v);
                    }
                }
                for (uint64_t kappa = 1; kappa < kappa_count; ++kappa) {
                    uint64_t rem = kappa;
                    uint8_t prod = 1;
                    for (uint32_t i = 0; i < n && prod; ++i) {
                        prod = field.mul(prod, powers[i * p + rem % p]);
                        rem /= p;
                    }
                    x_kappa[kappa - 1] = field.add(x_kappa[kappa - 1], prod);
                }
            }
            if (dense) {
                uint64_t cell = 0;
                for (uint64_t i = K; i-- > 0;) cell = cell * p + x_kappa[i];
                ++(*counts)[cell];
            } else {
                ++map_parts[shard][x_kappa];
            }
        }
    });

    PowerProductDistribution out;
    out.K = K;
    out.samples = samples;
    long double u = powl((long double)p, -(long double)K);
    long double l1 = 0.0L;
    uint64_t nonzero = 0;
    if (dense) {
        std::vector<uint64_t> counts(cells, 0);
        for (const auto& part : dense_parts) {
            if (part.empty()) continue;
            for (uint64_t c = 0; c < cells; ++c) counts[c] += part[c];
        }
        for (uint64_t c = 0; c < cells; ++c) {
            if (counts[c]) ++nonzero;
            l1 += fabsl((long double)counts[c] / samples - u);
        }
    } else {
        std::map<std::vector<uint8_t>, uint64_t> merged;
        for (auto& part : map_parts) {
            for (auto& [key, c] : part) merged[key] += c;
        }
        for (const auto& [key, c] : merged) {
            ++nonzero;
            l1 += fabsl((long double)c / samples - u);
        }
        l1 += 1.0L - (long double)nonzero * u;  // cells never observed
    }
    out.distinct_cells = nonzero;
    out.l1_distance = double(l1);
    return out;
}

VanishingCheck vanishing_lemma_check(uint32_t p, uint32_t N, uint64_t trials,
                                     uint64_t seed, uint64_t attempt_cap) {
    if (p != 2 && p != 3) {
        throw std::invalid_argument("vanishing check supports p in {2, 3}");
    }
    if (N == 0 || N % p != 0) {
        throw std::invalid_argument("vanishing check needs N = 0 mod p");
    }
    VanishingCheck out;
    out.trials_requested = trials;
    RandomSource rng(seed);
    PrimeField field(p);
    uint32_t n2p = 2 * p;
    while (out.trials_done < trials) {
        if (out.attempts >= attempt_cap) {
            out.cap_exhausted = true;
            break;
        }
        ++out.attempts;
        FieldVector x = rng.field_vector(p, N);
        FieldVector y = rng.field_vector(p, N);
        FieldVector z = rng.field_vector(p, N);
        bool ok = true;
        for (uint32_t i = 0; i < p && ok; ++i) {
            for (uint32_t a = 0; a < p && ok; ++a) {
                for (uint32_t b = 0; b < p && ok; ++b) {
                    if (i == 0 && a == 0 && b == 0) continue;
                    FieldVector prod = x.pow_entries(i)
                                           .pointwise_mul(y.pow_entries(a))
                                           .pointwise_mul(z.pow_entries(b));
                    if (prod.coordinate_sum() != 0) ok = false;
                }
            }
        }
        if (!ok) continue;
        ++out.trials_done;
        // Second derivative of S_{2p} at x in directions y, z.
        uint8_t lhs = field.sub(
            field.add(eval_symmetric(n2p, x.add(y).add(z)), eval_symmetric(n2p, x)),
            field.add(eval_symmetric(n2p, x.add(y)), eval_symmetric(n2p, x.add(z))));
        RowMatrix m(p, N);
        m.add_group(y, p).add_group(z, p);
        uint8_t rhs = eval_path_sum(PathFamily::GroupMonotone, m);
        if (lhs != rhs) ++out.failures;
    }
    return out;
}

}  // namespace ufn
