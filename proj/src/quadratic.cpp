#include "ufn/quadratic.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ufn/parallel.hpp"
#include "ufn/path_sums.hpp"
#include "ufn/symmetric.hpp"

namespace ufn {

namespace {

BitVector bits_of(const FieldVector& v) {
    if (v.p() != 2) throw std::invalid_argument("expected a vector over F_2");
    BitVector b(v.size());
    for (uint32_t i = 0; i < v.size(); ++i) {
        if (v.get(i)) b.set(i, 1);
    }
    return b;
}

BitVector ones_vector(uint32_t n) {
    BitVector b(n);
    for (uint32_t i = 0; i < n; ++i) b.set(i, 1);
    return b;
}

uint8_t all_paths_two_rows(const FieldVector& a, const FieldVector& b) {
    RowMatrix m(a.p(), a.size());
    m.add_group(a, 1).add_group(b, 1);
    return eval_path_sum(PathFamily::All, m);
}

}  // namespace

uint8_t QuadraticForm::eval(const BitVector& x) const {
    int acc = c;
    for (uint32_t i = 0; i < N; ++i) {
        if (!x.get(i)) continue;
        acc ^= q.row(i).dot(x);
        acc ^= ell.get(i);
    }
    return uint8_t(acc & 1);
}

FiniteFunction QuadraticForm::to_function(uint64_t cap) const {
    if (N >= 64 || (uint64_t(1) << N) > cap) {
        throw std::invalid_argument("quadratic table exceeds the dense cap");
    }
    uint64_t size = uint64_t(1) << N;
    std::vector<uint64_t> rows(N);
    uint64_t ell_word = 0;
    for (uint32_t i = 0; i < N; ++i) {
        rows[i] = q.row(i).word0();
        if (ell.get(i)) ell_word |= uint64_t(1) << i;
    }
    std::vector<uint8_t> table(size);
    for (uint64_t idx = 0; idx < size; ++idx) {
        int par = c ^ (std::popcount(ell_word & idx) & 1);
        for (uint64_t m = idx; m != 0; m &= m - 1) {
            par ^= std::popcount(rows[std::countr_zero(m)] & idx) & 1;
        }
        table[idx] = uint8_t(par & 1);
    }
    return FiniteFunction::dense(2, N, std::move(table));
}

QuadraticForm second_derivative_s4(const FieldVector& y, const FieldVector& z) {
    if (y.p() != 2 || z.p() != 2 || y.size() != z.size()) {
        throw std::invalid_argument("directions must share a shape over F_2");
    }
    uint32_t N = y.size();
    uint8_t s_yz = all_paths_two_rows(y, z);
    // Unordered pair sums: the ordered sum of two equal rows cancels mod 2.
    uint8_t s_yy = eval_symmetric(2, y);
    uint8_t s_zz = eval_symmetric(2, z);
    uint8_t wy = y.coordinate_sum();
    uint8_t wz = z.coordinate_sum();
    uint8_t yz_dot = y.dot(z);

    QuadraticForm Q(N);
    for (uint32_t i = 0; i < N; ++i) {
        for (uint32_t j = i + 1; j < N; ++j) {
            int v = s_yz;
            v ^= wy & (z.get(i) ^ z.get(j));
            v ^= wz & (y.get(i) ^ y.get(j));
            v ^= (y.get(i) & z.get(j)) ^ (y.get(j) & z.get(i));
            Q.q.set(i, j, v & 1);
        }
    }
    uint8_t coef_y = uint8_t(s_yz ^ s_zz ^ wz);
    uint8_t coef_z = uint8_t(s_yz ^ s_yy ^ wy);
    uint8_t constant =
        uint8_t((s_yy & wz) ^ (s_zz & wy) ^ (yz_dot & (wy ^ wz)));
    for (uint32_t i = 0; i < N; ++i) {
        int v = (coef_y & y.get(i)) ^ (coef_z & z.get(i)) ^ constant;
        Q.ell.set(i, v & 1);
    }
    Q.c = uint8_t(eval_symmetric(4, y.add(z)) ^ eval_symmetric(4, y) ^
                  eval_symmetric(4, z));
    return Q;
}

BitMatrix b_matrix(const QuadraticForm& q) {
    BitMatrix b(q.N, q.N);
    for (uint32_t i = 0; i < q.N; ++i) {
        for (uint32_t j = i + 1; j < q.N; ++j) {
            int v = q.q.get(i, j);
            b.set(i, j, v);
            b.set(j, i, v);
        }
    }
    return b;
}

BitMatrix b_matrix_structural(const FieldVector& y, const FieldVector& z) {
    uint32_t N = y.size();
    BitVector yb = bits_of(y), zb = bits_of(z), ones = ones_vector(N);
    BitMatrix b(N, N);
    if (all_paths_two_rows(y, z)) b.xor_inplace(ones_off_diagonal(N));
    if (y.coordinate_sum()) {
        b.add_outer(zb, ones);
        b.add_outer(ones, zb);
    }
    if (z.coordinate_sum()) {
        b.add_outer(yb, ones);
        b.add_outer(ones, yb);
    }
    b.add_outer(yb, zb);
    b.add_outer(zb, yb);
    return b;
}

BitMatrix ones_off_diagonal(uint32_t n) {
    BitMatrix j(n, n);
    for (uint32_t r = 0; r < n; ++r) {
        for (uint32_t c = 0; c < n; ++c) {
            if (r != c) j.set(r, c, 1);
        }
    }
    return j;
}

uint32_t gf2_rank(const BitMatrix& m) { return m.rank(); }

DixonReport dixon_spectrum_check(const QuadraticForm& q, uint64_t cap) {
    DixonReport rep;
    uint32_t N = q.N;
    uint32_t rank = gf2_rank(b_matrix(q));
    rep.h = rank / 2;
    FiniteFunction f = q.to_function(cap);
    std::vector<int64_t> w = walsh_coefficients(f);
    std::vector<uint64_t> support;
    int64_t expected = int64_t(1) << (N - rep.h);
    bool magnitudes = true;
    for (uint64_t alpha = 0; alpha < w.size(); ++alpha) {
        if (w[alpha] == 0) continue;
        support.push_back(alpha);
        if (std::abs(w[alpha]) != expected) magnitudes = false;
    }
    rep.support_size = support.size();
    rep.magnitude = std::exp2(-double(rep.h));
    rep.size_ok = rank % 2 == 0 && rep.support_size == (uint64_t(1) << rank);
    rep.magnitude_ok = magnitudes;
    std::vector<uint64_t> diffs;
    if (!support.empty()) {
        for (uint64_t alpha : support) diffs.push_back(alpha ^ support.front());
    }
    rep.support_dim = gf2_rank_words(diffs, N);
    rep.subspace_ok = rep.support_dim <= rank;
    rep.pass = rep.size_ok && rep.magnitude_ok && rep.subspace_ok;
    return rep;
}

bool AffineSupport::contains(const BitVector& v) const {
    for (uint32_t combo = 0; combo < 8; ++combo) {
        BitVector w = offset;
        for (uint32_t b = 0; b < 3; ++b) {
            if (combo & (uint32_t(1) << b)) w.xor_inplace(basis[b]);
        }
        if (w == v) return true;
    }
    return false;
}

AffineSupport af_support(const FieldVector& y, const FieldVector& z) {
    AffineSupport s;
    s.offset = bits_of(y.pointwise_mul(z));
    s.basis[0] = bits_of(y);
    s.basis[1] = bits_of(z);
    s.basis[2] = ones_vector(y.size());
    return s;
}

CubicTensor::CubicTensor(uint32_t N) : N_(N), g_(N, BitMatrix(N, N)) {}

CubicTensor CubicTensor::random(uint32_t N, RandomSource& rng) {
    CubicTensor t(N);
    for (uint32_t i = 0; i < N; ++i) {
        for (uint32_t j = i + 1; j < N; ++j) {
            for (uint32_t k = j + 1; k < N; ++k) {
                if (rng.bits(1)) t.set(i, j, k, 1);
            }
        }
    }
    return t;
}

void CubicTensor::set(uint32_t i, uint32_t j, uint32_t k, int v) {
    if (i == j || j == k || i == k || i >= N_ || j >= N_ || k >= N_) {
        throw std::invalid_argument("coefficient index must be a 3-subset");
    }
    g_[i].set(j, k, v);
    g_[i].set(k, j, v);
    g_[j].set(i, k, v);
    g_[j].set(k, i, v);
    g_[k].set(i, j, v);
    g_[k].set(j, i, v);
}

int CubicTensor::coefficient(uint32_t i, uint32_t j, uint32_t k) const {
    if (i == j || j == k || i == k || i >= N_ || j >= N_ || k >= N_) {
        throw std::invalid_argument("coefficient index must be a 3-subset");
    }
    return g_[i].get(j, k);
}

BitMatrix CubicTensor::g_of_z(const BitVector& z) const {
    BitMatrix acc(N_, N_);
    for (uint32_t i = 0; i < N_; ++i) {
        if (z.get(i)) acc.xor_inplace(g_[i]);
    }
    return acc;
}

BitMatrix CubicTensor::a_matrix(uint32_t i) const {
    BitMatrix a = g_[i];
    a.xor_entry(i, i, 1);
    return a;
}

BitMatrix CubicTensor::a_of_z(const BitVector& z) const {
    BitMatrix a = g_of_z(z);
    for (uint32_t i = 0; i < N_; ++i) {
        if (z.get(i)) a.xor_entry(i, i, 1);
    }
    return a;
}

BitVector CubicTensor::v_vector(const BitVector& y, const BitVector& z) const {
    return g_of_z(z).apply(y);
}

MultiIndexPolynomial CubicTensor::to_polynomial() const {
    MultiIndexPolynomial poly(2, N_);
    for (uint32_t i = 0; i < N_; ++i) {
        for (uint32_t j = i + 1; j < N_; ++j) {
            for (uint32_t k = j + 1; k < N_; ++k) {
                if (!g_[i].get(j, k)) continue;
                std::vector<uint8_t> exp(N_, 0);
                exp[i] = exp[j] = exp[k] = 1;
                poly.add_term(exp, 1);
            }
        }
    }
    return poly;
}

AfMembership af_membership(const CubicTensor& g, const FieldVector& y,
                           const FieldVector& z, uint64_t dense_check_cap) {
    uint32_t N = g.N();
    if (y.p() != 2 || y.size() != N || z.p() != 2 || z.size() != N) {
        throw std::invalid_argument("direction shape mismatch");
    }
    BitVector yb = bits_of(y), zb = bits_of(z);
    AfMembership out;
    out.v = g.v_vector(yb, zb);
    for (uint32_t i = 0; i < N; ++i) {
        int via_slice = yb.dot(g.slice(i).apply(zb));
        if (via_slice != out.v.get(i)) {
            throw std::runtime_error("v_{y,z} slice and matrix forms disagree");
        }
    }
    if (N < 64 && (uint64_t(1) << N) <= dense_check_cap) {
        FiniteFunction gf = from_polynomial(g.to_polynomial(), N, TableMode::Dense);
        std::vector<FieldVector> dirs{y, z};
        FiniteFunction d2 = iterated_derivative(gf, dirs);
        std::vector<uint8_t> coefs = multilinear_coefficients(d2);
        for (uint32_t i = 0; i < N; ++i) {
            if (coefs[uint64_t(1) << i] != out.v.get(i)) {
                throw std::runtime_error(
                    "v_{y,z} disagrees with the dense coefficient extraction");
            }
        }
        out.dense_checked = true;
    }
    out.member = af_support(y, z).contains(out.v);
    return out;
}

AfEventReport af_event_estimate(const CubicTensor& g, bool exhaustive,
                                uint64_t samples, uint64_t seed,
                                uint32_t threads) {
    uint32_t N = g.N();
    if (N == 0 || N > 62) throw std::invalid_argument("N out of range");
    if (threads == 0) threads = default_thread_count();
    AfEventReport rep;
    rep.N = N;
    rep.exhaustive = exhaustive;
    rep.bound = std::pow(0.75, double(N));

    // Row words of every slice; N <= 40 keeps a row in one word.
    std::vector<std::vector<uint64_t>> slice_rows(N, std::vector<uint64_t>(N));
    for (uint32_t i = 0; i < N; ++i) {
        for (uint32_t r = 0; r < N; ++r) {
            slice_rows[i][r] = g.slice(i).row(r).word0();
        }
    }
    uint64_t ones = (N == 64) ? ~uint64_t(0) : (uint64_t(1) << N) - 1;

    auto count_pair = [&](const std::vector<uint64_t>& a_rows, uint64_t y,
                          uint64_t z, uint64_t* counts) {
        uint64_t w = 0;
        for (uint32_t r = 0; r < N; ++r) {
            w |= uint64_t(std::popcount(a_rows[r] & y) & 1) << r;
        }
        for (uint32_t c = 0; c < 8; ++c) {
            uint64_t u = 0;
            if (c & 1) u ^= y;
            if (c & 2) u ^= z;
            if (c & 4) u ^= ones;
            if (w == u) ++counts[c];
        }
    };
    auto build_rows = [&](uint64_t z, std::vector<uint64_t>& a_rows) {
        std::fill(a_rows.begin(), a_rows.end(), 0);
        for (uint32_t i = 0; i < N; ++i) {
            if (!((z >> i) & 1)) continue;
            for (uint32_t r = 0; r < N; ++r) a_rows[r] ^= slice_rows[i][r];
            a_rows[i] ^= uint64_t(1) << i;
        }
    };

    std::vector<std::array<uint64_t, 8>> partial(kShardCount);
    for (auto& part : partial) part.fill(0);
    uint64_t pairs;
    if (exhaustive) {
        if (N > 12 || (uint64_t(1) << (2 * N)) > kAfExhaustiveCap) {
            throw std::invalid_argument("exhaustive pair sweep exceeds its cap");
        }
        uint64_t zs = uint64_t(1) << N;
        pairs = zs * zs;
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            auto [lo, hi] = shard_range(zs, shard);
            std::vector<uint64_t> a_rows(N);
            for (uint64_t z = lo; z < hi; ++z) {
                build_rows(z, a_rows);
                for (uint64_t y = 0; y < zs; ++y) {
                    count_pair(a_rows, y, z, partial[shard].data());
                }
            }
        });
    } else {
        if (samples == 0) throw std::invalid_argument("samples must be positive");
        pairs = samples;
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            uint64_t count = shard_samples(samples, shard);
            if (!count) return;
            RandomSource rng(seed, shard);
            std::vector<uint64_t> a_rows(N);
            for (uint64_t s = 0; s < count; ++s) {
                uint64_t y = rng.bits(N);
                uint64_t z = rng.bits(N);
                build_rows(z, a_rows);
                count_pair(a_rows, y, z, partial[shard].data());
            }
        });
    }
    std::array<uint64_t, 8> counts{};
    for (const auto& part : partial) {
        for (uint32_t c = 0; c < 8; ++c) counts[c] += part[c];
    }
    rep.pairs = pairs;
    uint64_t max_count = 0;
    for (uint32_t c = 0; c < 8; ++c) {
        rep.offset_freq.push_back(double(counts[c]) / double(pairs));
        max_count = std::max(max_count, counts[c]);
    }
    rep.max_freq = double(max_count) / double(pairs);
    if (exhaustive) {
        // max_count / 4^N <= (3/4)^N is exactly max_count <= 3^N.
        unsigned __int128 pow3 = 1;
        for (uint32_t i = 0; i < N; ++i) pow3 *= 3;
        rep.holds = (unsigned __int128)(max_count) <= pow3;
    } else {
        rep.std_error =
            std::sqrt(rep.max_freq * (1.0 - rep.max_freq) / double(pairs));
        rep.holds = rep.max_freq <= rep.bound + 3.0 * rep.std_error;
    }
    return rep;
}

void validate_rank_family(const std::vector<BitMatrix>& family) {
    uint32_t N = uint32_t(family.size());
    for (uint32_t i = 0; i < N; ++i) {
        const BitMatrix& m = family[i];
        if (m.rows() != N || m.cols() != N || !m.is_symmetric()) {
            throw std::invalid_argument("family matrices must be symmetric NxN");
        }
        for (uint32_t k = 0; k < N; ++k) {
            if (m.get(k, k) != (k == i ? 1 : 0)) {
                throw std::invalid_argument(
                    "family diagonal must be the matching unit vector");
            }
        }
    }
}

std::vector<BitMatrix> random_rank_family(uint32_t N, RandomSource& rng) {
    std::vector<BitMatrix> family(N, BitMatrix(N, N));
    for (uint32_t i = 0; i < N; ++i) {
        for (uint32_t j = 0; j < N; ++j) {
            for (uint32_t k = j + 1; k < N; ++k) {
                if (rng.bits(1)) {
                    family[i].set(j, k, 1);
                    family[i].set(k, j, 1);
                }
            }
        }
        family[i].set(i, i, 1);
    }
    return family;
}

RankTailReport rank_tail_check(const std::vector<BitMatrix>& family,
                               const BitMatrix& C, uint32_t k, bool exhaustive,
                               uint64_t samples, uint64_t seed,
                               uint32_t threads) {
    validate_rank_family(family);
    uint32_t N = uint32_t(family.size());
    if (C.rows() != N || C.cols() != N || !C.is_symmetric()) {
        throw std::invalid_argument("C must be symmetric NxN");
    }
    if (k == 0 || k > N + 1) throw std::invalid_argument("rank threshold range");
    if (threads == 0) threads = default_thread_count();
    RankTailReport rep;
    rep.N = N;
    rep.k = k;
    rep.exhaustive = exhaustive;
    uint64_t tail = binomial_tail(N, k);
    rep.bound = double(tail) / std::exp2(double(N));

    auto low_rank = [&](uint64_t z) {
        BitMatrix m = C;
        for (uint32_t i = 0; i < N; ++i) {
            if ((z >> i) & 1) m.xor_inplace(family[i]);
        }
        return m.rank() <= k - 1;
    };

    std::vector<uint64_t> partial(kShardCount, 0);
    if (exhaustive) {
        if (N > 62 || (uint64_t(1) << N) > kRankExhaustiveCap) {
            throw std::invalid_argument("exhaustive z sweep exceeds its cap");
        }
        uint64_t zs = uint64_t(1) << N;
        rep.trials = zs;
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            auto [lo, hi] = shard_range(zs, shard);
            uint64_t cnt = 0;
            for (uint64_t z = lo; z < hi; ++z) cnt += low_rank(z);
            partial[shard] = cnt;
        });
        uint64_t count = 0;
        for (uint64_t v : partial) count += v;
        rep.freq = double(count) / double(zs);
        rep.holds = count <= tail;
    } else {
        if (samples == 0) throw std::invalid_argument("samples must be positive");
        if (N > 62) throw std::invalid_argument("N out of range");
        rep.trials = samples;
        run_sharded(kShardCount, threads, [&](uint32_t shard) {
            uint64_t count = shard_samples(samples, shard);
            if (!count) return;
            RandomSource rng(seed, shard);
            uint64_t cnt = 0;
            for (uint64_t s = 0; s < count; ++s) cnt += low_rank(rng.bits(N));
            partial[shard] = cnt;
        });
        uint64_t count = 0;
        for (uint64_t v : partial) count += v;
        rep.freq = double(count) / double(samples);
        rep.std_error =
            std::sqrt(rep.freq * (1.0 - rep.freq) / double(samples));
        rep.holds = rep.freq <= rep.bound + 3.0 * rep.std_error;
    }
    return rep;
}

CommonZeroReport common_zero_bound_check(
    const std::map<std::vector<uint32_t>, MultiIndexPolynomial>& perturbations,
    uint32_t N, uint32_t k) {
    if (k == 0 || k > N) throw std::invalid_argument("need 1 <= k <= N");
    if (N > 62 || (uint64_t(1) << N) > kRankExhaustiveCap) {
        throw std::invalid_argument("domain exceeds the exhaustive cap");
    }
    for (const auto& [subset, poly] : perturbations) {
        if (subset.size() != k) {
            throw std::invalid_argument("perturbation keys must be k-subsets");
        }
        for (uint32_t i = 0; i < k; ++i) {
            if (subset[i] >= N || (i && subset[i] <= subset[i - 1])) {
                throw std::invalid_argument("subset must be sorted and in range");
            }
        }
        if (poly.p() != 2 || poly.vars() != N) {
            throw std::invalid_argument("perturbation shape mismatch");
        }
        if (poly.degree() > k - 1) {
            throw std::invalid_argument(
                "perturbation degree must stay below the subset size");
        }
    }

    uint64_t size = uint64_t(1) << N;
    std::vector<uint8_t> alive(size, 1);
    std::vector<uint32_t> subset(k);
    for (uint32_t i = 0; i < k; ++i) subset[i] = i;
    uint64_t family = 0;
    while (true) {
        ++family;
        auto it = perturbations.find(subset);
        MultiIndexPolynomial f_I =
            it != perturbations.end() ? it->second : MultiIndexPolynomial(2, N);
        std::vector<uint8_t> exp(N, 0);
        for (uint32_t i : subset) exp[i] = 1;
        f_I.add_term(exp, 1);
        FiniteFunction table = from_polynomial(f_I, N, TableMode::Dense);
        for (uint64_t x = 0; x < size; ++x) {
            if (table.at_index(x)) alive[x] = 0;
        }
        // Next k-subset in lexicographic order.
        int32_t pos = int32_t(k) - 1;
        while (pos >= 0 && subset[pos] == N - k + uint32_t(pos)) --pos;
        if (pos < 0) break;
        ++subset[pos];
        for (uint32_t j = uint32_t(pos) + 1; j < k; ++j) {
            subset[j] = subset[j - 1] + 1;
        }
    }

    CommonZeroReport rep;
    for (uint8_t v : alive) rep.zeros += v;
    rep.bound = binomial_tail(N, k);
    rep.family_size = family;
    rep.holds = rep.zeros <= rep.bound;
    return rep;
}

uint64_t binomial_tail(uint32_t N, uint32_t k) {
    if (N > 62) throw std::invalid_argument("N out of range");
    uint64_t sum = 0, binom = 1;
    for (uint32_t j = 0; j < k && j <= N; ++j) {
        sum += binom;
        binom = binom * (N - j) / (j + 1);
    }
    return sum;
}

}  // namespace ufn
