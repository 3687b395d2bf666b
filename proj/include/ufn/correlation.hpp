#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ufn/field.hpp"
#include "ufn/finite_function.hpp"

namespace ufn {

// max_g |<f, g>| over polynomials g of degree <= d.
struct CorrelationResult {
    double max_abs = 0.0;
    std::string method;        // "exhaustive" | "spectral"
    bool exact = false;        // p = 2: numer / 2^denom_log2
    int64_t numer = 0;
    uint32_t denom_log2 = 0;
    uint64_t dimension = 0;    // coefficients searched (exhaustive)
    uint64_t candidates = 0;   // 2^dimension (exhaustive), 2^N (spectral)
    std::optional<MultiIndexPolynomial> witness;  // exhaustive only
};

// Search-space cap for the exhaustive walk: 2^{sum_{j<=d} C(N,j)} <= 2^28.
inline constexpr uint32_t kMaxSearchBits = 28;

// Exact maximum of |<f, g>| over every polynomial g of degree at most d,
// p = 2 only. The walk visits coefficient space in Gray-code order, XORs one
// precomputed monomial table per step, and popcounts the disagreement mask.
// The space splits into 64 shards by the top coefficient bits; merge takes
// the larger value, ties to the lower shard, within a shard the first
// maximizer in walk order. The witness reports that maximizer.
CorrelationResult max_correlation_exhaustive(const FiniteFunction& f, uint32_t d,
                                             uint32_t threads = 0);

// Best affine correlation through the character spectrum: max_alpha of the
// modulus of the Walsh coefficient. Equals the exhaustive search at d = 1.
CorrelationResult max_correlation_spectral(const FiniteFunction& f);

// Uniform random polynomial of degree <= d: every monomial with total
// degree <= d (exponents < p, multilinear at p = 2) gets an independent
// uniform coefficient.
MultiIndexPolynomial random_polynomial(uint32_t p, uint32_t N, uint32_t d,
                                       RandomSource& rng);

struct ProfileQuantile {
    std::string label;  // "p50", "p90", "p99", "max"
    double value = 0.0;
    double std_error = 0.0;  // order-statistic band; 0 for "max"
};

struct CorrelationProfile {
    uint64_t trials = 0;
    uint64_t sample_points = 0;  // 0 when each correlation is exact
    std::vector<ProfileQuantile> quantiles;
};

// Distribution of |<f, g>| over `trials` random degree-<= d polynomials.
// Dense f: each correlation is exact via packed tables. Lazy f: each
// correlation is estimated on `sample_points` random points. Quantiles are
// nearest-rank; their spread comes from the order statistics at the
// +-sqrt(q (1-q) trials) ranks.
CorrelationProfile sampled_correlation_profile(const FiniteFunction& f,
                                               uint32_t d, uint64_t trials,
                                               uint64_t seed,
                                               uint32_t threads = 0,
                                               uint64_t sample_points = 1 << 16);

// <f,g>^4 <= E_y <f_y, g_y>^2 and <f,g>^8 <= E_{y,z} <f_{y,z}, g_{y,z}>^2,
// both sides exact integers over F_2.
struct DerivativeInequality {
    double lhs_order1 = 0.0, rhs_order1 = 0.0;
    double lhs_order2 = 0.0, rhs_order2 = 0.0;
    bool holds_order1 = false;
    bool holds_order2 = false;
    bool holds = false;
};

// Work guard: the order-2 sweep touches p^{2N} direction pairs.
inline constexpr uint64_t kDefaultDerivativePairBudget = uint64_t(1) << 16;

DerivativeInequality derivative_inequality_check(
    const FiniteFunction& f, const FiniteFunction& g,
    uint64_t pair_budget = kDefaultDerivativePairBudget);

}  // namespace ufn
