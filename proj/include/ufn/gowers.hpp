#pragma once

#include <cstdint>
#include <vector>

#include "ufn/field.hpp"
#include "ufn/finite_function.hpp"

namespace ufn {

// Uniformity norm of order k:
//   ||f||_{U^k}^{2^k} = E_{x, y_1..y_k} e(f_{y_1..y_k}(x)),
// evaluated by the recursion ||f||_{U^k}^{2^k} =
// E_{y_1..y_{k-2}} ||f_{y_1..y_{k-2}}||_{U^2}^4 with the order-2 base case
// read off a character spectrum.
struct GowersEstimate {
    uint32_t order = 0;
    double raw_power = 0.0;  // ||f||^{2^k}
    double value = 0.0;      // max(raw_power, 0)^{1 / 2^k}
    double std_error = 0.0;  // on raw_power; 0 when exact
    uint64_t samples = 0;    // sampled points (MC) or averaged tuples (exact)
    bool exact = false;
    // p = 2 exact runs carry raw_power as the rational
    // raw_numer / 2^raw_denom_log2.
    unsigned __int128 raw_numer = 0;
    uint32_t raw_denom_log2 = 0;
};

// Work bound for the exact sweep: p^{(k-2)N} * N * p^N of inner operations
// for k >= 2 (p^N for k = 1). The default admits p = 2 sweeps up to
// k = 3 at N = 12, k = 4 at N = 10 and k = 5 at N = 8.
inline constexpr uint64_t kDefaultGowersBudget = 50'000'000'000ull;

GowersEstimate gowers_norm_exact(const FiniteFunction& f, uint32_t k,
                                 uint32_t threads = 0,
                                 uint64_t budget = kDefaultGowersBudget);

// Monte Carlo estimate: `samples` independent tuples (x, y_1..y_k), each
// contributing e(f_{y_1..y_k}(x)) by the 2^k-term expansion. Work is split
// into 64 fixed shards with per-shard streams, so the result depends only on
// (seed, samples), never on the thread count. For p > 2 the imaginary part
// of the mean must stay below 5 standard errors or the run throws.
GowersEstimate gowers_norm_mc(const FiniteFunction& f, uint32_t k,
                              uint64_t samples, uint64_t seed,
                              uint32_t threads = 0);

// Membership set {x : <x^e, y> = target for every constraint}, with the
// degenerate exponent-0 all-ones constraint <1, 1> = N mod p tracked as a
// flag on N rather than per point.
struct PowerConstraint {
    uint32_t exponent;  // in [1, p-1]
    FieldVector y;
    uint8_t target = 0;
};

class ConstraintSet {
public:
    ConstraintSet(uint32_t p, uint32_t N) : p_(p), N_(N) {}

    ConstraintSet& add(uint32_t exponent, const FieldVector& y, uint8_t target = 0);
    // Enables the exponent-0 constraint; it holds iff N = 0 mod p.
    ConstraintSet& require_weight_constraint();

    uint32_t p() const { return p_; }
    uint32_t N() const { return N_; }
    const std::vector<PowerConstraint>& constraints() const { return list_; }
    bool weight_constraint() const { return weight_constraint_; }

    bool contains(const FieldVector& x) const;

private:
    uint32_t p_, N_;
    bool weight_constraint_ = false;
    std::vector<PowerConstraint> list_;
};

// If f is constant on the constraint set M, then
// ||f||_{U^p} > (|M| / p^N)^2. Checks the inequality exactly.
struct FixedSetBound {
    uint64_t set_size = 0;
    double density = 0.0;
    double norm = 0.0;   // ||f||_{U^p}
    double bound = 0.0;  // density^2
    bool holds = false;
};

FixedSetBound fixed_set_bound_check(const FiniteFunction& f,
                                    const ConstraintSet& constraints,
                                    uint32_t threads = 0);

// Joint distribution of the power sums X_kappa = sum_j prod_i r_i^{k_i}(j)
// over all nonzero exponent tuples kappa (K = p^n - 1 of them), for
// independent uniform r_1..r_n in F_p^N. Reports the L1 distance between
// the sampled distribution of (X_kappa) and the uniform one on F_p^K.
struct PowerProductDistribution {
    uint64_t K = 0;
    uint64_t samples = 0;
    uint64_t distinct_cells = 0;
    double l1_distance = 0.0;
};

PowerProductDistribution power_product_distribution(uint32_t p, uint32_t n,
                                                    uint32_t N, uint64_t samples,
                                                    uint64_t seed,
                                                    uint32_t threads = 0);

// Rejection-samples triples (x, y, z) with <x^i y^a z^b> = 0 for every
// (i, a, b) in [0,p)^3 except (0,0,0), and verifies
// (S_{2p})_{y,z}(x) = GroupMonotoneSum(y^(p), z^(p)) on each accepted
// triple. Requires N = 0 mod p so the excluded (0,0,0) bracket <1> = N
// vanishes too. Hitting the attempt cap is reported, not thrown.
struct VanishingCheck {
    uint64_t trials_requested = 0;
    uint64_t trials_done = 0;
    uint64_t attempts = 0;
    uint64_t failures = 0;
    bool cap_exhausted = false;
};

VanishingCheck vanishing_lemma_check(uint32_t p, uint32_t N, uint64_t trials,
                                     uint64_t seed,
                                     uint64_t attempt_cap = 10'000'000);

}  // namespace ufn
