#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ufn/field.hpp"
#include "ufn/path_sums.hpp"

namespace ufn {

// S_n(x) = sum over n-subsets of coordinates of their product, evaluated by
// one sweep of the generating function prod_j (1 + x_j t). Cost O(N n).
uint8_t eval_symmetric(uint32_t n, const FieldVector& x);

// Value of S_n on a 0/1 vector of weight w: C(w, n) mod p.
uint8_t cube_value_lucas(uint32_t n, uint32_t p, uint64_t w);

// Order-k derivative of S_n in fixed directions y_1..y_k, expanded as
//   (S_n)_{y_1..y_k}(x) =
//     sum_{m=0}^{n-k} sum_{l_1..l_k >= 1, sum l_i = n-m}
//       GroupMonotoneSum(x^(m), y_1^(l_1), ..., y_k^(l_k)).
// Terms with m = 0 do not involve x; their values are computed once at
// construction and reused across evaluation points.
class SymmetricDerivative {
public:
    SymmetricDerivative(uint32_t n, std::span<const FieldVector> directions);

    uint32_t n() const { return n_; }
    uint32_t order() const { return uint32_t(dirs_.size()); }
    // Number of terms in the expansion (all m).
    uint64_t term_count() const { return term_count_; }

    uint8_t eval(const FieldVector& x) const;

private:
    uint32_t n_, p_, N_;
    std::vector<FieldVector> dirs_;
    std::vector<std::vector<uint32_t>> compositions_;  // per m >= 1, flattened
    uint8_t constant_part_;                            // sum of m = 0 terms
    uint64_t term_count_;
};

// Coefficient of the monomial prod_{j in J} x_j in (S_n)_{y_1..y_k}, with
// |J| = m and m <= n - k, via column-excluded group-monotone sums:
//   a_J = sum_{l_1..l_k >= 1, sum = n - m} GroupMonotoneSum^J(y_i^(l_i)).
uint8_t monomial_coefficient(uint32_t n, std::span<const FieldVector> directions,
                             std::span<const uint32_t> monomial);

// Same coefficient through all-paths sums with factorial weights,
//   a_J = sum_l (prod_i l_i!)^{-1} AllPathsSum^J(y_i^(l_i)),
// valid when k + m + p > n + 1 so every l_i stays below p.
uint8_t monomial_coefficient_factorial(uint32_t n,
                                       std::span<const FieldVector> directions,
                                       std::span<const uint32_t> monomial);

// Enumerates (l_1..l_k) with l_i >= 1 and sum = total, in lexicographic
// order. Empty result when k > total; the empty composition when k = 0 and
// total = 0.
std::vector<std::vector<uint32_t>> compositions(uint32_t total, uint32_t k);

}  // namespace ufn
