#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ufn/bits.hpp"
#include "ufn/field.hpp"
#include "ufn/finite_function.hpp"

namespace ufn {

// Q(x) = sum_{i<j} q_{i,j} x(i) x(j) + sum_i ell(i) x(i) + c over F_2.
// Coefficients live in the strict upper triangle of q.
struct QuadraticForm {
    uint32_t N = 0;
    BitMatrix q;    // entries set only for row < col
    BitVector ell;
    uint8_t c = 0;

    explicit QuadraticForm(uint32_t n) : N(n), q(n, n), ell(n) {}

    uint8_t eval(const BitVector& x) const;
    // Dense truth table in point-index order.
    FiniteFunction to_function(uint64_t cap = kDefaultDenseCap) const;
};

// Q = (S_4)_{y,z} in closed form:
//   q_{i,j} = S(y,z) + <y,1>(z(i)+z(j)) + <z,1>(y(i)+y(j)) + y(i)z(j) + y(j)z(i)
//   ell(i)  = (S(y,z)+S(z,z)+<z,1>) y(i) + (S(y,z)+S(y,y)+<y,1>) z(i)
//             + S(y,y)<z,1> + S(z,z)<y,1> + <y,z><y+z,1>
//   c       = (S_4)_{y,z}(0)
// with S(y,z) the all-paths sum of the two stacked rows and S(y,y), S(z,z)
// the unordered pair sums (the ordered sum of equal rows cancels mod 2).
// The S(y,z) terms are kept even where they cancel under S(y,z) = 0.
QuadraticForm second_derivative_s4(const FieldVector& y, const FieldVector& z);

// Symmetric zero-diagonal matrix with off-diagonal entries q_{i,j}.
BitMatrix b_matrix(const QuadraticForm& q);

// B = S(y,z) J + <y,1>(z(x)1 + 1(x)z) + <z,1>(y(x)1 + 1(x)y) + y(x)z + z(x)y,
// diagonal forced to zero. Must equal b_matrix(second_derivative_s4(y, z)).
BitMatrix b_matrix_structural(const FieldVector& y, const FieldVector& z);

// Zero diagonal, ones elsewhere.
BitMatrix ones_off_diagonal(uint32_t n);

uint32_t gf2_rank(const BitMatrix& m);

// Spectrum shape of (-1)^Q: with rank(B) = 2h there are exactly 2^{2h}
// nonzero coefficients, all of modulus 2^{-h}, and their indices span a
// 2h-dimensional affine subspace.
struct DixonReport {
    uint32_t h = 0;
    uint64_t support_size = 0;
    double magnitude = 0.0;      // common modulus of the nonzero coefficients
    uint32_t support_dim = 0;    // affine dimension of the support
    bool size_ok = false;
    bool magnitude_ok = false;
    bool subspace_ok = false;
    bool pass = false;
};

DixonReport dixon_spectrum_check(const QuadraticForm& q,
                                 uint64_t cap = kDefaultDenseCap);

// yz + span(y, z, 1); membership by trying all 8 span combinations.
struct AffineSupport {
    BitVector offset;
    BitVector basis[3];

    bool contains(const BitVector& v) const;
};

AffineSupport af_support(const FieldVector& y, const FieldVector& z);

// Multilinear cubic sum_{i<j<k} a_{i,j,k} x(i)x(j)x(k), stored through the
// slice matrices G_i with (G_i)_{j,k} = a_{{i,j,k}} off the diagonal and 0
// on it. The slices obey (G_i)_{j,k} = (G_j)_{i,k} = (G_k)_{i,j}.
class CubicTensor {
public:
    explicit CubicTensor(uint32_t N);
    static CubicTensor random(uint32_t N, RandomSource& rng);

    uint32_t N() const { return N_; }
    void set(uint32_t i, uint32_t j, uint32_t k, int v);
    int coefficient(uint32_t i, uint32_t j, uint32_t k) const;
    const BitMatrix& slice(uint32_t i) const { return g_[i]; }

    // G(z) = sum_i z(i) G_i.
    BitMatrix g_of_z(const BitVector& z) const;
    // A_i = G_i + e_i (x) e_i; A(z) = G(z) + diag(z).
    BitMatrix a_matrix(uint32_t i) const;
    BitMatrix a_of_z(const BitVector& z) const;
    // v_{y,z} = G(z) y, the linear coefficient vector of g_{y,z}.
    BitVector v_vector(const BitVector& y, const BitVector& z) const;

    MultiIndexPolynomial to_polynomial() const;

private:
    uint32_t N_;
    std::vector<BitMatrix> g_;
};

// v_{y,z} evaluated as G(z) y, cross-checked against <y, G_i z> per entry
// and, when 2^N <= dense_check_cap, against the coefficients extracted from
// the dense second derivative. Disagreement throws.
struct AfMembership {
    BitVector v;
    bool member = false;
    bool dense_checked = false;
};

AfMembership af_membership(const CubicTensor& g, const FieldVector& y,
                           const FieldVector& z,
                           uint64_t dense_check_cap = uint64_t(1) << 20);

// Frequency of {A(z) y = u} over uniform (y, z) for each of the 8 offsets
// u in span(y, z, 1); offset index bit 0 adds y, bit 1 adds z, bit 2 adds 1.
// The bound (3/4)^N applies to every offset.
struct AfEventReport {
    uint32_t N = 0;
    bool exhaustive = false;
    uint64_t pairs = 0;
    std::vector<double> offset_freq;  // 8 entries
    double max_freq = 0.0;
    double std_error = 0.0;  // of max_freq in MC mode
    double bound = 0.0;      // (3/4)^N
    bool holds = false;
};

// Exhaustive sweep guard: 2^{2N} pairs.
inline constexpr uint64_t kAfExhaustiveCap = uint64_t(1) << 24;

AfEventReport af_event_estimate(const CubicTensor& g, bool exhaustive,
                                uint64_t samples, uint64_t seed,
                                uint32_t threads = 0);

// Family {A_i} of symmetric matrices with (A_i)_{k,k} = [i == k]; throws if
// the shape is violated.
void validate_rank_family(const std::vector<BitMatrix>& family);

std::vector<BitMatrix> random_rank_family(uint32_t N, RandomSource& rng);

// Frequency over z of rank(A(z) + C) <= k - 1 against the binomial tail
// 2^{-N} sum_{i<k} C(N,i).
struct RankTailReport {
    uint32_t N = 0, k = 0;
    bool exhaustive = false;
    uint64_t trials = 0;
    double freq = 0.0;
    double std_error = 0.0;
    double bound = 0.0;
    bool holds = false;
};

inline constexpr uint64_t kRankExhaustiveCap = uint64_t(1) << 22;

RankTailReport rank_tail_check(const std::vector<BitMatrix>& family,
                               const BitMatrix& C, uint32_t k, bool exhaustive,
                               uint64_t samples = 0, uint64_t seed = 0,
                               uint32_t threads = 0);

// Common zeros of the family f_I = prod_{i in I} x(i) + g_I over all
// k-subsets I of [N], with deg g_I <= k - 1 (checked). Missing map entries
// mean g_I = 0. The count never exceeds sum_{j<k} C(N,j).
struct CommonZeroReport {
    uint64_t zeros = 0;
    uint64_t bound = 0;
    uint64_t family_size = 0;
    bool holds = false;
};

CommonZeroReport common_zero_bound_check(
    const std::map<std::vector<uint32_t>, MultiIndexPolynomial>& perturbations,
    uint32_t N, uint32_t k);

// sum_{j<k} C(N,j), exact.
uint64_t binomial_tail(uint32_t N, uint32_t k);

}  // namespace ufn
