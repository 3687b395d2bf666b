#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ufn/field.hpp"

namespace ufn {

// n x N matrix over F_p given as groups of repeated rows. The group
// structure is the ordered partition used by the group-monotone sum.
class RowMatrix {
public:
    RowMatrix(uint32_t p, uint32_t N) : p_(p), N_(N) {}

    RowMatrix& add_group(const FieldVector& row, uint32_t multiplicity);

    uint32_t p() const { return p_; }
    uint32_t cols() const { return N_; }
    uint32_t total_rows() const;
    const std::vector<std::pair<FieldVector, uint32_t>>& groups() const {
        return groups_;
    }
    std::vector<FieldVector> flattened() const;

private:
    uint32_t p_, N_;
    std::vector<std::pair<FieldVector, uint32_t>> groups_;
};

// Weighted counts of injective assignments of rows to columns ("paths"),
// each path contributing the product of its matrix entries.
//   All:           no ordering constraint (the permanental minor sum).
//   Monotone:      columns strictly increase along the flattened row order.
//   GroupMonotone: columns increase within each group, groups independent.
enum class PathFamily { All, Monotone, GroupMonotone };

// Column-sweep dynamic programs. Costs: Monotone O(N n), GroupMonotone
// O(N prod(l_i + 1)), All O(N 2^n) with n <= 20 enforced. Excluded columns
// are skipped by the sweep. Empty matrix gives 1; n > usable columns gives 0.
uint8_t eval_path_sum(PathFamily family, const RowMatrix& m,
                      std::span<const uint32_t> excluded_columns = {});

// Direct enumeration of paths, for cross-checking the sweeps. n <= 8 and
// N <= 12 enforced.
uint8_t brute_path_oracle(PathFamily family, const RowMatrix& m,
                          std::span<const uint32_t> excluded_columns = {});

// All-paths sum written as a sum over unordered set partitions of the rows,
// each block contributing (-1)^{|B|-1} (|B|-1)! <r_B>. n <= 8 enforced.
uint8_t partition_expansion(std::span<const FieldVector> rows);

// All-paths sum with the columns in `missing` removed, written as a sum over
// ordered systems of disjoint (possibly empty) row subsets tau_1..tau_k, one
// per missing column: prod_t (-1)^{|tau_t|} |tau_t|! r_{tau_t}(j_t) times the
// complete all-paths sum of the remaining rows. n <= 6, k <= 6 enforced.
uint8_t incomplete_expansion(std::span<const FieldVector> rows,
                             std::span<const uint32_t> missing);

}  // namespace ufn
