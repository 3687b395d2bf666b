#include "ufn/path_sums.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ufn {

namespace {

std::vector<uint32_t> allowed_columns(uint32_t N,
                                      std::span<const uint32_t> excluded) {
    std::vector<bool> cut(N, false);
    for (uint32_t c : excluded) {
        if (c >= N) throw std::out_of_range("excluded column out of range");
        if (cut[c]) throw std::invalid_argument("duplicate excluded column");
        cut[c] = true;
    }
    std::vector<uint32_t> cols;
    cols.reserve(N - excluded.size());
    for (uint32_t c = 0; c < N; ++c) {
        if (!cut[c]) cols.push_back(c);
    }
    return cols;
}

uint8_t eval_all_paths(const RowMatrix& m, const std::vector<uint32_t>& cols) {
    std::vector<FieldVector> rows = m.flattened();
    uint32_t n = uint32_t(rows.size());
    if (n > 20) throw std::invalid_argument("all-paths sum limited to n <= 20");
    if (n == 0) return 1;
    if (n > cols.size()) return 0;
    PrimeField f(m.p());
    std::vector<uint8_t> dp(size_t(1) << n, 0);
    dp[0] = 1;
    for (uint32_t c : cols) {
        // Descending mask order: dp[mask] is still the pre-column value when
        // it feeds dp[mask | bit], so each column is used at most once.
        for (size_t mask = (size_t(1) << n); mask-- > 0;) {
            if (!dp[mask]) continue;
            for (uint32_t i = 0; i < n; ++i) {
                if (mask & (size_t(1) << i)) continue;
                uint8_t e = rows[i].get(c);
                if (!e) continue;
                size_t next = mask | (size_t(1) << i);
                dp[next] = f.add(dp[next], f.mul(dp[mask], e));
            }
        }
    }
    return dp[(size_t(1) << n) - 1];
}

uint8_t eval_monotone(const RowMatrix& m, const std::vector<uint32_t>& cols) {
    std::vector<FieldVector> rows = m.flattened();
    uint32_t n = uint32_t(rows.size());
    if (n == 0) return 1;
    if (n > cols.size()) return 0;
    PrimeField f(m.p());
    std::vector<uint8_t> dp(n + 1, 0);
    dp[0] = 1;
    for (uint32_t c : cols) {
        for (uint32_t t = n; t >= 1; --t) {
            uint8_t e = rows[t - 1].get(c);
            if (e && dp[t - 1]) dp[t] = f.add(dp[t], f.mul(dp[t - 1], e));
        }
    }
    return dp[n];
}

uint8_t eval_group_monotone(const RowMatrix& m,
                            const std::vector<uint32_t>& cols) {
    const auto& groups = m.groups();
    uint32_t k = uint32_t(groups.size());
    uint32_t n = m.total_rows();
    if (n == 0) return 1;
    if (n > cols.size()) return 0;
    PrimeField f(m.p());
    // Mixed-radix state: digit t counts rows of group t already placed.
    std::vector<size_t> radix(k), stride(k);
    size_t states = 1;
    for (uint32_t t = 0; t < k; ++t) {
        radix[t] = groups[t].second + 1;
        stride[t] = states;
        states *= radix[t];
    }
    std::vector<uint8_t> dp(states, 0);
    dp[0] = 1;
    std::vector<size_t> digit(k);
    for (uint32_t c : cols) {
        // Descending state order for the same reason as the subset sweep:
        // bumping digit t moves strictly upward in the encoding.
        for (size_t s = states; s-- > 0;) {
            if (!dp[s]) continue;
            size_t rem = s;
            for (uint32_t t = 0; t < k; ++t) {
                digit[t] = rem % radix[t];
                rem /= radix[t];
            }
            for (uint32_t t = 0; t < k; ++t) {
                if (digit[t] + 1 >= radix[t]) continue;
                uint8_t e = groups[t].first.get(c);
                if (!e) continue;
                size_t next = s + stride[t];
                dp[next] = f.add(dp[next], f.mul(dp[s], e));
            }
        }
    }
    return dp[states - 1];
}

struct BruteState {
    const std::vector<FieldVector>* rows;
    const std::vector<uint32_t>* cols;
    const std::vector<uint32_t>* group_of;  // flattened row index -> group id
    PathFamily family;
    PrimeField field;
    std::vector<uint32_t> chosen;  // column slot index per placed row
    uint32_t acc = 0;
};

void brute_recurse(BruteState& st, uint32_t row, uint64_t used, uint8_t prod) {
    const auto& rows = *st.rows;
    const auto& cols = *st.cols;
    if (row == rows.size()) {
        st.acc = (st.acc + prod) % st.field.p();
        return;
    }
    for (uint32_t ci = 0; ci < cols.size(); ++ci) {
        if (used & (uint64_t(1) << ci)) continue;
        if (st.family == PathFamily::Monotone && row > 0 &&
            ci <= st.chosen[row - 1]) {
            continue;
        }
        if (st.family == PathFamily::GroupMonotone && row > 0 &&
            (*st.group_of)[row] == (*st.group_of)[row - 1] &&
            ci <= st.chosen[row - 1]) {
            continue;
        }
        uint8_t e = rows[row].get(cols[ci]);
        if (!e) continue;
        st.chosen[row] = ci;
        brute_recurse(st, row + 1, used | (uint64_t(1) << ci),
                      st.field.mul(prod, e));
    }
}

}  // namespace

RowMatrix& RowMatrix::add_group(const FieldVector& row, uint32_t multiplicity) {
    if (row.p() != p_ || row.size() != N_) {
        throw std::invalid_argument("row shape does not match matrix");
    }
    groups_.emplace_back(row, multiplicity);
    return *this;
}

uint32_t RowMatrix::total_rows() const {
    uint32_t n = 0;
    for (const auto& [row, mult] : groups_) n += mult;
    return n;
}

std::vector<FieldVector> RowMatrix::flattened() const {
    std::vector<FieldVector> rows;
    rows.reserve(total_rows());
    for (const auto& [row, mult] : groups_) {
        for (uint32_t i = 0; i < mult; ++i) rows.push_back(row);
    }
    return rows;
}

uint8_t eval_path_sum(PathFamily family, const RowMatrix& m,
                      std::span<const uint32_t> excluded_columns) {
    std::vector<uint32_t> cols = allowed_columns(m.cols(), excluded_columns);
    switch (family) {
        case PathFamily::All: return eval_all_paths(m, cols);
        case PathFamily::Monotone: return eval_monotone(m, cols);
        case PathFamily::GroupMonotone: return eval_group_monotone(m, cols);
    }
    throw std::invalid_argument("unknown path family");
}

uint8_t brute_path_oracle(PathFamily family, const RowMatrix& m,
                          std::span<const uint32_t> excluded_columns) {
    if (m.total_rows() > 8 || m.cols() > 12) {
        throw std::invalid_argument("brute oracle limited to n <= 8, N <= 12");
    }
    std::vector<uint32_t> cols = allowed_columns(m.cols(), excluded_columns);
    std::vector<FieldVector> rows = m.flattened();
    if (rows.empty()) return 1;
    if (rows.size() > cols.size()) return 0;
    std::vector<uint32_t> group_of;
    for (uint32_t g = 0; g < m.groups().size(); ++g) {
        for (uint32_t i = 0; i < m.groups()[g].second; ++i) group_of.push_back(g);
    }
    BruteState st{&rows, &cols, &group_of, family, PrimeField(m.p()), {}, 0};
    st.chosen.assign(rows.size(), 0);
    brute_recurse(st, 0, 0, 1);
    return uint8_t(st.acc);
}

uint8_t partition_expansion(std::span<const FieldVector> rows) {
    uint32_t n = uint32_t(rows.size());
    if (n == 0) return 1;
    if (n > 8) throw std::invalid_argument("partition expansion limited to n <= 8");
    PrimeField f(rows[0].p());
    // Restricted growth strings enumerate unordered set partitions.
    std::vector<uint32_t> a(n, 0);
    uint8_t total = 0;
    for (;;) {
        uint32_t blocks = *std::max_element(a.begin(), a.end()) + 1;
        uint8_t term = 1;
        for (uint32_t b = 0; b < blocks && term; ++b) {
            std::vector<uint32_t> members;
            for (uint32_t i = 0; i < n; ++i) {
                if (a[i] == b) members.push_back(i);
            }
            auto [r, sum] = product_functional(rows, members);
            uint8_t w = f.mul(f.factorial(members.size() - 1), sum);
            if ((members.size() - 1) % 2 == 1) w = f.neg(w);
            term = f.mul(term, w);
        }
        total = f.add(total, term);
        // Next restricted growth string.
        uint32_t i = n;
        while (i-- > 1) {
            uint32_t cap = *std::max_element(a.begin(), a.begin() + i) + 1;
            if (a[i] < cap) {
                ++a[i];
                std::fill(a.begin() + i + 1, a.end(), 0);
                break;
            }
            a[i] = 0;
        }
        if (i == 0) break;
    }
    return total;
}

uint8_t incomplete_expansion(std::span<const FieldVector> rows,
                             std::span<const uint32_t> missing) {
    uint32_t n = uint32_t(rows.size());
    uint32_t k = uint32_t(missing.size());
    if (n > 6 || k > 6) {
        throw std::invalid_argument("incomplete expansion limited to n, k <= 6");
    }
    if (n == 0 && k == 0) return 1;
    uint32_t p = rows.empty() ? 2 : rows[0].p();
    uint32_t N = rows.empty() ? 0 : rows[0].size();
    {
        std::vector<uint32_t> seen(missing.begin(), missing.end());
        std::sort(seen.begin(), seen.end());
        if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
            throw std::invalid_argument("missing columns must be distinct");
        }
        for (uint32_t c : seen) {
            if (c >= N) throw std::out_of_range("missing column out of range");
        }
    }
    PrimeField f(p);
    // Assignment a[i] in [0, k]: 0 keeps row i, t >= 1 puts it in tau_t.
    std::vector<uint32_t> a(n, 0);
    uint8_t total = 0;
    for (;;) {
        uint8_t term = 1;
        for (uint32_t t = 1; t <= k && term; ++t) {
            uint8_t prod = 1;
            uint32_t count = 0;
            for (uint32_t i = 0; i < n; ++i) {
                if (a[i] != t) continue;
                prod = f.mul(prod, rows[i].get(missing[t - 1]));
                ++count;
            }
            uint8_t w = f.mul(f.factorial(count), prod);
            if (count % 2 == 1) w = f.neg(w);
            term = f.mul(term, w);
        }
        if (term) {
            RowMatrix rest(p, N);
            for (uint32_t i = 0; i < n; ++i) {
                if (a[i] == 0) rest.add_group(rows[i], 1);
            }
            term = f.mul(term, eval_path_sum(PathFamily::All, rest));
        }
        total = f.add(total, term);
        uint32_t i = n;
        while (i-- > 0) {
            if (a[i] < k) {
                ++a[i];
                std::fill(a.begin() + i + 1, a.end(), 0);
                break;
            }
            a[i] = 0;
        }
        if (i == uint32_t(-1)) break;
    }
    return total;
}

}  // namespace ufn
