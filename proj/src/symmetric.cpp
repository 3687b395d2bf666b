#include "ufn/symmetric.hpp"

#include <algorithm>
#include <stdexcept>

namespace ufn {

uint8_t eval_symmetric(uint32_t n, const FieldVector& x) {
    PrimeField f(x.p());
    // c[m] tracks the degree-m coefficient of prod_{j<=seen} (1 + x_j t).
    std::vector<uint8_t> c(n + 1, 0);
    c[0] = 1;
    for (uint32_t j = 0; j < x.size(); ++j) {
        uint8_t v = x.get(j);
        if (!v) continue;
        for (uint32_t m = std::min(n, j + 1); m >= 1; --m) {
            c[m] = f.add(c[m], f.mul(c[m - 1], v));
        }
    }
    return c[n];
}

uint8_t cube_value_lucas(uint32_t n, uint32_t p, uint64_t w) {
    return lucas_binomial(w, n, p);
}

namespace {

void compose_rec(uint32_t rem, uint32_t parts, std::vector<uint32_t>& cur,
                 std::vector<std::vector<uint32_t>>& out) {
    if (parts == 1) {
        cur.push_back(rem);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (uint32_t v = 1; v + (parts - 1) <= rem; ++v) {
        cur.push_back(v);
        compose_rec(rem - v, parts - 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace

std::vector<std::vector<uint32_t>> compositions(uint32_t total, uint32_t k) {
    std::vector<std::vector<uint32_t>> out;
    if (k == 0) {
        if (total == 0) out.push_back({});
        return out;
    }
    if (total < k) return out;
    std::vector<uint32_t> cur;
    cur.reserve(k);
    compose_rec(total, k, cur, out);
    return out;
}

namespace {

void check_directions(std::span<const FieldVector> dirs) {
    for (size_t i = 1; i < dirs.size(); ++i) {
        if (dirs[i].p() != dirs[0].p() || dirs[i].size() != dirs[0].size()) {
            throw std::invalid_argument("directions must share p and N");
        }
    }
}

RowMatrix term_matrix(uint32_t p, uint32_t N, const FieldVector* x, uint32_t m,
                      std::span<const FieldVector> dirs,
                      std::span<const uint32_t> l) {
    RowMatrix mat(p, N);
    if (m > 0) mat.add_group(*x, m);
    for (size_t i = 0; i < dirs.size(); ++i) mat.add_group(dirs[i], l[i]);
    return mat;
}

void check_monomial(uint32_t n, uint32_t k, uint32_t N,
                    std::span<const uint32_t> monomial) {
    if (monomial.size() + k > n) {
        throw std::invalid_argument("monomial degree must satisfy m <= n - k");
    }
    for (size_t i = 0; i < monomial.size(); ++i) {
        if (monomial[i] >= N) throw std::out_of_range("monomial index");
        if (i > 0 && monomial[i] <= monomial[i - 1]) {
            throw std::invalid_argument("monomial indices must strictly increase");
        }
    }
}

}  // namespace

SymmetricDerivative::SymmetricDerivative(uint32_t n,
                                         std::span<const FieldVector> directions)
    : n_(n), constant_part_(0), term_count_(0) {
    if (directions.empty()) {
        throw std::invalid_argument("needs at least one direction");
    }
    check_directions(directions);
    p_ = directions[0].p();
    N_ = directions[0].size();
    dirs_.assign(directions.begin(), directions.end());
    uint32_t k = uint32_t(dirs_.size());
    PrimeField f(p_);
    if (k > n_) return;  // order beyond the degree: identically zero
    for (uint32_t m = 0; m + k <= n_; ++m) {
        auto comps = compositions(n_ - m, k);
        if (m == 0) {
            for (const auto& l : comps) {
                RowMatrix mat = term_matrix(p_, N_, nullptr, 0, dirs_, l);
                constant_part_ =
                    f.add(constant_part_, eval_path_sum(PathFamily::GroupMonotone, mat));
                ++term_count_;
            }
        } else {
            std::vector<uint32_t> flat;
            for (const auto& l : comps) {
                flat.insert(flat.end(), l.begin(), l.end());
                ++term_count_;
            }
            compositions_.push_back(std::move(flat));
        }
    }
}

uint8_t SymmetricDerivative::eval(const FieldVector& x) const {
    if (x.p() != p_ || x.size() != N_) {
        throw std::invalid_argument("point shape mismatch");
    }
    uint32_t k = uint32_t(dirs_.size());
    if (k > n_) return 0;
    PrimeField f(p_);
    uint8_t acc = constant_part_;
    for (size_t mi = 0; mi < compositions_.size(); ++mi) {
        uint32_t m = uint32_t(mi) + 1;
        const auto& flat = compositions_[mi];
        for (size_t off = 0; off < flat.size(); off += k) {
            std::span<const uint32_t> l(flat.data() + off, k);
            RowMatrix mat = term_matrix(p_, N_, &x, m, dirs_, l);
            acc = f.add(acc, eval_path_sum(PathFamily::GroupMonotone, mat));
        }
    }
    return acc;
}

uint8_t monomial_coefficient(uint32_t n, std::span<const FieldVector> directions,
                             std::span<const uint32_t> monomial) {
    if (directions.empty()) throw std::invalid_argument("needs directions");
    check_directions(directions);
    uint32_t p = directions[0].p(), N = directions[0].size();
    uint32_t k = uint32_t(directions.size());
    uint32_t m = uint32_t(monomial.size());
    check_monomial(n, k, N, monomial);
    PrimeField f(p);
    uint8_t acc = 0;
    for (const auto& l : compositions(n - m, k)) {
        RowMatrix mat(p, N);
        for (uint32_t i = 0; i < k; ++i) mat.add_group(directions[i], l[i]);
        acc = f.add(acc, eval_path_sum(PathFamily::GroupMonotone, mat, monomial));
    }
    return acc;
}

uint8_t monomial_coefficient_factorial(uint32_t n,
                                       std::span<const FieldVector> directions,
                                       std::span<const uint32_t> monomial) {
    if (directions.empty()) throw std::invalid_argument("needs directions");
    check_directions(directions);
    uint32_t p = directions[0].p(), N = directions[0].size();
    uint32_t k = uint32_t(directions.size());
    uint32_t m = uint32_t(monomial.size());
    check_monomial(n, k, N, monomial);
    if (k + m + p <= n + 1) {
        throw std::invalid_argument(
            "factorial form needs k + m + p > n + 1 so block sizes stay below p");
    }
    PrimeField f(p);
    uint8_t acc = 0;
    for (const auto& l : compositions(n - m, k)) {
        RowMatrix mat(p, N);
        uint8_t scale = 1;
        for (uint32_t i = 0; i < k; ++i) {
            mat.add_group(directions[i], l[i]);
            scale = f.mul(scale, f.inv(f.factorial(l[i])));
        }
        acc = f.add(acc,
                    f.mul(scale, eval_path_sum(PathFamily::All, mat, monomial)));
    }
    return acc;
}

}  // namespace ufn
