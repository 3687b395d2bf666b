#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "ufn/field.hpp"
#include "ufn/finite_function.hpp"
#include "ufn/path_sums.hpp"
#include "ufn/symmetric.hpp"

using namespace ufn;

namespace {

FieldVector vec(uint32_t p, std::initializer_list<uint8_t> entries) {
    FieldVector v(p, uint32_t(entries.size()));
    uint32_t i = 0;
    for (uint8_t e : entries) v.set(i++, e);
    return v;
}

FieldVector weight_vector(uint32_t p, uint32_t N, uint32_t w) {
    FieldVector v(p, N);
    for (uint32_t i = 0; i < w; ++i) v.set(i, 1);
    return v;
}

// Direct n-subset enumeration; cost C(N, n).
uint8_t subset_sum_oracle(uint32_t n, const FieldVector& x) {
    PrimeField field(x.p());
    uint32_t N = x.size();
    if (n == 0) return 1;
    if (n > N) return 0;
    std::vector<uint32_t> idx(n);
    for (uint32_t i = 0; i < n; ++i) idx[i] = i;
    uint8_t total = 0;
    while (true) {
        uint8_t prod = 1;
        for (uint32_t i : idx) prod = field.mul(prod, x.get(i));
        total = field.add(total, prod);
        int32_t pos = int32_t(n) - 1;
        while (pos >= 0 && idx[pos] == N - n + uint32_t(pos)) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (uint32_t j = uint32_t(pos) + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    return total;
}

}  // namespace

TEST_CASE("elementary symmetric values at small points") {
    CHECK(eval_symmetric(2, vec(2, {1, 1, 1})) == 1);  // C(3,2) = 3
    CHECK(eval_symmetric(2, vec(3, {1, 2})) == 2);     // x1 x2
    CHECK(eval_symmetric(4, weight_vector(2, 8, 6)) == 1);  // C(6,4) = 15
    CHECK(eval_symmetric(0, vec(3, {2, 2, 2})) == 1);
    CHECK(eval_symmetric(5, vec(2, {1, 1, 1, 1})) == 0);  // n > N
    CHECK(eval_symmetric(1, vec(5, {3, 4, 2})) == 4);     // coordinate sum
}

TEST_CASE("generating-function sweep matches subset enumeration") {
    RandomSource rng(60);
    for (int t = 0; t < 300; ++t) {
        uint32_t p = (t % 3 == 0) ? 2 : ((t % 3 == 1) ? 3 : 5);
        uint32_t N = 3 + uint32_t(rng.below(8));
        uint32_t n = uint32_t(rng.below(std::min(N, 5u) + 1));
        FieldVector x = rng.field_vector(p, N);
        CHECK(eval_symmetric(n, x) == subset_sum_oracle(n, x));
    }
}

TEST_CASE("cube values follow the binomial rule") {
    CHECK(cube_value_lucas(4, 2, 5) == 1);   // C(5,4) = 5
    CHECK(cube_value_lucas(4, 2, 3) == 0);   // C(3,4) = 0
    CHECK(cube_value_lucas(9, 3, 13) == 1);  // C(13,9) = 715

    for (uint32_t p : {2u, 3u}) {
        for (uint32_t n : {1u, 2u, 4u, 9u}) {
            for (uint32_t N : {6u, 14u}) {
                for (uint32_t w = 0; w <= N; ++w) {
                    CHECK(cube_value_lucas(n, p, w) ==
                          eval_symmetric(n, weight_vector(p, N, w)));
                    CHECK(cube_value_lucas(n, p, w) == lucas_binomial(w, n, p));
                }
            }
        }
    }
}

TEST_CASE("prime-power indices read a single base-p digit of the weight") {
    // n = p^e: C(w, p^e) mod p equals digit e of w.
    for (uint64_t w = 0; w <= 40; ++w) {
        CHECK(cube_value_lucas(4, 2, w) == ((w >> 2) & 1));
        auto digits = base_p_digits(w, 3, 4);
        CHECK(cube_value_lucas(9, 3, w) == digits[2]);
    }
    // n below p: only the lowest digit matters.
    for (uint64_t w = 0; w <= 100; ++w) {
        CHECK(cube_value_lucas(4, 5, w) == cube_value_lucas(4, 5, w % 5));
    }
    // Contrast: C(w,4) mod 5 is not a function of digit 1.
    CHECK(cube_value_lucas(4, 5, 4) != cube_value_lucas(4, 5, 5));
}

TEST_CASE("derivative expansion matches the finite difference") {
    RandomSource rng(61);
    for (int t = 0; t < 120; ++t) {
        uint32_t p = (t % 3 == 0) ? 2 : ((t % 3 == 1) ? 3 : 5);
        uint32_t N = 3 + uint32_t(rng.below(4));
        uint32_t n = 1 + uint32_t(rng.below(5));
        uint32_t k = 1 + uint32_t(rng.below(3));
        std::vector<FieldVector> dirs;
        for (uint32_t i = 0; i < k; ++i) dirs.push_back(rng.field_vector(p, N));

        SymmetricDerivative deriv(n, dirs);
        FiniteFunction sym = materialize("sym:" + std::to_string(n), p, N);
        FiniteFunction diff = iterated_derivative(sym, dirs);
        for (int s = 0; s < 3; ++s) {
            FieldVector x = rng.field_vector(p, N);
            CHECK(deriv.eval(x) == diff.eval(x));
        }
    }
}

TEST_CASE("derivative order exceeding the index kills the expansion") {
    RandomSource rng(62);
    std::vector<FieldVector> dirs;
    for (uint32_t i = 0; i < 5; ++i) dirs.push_back(rng.field_vector(2, 6));
    SymmetricDerivative deriv(4, dirs);
    CHECK(deriv.term_count() == 0);
    for (int s = 0; s < 10; ++s) {
        CHECK(deriv.eval(rng.field_vector(2, 6)) == 0);
    }
}

TEST_CASE("full-order derivative of the pair polynomial is one constant term") {
    FieldVector y1 = vec(2, {1, 1, 0}), z1 = vec(2, {1, 0, 1});
    std::vector<FieldVector> dirs = {y1, z1};
    SymmetricDerivative deriv(2, dirs);
    CHECK(deriv.term_count() == 1);
    RowMatrix m(2, 3);
    m.add_group(y1, 1).add_group(z1, 1);
    uint8_t expect = eval_path_sum(PathFamily::All, m);
    RandomSource rng(63);
    for (int s = 0; s < 8; ++s) {
        CHECK(deriv.eval(rng.field_vector(2, 3)) == expect);
    }
}

TEST_CASE("derivative value is independent of direction order") {
    RandomSource rng(64);
    for (int t = 0; t < 40; ++t) {
        uint32_t p = (t % 2 == 0) ? 2 : 3;
        uint32_t N = 5;
        uint32_t n = 2 + uint32_t(rng.below(4));
        std::vector<FieldVector> dirs;
        for (uint32_t i = 0; i < 3; ++i) dirs.push_back(rng.field_vector(p, N));
        std::vector<FieldVector> swapped = {dirs[2], dirs[0], dirs[1]};
        SymmetricDerivative a(n, dirs), b(n, swapped);
        FieldVector x = rng.field_vector(p, N);
        CHECK(a.eval(x) == b.eval(x));
    }
}

TEST_CASE("first-derivative linear coefficients match the closed form") {
    // (S_2)_y has coefficient sum(y) - y_j on x_j.
    RandomSource rng(65);
    for (int t = 0; t < 60; ++t) {
        uint32_t p = (t % 3 == 0) ? 2 : ((t % 3 == 1) ? 3 : 5);
        PrimeField field(p);
        uint32_t N = 6;
        FieldVector y = rng.field_vector(p, N);
        std::vector<FieldVector> dirs = {y};
        for (uint32_t j = 0; j < N; ++j) {
            std::vector<uint32_t> monomial = {j};
            uint8_t expect = field.sub(y.coordinate_sum(), y.get(j));
            CHECK(monomial_coefficient(2, dirs, monomial) == expect);
        }
    }
}

TEST_CASE("monomial coefficients match dense extraction") {
    // The derivative stays multilinear in x, so iterated differencing along
    // basis vectors at 0 isolates each coefficient over any prime.
    RandomSource rng(66);
    for (int t = 0; t < 80; ++t) {
        uint32_t p = (t % 3 == 0) ? 2 : ((t % 3 == 1) ? 3 : 5);
        uint32_t N = 4 + uint32_t(rng.below(3));
        uint32_t n = 2 + uint32_t(rng.below(4));
        uint32_t k = 1 + uint32_t(rng.below(2));
        if (k >= n) k = n - 1;
        uint32_t m = 1 + uint32_t(rng.below(2));
        if (k + m > n) m = n - k;

        std::vector<FieldVector> dirs;
        for (uint32_t i = 0; i < k; ++i) dirs.push_back(rng.field_vector(p, N));
        std::vector<uint32_t> monomial;
        while (monomial.size() < m) {
            uint32_t j = uint32_t(rng.below(N));
            if (std::find(monomial.begin(), monomial.end(), j) ==
                monomial.end()) {
                monomial.push_back(j);
            }
        }
        std::sort(monomial.begin(), monomial.end());

        FiniteFunction sym = materialize("sym:" + std::to_string(n), p, N);
        FiniteFunction g = iterated_derivative(sym, dirs).materialized();
        std::vector<FieldVector> basis;
        for (uint32_t j : monomial) {
            FieldVector e(p, N);
            e.set(j, 1);
            basis.push_back(e);
        }
        FiniteFunction extracted = iterated_derivative(g, basis);
        uint8_t expect = extracted.eval(FieldVector(p, N));
        CHECK(monomial_coefficient(n, dirs, monomial) == expect);
    }
}

TEST_CASE("monomials past the derivative degree are rejected") {
    RandomSource rng(67);
    uint32_t p = 2, N = 6, n = 3, k = 2;
    std::vector<FieldVector> dirs;
    for (uint32_t i = 0; i < k; ++i) dirs.push_back(rng.field_vector(p, N));
    std::vector<uint32_t> monomial = {0, 2};  // |J| = 2 > n - k = 1
    CHECK_THROWS(monomial_coefficient(n, dirs, monomial));
}

TEST_CASE("factorial form agrees when compositions stay below p") {
    RandomSource rng(68);
    struct Case {
        uint32_t p, n, k, m;
    };
    // Each satisfies k + m + p > n + 1.
    std::vector<Case> cases = {{5, 4, 2, 1}, {3, 3, 2, 0}, {5, 5, 3, 1},
                               {3, 4, 3, 0}, {2, 2, 1, 1}, {5, 6, 4, 1}};
    for (const auto& c : cases) {
        for (int t = 0; t < 20; ++t) {
            uint32_t N = 6;
            std::vector<FieldVector> dirs;
            for (uint32_t i = 0; i < c.k; ++i) {
                dirs.push_back(rng.field_vector(c.p, N));
            }
            std::vector<uint32_t> monomial;
            while (monomial.size() < c.m) {
                uint32_t j = uint32_t(rng.below(N));
                if (std::find(monomial.begin(), monomial.end(), j) ==
                    monomial.end()) {
                    monomial.push_back(j);
                }
            }
            std::sort(monomial.begin(), monomial.end());
            CHECK(monomial_coefficient(c.n, dirs, monomial) ==
                  monomial_coefficient_factorial(c.n, dirs, monomial));
        }
    }
}

TEST_CASE("composition enumeration order and edge cases") {
    auto c42 = compositions(4, 2);
    REQUIRE(c42.size() == 3);
    CHECK(c42[0] == std::vector<uint32_t>{1, 3});
    CHECK(c42[1] == std::vector<uint32_t>{2, 2});
    CHECK(c42[2] == std::vector<uint32_t>{3, 1});

    auto c33 = compositions(3, 3);
    REQUIRE(c33.size() == 1);
    CHECK(c33[0] == std::vector<uint32_t>{1, 1, 1});

    CHECK(compositions(2, 3).empty());
    auto c00 = compositions(0, 0);
    REQUIRE(c00.size() == 1);
    CHECK(c00[0].empty());

    // C(total - 1, k - 1) compositions in general.
    CHECK(compositions(6, 3).size() == 10);
}
