#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "ufn/field.hpp"
#include "ufn/finite_function.hpp"
#include "ufn/gowers.hpp"

using namespace ufn;

namespace {

FieldVector vec(uint32_t p, std::initializer_list<uint8_t> entries) {
    FieldVector v(p, uint32_t(entries.size()));
    uint32_t i = 0;
    for (uint8_t e : entries) v.set(i++, e);
    return v;
}

FiniteFunction monomial_function(uint32_t p, uint32_t N, uint32_t d) {
    MultiIndexPolynomial poly(p, N);
    std::vector<uint8_t> expo(N, 0);
    for (uint32_t i = 0; i < d; ++i) expo[i] = 1;
    poly.add_term(expo, 1);
    return from_polynomial(poly, N);
}

FiniteFunction random_function(RandomSource& rng, uint32_t p, uint32_t N) {
    std::vector<uint8_t> table(domain_size(p, N));
    for (auto& v : table) v = rng.field_element(p);
    return FiniteFunction::dense(p, N, table);
}

// (k+1)-fold average of e(iterated difference), straight from the definition.
double raw_power_oracle(const FiniteFunction& f, uint32_t k) {
    uint32_t p = f.p(), N = f.N();
    uint64_t size = f.size();
    PrimeField field(p);
    std::vector<std::vector<uint64_t>> add(size, std::vector<uint64_t>(size));
    for (uint64_t i = 0; i < size; ++i) {
        FieldVector a = FieldVector::from_index(p, N, i);
        for (uint64_t j = 0; j < size; ++j) {
            FieldVector b = FieldVector::from_index(p, N, j);
            add[i][j] = a.add(b).to_index();
        }
    }
    uint8_t minus = field.reduce(-1);
    std::vector<uint64_t> tuple(k + 1, 0);
    std::complex<double> acc{0.0, 0.0};
    while (true) {
        uint8_t phase = 0;
        for (uint32_t mask = 0; mask < (1u << k); ++mask) {
            uint64_t point = tuple[0];
            for (uint32_t i = 0; i < k; ++i) {
                if (mask & (1u << i)) point = add[point][tuple[i + 1]];
            }
            uint32_t sign_odd = (k - uint32_t(std::popcount(mask))) & 1;
            uint8_t coeff = sign_odd ? minus : 1;
            phase = field.add(phase, field.mul(coeff, f.at_index(point)));
        }
        acc += character_value(p, phase);
        uint32_t pos = 0;
        while (pos <= k && ++tuple[pos] == size) tuple[pos++] = 0;
        if (pos > k) break;
    }
    double denom = 1.0;
    for (uint32_t i = 0; i <= k; ++i) denom *= double(size);
    return acc.real() / denom;
}

}  // namespace

TEST_CASE("small norms against the defining average") {
    RandomSource rng(80);
    for (int t = 0; t < 6; ++t) {
        FiniteFunction f = (t < 3) ? random_function(rng, 2, 3)
                                   : monomial_function(2, 3, uint32_t(t - 2));
        for (uint32_t k = 1; k <= 4; ++k) {
            GowersEstimate est = gowers_norm_exact(f, k);
            CHECK(est.exact);
            double direct = raw_power_oracle(f, k);
            CHECK(est.raw_power == doctest::Approx(direct).epsilon(1e-9));
            double rational =
                double((long double)(uint64_t(est.raw_numer)) /
                       std::exp2((long double)est.raw_denom_log2));
            CHECK(est.raw_power == doctest::Approx(rational).epsilon(1e-12));
        }
    }
    for (int t = 0; t < 3; ++t) {
        FiniteFunction f = random_function(rng, 3, 2);
        for (uint32_t k = 1; k <= 3; ++k) {
            GowersEstimate est = gowers_norm_exact(f, k);
            CHECK(est.raw_power ==
                  doctest::Approx(raw_power_oracle(f, k)).epsilon(1e-9));
        }
    }
}

TEST_CASE("product of two coordinates has order-2 norm 2^{-1/2}") {
    FiniteFunction prod = monomial_function(2, 2, 2);
    GowersEstimate est = gowers_norm_exact(prod, 2);
    CHECK(est.exact);
    CHECK(est.raw_power == doctest::Approx(0.25));
    CHECK(est.value == doctest::Approx(std::pow(2.0, -0.5)));
    CHECK(est.raw_denom_log2 == 8);
    CHECK(uint64_t(est.raw_numer) == 64);
}

TEST_CASE("norm values grow with the order") {
    RandomSource rng(81);
    for (int t = 0; t < 8; ++t) {
        uint32_t p = (t % 2 == 0) ? 2 : 3;
        uint32_t N = (p == 2) ? 6 : 3;
        FiniteFunction f = random_function(rng, p, N);
        double u2 = gowers_norm_exact(f, 2).value;
        double u3 = gowers_norm_exact(f, 3).value;
        double u4 = gowers_norm_exact(f, 4).value;
        CHECK(u2 <= u3 + 1e-9);
        CHECK(u3 <= u4 + 1e-9);
    }
}

TEST_CASE("degree d phases have unit norm exactly at order d+1") {
    for (uint32_t d = 1; d <= 3; ++d) {
        FiniteFunction f = monomial_function(2, 5, d);
        GowersEstimate above = gowers_norm_exact(f, d + 1);
        CHECK(above.value == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(above.raw_numer ==
              (unsigned __int128)(1) << above.raw_denom_log2);
        if (d >= 2) {
            GowersEstimate at = gowers_norm_exact(f, d);
            CHECK(at.value < 1.0 - 1e-6);
        }
    }

    // Degree-4 symmetric polynomial: order-5 norm is exactly 1.
    FiniteFunction s4 = materialize("sym:4", 2, 6);
    GowersEstimate u5 = gowers_norm_exact(s4, 5);
    CHECK(u5.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u5.raw_numer == (unsigned __int128)(1) << u5.raw_denom_log2);
    GowersEstimate u4 = gowers_norm_exact(s4, 4);
    CHECK(u4.value < 1.0 - 1e-6);

    // p = 3 quadratic: unit at order 3, below 1 at order 2.
    FiniteFunction s23 = materialize("sym:2", 3, 3);
    CHECK(gowers_norm_exact(s23, 3).value == doctest::Approx(1.0));
    CHECK(gowers_norm_exact(s23, 2).value < 1.0 - 1e-6);
}

TEST_CASE("balanced linear phases vanish at order 1") {
    FiniteFunction lin = monomial_function(2, 4, 1);
    GowersEstimate u1 = gowers_norm_exact(lin, 1);
    CHECK(u1.value == doctest::Approx(0.0));
    CHECK(uint64_t(u1.raw_numer) == 0);
    CHECK(gowers_norm_exact(lin, 2).value == doctest::Approx(1.0));
}

TEST_CASE("threaded exact sweep matches the serial one") {
    FiniteFunction s3 = materialize("sym:3", 2, 6);
    GowersEstimate serial = gowers_norm_exact(s3, 4, 1);
    GowersEstimate wide = gowers_norm_exact(s3, 4, 4);
    CHECK(serial.raw_numer == wide.raw_numer);
    CHECK(serial.raw_denom_log2 == wide.raw_denom_log2);

    FiniteFunction s23 = materialize("sym:2", 3, 3);
    CHECK(gowers_norm_exact(s23, 3, 1).raw_power ==
          doctest::Approx(gowers_norm_exact(s23, 3, 4).raw_power)
              .epsilon(1e-12));
}

TEST_CASE("sampled estimate brackets the exact value") {
    FiniteFunction s4 = materialize("sym:4", 2, 4);
    GowersEstimate exact = gowers_norm_exact(s4, 3);
    GowersEstimate mc = gowers_norm_mc(s4, 3, 100000, 7);
    CHECK_FALSE(mc.exact);
    CHECK(mc.samples == 100000);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.raw_power - exact.raw_power) <= 4.0 * mc.std_error);

    FiniteFunction s23 = materialize("sym:2", 3, 4);
    GowersEstimate exact3 = gowers_norm_exact(s23, 3);
    GowersEstimate mc3 = gowers_norm_mc(s23, 3, 200000, 9);
    CHECK(std::abs(mc3.raw_power - exact3.raw_power) <=
          4.0 * (mc3.std_error + 1e-12));
}

TEST_CASE("sampling the zero function gives exactly one") {
    FiniteFunction zero = materialize("sym:5", 2, 4);
    GowersEstimate mc = gowers_norm_mc(zero, 3, 5000, 1);
    CHECK(mc.raw_power == 1.0);
    CHECK(mc.std_error == 0.0);
    CHECK(mc.value == 1.0);
}

TEST_CASE("sampled estimate is independent of thread count") {
    // sym:4 has U^4 norm strictly below one, so samples actually vary.
    FiniteFunction s4 = materialize("sym:4", 2, 8);
    GowersEstimate one = gowers_norm_mc(s4, 4, 50000, 11, 1);
    GowersEstimate four = gowers_norm_mc(s4, 4, 50000, 11, 4);
    CHECK(one.raw_power == four.raw_power);
    CHECK(one.std_error == four.std_error);

    GowersEstimate other = gowers_norm_mc(s4, 4, 50000, 12, 2);
    CHECK(one.raw_power != other.raw_power);
}

TEST_CASE("order and budget guards") {
    FiniteFunction f = materialize("sym:2", 2, 6);
    CHECK_THROWS(gowers_norm_exact(f, 0));
    CHECK_THROWS(gowers_norm_mc(f, 0, 100, 1));
    CHECK_THROWS(gowers_norm_mc(f, 17, 100, 1));
    CHECK_THROWS(gowers_norm_mc(f, 2, 0, 1));
    CHECK_THROWS(gowers_norm_exact(f, 4, 0, 1000));  // tiny budget

    FiniteFunction lazy = materialize("sym:3", 2, 30);
    CHECK_THROWS(gowers_norm_exact(lazy, 2));
}

TEST_CASE("membership sets from power constraints") {
    ConstraintSet cs(2, 2);
    cs.add(1, vec(2, {1, 1}));
    CHECK(cs.contains(vec(2, {0, 0})));
    CHECK(cs.contains(vec(2, {1, 1})));
    CHECK_FALSE(cs.contains(vec(2, {1, 0})));

    ConstraintSet bad(2, 2);
    CHECK_THROWS(bad.add(0, vec(2, {1, 1})));
    CHECK_THROWS(bad.add(2, vec(2, {1, 1})));
    CHECK_THROWS(bad.add(1, vec(2, {1, 1}), 2));
    CHECK_THROWS(bad.add(1, vec(3, {1, 1}), 0));

    // Square constraints over F_3, checked against direct evaluation.
    RandomSource rng(82);
    ConstraintSet cs3(3, 4);
    FieldVector y1 = rng.field_vector(3, 4), y2 = rng.field_vector(3, 4);
    cs3.add(2, y1, 1).add(1, y2, 0);
    PrimeField field(3);
    for (int t = 0; t < 100; ++t) {
        FieldVector x = rng.field_vector(3, 4);
        bool expect = power_vector(x, 2).dot(y1) == 1 && x.dot(y2) == 0;
        CHECK(cs3.contains(x) == expect);
    }

    // Weight flag: membership requires N = 0 mod p.
    ConstraintSet odd(2, 3);
    odd.require_weight_constraint();
    CHECK_FALSE(odd.contains(vec(2, {0, 0, 0})));
    ConstraintSet even(2, 4);
    even.require_weight_constraint();
    CHECK(even.contains(FieldVector(2, 4)));
}

TEST_CASE("fixed-set density bound on a constant set") {
    MultiIndexPolynomial lin(2, 2);
    lin.add_term({1, 0}, 1);
    lin.add_term({0, 1}, 1);
    FiniteFunction f = from_polynomial(lin, 2);
    ConstraintSet cs(2, 2);
    cs.add(1, vec(2, {1, 1}));
    FixedSetBound res = fixed_set_bound_check(f, cs);
    CHECK(res.set_size == 2);
    CHECK(res.density == doctest::Approx(0.5));
    CHECK(res.bound == doctest::Approx(0.25));
    CHECK(res.norm == doctest::Approx(1.0));
    CHECK(res.holds);

    // The weight flag intersects cleanly when N = 0 mod p.
    MultiIndexPolynomial lin4(2, 4);
    lin4.add_term({1, 0, 0, 0}, 1);
    lin4.add_term({0, 1, 0, 0}, 1);
    FiniteFunction f4 = from_polynomial(lin4, 4);
    ConstraintSet cs4(2, 4);
    cs4.add(1, vec(2, {1, 1, 0, 0}));
    cs4.require_weight_constraint();
    FixedSetBound res4 = fixed_set_bound_check(f4, cs4);
    CHECK(res4.set_size == 8);
    CHECK(res4.holds);

    // Not constant on the set, or an empty set, is a usage error.
    MultiIndexPolynomial first(2, 2);
    first.add_term({1, 0}, 1);
    FiniteFunction g = from_polynomial(first, 2);
    ConstraintSet loose(2, 2);
    loose.add(1, vec(2, {0, 1}));
    CHECK_THROWS(fixed_set_bound_check(g, loose));

    ConstraintSet empty(2, 3);
    empty.require_weight_constraint();
    CHECK_THROWS(fixed_set_bound_check(from_polynomial(MultiIndexPolynomial(2, 3), 3), empty));
}

TEST_CASE("power sum distribution approaches uniform for one row") {
    PowerProductDistribution small =
        power_product_distribution(2, 1, 20, 200000, 5);
    CHECK(small.K == 1);
    CHECK(small.samples == 200000);
    CHECK(small.l1_distance < 0.02);

    PowerProductDistribution rerun =
        power_product_distribution(2, 1, 20, 200000, 5);
    CHECK(rerun.l1_distance == small.l1_distance);

    PowerProductDistribution two =
        power_product_distribution(2, 2, 16, 50000, 6, 2);
    CHECK(two.K == 3);
    CHECK(two.distinct_cells <= 8);

    PowerProductDistribution three =
        power_product_distribution(3, 1, 9, 20000, 7);
    CHECK(three.K == 2);

    CHECK_THROWS(power_product_distribution(2, 13, 8, 100, 1));
    CHECK_THROWS(power_product_distribution(3, 8, 8, 100, 1));
    CHECK_THROWS(power_product_distribution(2, 0, 8, 100, 1));
}

TEST_CASE("vanishing check accepts aligned triples and reports caps") {
    CHECK_THROWS(vanishing_lemma_check(2, 7, 1, 1));
    CHECK_THROWS(vanishing_lemma_check(5, 10, 1, 1));

    VanishingCheck res = vanishing_lemma_check(2, 8, 50, 3);
    CHECK(res.trials_requested == 50);
    CHECK(res.trials_done == 50);
    CHECK(res.failures == 0);
    CHECK_FALSE(res.cap_exhausted);
    CHECK(res.attempts >= res.trials_done);

    // More trials requested than the attempt cap allows: exhaustion is
    // certain because each trial consumes at least one attempt.
    VanishingCheck capped = vanishing_lemma_check(3, 6, 1000000, 4, 500);
    CHECK(capped.cap_exhausted);
    CHECK(capped.attempts == 500);
    CHECK(capped.trials_done < capped.trials_requested);
    CHECK(capped.failures == 0);
}
