#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ufn/field.hpp"

namespace ufn {

// Largest table size materialized by default. Roughly 64MB of bytes.
inline constexpr uint64_t kDefaultDenseCap = uint64_t(1) << 26;

// p^N as uint64, throwing on overflow.
uint64_t domain_size(uint32_t p, uint32_t N);

// Sparse polynomial over F_p in N variables, exponents reduced below p.
// Terms are keyed by exponent vectors; coefficients are nonzero.
class MultiIndexPolynomial {
public:
    MultiIndexPolynomial(uint32_t p, uint32_t N);

    uint32_t p() const { return p_; }
    uint32_t vars() const { return N_; }

    // Adds c * prod_j x_j^{e_j}; merges with an existing term.
    void add_term(const std::vector<uint8_t>& exponents, uint8_t coeff);
    const std::map<std::vector<uint8_t>, uint8_t>& terms() const { return terms_; }

    // Total degree: max over terms of sum of exponents; 0 for the zero poly.
    uint32_t degree() const;
    uint8_t eval(const FieldVector& x) const;

    std::string to_json() const;
    static MultiIndexPolynomial from_json(const std::string& text);
    static MultiIndexPolynomial load(const std::string& path);
    void save(const std::string& path) const;

private:
    uint32_t p_, N_;
    std::map<std::vector<uint8_t>, uint8_t> terms_;
};

// f : F_p^N -> F_p, either a dense table in point-index order or a lazy
// evaluator for domains past the dense cap.
class FiniteFunction {
public:
    using Evaluator = std::function<uint8_t(const FieldVector&)>;
    // Fast path used when p = 2 and N <= 64: the argument is the point index.
    using BitEvaluator = std::function<uint8_t(uint64_t)>;

    FiniteFunction() : p_(2), N_(0) {}

    static FiniteFunction dense(uint32_t p, uint32_t N, std::vector<uint8_t> table);
    static FiniteFunction lazy(uint32_t p, uint32_t N, Evaluator eval,
                               BitEvaluator bit_eval = nullptr);

    uint32_t p() const { return p_; }
    uint32_t N() const { return N_; }
    bool is_dense() const { return !table_.empty() || size_ == 0; }
    uint64_t size() const { return size_; }

    uint8_t at_index(uint64_t idx) const;
    uint8_t eval(const FieldVector& x) const;
    const std::vector<uint8_t>& table() const;

    // Forces a dense copy; throws if p^N exceeds the cap.
    FiniteFunction materialized(uint64_t cap = kDefaultDenseCap) const;

private:
    uint32_t p_, N_;
    uint64_t size_ = 0;
    std::vector<uint8_t> table_;
    Evaluator eval_;
    BitEvaluator bit_eval_;
};

// What to build in materialize().
enum class TableMode { Auto, Dense, Lazy };

// Builds a function from a descriptor: "sym:<n>" for the elementary
// symmetric polynomial S_n, "poly:<path>" for a polynomial JSON file,
// "table:<path>" for a UFN1 truth-table file.
FiniteFunction materialize(const std::string& spec, uint32_t p, uint32_t N,
                           TableMode mode = TableMode::Auto,
                           uint64_t cap = kDefaultDenseCap);

FiniteFunction from_polynomial(const MultiIndexPolynomial& poly, uint32_t N,
                               TableMode mode = TableMode::Auto,
                               uint64_t cap = kDefaultDenseCap);

// f_{y_1,...,y_k}(x) = sum over subsets A of {1..k} of
// (-1)^{k-|A|} f(x + sum_{i in A} y_i). Order of directions is immaterial.
FiniteFunction iterated_derivative(const FiniteFunction& f,
                                   std::span<const FieldVector> dirs);

// <f, g> = E_x e(f(x) - g(x)) with e(v) = exp(2 pi i v / p). For p = 2 the
// value is the exact signed agreement count over 2^N.
struct Correlation {
    std::complex<double> value;
    bool exact = false;     // p = 2: numer / 2^denom_log2 is exact
    int64_t numer = 0;
    uint32_t denom_log2 = 0;

    double abs() const { return std::abs(value); }
};

Correlation correlation(const FiniteFunction& f, const FiniteFunction& g,
                        uint64_t cap = kDefaultDenseCap);

// Character coefficients c(alpha) = E_x e(f(x)) e(-<alpha, x>), indexed by
// the point index of alpha. Parseval: sum |c|^2 = 1.
struct Spectrum {
    uint32_t p = 2, N = 0;
    std::vector<std::complex<double>> coef;
};

Spectrum character_spectrum(const FiniteFunction& f);

// In-place unnormalized transform: a[alpha] <- sum_x a[x] e(-<alpha, x>),
// as N rounds of radix-p butterflies. a.size() must be p^N.
void char_transform(std::vector<std::complex<double>>& a, uint32_t p, uint32_t N);

// Integer Walsh coefficients of (-1)^f for p = 2: W(alpha) =
// sum_x (-1)^{f(x) + <alpha,x>}. Exact; c(alpha) = W(alpha) / 2^N.
std::vector<int64_t> walsh_coefficients(const FiniteFunction& f);

// Multilinear coefficient table for p = 2: index is the monomial support
// mask, value is the coefficient in the algebraic normal form.
std::vector<uint8_t> multilinear_coefficients(const FiniteFunction& f);

// Truth-table container format: magic "UFN1", one byte p, four bytes N
// little-endian, then p^N value bytes in point-index order.
void write_table(std::ostream& out, const FiniteFunction& f);
FiniteFunction read_table(std::istream& in, uint64_t cap = kDefaultDenseCap);
void save_table(const std::string& path, const FiniteFunction& f);
FiniteFunction load_table(const std::string& path, uint64_t cap = kDefaultDenseCap);

// e(v) for v in F_p.
std::complex<double> character_value(uint32_t p, uint8_t v);

}  // namespace ufn
