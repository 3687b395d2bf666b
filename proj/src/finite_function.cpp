#include "ufn/finite_function.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "ufn/bits.hpp"
#include "ufn/symmetric.hpp"

namespace ufn {

using ordered_json = nlohmann::ordered_json;

uint64_t domain_size(uint32_t p, uint32_t N) {
    uint64_t size = 1;
    for (uint32_t i = 0; i < N; ++i) {
        if (size > std::numeric_limits<uint64_t>::max() / p) {
            throw std::invalid_argument("p^N does not fit in 64 bits");
        }
        size *= p;
    }
    return size;
}

std::complex<double> character_value(uint32_t p, uint8_t v) {
    if (p == 2) return {v & 1 ? -1.0 : 1.0, 0.0};
    double angle = 2.0 * std::numbers::pi * double(v % p) / double(p);
    return {std::cos(angle), std::sin(angle)};
}

// ---- MultiIndexPolynomial ----

MultiIndexPolynomial::MultiIndexPolynomial(uint32_t p, uint32_t N)
    : p_(p), N_(N) {
    if (!is_supported_prime(p)) throw std::invalid_argument("unsupported p");
}

void MultiIndexPolynomial::add_term(const std::vector<uint8_t>& exponents,
                                    uint8_t coeff) {
    if (exponents.size() != N_) {
        throw std::invalid_argument("exponent vector length must equal N");
    }
    for (uint8_t e : exponents) {
        if (e >= p_) throw std::invalid_argument("exponents must be below p");
    }
    if (coeff >= p_) throw std::invalid_argument("coefficient not reduced mod p");
    if (coeff == 0) return;
    auto it = terms_.find(exponents);
    if (it == terms_.end()) {
        terms_.emplace(exponents, coeff);
    } else {
        uint8_t merged = uint8_t((it->second + coeff) % p_);
        if (merged) it->second = merged; else terms_.erase(it);
    }
}

uint32_t MultiIndexPolynomial::degree() const {
    uint32_t deg = 0;
    for (const auto& [e, c] : terms_) {
        uint32_t d = 0;
        for (uint8_t v : e) d += v;
        deg = std::max(deg, d);
    }
    return deg;
}

uint8_t MultiIndexPolynomial::eval(const FieldVector& x) const {
    if (x.p() != p_ || x.size() != N_) {
        throw std::invalid_argument("point shape mismatch");
    }
    PrimeField f(p_);
    uint8_t acc = 0;
    for (const auto& [e, c] : terms_) {
        uint8_t prod = c;
        for (uint32_t j = 0; j < N_ && prod; ++j) {
            if (e[j]) prod = f.mul(prod, f.pow(x.get(j), e[j]));
        }
        acc = f.add(acc, prod);
    }
    return acc;
}

std::string MultiIndexPolynomial::to_json() const {
    ordered_json doc;
    doc["p"] = p_;
    doc["N"] = N_;
    ordered_json terms = ordered_json::array();
    for (const auto& [e, c] : terms_) {
        ordered_json vars = ordered_json::array();
        for (uint32_t j = 0; j < N_; ++j) {
            for (uint8_t r = 0; r < e[j]; ++r) vars.push_back(j + 1);
        }
        terms.push_back({{"vars", vars}, {"coeff", c}});
    }
    doc["terms"] = terms;
    return doc.dump();
}

MultiIndexPolynomial MultiIndexPolynomial::from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("polynomial JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("p") || !doc.contains("N") ||
        !doc.contains("terms") || !doc["terms"].is_array()) {
        throw std::invalid_argument("polynomial JSON: need p, N, terms");
    }
    uint32_t p = doc["p"].get<uint32_t>();
    uint32_t N = doc["N"].get<uint32_t>();
    MultiIndexPolynomial poly(p, N);
    for (const auto& t : doc["terms"]) {
        if (!t.is_object() || !t.contains("vars") || !t.contains("coeff")) {
            throw std::invalid_argument("polynomial JSON: bad term");
        }
        std::vector<uint8_t> e(N, 0);
        int64_t prev = 0;
        for (const auto& v : t["vars"]) {
            int64_t idx = v.get<int64_t>();
            if (idx < 1 || idx > int64_t(N)) {
                throw std::invalid_argument("polynomial JSON: variable out of range");
            }
            if (idx < prev) {
                throw std::invalid_argument("polynomial JSON: vars must be sorted");
            }
            prev = idx;
            if (++e[idx - 1] >= p) {
                throw std::invalid_argument("polynomial JSON: exponent reached p");
            }
        }
        int64_t c = t["coeff"].get<int64_t>();
        if (c < 1 || c >= int64_t(p)) {
            throw std::invalid_argument("polynomial JSON: coeff must be in [1, p)");
        }
        poly.add_term(e, uint8_t(c));
    }
    return poly;
}

MultiIndexPolynomial MultiIndexPolynomial::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

void MultiIndexPolynomial::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << to_json() << "\n";
}

// ---- FiniteFunction ----

FiniteFunction FiniteFunction::dense(uint32_t p, uint32_t N,
                                     std::vector<uint8_t> table) {
    if (!is_supported_prime(p)) throw std::invalid_argument("unsupported p");
    uint64_t size = domain_size(p, N);
    if (table.size() != size) {
        throw std::invalid_argument("table size must be p^N");
    }
    for (uint8_t v : table) {
        if (v >= p) throw std::invalid_argument("table entry not reduced mod p");
    }
    FiniteFunction f;
    f.p_ = p;
    f.N_ = N;
    f.size_ = size;
    f.table_ = std::move(table);
    return f;
}

FiniteFunction FiniteFunction::lazy(uint32_t p, uint32_t N, Evaluator eval,
                                    BitEvaluator bit_eval) {
    if (!is_supported_prime(p)) throw std::invalid_argument("unsupported p");
    if (!eval) throw std::invalid_argument("lazy function needs an evaluator");
    FiniteFunction f;
    f.p_ = p;
    f.N_ = N;
    f.size_ = domain_size(p, N);
    f.eval_ = std::move(eval);
    if (p == 2 && N <= 64) f.bit_eval_ = std::move(bit_eval);
    return f;
}

uint8_t FiniteFunction::at_index(uint64_t idx) const {
    if (idx >= size_) throw std::out_of_range("point index");
    if (!table_.empty()) return table_[idx];
    if (bit_eval_) return bit_eval_(idx);
    return eval_(FieldVector::from_index(p_, N_, idx));
}

uint8_t FiniteFunction::eval(const FieldVector& x) const {
    if (x.p() != p_ || x.size() != N_) {
        throw std::invalid_argument("point shape mismatch");
    }
    if (!table_.empty()) return table_[x.to_index()];
    if (bit_eval_) return bit_eval_(x.word());
    return eval_(x);
}

const std::vector<uint8_t>& FiniteFunction::table() const {
    if (table_.empty() && size_ != 0) {
        throw std::logic_error("function is not dense");
    }
    return table_;
}

FiniteFunction FiniteFunction::materialized(uint64_t cap) const {
    if (is_dense()) return *this;
    if (size_ > cap) {
        throw std::invalid_argument("domain exceeds the dense cap");
    }
    std::vector<uint8_t> table(size_);
    if (bit_eval_) {
        for (uint64_t i = 0; i < size_; ++i) table[i] = bit_eval_(i);
    } else {
        for (uint64_t i = 0; i < size_; ++i) {
            table[i] = eval_(FieldVector::from_index(p_, N_, i));
        }
    }
    return dense(p_, N_, std::move(table));
}

// ---- materialize ----

namespace {

FiniteFunction make_symmetric_function(uint32_t n, uint32_t p, uint32_t N,
                                       TableMode mode, uint64_t cap) {
    uint64_t size = domain_size(p, N);
    bool dense = mode == TableMode::Dense ||
                 (mode == TableMode::Auto && size <= cap);
    if (mode == TableMode::Dense && size > cap) {
        throw std::invalid_argument("dense table would exceed the cap");
    }
    if (p == 2) {
        // On F_2^N every point is a 0/1 vector, so the value only depends on
        // the weight: S_n(x) = C(|x|, n) mod 2.
        std::vector<uint8_t> by_weight(N + 1);
        for (uint32_t w = 0; w <= N; ++w) by_weight[w] = lucas_binomial(w, n, 2);
        if (dense) {
            std::vector<uint8_t> table(size);
            for (uint64_t i = 0; i < size; ++i) {
                table[i] = by_weight[std::popcount(i)];
            }
            return FiniteFunction::dense(p, N, std::move(table));
        }
        auto eval = [n](const FieldVector& x) { return eval_symmetric(n, x); };
        if (N <= 64) {
            auto bit_eval = [by_weight](uint64_t idx) {
                return by_weight[std::popcount(idx)];
            };
            return FiniteFunction::lazy(p, N, eval, bit_eval);
        }
        return FiniteFunction::lazy(p, N, eval);
    }
    if (dense) {
        std::vector<uint8_t> table(size);
        for (uint64_t i = 0; i < size; ++i) {
            table[i] = eval_symmetric(n, FieldVector::from_index(p, N, i));
        }
        return FiniteFunction::dense(p, N, std::move(table));
    }
    auto eval = [n](const FieldVector& x) { return eval_symmetric(n, x); };
    return FiniteFunction::lazy(p, N, eval);
}

}  // namespace

FiniteFunction from_polynomial(const MultiIndexPolynomial& poly, uint32_t N,
                               TableMode mode, uint64_t cap) {
    if (poly.vars() != N) throw std::invalid_argument("polynomial variable count");
    uint32_t p = poly.p();
    uint64_t size = domain_size(p, N);
    bool dense = mode == TableMode::Dense ||
                 (mode == TableMode::Auto && size <= cap);
    if (mode == TableMode::Dense && size > cap) {
        throw std::invalid_argument("dense table would exceed the cap");
    }
    if (!dense) {
        auto eval = [poly](const FieldVector& x) { return poly.eval(x); };
        return FiniteFunction::lazy(p, N, eval);
    }
    if (p == 2) {
        // Coefficient table -> value table via the multilinear transform.
        std::vector<uint64_t> w((size + 63) / 64, 0);
        for (const auto& [e, c] : poly.terms()) {
            uint64_t mask = 0;
            for (uint32_t j = 0; j < N; ++j) {
                if (e[j]) mask |= uint64_t(1) << j;
            }
            if (c & 1) w[mask / 64] ^= uint64_t(1) << (mask % 64);
        }
        anf_transform(w, N);
        std::vector<uint8_t> table(size);
        for (uint64_t i = 0; i < size; ++i) {
            table[i] = uint8_t((w[i / 64] >> (i % 64)) & 1);
        }
        return FiniteFunction::dense(p, N, std::move(table));
    }
    std::vector<uint8_t> table(size);
    for (uint64_t i = 0; i < size; ++i) {
        table[i] = poly.eval(FieldVector::from_index(p, N, i));
    }
    return FiniteFunction::dense(p, N, std::move(table));
}

FiniteFunction materialize(const std::string& spec, uint32_t p, uint32_t N,
                           TableMode mode, uint64_t cap) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw std::invalid_argument("function spec must look like kind:arg");
    }
    std::string kind = spec.substr(0, colon);
    std::string arg = spec.substr(colon + 1);
    if (kind == "sym") {
        size_t used = 0;
        unsigned long n = 0;
        try {
            n = std::stoul(arg, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("sym: needs a numeric degree");
        }
        if (used != arg.size() || n > 1000) {
            throw std::invalid_argument("sym: needs a numeric degree");
        }
        return make_symmetric_function(uint32_t(n), p, N, mode, cap);
    }
    if (kind == "poly") {
        MultiIndexPolynomial poly = MultiIndexPolynomial::load(arg);
        if (poly.p() != p || poly.vars() != N) {
            throw std::invalid_argument("polynomial file disagrees with --p/--N");
        }
        return from_polynomial(poly, N, mode, cap);
    }
    if (kind == "table") {
        FiniteFunction f = load_table(arg, cap);
        if (f.p() != p || f.N() != N) {
            throw std::invalid_argument("table file disagrees with --p/--N");
        }
        return f;
    }
    throw std::invalid_argument("unknown function spec kind: " + kind);
}

// ---- derivatives ----

FiniteFunction iterated_derivative(const FiniteFunction& f,
                                   std::span<const FieldVector> dirs) {
    for (const auto& y : dirs) {
        if (y.p() != f.p() || y.size() != f.N()) {
            throw std::invalid_argument("direction shape mismatch");
        }
    }
    if (dirs.size() > 24) throw std::invalid_argument("derivative order cap is 24");
    uint32_t p = f.p(), N = f.N();
    if (f.is_dense()) {
        uint64_t size = f.size();
        std::vector<uint8_t> cur = f.table();
        PrimeField field(p);
        for (const auto& y : dirs) {
            std::vector<uint8_t> next(size);
            if (p == 2) {
                uint64_t yw = y.word();
                for (uint64_t x = 0; x < size; ++x) {
                    next[x] = cur[x ^ yw] ^ cur[x];
                }
            } else {
                // shift[x] = index of x + y, built coordinate-descending so a
                // single decode pass suffices.
                for (uint64_t x = 0; x < size; ++x) {
                    uint64_t rem = x, idx = 0, scale = 1;
                    for (uint32_t j = 0; j < N; ++j) {
                        uint64_t d = rem % p;
                        rem /= p;
                        idx += ((d + y.get(j)) % p) * scale;
                        scale *= p;
                    }
                    next[x] = field.sub(cur[idx], cur[x]);
                }
            }
            cur = std::move(next);
        }
        return FiniteFunction::dense(p, N, std::move(cur));
    }
    // Lazy: expand the 2^k-term inclusion-exclusion at each call.
    std::vector<FieldVector> ds(dirs.begin(), dirs.end());
    uint32_t k = uint32_t(ds.size());
    if (p == 2 && N <= 64) {
        std::vector<uint64_t> shifts(size_t(1) << k, 0);
        for (size_t a = 0; a < shifts.size(); ++a) {
            uint64_t s = 0;
            for (uint32_t i = 0; i < k; ++i) {
                if (a & (size_t(1) << i)) s ^= ds[i].word();
            }
            shifts[a] = s;
        }
        FiniteFunction base = f;
        auto bit_eval = [base, shifts](uint64_t x) {
            uint8_t acc = 0;
            for (uint64_t s : shifts) acc ^= base.at_index(x ^ s);
            return uint8_t(acc & 1);
        };
        auto eval = [bit_eval](const FieldVector& x) { return bit_eval(x.word()); };
        return FiniteFunction::lazy(p, N, eval, bit_eval);
    }
    std::vector<FieldVector> shifts;
    std::vector<uint8_t> signs;
    PrimeField field(p);
    for (size_t a = 0; a < (size_t(1) << k); ++a) {
        FieldVector s(p, N);
        uint32_t members = 0;
        for (uint32_t i = 0; i < k; ++i) {
            if (a & (size_t(1) << i)) {
                s = s.add(ds[i]);
                ++members;
            }
        }
        shifts.push_back(std::move(s));
        signs.push_back((k - members) % 2 == 0 ? 1 : field.neg(1));
    }
    FiniteFunction base = f;
    auto eval = [base, shifts, signs, field](const FieldVector& x) {
        uint8_t acc = 0;
        for (size_t a = 0; a < shifts.size(); ++a) {
            acc = field.add(acc, field.mul(signs[a], base.eval(x.add(shifts[a]))));
        }
        return acc;
    };
    return FiniteFunction::lazy(p, N, eval);
}

// ---- correlation ----

Correlation correlation(const FiniteFunction& f, const FiniteFunction& g,
                        uint64_t cap) {
    if (f.p() != g.p() || f.N() != g.N()) {
        throw std::invalid_argument("correlation needs matching p and N");
    }
    uint64_t size = f.size();
    if ((!f.is_dense() || !g.is_dense()) && size > cap) {
        throw std::invalid_argument("correlation over a lazy pair exceeds the cap");
    }
    Correlation out;
    if (f.p() == 2) {
        uint64_t disagree = 0;
        if (f.is_dense() && g.is_dense()) {
            const auto& ft = f.table();
            const auto& gt = g.table();
            for (uint64_t i = 0; i < size; ++i) disagree += ft[i] ^ gt[i];
        } else {
            for (uint64_t i = 0; i < size; ++i) {
                disagree += f.at_index(i) ^ g.at_index(i);
            }
        }
        out.exact = true;
        out.numer = int64_t(size) - 2 * int64_t(disagree);
        out.denom_log2 = f.N();
        out.value = {double(out.numer) / double(size), 0.0};
        return out;
    }
    PrimeField field(f.p());
    std::complex<double> acc{0.0, 0.0};
    for (uint64_t i = 0; i < size; ++i) {
        acc += character_value(f.p(), field.sub(f.at_index(i), g.at_index(i)));
    }
    out.value = acc / double(size);
    return out;
}

// ---- spectra ----

std::vector<int64_t> walsh_coefficients(const FiniteFunction& f) {
    if (f.p() != 2) throw std::invalid_argument("walsh_coefficients needs p = 2");
    if (!f.is_dense()) throw std::invalid_argument("walsh_coefficients needs a dense table");
    const auto& t = f.table();
    std::vector<int64_t> a(t.size());
    for (size_t i = 0; i < t.size(); ++i) a[i] = t[i] ? -1 : 1;
    walsh_transform(a);
    return a;
}

Spectrum character_spectrum(const FiniteFunction& f) {
    if (!f.is_dense()) throw std::invalid_argument("character_spectrum needs a dense table");
    Spectrum s;
    s.p = f.p();
    s.N = f.N();
    uint64_t size = f.size();
    if (f.p() == 2) {
        std::vector<int64_t> w = walsh_coefficients(f);
        s.coef.resize(size);
        for (uint64_t i = 0; i < size; ++i) {
            s.coef[i] = {double(w[i]) / double(size), 0.0};
        }
        return s;
    }
    uint32_t p = f.p();
    s.coef.resize(size);
    const auto& t = f.table();
    for (uint64_t i = 0; i < size; ++i) s.coef[i] = character_value(p, t[i]);
    char_transform(s.coef, p, f.N());
    for (auto& c : s.coef) c /= double(size);
    return s;
}

void char_transform(std::vector<std::complex<double>>& a, uint32_t p, uint32_t N) {
    uint64_t size = domain_size(p, N);
    if (a.size() != size) throw std::invalid_argument("char_transform: size mismatch");
    // Per-coordinate radix-p butterflies with kernel e(-t s).
    std::vector<std::complex<double>> kernel(p * p);
    for (uint32_t t = 0; t < p; ++t) {
        for (uint32_t sdx = 0; sdx < p; ++sdx) {
            kernel[t * p + sdx] =
                character_value(p, uint8_t((p - (t * sdx) % p) % p));
        }
    }
    std::vector<std::complex<double>> scratch(p);
    uint64_t stride = 1;
    for (uint32_t j = 0; j < N; ++j) {
        for (uint64_t base = 0; base < size; base += stride * p) {
            for (uint64_t off = 0; off < stride; ++off) {
                for (uint32_t t = 0; t < p; ++t) {
                    std::complex<double> acc{0.0, 0.0};
                    for (uint32_t sdx = 0; sdx < p; ++sdx) {
                        acc += kernel[t * p + sdx] * a[base + off + sdx * stride];
                    }
                    scratch[t] = acc;
                }
                for (uint32_t t = 0; t < p; ++t) {
                    a[base + off + t * stride] = scratch[t];
                }
            }
        }
        stride *= p;
    }
}

std::vector<uint8_t> multilinear_coefficients(const FiniteFunction& f) {
    if (f.p() != 2) {
        throw std::invalid_argument("multilinear_coefficients needs p = 2");
    }
    FiniteFunction d = f.materialized();
    std::vector<uint64_t> w = pack_table(d.table());
    anf_transform(w, f.N());
    std::vector<uint8_t> out(d.size());
    for (uint64_t i = 0; i < out.size(); ++i) {
        out[i] = uint8_t((w[i / 64] >> (i % 64)) & 1);
    }
    return out;
}

// ---- truth-table files ----

namespace {
constexpr char kMagic[4] = {'U', 'F', 'N', '1'};
}

void write_table(std::ostream& out, const FiniteFunction& f) {
    FiniteFunction d = f.materialized();
    out.write(kMagic, 4);
    uint8_t p = uint8_t(d.p());
    out.put(char(p));
    uint32_t N = d.N();
    for (int i = 0; i < 4; ++i) out.put(char((N >> (8 * i)) & 0xff));
    const auto& t = d.table();
    out.write(reinterpret_cast<const char*>(t.data()),
              std::streamsize(t.size()));
    if (!out) throw std::runtime_error("truth-table write failed");
}

FiniteFunction read_table(std::istream& in, uint64_t cap) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::invalid_argument("bad truth-table magic");
    }
    int pc = in.get();
    if (pc == EOF || !is_supported_prime(uint32_t(pc))) {
        throw std::invalid_argument("bad truth-table prime");
    }
    uint32_t p = uint32_t(pc);
    uint32_t N = 0;
    for (int i = 0; i < 4; ++i) {
        int b = in.get();
        if (b == EOF) throw std::invalid_argument("truncated truth-table header");
        N |= uint32_t(b) << (8 * i);
    }
    uint64_t size = domain_size(p, N);
    if (size > cap) throw std::invalid_argument("truth-table exceeds the dense cap");
    std::vector<uint8_t> table(size);
    in.read(reinterpret_cast<char*>(table.data()), std::streamsize(size));
    if (uint64_t(in.gcount()) != size) {
        throw std::invalid_argument("truncated truth-table body");
    }
    return FiniteFunction::dense(p, N, std::move(table));
}

void save_table(const std::string& path, const FiniteFunction& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_table(out, f);
}

FiniteFunction load_table(const std::string& path, uint64_t cap) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_table(in, cap);
}

}  // namespace ufn
