#pragma once

// The unique representing polynomial of an m-ary function (degree <= m-1 in
// each variable), its degree, and the coefficient identities relating it to
// the average value and to the shifted functions f_{eps^i}.
//
// Unity alphabet: coefficients are kept scaled by m^n, i.e. the character sums
//   m^n * fhat(a) = sum_x eps^(f(x) - <a,x>)  in Z[eps_m].
// Integer alphabet: coefficients are exact rationals (tensor Lagrange basis on
// the nodes 0..m-1), scale 1.

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "msens/common.hpp"
#include "msens/exact_arith.hpp"
#include "msens/function.hpp"

namespace msens {

/// Exponent vector with its cached total degree. Ordered by total degree first.
class ExpVector {
  public:
    ExpVector() = default;
    explicit ExpVector(std::vector<int> exponents) : exponents_(std::move(exponents)) {
        for (int e : exponents_) {
            if (e < 0) throw InvalidParameter("negative exponent");
            total_ += e;
        }
    }

    const std::vector<int>& exponents() const { return exponents_; }
    int total_degree() const { return total_; }
    int operator[](std::size_t j) const { return exponents_[j]; }
    std::size_t size() const { return exponents_.size(); }

    auto operator<=>(const ExpVector& o) const {
        if (auto c = total_ <=> o.total_; c != 0) return c;
        return exponents_ <=> o.exponents_;
    }
    bool operator==(const ExpVector&) const = default;

  private:
    std::vector<int> exponents_;
    int total_ = 0;
};

/// Sparse polynomial in x_1..x_n. Stored coefficients equal `scale` times the
/// true coefficients; no stored coefficient is zero.
template <class Coeff>
struct Polynomial {
    int m = 0;
    int n = 0;
    Alphabet alphabet = Alphabet::unity;
    BigInt scale = 1;
    std::map<ExpVector, Coeff> terms;

    /// Total degree; 0 for the zero polynomial and for constants.
    int degree() const {
        int d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, e.total_degree());
        return d;
    }

    const Coeff* find(const std::vector<int>& exponents) const {
        auto it = terms.find(ExpVector(exponents));
        return it == terms.end() ? nullptr : &it->second;
    }

    bool operator==(const Polynomial&) const = default;
};

using UnityPolynomial = Polynomial<CycInt>;
using RationalPolynomial = Polynomial<BigRational>;
using RepresentingPolynomial = std::variant<UnityPolynomial, RationalPolynomial>;

namespace detail {

// Group-ring table: entry i holds m integers, the coefficients of eps^0..eps^(m-1).
struct GroupRingTable {
    int m = 0;
    std::uint64_t size = 0;
    std::vector<long long> data;

    long long* at(std::uint64_t i) { return data.data() + i * m; }
    const long long* at(std::uint64_t i) const { return data.data() + i * m; }
};

// Dimension-at-a-time character transform of the table eps^f(x):
// afterwards entry idx(a) holds sum_x eps^(f(x) - <a,x>).
inline GroupRingTable unity_transform(const MAryFunction& f) {
    const int m = f.m();
    const auto& space = f.space();
    GroupRingTable t{m, space.size(), std::vector<long long>(space.size() * m, 0)};
    for (std::uint64_t i = 0; i < t.size; ++i) t.at(i)[f.at(i)] = 1;

    std::vector<long long> line(static_cast<std::size_t>(m) * m);
    for (int j = 0; j < f.n(); ++j) {
        const std::uint64_t st = space.stride(j);
        for (std::uint64_t base = 0; base < t.size; ++base) {
            if (space.digit(base, j) != 0) continue;
            for (int v = 0; v < m; ++v) std::copy_n(t.at(base + v * st), m, &line[v * m]);
            for (int a = 0; a < m; ++a) {
                long long* out = t.at(base + a * st);
                std::fill_n(out, m, 0);
                // eps^(-a v) * line_v : exponent r of the product reads r + a v of line_v
                for (int v = 0; v < m; ++v) {
                    const int k = (a * v) % m;
                    const long long* in = &line[v * m];
                    for (int r = 0; r < m; ++r) out[r] += in[(r + k) % m];
                }
            }
        }
    }
    return t;
}

inline std::vector<std::vector<BigRational>> lagrange_to_monomial(int m) {
    // row k, column t: coefficient of x^k in the Lagrange basis polynomial for node t
    std::vector<std::vector<BigRational>> mat(m, std::vector<BigRational>(m));
    for (int t = 0; t < m; ++t) {
        std::vector<BigRational> poly{BigRational(1)};
        BigRational denom = 1;
        for (int s = 0; s < m; ++s) {
            if (s == t) continue;
            std::vector<BigRational> next(poly.size() + 1);
            for (std::size_t k = 0; k < poly.size(); ++k) {
                next[k + 1] += poly[k];
                next[k] -= poly[k] * s;
            }
            poly = std::move(next);
            denom *= (t - s);
        }
        for (int k = 0; k < m; ++k) mat[k][t] = poly[k] / denom;
    }
    return mat;
}

}  // namespace detail

/// Exact interpolant for the unity alphabet, coefficients scaled by m^n.
inline UnityPolynomial interpolate_unity(const MAryFunction& f, const Limits& limits = {}) {
    dense_size(f.m(), f.n(), limits.max_dense, "interpolate");
    const MAryFunction g = f.densified(limits);
    const auto t = detail::unity_transform(g);
    UnityPolynomial p;
    p.m = g.m();
    p.n = g.n();
    p.alphabet = Alphabet::unity;
    p.scale = big_pow(BigInt(g.m()), static_cast<unsigned>(g.n()));
    for (std::uint64_t i = 0; i < t.size; ++i) {
        CycInt c = CycInt::from_group_ring(g.m(), std::span<const long long>(t.at(i), g.m()));
        if (!c.is_zero()) p.terms.emplace(ExpVector(g.space().vertex(i)), std::move(c));
    }
    return p;
}

/// Exact interpolant for the integer alphabet over nodes 0..m-1.
inline RationalPolynomial interpolate_integer(const MAryFunction& f, const Limits& limits = {}) {
    dense_size(f.m(), f.n(), limits.max_dense, "interpolate");
    const MAryFunction g = f.densified(limits);
    const int m = g.m();
    const auto& space = g.space();
    const auto mat = detail::lagrange_to_monomial(m);
    std::vector<BigRational> t(space.size());
    for (std::uint64_t i = 0; i < space.size(); ++i) t[i] = g.at(i);

    std::vector<BigRational> line(m);
    for (int j = 0; j < g.n(); ++j) {
        const std::uint64_t st = space.stride(j);
        for (std::uint64_t base = 0; base < space.size(); ++base) {
            if (space.digit(base, j) != 0) continue;
            for (int v = 0; v < m; ++v) line[v] = t[base + v * st];
            for (int k = 0; k < m; ++k) {
                BigRational acc = 0;
                for (int v = 0; v < m; ++v)
                    if (line[v] != 0 && mat[k][v] != 0) acc += mat[k][v] * line[v];
                t[base + k * st] = acc;
            }
        }
    }
    RationalPolynomial p;
    p.m = m;
    p.n = g.n();
    p.alphabet = Alphabet::integer;
    for (std::uint64_t i = 0; i < space.size(); ++i)
        if (t[i] != 0) p.terms.emplace(ExpVector(space.vertex(i)), std::move(t[i]));
    return p;
}

inline RepresentingPolynomial interpolate(const MAryFunction& f, const Limits& limits = {}) {
    if (f.alphabet() == Alphabet::unity) return interpolate_unity(f, limits);
    return interpolate_integer(f, limits);
}

/// deg(f): the total degree of the unique interpolant.
inline int degree(const MAryFunction& f, const Limits& limits = {}) {
    if (f.alphabet() == Alphabet::integer) return interpolate_integer(f, limits).degree();
    dense_size(f.m(), f.n(), limits.max_dense, "degree");
    const MAryFunction g = f.densified(limits);
    const auto t = detail::unity_transform(g);
    int best = 0;
    for (std::uint64_t i = 0; i < t.size; ++i) {
        int total = 0;
        for (int j = 0; j < g.n(); ++j) total += g.space().digit(i, j);
        if (total <= best) continue;
        if (!group_ring_is_zero(g.m(), std::span<const long long>(t.at(i), g.m()))) best = total;
    }
    return best;
}

namespace detail {

inline void check_point(int m, int n, std::span<const int> x) {
    HammingSpace(m, n).validate(x);
}

}  // namespace detail

/// Scaled value sum_a c_a eps^<a,x>, which equals scale * eps^f(x).
/// The point is given by its labels: coordinate j is eps^x_j.
inline CycInt evaluate(const UnityPolynomial& p, std::span<const int> x) {
    detail::check_point(p.m, p.n, x);
    CycInt acc = CycInt::zero(p.m);
    for (const auto& [e, c] : p.terms) {
        long long k = 0;
        for (int j = 0; j < p.n; ++j) k += static_cast<long long>(e[j]) * x[j];
        acc += c * CycInt::eps_power(p.m, k);
    }
    return acc;
}

/// Exact value of the rational interpolant at the integer point x.
inline BigRational evaluate(const RationalPolynomial& p, std::span<const int> x) {
    detail::check_point(p.m, p.n, x);
    BigRational acc = 0;
    for (const auto& [e, c] : p.terms) {
        BigInt mono = 1;
        for (int j = 0; j < p.n; ++j) mono *= big_pow(BigInt(x[j]), static_cast<unsigned>(e[j]));
        acc += c * BigRational(mono);
    }
    return acc / BigRational(p.scale);
}

/// A polynomial over U_m with unrestricted exponents (input to reduce_exponents).
struct RawUnityPolynomial {
    int m = 0;
    int n = 0;
    BigInt scale = 1;
    std::vector<std::pair<std::vector<int>, CycInt>> terms;
};

/// Reduce modulo <x_j^m - 1>: fold every exponent mod m and combine like terms.
inline UnityPolynomial reduce_exponents(const RawUnityPolynomial& raw) {
    UnityPolynomial p;
    p.m = raw.m;
    p.n = raw.n;
    p.alphabet = Alphabet::unity;
    p.scale = raw.scale;
    for (const auto& [exps, c] : raw.terms) {
        if (static_cast<int>(exps.size()) != raw.n)
            throw InvalidParameter("reduce_exponents: exponent vector of wrong length");
        std::vector<int> folded(exps.size());
        for (std::size_t j = 0; j < exps.size(); ++j) {
            if (exps[j] < 0) throw InvalidParameter("reduce_exponents: negative exponent");
            folded[j] = exps[j] % raw.m;
        }
        ExpVector key(std::move(folded));
        auto it = p.terms.find(key);
        if (it == p.terms.end()) {
            p.terms.emplace(std::move(key), c);
        } else {
            it->second += c;
        }
    }
    std::erase_if(p.terms, [](const auto& kv) { return kv.second.is_zero(); });
    return p;
}

/// Scaled average m^n E(f) = sum_x eps^f(x).
inline CycInt average(const MAryFunction& f, const Limits& limits = {}) {
    const MAryFunction g = f.densified(limits);
    std::vector<BigInt> counts(g.m(), BigInt(0));
    for (auto label : g.table()) counts[label] += 1;
    return cyc_reduce(g.m(), counts);
}

/// Constant-term / top-coefficient relations for one function.
struct TopCoefficientCheck {
    CycInt constant_term;    // scaled F(0)
    CycInt top_coefficient;  // scaled coefficient of (x_1...x_n)^(m-1) in G
    CycInt average;          // scaled E(f)
    bool coefficients_match = false;  // top_coefficient == constant_term
    bool reduction_matches = false;   // G == exponent reduction of (x_1...x_n)^(m-1) F
    bool average_matches = false;     // constant_term == average
    int shifted_degree = 0;           // deg(f_{eps^(m-1)})
    bool corollary_holds = false;     // deg(f_{eps^(m-1)}) = (m-1)n  <=>  E(f) != 0

    bool holds() const {
        return coefficients_match && reduction_matches && average_matches && corollary_holds;
    }
};

inline TopCoefficientCheck top_coefficient_identity(const MAryFunction& f,
                                                    const Limits& limits = {}) {
    const MAryFunction base = f.with_alphabet(Alphabet::unity);
    const int m = base.m();
    const int n = base.n();
    const UnityPolynomial F = interpolate_unity(base, limits);
    const UnityPolynomial G = interpolate_unity(shift_function(base, m - 1), limits);

    TopCoefficientCheck r;
    const std::vector<int> zero(n, 0);
    const std::vector<int> top(n, m - 1);
    r.constant_term = F.find(zero) ? *F.find(zero) : CycInt::zero(m);
    r.top_coefficient = G.find(top) ? *G.find(top) : CycInt::zero(m);
    r.average = average(base, limits);
    r.coefficients_match = r.constant_term == r.top_coefficient;
    r.average_matches = r.constant_term == r.average;

    RawUnityPolynomial h{m, n, F.scale, {}};
    for (const auto& [e, c] : F.terms) {
        std::vector<int> shifted(e.exponents());
        for (auto& v : shifted) v += m - 1;
        h.terms.emplace_back(std::move(shifted), c);
    }
    r.reduction_matches = reduce_exponents(h) == G;

    r.shifted_degree = G.degree();
    r.corollary_holds = (r.shifted_degree == (m - 1) * n) == !r.average.is_zero();
    return r;
}

/// s, bs, deg and the three inequalities relating them.
struct BoundsReport {
    int m = 0;
    int n = 0;
    int s = 0;
    int bs = 0;
    int deg = 0;
    bool chain_holds = false;        // s/(m-1) <= bs <= n
    bool sensitivity_bound = false;  // s <= 2 (m-1)^3 deg^2
    bool block_bound = false;        // (m-1) deg >= sqrt(bs/2)

    bool all_hold() const { return chain_holds && sensitivity_bound && block_bound; }
};

inline BoundsReport bounds_report(const MAryFunction& f, const Limits& limits = {}) {
    BoundsReport r;
    r.m = f.m();
    r.n = f.n();
    r.s = sensitivity(f, limits);
    r.bs = block_sensitivity(f, limits);
    r.deg = degree(f, limits);
    const long long m1 = f.m() - 1;
    const long long d2 = static_cast<long long>(r.deg) * r.deg;
    r.chain_holds = r.s >= 0 && r.s <= m1 * r.bs && r.bs <= r.n;
    r.sensitivity_bound = r.s <= 2 * m1 * m1 * m1 * d2;
    r.block_bound = 2 * m1 * m1 * d2 >= r.bs;
    return r;
}

// ---------------------------------------------------------------------------
// Text format: a header line, then one term per line, `coeff * x1^a1 ... xn^an`
// with zero exponents omitted (a constant term is just `coeff`).

namespace detail {

inline std::string monomial_text(const ExpVector& e) {
    std::string s;
    for (std::size_t j = 0; j < e.size(); ++j) {
        if (e[j] == 0) continue;
        if (!s.empty()) s += ' ';
        s += "x" + std::to_string(j + 1) + "^" + std::to_string(e[j]);
    }
    return s;
}

inline std::string coeff_text(const BigRational& c) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(c);
    if (boost::multiprecision::denominator(c) != 1) os << "/" << boost::multiprecision::denominator(c);
    return os.str();
}

inline std::string coeff_text(const CycInt& c) { return c.to_string(); }

}  // namespace detail

template <class Coeff>
void print_polynomial(std::ostream& os, const Polynomial<Coeff>& p) {
    os << "poly m=" << p.m << " n=" << p.n << " alphabet=" << to_string(p.alphabet)
       << " scale=" << p.scale << "\n";
    for (const auto& [e, c] : p.terms) {
        const std::string mono = detail::monomial_text(e);
        os << detail::coeff_text(c);
        if (!mono.empty()) os << " * " << mono;
        os << "\n";
    }
}

inline void print_polynomial(std::ostream& os, const RepresentingPolynomial& p) {
    std::visit([&os](const auto& q) { print_polynomial(os, q); }, p);
}

namespace detail {

inline std::map<std::string, std::string> parse_header_fields(std::istringstream& ls,
                                                              const std::string& source,
                                                              std::size_t line) {
    std::map<std::string, std::string> fields;
    std::string tok;
    std::size_t pos = 1;
    while (ls >> tok) {
        ++pos;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(source, line, pos, "expected key=value, got '" + tok + "'");
        fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return fields;
}

inline int parse_int_field(const std::map<std::string, std::string>& fields, const std::string& key,
                           const std::string& source, std::size_t line) {
    auto it = fields.find(key);
    if (it == fields.end()) throw ParseError(source, line, 1, "missing header field '" + key + "'");
    try {
        std::size_t used = 0;
        const int v = std::stoi(it->second, &used);
        if (used != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw ParseError(source, line, 1, "header field '" + key + "' is not an integer");
    }
}

inline CycInt parse_cyc(const std::string& text, int m, const std::string& source,
                        std::size_t line) {
    if (text == "0") return CycInt::zero(m);
    if (text.size() < 2 || text.front() != '(' || text.back() != ')')
        throw ParseError(source, line, 1, "cyclotomic coefficient must be parenthesized");
    std::vector<BigInt> raw(m, BigInt(0));
    std::istringstream is(text.substr(1, text.size() - 2));
    std::string term;
    while (is >> term) {
        if (term == "+") continue;
        const auto star = term.find("*e^");
        if (star == std::string::npos) throw ParseError(source, line, 1, "bad term '" + term + "'");
        try {
            const int k = std::stoi(term.substr(star + 3));
            if (k < 0 || k >= m) throw std::out_of_range("k");
            raw[k] += BigInt(term.substr(0, star));
        } catch (const std::exception&) {
            throw ParseError(source, line, 1, "bad term '" + term + "'");
        }
    }
    return CycInt::from_raw(m, raw);
}

inline BigRational parse_rational(const std::string& text, const std::string& source,
                                  std::size_t line) {
    try {
        const auto slash = text.find('/');
        if (slash == std::string::npos) return BigRational(BigInt(text));
        return BigRational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ParseError(source, line, 1, "bad rational coefficient '" + text + "'");
    }
}

}  // namespace detail

/// Inverse of print_polynomial.
inline RepresentingPolynomial parse_polynomial(std::istream& in,
                                               const std::string& source = "<polynomial>") {
    std::string text;
    std::size_t line_no = 0;
    do {
        if (!std::getline(in, text)) throw ParseError(source, line_no + 1, 1, "missing header");
        ++line_no;
    } while (skippable_line(text));

    std::istringstream hs(text);
    std::string magic;
    hs >> magic;
    if (magic != "poly") throw ParseError(source, line_no, 1, "expected 'poly' header");
    const auto fields = detail::parse_header_fields(hs, source, line_no);
    const int m = detail::parse_int_field(fields, "m", source, line_no);
    const int n = detail::parse_int_field(fields, "n", source, line_no);
    auto alpha_it = fields.find("alphabet");
    if (alpha_it == fields.end() || (alpha_it->second != "unity" && alpha_it->second != "int"))
        throw ParseError(source, line_no, 1, "alphabet must be 'unity' or 'int'");
    const bool unity = alpha_it->second == "unity";
    auto scale_it = fields.find("scale");
    const BigInt scale = scale_it == fields.end() ? BigInt(1) : BigInt(scale_it->second);

    UnityPolynomial up{m, n, Alphabet::unity, scale, {}};
    RationalPolynomial rp{m, n, Alphabet::integer, scale, {}};
    while (std::getline(in, text)) {
        ++line_no;
        if (skippable_line(text)) continue;
        std::string coeff = text;
        std::string mono;
        if (const auto star = text.find(" * "); star != std::string::npos) {
            coeff = text.substr(0, star);
            mono = text.substr(star + 3);
        }
        std::vector<int> exps(n, 0);
        std::istringstream ms(mono);
        std::string factor;
        std::size_t pos = 1;
        while (ms >> factor) {
            ++pos;
            const auto caret = factor.find('^');
            try {
                if (factor.empty() || factor[0] != 'x' || caret == std::string::npos)
                    throw std::invalid_argument(factor);
                const int var = std::stoi(factor.substr(1, caret - 1));
                const int e = std::stoi(factor.substr(caret + 1));
                if (var < 1 || var > n || e < 0) throw std::out_of_range(factor);
                exps[var - 1] += e;
            } catch (const std::exception&) {
                throw ParseError(source, line_no, pos, "bad factor '" + factor + "'");
            }
        }
        for (int e : exps)
            if (e > m - 1) throw ParseError(source, line_no, 1, "exponent above m-1");
        if (unity) {
            CycInt c = detail::parse_cyc(coeff, m, source, line_no);
            auto [it, fresh] = up.terms.try_emplace(ExpVector(exps), c);
            if (!fresh) it->second += c;
            if (it->second.is_zero()) up.terms.erase(it);
        } else {
            BigRational c = detail::parse_rational(coeff, source, line_no);
            auto [it, fresh] = rp.terms.try_emplace(ExpVector(exps), c);
            if (!fresh) it->second += c;
            if (it->second == 0) rp.terms.erase(it);
        }
    }
    if (unity) return up;
    return rp;
}

}  // namespace msens
