#pragma once

// m-ary functions f: T^n -> T and their combinatorial complexity measures.
//
// Values are stored as labels in [0,m-1]. The alphabet kind only matters for
// the polynomial representation: `unity` reads label j as eps^j, `integer`
// reads it as the integer j. Sensitivity and block sensitivity only look at
// labels, so they do not depend on the alphabet.

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "msens/common.hpp"

namespace msens {

enum class Alphabet { unity, integer };

inline std::string to_string(Alphabet a) { return a == Alphabet::unity ? "unity" : "int"; }

/// Indexing helpers for the vertex set [0,m-1]^n of H(n,m).
/// idx(x) = sum_j x_j m^(n-1-j): coordinate 0 is the most significant digit.
class HammingSpace {
  public:
    HammingSpace(int m, int n) : m_(m), n_(n), strides_(n) {
        check_modulus(m);
        if (n < 1) throw InvalidParameter("arity n must be >= 1");
        std::uint64_t s = 1;
        for (int j = n - 1; j >= 0; --j) {
            strides_[j] = s;
            s = (s > std::numeric_limits<std::uint64_t>::max() / m) ? 0 : s * m;
            if (s == 0 && j > 0) overflow_ = true;
        }
        size_ = overflow_ ? 0 : s;
    }

    int m() const { return m_; }
    int n() const { return n_; }
    /// m^n, or 0 if it does not fit in 64 bits.
    std::uint64_t size() const { return size_; }
    std::uint64_t stride(int j) const { return strides_[j]; }

    std::uint64_t index(std::span<const int> x) const {
        std::uint64_t idx = 0;
        for (int j = 0; j < n_; ++j) idx = idx * m_ + static_cast<std::uint64_t>(x[j]);
        return idx;
    }

    Vertex vertex(std::uint64_t idx) const {
        Vertex x(n_);
        for (int j = n_ - 1; j >= 0; --j) {
            x[j] = static_cast<int>(idx % m_);
            idx /= m_;
        }
        return x;
    }

    int digit(std::uint64_t idx, int j) const {
        return static_cast<int>((idx / strides_[j]) % m_);
    }

    void validate(std::span<const int> x) const {
        if (static_cast<int>(x.size()) != n_)
            throw InvalidParameter("vertex has " + std::to_string(x.size()) +
                                   " coordinates, expected " + std::to_string(n_));
        for (int j = 0; j < n_; ++j)
            if (x[j] < 0 || x[j] >= m_)
                throw InvalidParameter("vertex coordinate " + std::to_string(j + 1) + " = " +
                                       std::to_string(x[j]) + " outside [0," +
                                       std::to_string(m_ - 1) + "]");
    }

    /// Advance x to the next vertex in index order; false after the last one.
    bool next(Vertex& x) const {
        for (int j = n_ - 1; j >= 0; --j) {
            if (++x[j] < m_) return true;
            x[j] = 0;
        }
        return false;
    }

  private:
    int m_;
    int n_;
    std::vector<std::uint64_t> strides_;
    std::uint64_t size_ = 0;
    bool overflow_ = false;
};

/// f: T^n -> T, either a dense label table or a deterministic membership oracle.
class MAryFunction {
  public:
    using Oracle = std::function<int(std::span<const int>)>;

    static MAryFunction dense(int m, int n, Alphabet alphabet, std::vector<std::uint8_t> table) {
        MAryFunction f(m, n, alphabet);
        if (f.space_.size() == 0 || table.size() != f.space_.size())
            throw InvalidParameter("dense table has " + std::to_string(table.size()) +
                                   " entries, expected m^n");
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table[i] >= m)
                throw InvalidParameter("label " + std::to_string(table[i]) + " at index " +
                                       std::to_string(i) + " outside [0," +
                                       std::to_string(m - 1) + "]");
        f.table_ = std::make_shared<const std::vector<std::uint8_t>>(std::move(table));
        return f;
    }

    static MAryFunction from_oracle(int m, int n, Alphabet alphabet, Oracle oracle) {
        MAryFunction f(m, n, alphabet);
        f.oracle_ = std::make_shared<const Oracle>(std::move(oracle));
        return f;
    }

    /// Materialize `rule` over every vertex.
    template <class Rule>
    static MAryFunction tabulate(int m, int n, Alphabet alphabet, Rule&& rule,
                                 const Limits& limits = {}) {
        const std::uint64_t size = dense_size(m, n, limits.max_dense, "tabulate");
        HammingSpace space(m, n);
        std::vector<std::uint8_t> table(size);
        Vertex x(n, 0);
        for (std::uint64_t i = 0; i < size; ++i, space.next(x)) table[i] = label_of(rule(x), m);
        return dense(m, n, alphabet, std::move(table));
    }

    static MAryFunction constant(int m, int n, int label, Alphabet alphabet = Alphabet::unity) {
        return tabulate(m, n, alphabet, [label](const Vertex&) { return label; });
    }

    int m() const { return space_.m(); }
    int n() const { return space_.n(); }
    Alphabet alphabet() const { return alphabet_; }
    const HammingSpace& space() const { return space_; }
    bool is_dense() const { return table_ != nullptr; }

    const std::vector<std::uint8_t>& table() const {
        if (!table_) throw InvalidParameter("function is oracle-backed; no dense table");
        return *table_;
    }

    int at(std::uint64_t idx) const { return (*table_)[idx]; }

    int operator()(std::span<const int> x) const {
        if (table_) return (*table_)[space_.index(x)];
        return label_of((*oracle_)(x), m());
    }

    /// Same values under a different alphabet.
    MAryFunction with_alphabet(Alphabet a) const {
        MAryFunction g = *this;
        g.alphabet_ = a;
        return g;
    }

    /// Dense copy of an oracle-backed function.
    MAryFunction densified(const Limits& limits = {}) const {
        if (is_dense()) return *this;
        const MAryFunction& self = *this;
        return tabulate(m(), n(), alphabet_, [&self](const Vertex& x) { return self(x); }, limits);
    }

    friend bool operator==(const MAryFunction& a, const MAryFunction& b) {
        return a.m() == b.m() && a.n() == b.n() && a.alphabet_ == b.alphabet_ && a.table_ &&
               b.table_ && *a.table_ == *b.table_;
    }

  private:
    MAryFunction(int m, int n, Alphabet alphabet) : space_(m, n), alphabet_(alphabet) {}

    static std::uint8_t label_of(int v, int m) {
        if (v < 0 || v >= m)
            throw InvalidParameter("label " + std::to_string(v) + " outside [0," +
                                   std::to_string(m - 1) + "]");
        return static_cast<std::uint8_t>(v);
    }

    HammingSpace space_;
    Alphabet alphabet_;
    std::shared_ptr<const std::vector<std::uint8_t>> table_;
    std::shared_ptr<const Oracle> oracle_;
};

/// A sensitive-block candidate: nonempty support, per-coordinate shift in [1,m-1].
/// A multiset block with multiplicities mult(j) normalizes to shifts mult(j) mod m,
/// with zero-effect elements dropped.
struct ShiftBlock {
    std::map<int, int> shifts;  // 0-based coordinate -> shift

    /// From a multiset given as a list of 0-based coordinates with repetition.
    static std::optional<ShiftBlock> from_multiset(std::span<const int> elements, int m) {
        ShiftBlock b;
        for (int j : elements) b.shifts[j] += 1;
        for (auto it = b.shifts.begin(); it != b.shifts.end();) {
            it->second %= m;
            it = it->second == 0 ? b.shifts.erase(it) : std::next(it);
        }
        if (b.shifts.empty()) return std::nullopt;
        return b;
    }
};

/// x^B: y_j = x_j + shift(j) mod m on the support, x_j elsewhere.
inline Vertex apply_block(std::span<const int> x, const ShiftBlock& block, int m) {
    if (block.shifts.empty()) throw InvalidParameter("apply_block: empty block");
    Vertex y(x.begin(), x.end());
    for (auto [j, s] : block.shifts) {
        if (j < 0 || j >= static_cast<int>(y.size()))
            throw InvalidParameter("apply_block: coordinate " + std::to_string(j + 1) +
                                   " out of range");
        if (s < 1 || s > m - 1)
            throw InvalidParameter("apply_block: shift " + std::to_string(s) +
                                   " outside [1,m-1]");
        y[j] = (y[j] + s) % m;
    }
    return y;
}

/// s_x(f): neighbors of x (distance 1) where f differs from f(x).
inline int local_sensitivity(const MAryFunction& f, std::span<const int> x) {
    const auto& space = f.space();
    space.validate(x);
    const int m = f.m();
    int count = 0;
    if (f.is_dense()) {
        const std::uint64_t idx = space.index(x);
        const int fx = f.at(idx);
        for (int j = 0; j < f.n(); ++j) {
            const std::uint64_t base = idx - static_cast<std::uint64_t>(x[j]) * space.stride(j);
            for (int v = 0; v < m; ++v)
                if (v != x[j] && f.at(base + v * space.stride(j)) != fx) ++count;
        }
        return count;
    }
    const int fx = f(x);
    Vertex y(x.begin(), x.end());
    for (int j = 0; j < f.n(); ++j) {
        for (int v = 0; v < m; ++v) {
            if (v == x[j]) continue;
            y[j] = v;
            if (f(y) != fx) ++count;
        }
        y[j] = x[j];
    }
    return count;
}

namespace detail {

inline int dense_local_sensitivity(const MAryFunction& f, std::uint64_t idx) {
    const auto& space = f.space();
    const int m = f.m();
    const int fx = f.at(idx);
    int count = 0;
    for (int j = 0; j < f.n(); ++j) {
        const int xj = space.digit(idx, j);
        const std::uint64_t base = idx - static_cast<std::uint64_t>(xj) * space.stride(j);
        for (int v = 0; v < m; ++v)
            if (v != xj && f.at(base + v * space.stride(j)) != fx) ++count;
    }
    return count;
}

}  // namespace detail

/// s(f) = max_x s_x(f). Oracle-backed functions are tabulated first, subject
/// to limits.max_dense.
inline int sensitivity(const MAryFunction& f, const Limits& limits = {}) {
    if (!f.is_dense()) return sensitivity(f.densified(limits), limits);
    int best = 0;
    for (std::uint64_t i = 0; i < f.space().size(); ++i)
        best = std::max(best, detail::dense_local_sensitivity(f, i));
    return best;
}

/// Lower bound on s(f) from sampled vertices, for functions too large to scan.
struct SampledBound {
    int value = 0;
    std::uint64_t samples = 0;
    bool is_lower_bound = true;
};

template <class Rng>
SampledBound sampled_sensitivity(const MAryFunction& f, std::uint64_t samples, Rng& rng) {
    SampledBound out;
    std::uniform_int_distribution<int> coord(0, f.m() - 1);
    Vertex x(f.n());
    for (std::uint64_t s = 0; s < samples; ++s) {
        for (auto& c : x) c = coord(rng);
        out.value = std::max(out.value, local_sensitivity(f, x));
    }
    out.samples = samples;
    return out;
}

namespace detail {

// Max number of pairwise disjoint masks, each containing a marked mask.
// `covered` must already be closed under supersets.
inline int max_disjoint_packing(const std::vector<char>& covered, int n) {
    const std::uint32_t full = (std::uint32_t{1} << n);
    std::vector<int> best(full, 0);
    for (std::uint32_t u = 1; u < full; ++u) {
        const std::uint32_t low = u & (~u + 1);
        int b = best[u ^ low];
        // blocks that use the lowest element of u
        const std::uint32_t rest = u ^ low;
        for (std::uint32_t t = rest;; t = (t - 1) & rest) {
            const std::uint32_t s = t | low;
            if (covered[s]) b = std::max(b, 1 + best[u ^ s]);
            if (t == 0) break;
        }
        best[u] = b;
    }
    return best[full - 1];
}

inline void close_under_supersets(std::vector<char>& marks, int n) {
    for (int j = 0; j < n; ++j) {
        const std::uint32_t bit = std::uint32_t{1} << j;
        for (std::uint32_t s = 0; s < marks.size(); ++s)
            if ((s & bit) && marks[s ^ bit]) marks[s] = 1;
    }
}

inline int dense_local_block_sensitivity(const MAryFunction& f, std::uint64_t idx) {
    const auto& space = f.space();
    const int n = f.n();
    const int fx = f.at(idx);
    const Vertex x = space.vertex(idx);
    std::vector<char> marks(std::size_t{1} << n, 0);
    Vertex y(n, 0);
    for (std::uint64_t i = 0; i < space.size(); ++i, space.next(y)) {
        if (f.at(i) == fx) continue;
        std::uint32_t diff = 0;
        for (int j = 0; j < n; ++j)
            if (y[j] != x[j]) diff |= std::uint32_t{1} << j;
        marks[diff] = 1;
    }
    close_under_supersets(marks, n);
    return max_disjoint_packing(marks, n);
}

inline void check_block_limits(const MAryFunction& f, const Limits& limits) {
    if (f.n() > limits.max_bitmask_n || f.n() > 30)
        throw CapacityExceeded("block sensitivity: n = " + std::to_string(f.n()) +
                               " exceeds the bitmask limit " +
                               std::to_string(limits.max_bitmask_n));
}

}  // namespace detail

/// bs_x(f), exactly: every y with f(y) != f(x) marks the support diff(x,y) as
/// sensitive; the answer is the largest packing of disjoint sensitive supports.
inline int local_block_sensitivity(const MAryFunction& f, std::span<const int> x,
                                   const Limits& limits = {}) {
    detail::check_block_limits(f, limits);
    f.space().validate(x);
    if (!f.is_dense()) {
        const MAryFunction g = f.densified(limits);
        return detail::dense_local_block_sensitivity(g, g.space().index(x));
    }
    return detail::dense_local_block_sensitivity(f, f.space().index(x));
}

inline int block_sensitivity(const MAryFunction& f, const Limits& limits = {}) {
    detail::check_block_limits(f, limits);
    if (!f.is_dense()) return block_sensitivity(f.densified(limits), limits);
    int best = 0;
    for (std::uint64_t i = 0; i < f.space().size() && best < f.n(); ++i)
        best = std::max(best, detail::dense_local_block_sensitivity(f, i));
    return best;
}

/// f_{eps^i}: label f(x) + i * sum_j x_j mod m.
inline MAryFunction shift_function(const MAryFunction& f, int i) {
    const int m = f.m();
    const int shift = mod(i, m);
    if (!f.is_dense()) {
        return MAryFunction::from_oracle(m, f.n(), f.alphabet(),
                                         [f, shift, m](std::span<const int> x) {
                                             long long s = 0;
                                             for (int v : x) s += v;
                                             return mod(f(x) + shift * s, m);
                                         });
    }
    const auto& space = f.space();
    std::vector<std::uint8_t> table(space.size());
    Vertex x(f.n(), 0);
    for (std::uint64_t idx = 0; idx < space.size(); ++idx, space.next(x)) {
        long long s = 0;
        for (int v : x) s += v;
        table[idx] = static_cast<std::uint8_t>(mod(f.at(idx) + shift * s, m));
    }
    return MAryFunction::dense(m, f.n(), f.alphabet(), std::move(table));
}

/// Identify label j of one alphabet with label j of the other.
inline MAryFunction relabel(const MAryFunction& f, Alphabet target) {
    return f.with_alphabet(target);
}

}  // namespace msens
