#pragma once

// Vertex partitions of the Hamming graph H(n,m) into m (possibly empty) induced
// subgraphs, in additive notation: class k holds the vertices labelled k, and
// the proper colouring D_j collects the vertices with coordinate sum = j mod m.

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "msens/common.hpp"
#include "msens/exact_arith.hpp"
#include "msens/function.hpp"
#include "msens/representation.hpp"

namespace msens {

/// Degree sentinels for empty classes: min degree +inf, max degree -inf.
inline constexpr int kDegreePlusInf = std::numeric_limits<int>::max();
inline constexpr int kDegreeMinusInf = std::numeric_limits<int>::min();

inline std::string degree_text(int d) {
    if (d == kDegreePlusInf) return "inf";
    if (d == kDegreeMinusInf) return "-inf";
    return std::to_string(d);
}

/// (sum_j x_j) mod m.
inline int color_class(std::span<const int> x, int m) {
    long long s = 0;
    for (int v : x) s += v;
    return mod(s, m);
}

class VertexPartition {
  public:
    VertexPartition(int m, int n, std::vector<std::uint8_t> classes)
        : space_(m, n), classes_(std::move(classes)) {
        if (space_.size() == 0 || classes_.size() != space_.size())
            throw InvalidParameter("partition table has " + std::to_string(classes_.size()) +
                                   " entries, expected m^n");
        for (std::size_t i = 0; i < classes_.size(); ++i)
            if (classes_[i] >= m)
                throw InvalidParameter("class " + std::to_string(classes_[i]) + " at index " +
                                       std::to_string(i) + " outside [0," +
                                       std::to_string(m - 1) + "]");
    }

    /// Every vertex in class `k`.
    static VertexPartition single_class(int m, int n, int k = 0, const Limits& limits = {}) {
        const auto size = dense_size(m, n, limits.max_dense, "partition");
        return VertexPartition(m, n, std::vector<std::uint8_t>(size, static_cast<std::uint8_t>(k)));
    }

    int m() const { return space_.m(); }
    int n() const { return space_.n(); }
    const HammingSpace& space() const { return space_; }
    const std::vector<std::uint8_t>& classes() const { return classes_; }
    int operator[](std::uint64_t idx) const { return classes_[idx]; }

    std::vector<std::uint64_t> class_sizes() const {
        std::vector<std::uint64_t> sizes(m(), 0);
        for (auto c : classes_) ++sizes[c];
        return sizes;
    }

    bool operator==(const VertexPartition& o) const {
        return m() == o.m() && n() == o.n() && classes_ == o.classes_;
    }

  private:
    HammingSpace space_;
    std::vector<std::uint8_t> classes_;
};

/// Class k = f^{-1}(k).
inline VertexPartition from_function(const MAryFunction& f, const Limits& limits = {}) {
    const MAryFunction g = f.densified(limits);
    return VertexPartition(g.m(), g.n(), g.table());
}

/// f(x) = class of x.
inline MAryFunction to_function(const VertexPartition& p, Alphabet alphabet = Alphabet::unity) {
    return MAryFunction::dense(p.m(), p.n(), alphabet, p.classes());
}

/// rho: a vertex of colour j moves from class k to class k + j mod m.
inline VertexPartition rotate(const VertexPartition& p) {
    const auto& space = p.space();
    const int m = p.m();
    std::vector<std::uint8_t> out(space.size());
    Vertex x(p.n(), 0);
    for (std::uint64_t i = 0; i < space.size(); ++i, space.next(x))
        out[i] = static_cast<std::uint8_t>((p[i] + color_class(x, m)) % m);
    return VertexPartition(m, p.n(), std::move(out));
}

struct DegreeStats {
    int m = 0;
    int n = 0;
    std::vector<std::uint64_t> size;  // |V_k|
    std::vector<int> min_degree;      // delta(H_k), kDegreePlusInf when empty
    std::vector<int> max_degree;      // Delta(H_k), kDegreeMinusInf when empty

    int min_delta() const { return *std::min_element(min_degree.begin(), min_degree.end()); }
    int max_Delta() const { return *std::max_element(max_degree.begin(), max_degree.end()); }

    /// (m-1)n - min_k delta(H_k): the sensitivity of the associated function.
    int sensitivity_value() const { return (m - 1) * n - min_delta(); }
};

namespace detail {

// Per-vertex number of neighbours in the same class.
inline std::vector<int> same_class_degrees(const VertexPartition& p) {
    const auto& space = p.space();
    const int m = p.m();
    std::vector<int> deg(space.size(), 0);
    for (std::uint64_t i = 0; i < space.size(); ++i) {
        const int c = p[i];
        int d = 0;
        for (int j = 0; j < p.n(); ++j) {
            const int xj = space.digit(i, j);
            const std::uint64_t base = i - static_cast<std::uint64_t>(xj) * space.stride(j);
            for (int v = 0; v < m; ++v)
                if (v != xj && p[base + v * space.stride(j)] == c) ++d;
        }
        deg[i] = d;
    }
    return deg;
}

}  // namespace detail

inline DegreeStats degree_stats(const VertexPartition& p) {
    DegreeStats s;
    s.m = p.m();
    s.n = p.n();
    s.size.assign(p.m(), 0);
    s.min_degree.assign(p.m(), kDegreePlusInf);
    s.max_degree.assign(p.m(), kDegreeMinusInf);
    const auto deg = detail::same_class_degrees(p);
    for (std::uint64_t i = 0; i < deg.size(); ++i) {
        const int c = p[i];
        ++s.size[c];
        s.min_degree[c] = std::min(s.min_degree[c], deg[i]);
        s.max_degree[c] = std::max(s.max_degree[c], deg[i]);
    }
    return s;
}

/// sum_k sizes[k] eps^k in canonical form.
inline CycInt imbalance_of_sizes(int m, std::span<const std::uint64_t> sizes) {
    std::vector<BigInt> raw(sizes.begin(), sizes.end());
    return cyc_reduce(m, raw);
}

/// sum_k |V_k| eps^k of p, or of rotate(p) when `rotated`.
inline CycInt imbalance(const VertexPartition& p, bool rotated) {
    const auto sizes = rotated ? rotate(p).class_sizes() : p.class_sizes();
    return imbalance_of_sizes(p.m(), sizes);
}

/// (m-1)n - min delta(P) >= max Delta(rho(P)); equality when m = 2.
struct DualityCheck {
    int lhs = 0;
    int rhs = 0;
    bool inequality_holds = false;
    bool equality_holds = false;
    bool equality_required = false;

    bool holds() const { return inequality_holds && (!equality_required || equality_holds); }
};

inline DualityCheck rotation_duality_check(const VertexPartition& p) {
    DualityCheck r;
    r.lhs = degree_stats(p).sensitivity_value();
    r.rhs = degree_stats(rotate(p)).max_Delta();
    r.inequality_holds = r.lhs >= r.rhs;
    r.equality_holds = r.lhs == r.rhs;
    r.equality_required = p.m() == 2;
    return r;
}

/// Instance-level check of the equivalence between full-degree functions and
/// partitions with nonzero rotated imbalance, over every function on H(n,m).
struct EquivalenceReport {
    int m = 0;
    int n = 0;
    std::uint64_t functions = 0;
    std::uint64_t full_degree = 0;  // functions with deg = (m-1)n
    std::uint64_t imbalanced = 0;   // partitions with rotated imbalance != 0
    std::optional<int> min_sensitivity_full_degree;  // A
    std::optional<int> min_partition_value;          // B
    std::uint64_t predicate_failures = 0;  // deg=(m-1)n <=> E(f_eps) != 0 <=> rotated imbalance != 0
    std::uint64_t formula_failures = 0;    // s(f) != (m-1)n - min delta

    bool holds() const {
        return predicate_failures == 0 && formula_failures == 0 &&
               min_sensitivity_full_degree == min_partition_value;
    }
};

inline EquivalenceReport equivalence_exhaustive(int m, int n, const Limits& limits = {}) {
    const std::uint64_t size = dense_size(m, n, limits.max_dense, "equivalence_exhaustive");
    const std::uint64_t count = checked_pow(m, static_cast<int>(size));
    if (count == 0 || count > limits.function_budget / size)
        throw CapacityExceeded("equivalence_exhaustive: " + std::to_string(m) + "^" +
                               std::to_string(size) + " functions exceed the budget of " +
                               std::to_string(limits.function_budget) + " table entries");

    EquivalenceReport r;
    r.m = m;
    r.n = n;
    const int full = (m - 1) * n;
    std::vector<std::uint8_t> table(size, 0);
    for (std::uint64_t k = 0; k < count; ++k) {
        const MAryFunction f = MAryFunction::dense(m, n, Alphabet::unity, table);
        const VertexPartition p(m, n, table);
        const int deg = degree(f, limits);
        const int s = sensitivity(f, limits);
        const DegreeStats stats = degree_stats(p);
        const bool rot_imbalanced = !imbalance(p, true).is_zero();
        const bool avg_nonzero = !average(shift_function(f, 1), limits).is_zero();

        ++r.functions;
        if (s != stats.sensitivity_value()) ++r.formula_failures;
        if ((deg == full) != rot_imbalanced || rot_imbalanced != avg_nonzero) ++r.predicate_failures;
        if (deg == full) {
            ++r.full_degree;
            r.min_sensitivity_full_degree =
                std::min(r.min_sensitivity_full_degree.value_or(s), s);
        }
        if (rot_imbalanced) {
            ++r.imbalanced;
            const int v = stats.sensitivity_value();
            r.min_partition_value = std::min(r.min_partition_value.value_or(v), v);
        }
        // odometer
        for (std::uint64_t i = 0; i < size; ++i) {
            if (++table[i] < m) break;
            table[i] = 0;
        }
    }
    return r;
}

}  // namespace msens
