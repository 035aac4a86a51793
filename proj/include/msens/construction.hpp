#pragma once

// Filter construction over a block partition {A_1,...,A_k} of the coordinates.
//
// F_i is the up-closure of {A_1^(i), ..., A_k^(i)}: x is in F_i iff some block
// has all of its coordinates >= i. Hence the class of x (G_i = F_i \ F_{i+1},
// G_0 = complement of F_1, G_{m-1} = F_{m-1}) is its level
//     level(x) = max_j min_{a in A_j} x_a.
//
// Class/colour counts are obtained analytically by cyclic convolution of
// per-block residue profiles, so n = 36 (3^36 vertices) needs no enumeration.

#include <algorithm>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "msens/common.hpp"
#include "msens/exact_arith.hpp"
#include "msens/function.hpp"
#include "msens/partition.hpp"

namespace msens {

class BlockPartition {
  public:
    BlockPartition(int n, std::vector<std::vector<int>> blocks) : n_(n), blocks_(std::move(blocks)) {
        if (n < 1) throw InvalidParameter("block partition: n must be >= 1");
        if (blocks_.empty()) throw InvalidParameter("block partition: need at least one block");
        std::vector<char> seen(n, 0);
        for (const auto& b : blocks_) {
            if (b.empty()) throw InvalidParameter("block partition: empty block");
            for (int a : b) {
                if (a < 0 || a >= n)
                    throw InvalidParameter("block partition: coordinate " + std::to_string(a + 1) +
                                           " out of range");
                if (seen[a]) throw InvalidParameter("block partition: blocks overlap");
                seen[a] = 1;
            }
        }
        if (std::find(seen.begin(), seen.end(), 0) != seen.end())
            throw InvalidParameter("block partition: blocks do not cover [n]");
    }

    /// Consecutive coordinate ranges of the given sizes.
    static BlockPartition from_sizes(std::span<const int> sizes) {
        std::vector<std::vector<int>> blocks;
        int next = 0;
        for (int s : sizes) {
            if (s < 1) throw InvalidParameter("block partition: block sizes must be >= 1");
            std::vector<int> b(s);
            std::iota(b.begin(), b.end(), next);
            next += s;
            blocks.push_back(std::move(b));
        }
        return BlockPartition(next, std::move(blocks));
    }

    /// N blocks of size N on n = N^2 coordinates.
    static BlockPartition balanced_square(int N) {
        return from_sizes(std::vector<int>(N, N));
    }

    int n() const { return n_; }
    int k() const { return static_cast<int>(blocks_.size()); }
    const std::vector<std::vector<int>>& blocks() const { return blocks_; }

    std::vector<int> sizes() const {
        std::vector<int> s;
        for (const auto& b : blocks_) s.push_back(static_cast<int>(b.size()));
        return s;
    }

    int max_block() const {
        int r = 0;
        for (const auto& b : blocks_) r = std::max(r, static_cast<int>(b.size()));
        return r;
    }

  private:
    int n_;
    std::vector<std::vector<int>> blocks_;
};

/// max over blocks of the minimum coordinate inside the block.
inline int level(std::span<const int> x, const BlockPartition& bp) {
    if (static_cast<int>(x.size()) != bp.n())
        throw InvalidParameter("level: vertex length does not match the block partition");
    int best = 0;
    for (const auto& b : bp.blocks()) {
        int lo = std::numeric_limits<int>::max();
        for (int a : b) lo = std::min(lo, x[a]);
        best = std::max(best, lo);
    }
    return best;
}

/// Dense partition {G_0,...,G_{m-1}} for tabulable (m, n).
inline VertexPartition construction_partition(int m, const BlockPartition& bp,
                                              const Limits& limits = {}) {
    const auto size = dense_size(m, bp.n(), limits.max_dense, "construction_partition");
    HammingSpace space(m, bp.n());
    std::vector<std::uint8_t> classes(size);
    Vertex x(bp.n(), 0);
    for (std::uint64_t i = 0; i < size; ++i, space.next(x))
        classes[i] = static_cast<std::uint8_t>(level(x, bp));
    return VertexPartition(m, bp.n(), std::move(classes));
}

struct MinDegreeFormula {
    std::vector<long long> delta;  // delta(G_i), i = 0..m-1
    long long headline = 0;        // (m-1)n - min_i delta(G_i)
    long long headline_closed = 0; // (m-1) max(k, |A_1|, ..., |A_k|)
};

/// delta(G_i) = (m-1)(n-k) + i(k - max|A_j|).
inline MinDegreeFormula min_degree_formula(const BlockPartition& bp, int m) {
    check_modulus(m);
    MinDegreeFormula r;
    const long long n = bp.n(), k = bp.k(), amax = bp.max_block();
    for (int i = 0; i < m; ++i) r.delta.push_back((m - 1) * (n - k) + i * (k - amax));
    r.headline = (m - 1) * n - *std::min_element(r.delta.begin(), r.delta.end());
    r.headline_closed = (m - 1) * std::max(k, amax);
    return r;
}

/// counts[s] = number of counted objects whose coordinate sum is = s mod m.
struct ResidueProfile {
    int m = 0;
    std::vector<BigInt> counts;

    BigInt total() const {
        BigInt t = 0;
        for (const auto& c : counts) t += c;
        return t;
    }

    ResidueProfile& operator-=(const ResidueProfile& o) {
        for (int s = 0; s < m; ++s) counts[s] -= o.counts[s];
        return *this;
    }

    bool operator==(const ResidueProfile&) const = default;
};

inline ResidueProfile unit_profile(int m) {
    ResidueProfile p{m, std::vector<BigInt>(m, BigInt(0))};
    p.counts[0] = 1;
    return p;
}

/// Cyclic convolution: the profile of concatenated independent choices.
inline ResidueProfile convolve(const ResidueProfile& a, const ResidueProfile& b) {
    if (a.m != b.m) throw InvalidParameter("convolve: modulus mismatch");
    ResidueProfile r{a.m, std::vector<BigInt>(a.m, BigInt(0))};
    for (int s = 0; s < a.m; ++s) {
        if (a.counts[s] == 0) continue;
        for (int t = 0; t < a.m; ++t) r.counts[(s + t) % a.m] += a.counts[s] * b.counts[t];
    }
    return r;
}

/// Profile of the box [lo,hi]^len, by len cyclic convolutions.
inline ResidueProfile residue_profile(int m, int lo, int hi, int len) {
    check_modulus(m);
    if (len < 0) throw InvalidParameter("residue_profile: len must be >= 0");
    if (lo < 0 || hi > m - 1 || lo > hi)
        throw InvalidParameter("residue_profile: need 0 <= lo <= hi <= m-1");
    ResidueProfile step{m, std::vector<BigInt>(m, BigInt(0))};
    for (int v = lo; v <= hi; ++v) step.counts[v] += 1;
    ResidueProfile r = unit_profile(m);
    for (int i = 0; i < len; ++i) r = convolve(r, step);
    return r;
}

/// H_s^l = #{x in [0,m-2]^l : sum x = s mod m}, by the four-case closed form.
inline BigInt h_closed_form(int m, int l, long long s) {
    check_modulus(m);
    if (l < 1) throw InvalidParameter("h_closed_form: l must be >= 1");
    const BigInt m1 = m - 1;
    const bool hit = mod(s + l, m) == 0;
    BigInt base = 0;
    if (l % 2 == 0) {
        for (int i = 0; i <= (l - 2) / 2; ++i) base += big_pow(m1, 2 * i);
        return base * (m - 2) + (hit ? 1 : 0);
    }
    for (int i = 0; i <= (l - 3) / 2; ++i) base += big_pow(m1, 2 * i + 1);
    return base * (m - 2) + (hit ? 0 : 1);
}

/// C(M, N) mod p by Lucas' theorem.
inline int lucas_binomial(std::uint64_t M, std::uint64_t N, int p) {
    if (p < 2 || !is_prime(static_cast<std::uint64_t>(p)))
        throw InvalidParameter("lucas_binomial: p = " + std::to_string(p) + " is not prime");
    // small binomials mod p from one Pascal table
    std::vector<std::vector<int>> pascal(p, std::vector<int>(p, 0));
    for (int a = 0; a < p; ++a) {
        pascal[a][0] = 1;
        for (int b = 1; b <= a; ++b) pascal[a][b] = (pascal[a - 1][b - 1] + pascal[a - 1][b]) % p;
    }
    long long r = 1;
    while (M > 0 || N > 0) {
        const int md = static_cast<int>(M % p), nd = static_cast<int>(N % p);
        if (nd > md) return 0;
        r = r * pascal[md][nd] % p;
        M /= p;
        N /= p;
    }
    return static_cast<int>(r);
}

/// Multinomial (N_1 + ... + N_s choose N_1, ..., N_s) mod p, as a product of
/// Lucas binomials.
inline int lucas_multinomial(std::span<const std::uint64_t> parts, int p) {
    std::uint64_t total = 0;
    long long r = 1;
    for (std::uint64_t part : parts) {
        total += part;
        r = r * lucas_binomial(total, part, p) % p;
    }
    return static_cast<int>(r);
}

/// Delta_{t,s}^N = #{x in [0,t]^N \ [1,t]^N : sum x = s mod p}.
/// Throws std::logic_error if the count is not a multiple of p.
inline BigInt delta_count(int p, int t, int N, long long s) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
        throw InvalidParameter("delta_count: p must be a prime >= 3");
    if (t < 1 || t > p - 2) throw InvalidParameter("delta_count: t must lie in [1, p-2]");
    if (N < 1 || N % (p * (p - 1)) != 0)
        throw InvalidParameter("delta_count: N must be a positive multiple of p(p-1)");
    ResidueProfile d = residue_profile(p, 0, t, N);
    d -= residue_profile(p, 1, t, N);
    const BigInt value = d.counts[mod(s, p)];
    if (value % p != 0)
        throw std::logic_error("delta_count: " + value.str() + " is not a multiple of " +
                               std::to_string(p));
    return value;
}

/// Divisibility items for a prime p >= 3, recomputed from the counts.
struct ProofItems {
    BigInt item_i;   // |rho(V_{p-1}) n V_{p-1}| - |rho(V_1) n V_{p-1}|
    BigInt item_ii;  // |rho(V_{p-1}) n V_0| - |rho(V_1) n V_0|
    bool item_i_holds = false;    // item_i in {-1, +1}
    bool item_ii_holds = false;   // item_ii == 0
    bool item_iii_holds = false;  // |D_s n V(G_j)| = 0 mod p, 1 <= j <= p-2
    BigInt rotated_difference;    // |rho(V_{p-1})| - |rho(V_1)|
    bool congruence_holds = false;  // rotated_difference = +-1 mod p

    bool holds() const { return item_i_holds && item_ii_holds && item_iii_holds && congruence_holds; }
};

struct ConstructionReport {
    int m = 0;
    int n = 0;
    std::vector<int> block_sizes;
    std::vector<std::vector<BigInt>> counts;  // counts[s][j] = |D_s n V(G_j)|
    std::vector<BigInt> class_sizes;          // |V(G_j)|
    std::vector<BigInt> rotated_sizes;        // |rho(V(G_k))|
    CycInt imbalance;                         // sum_k |rho(V(G_k))| eps^k
    MinDegreeFormula formula;
    long long sensitivity_value = 0;  // (m-1)n - min delta
    std::optional<ProofItems> items;  // prime m >= 3 only

    BigInt total() const {
        BigInt t = 0;
        for (const auto& c : class_sizes) t += c;
        return t;
    }
};

namespace detail {

inline ResidueProfile product_profile(int m, const std::vector<ResidueProfile>& per_block) {
    ResidueProfile r = unit_profile(m);
    for (const auto& p : per_block) r = convolve(r, p);
    return r;
}

}  // namespace detail

/// |D_s n V(G_j)| for every s, j, plus everything derived from it.
inline ConstructionReport class_residue_counts(const BlockPartition& bp, int m) {
    check_modulus(m);
    ConstructionReport r;
    r.m = m;
    r.n = bp.n();
    r.block_sizes = bp.sizes();

    // at_most[i][s] = #{x : every block has min <= i, sum x = s}
    std::vector<ResidueProfile> at_most;
    for (int i = 0; i < m; ++i) {
        std::vector<ResidueProfile> per_block;
        for (int a : r.block_sizes) {
            ResidueProfile p = residue_profile(m, 0, m - 1, a);
            if (i + 1 <= m - 1) p -= residue_profile(m, i + 1, m - 1, a);
            per_block.push_back(std::move(p));
        }
        at_most.push_back(detail::product_profile(m, per_block));
    }

    r.counts.assign(m, std::vector<BigInt>(m, BigInt(0)));
    r.class_sizes.assign(m, BigInt(0));
    for (int s = 0; s < m; ++s) {
        for (int j = 0; j < m; ++j) {
            r.counts[s][j] = at_most[j].counts[s] - (j > 0 ? at_most[j - 1].counts[s] : BigInt(0));
            r.class_sizes[j] += r.counts[s][j];
        }
    }
    // rho(V_k) n V_t = D_{k-t} n V_t
    r.rotated_sizes.assign(m, BigInt(0));
    for (int k = 0; k < m; ++k)
        for (int t = 0; t < m; ++t) r.rotated_sizes[k] += r.counts[mod(k - t, m)][t];
    r.imbalance = cyc_reduce(m, r.rotated_sizes);

    r.formula = min_degree_formula(bp, m);
    r.sensitivity_value = r.formula.headline;

    if (m >= 3 && is_prime(static_cast<std::uint64_t>(m))) {
        const int p = m;
        ProofItems it;
        it.item_i = r.counts[0][p - 1] - r.counts[2 % p][p - 1];
        it.item_ii = r.counts[p - 1][0] - r.counts[1][0];
        it.item_i_holds = it.item_i == 1 || it.item_i == -1;
        it.item_ii_holds = it.item_ii == 0;
        it.item_iii_holds = true;
        for (int j = 1; j <= p - 2; ++j)
            for (int s = 0; s < p; ++s)
                if (r.counts[s][j] % p != 0) it.item_iii_holds = false;
        it.rotated_difference = r.rotated_sizes[p - 1] - r.rotated_sizes[1];
        BigInt residue = it.rotated_difference % p;
        if (residue < 0) residue += p;
        it.congruence_holds = residue == 1 || residue == p - 1;
        r.items = std::move(it);
    }
    return r;
}

/// The p-ary function on n = N^2 variables with s(f) = sqrt((p-1) deg(f)),
/// together with its degree certificate and a maximally sensitive vertex.
struct SeparationWitness {
    int p = 0;
    int N = 0;
    int n = 0;
    MAryFunction function;
    ConstructionReport report;
    CycInt certificate;          // rotated imbalance; nonzero certifies deg = (p-1)n
    long long degree = 0;        // (p-1)n when the certificate is nonzero
    long long sensitivity = 0;   // (p-1)N, analytic
    Vertex witness;              // block A_1 at p-1, everything else 0
    int witness_sensitivity = 0; // oracle-computed s_witness(f)

    bool degree_certified() const { return !certificate.is_zero(); }
};

inline SeparationWitness separation_function(int p, int N) {
    if (p < 3 || !is_prime(static_cast<std::uint64_t>(p)))
        throw InvalidParameter("separation_function: p must be a prime >= 3");
    if (N < 1 || N % (p * (p - 1)) != 0)
        throw InvalidParameter("separation_function: N must be a positive multiple of p(p-1)");
    const BlockPartition bp = BlockPartition::balanced_square(N);
    const int n = N * N;
    auto f = MAryFunction::from_oracle(p, n, Alphabet::unity,
                                       [bp](std::span<const int> x) { return level(x, bp); });
    ConstructionReport report = class_residue_counts(bp, p);
    CycInt cert = report.imbalance;
    const bool certified = !cert.is_zero();

    Vertex w(n, 0);
    for (int a : bp.blocks().front()) w[a] = p - 1;
    const int ws = local_sensitivity(f, w);

    return SeparationWitness{p,
                             N,
                             n,
                             std::move(f),
                             std::move(report),
                             std::move(cert),
                             certified ? static_cast<long long>(p - 1) * n : 0,
                             static_cast<long long>(p - 1) * N,
                             std::move(w),
                             ws};
}

}  // namespace msens
