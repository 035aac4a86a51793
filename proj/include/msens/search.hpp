#pragma once

// Search for partitions of H(n,m) into m induced subgraphs that keep the
// largest class degree max_k Delta(H_k) small while satisfying an imbalance
// constraint on the class sizes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <optional>
#include <vector>

#include "msens/common.hpp"
#include "msens/exact_arith.hpp"
#include "msens/partition.hpp"

namespace msens {

enum class Constraint {
    strong,    // sum_k |V_k| eps^k != 0
    rotated,   // sum_k |rho(V_k)| eps^k != 0
    unequal,   // class sizes not all equal
};

inline std::string to_string(Constraint c) {
    switch (c) {
        case Constraint::strong: return "strong";
        case Constraint::rotated: return "rotated";
        case Constraint::unequal: return "unequal";
    }
    return "?";
}

inline Constraint parse_constraint(const std::string& s) {
    if (s == "strong") return Constraint::strong;
    if (s == "rotated") return Constraint::rotated;
    if (s == "unequal") return Constraint::unequal;
    throw InvalidParameter("unknown constraint '" + s + "' (expected strong|rotated|unequal)");
}

enum class StartKind { random, single_class };

struct SearchTask {
    int m = 3;
    int n = 2;
    Constraint constraint = Constraint::strong;
    std::uint64_t budget = 20000;  // annealing moves per chain
    std::uint64_t seed = 1;
    int chains = 1;
    int threads = 1;
    double t_start = 1.0;
    double t_decay = 0.0;  // per-move factor; 0 picks one that ends near t_start/100
    StartKind start = StartKind::random;
};

struct SearchResult {
    int m = 0;
    int n = 0;
    Constraint constraint = Constraint::strong;
    std::optional<VertexPartition> best;
    int objective = kDegreeMinusInf;  // max_k Delta(H_k) of `best`
    CycInt certificate;               // the constrained sum (sizes as integers for `unequal`)
    std::vector<std::pair<std::uint64_t, int>> trace;  // (move, objective) on improvement
    std::string method;

    bool found() const { return best.has_value(); }
};

/// The quantity that the constraint requires to be nonzero.
inline CycInt constraint_certificate(const VertexPartition& p, Constraint c) {
    switch (c) {
        case Constraint::strong: return imbalance(p, false);
        case Constraint::rotated: return imbalance(p, true);
        case Constraint::unequal: {
            // sum_k (m |V_k| - m^n)^2: zero iff all sizes are equal
            const auto sizes = p.class_sizes();
            BigInt sq = 0;
            for (auto s : sizes) {
                const BigInt d = BigInt(s) * p.m() - BigInt(p.space().size());
                sq += d * d;
            }
            return CycInt::integer(p.m(), sq);
        }
    }
    return CycInt::zero(p.m());
}

inline bool satisfies(const VertexPartition& p, Constraint c) {
    return !constraint_certificate(p, c).is_zero();
}

namespace detail {

inline bool sizes_satisfy(int m, std::span<const std::uint64_t> sizes, Constraint c) {
    if (c == Constraint::unequal) {
        return std::adjacent_find(sizes.begin(), sizes.end(), std::not_equal_to<>()) != sizes.end();
    }
    std::vector<long long> raw(sizes.begin(), sizes.end());
    return !group_ring_is_zero(m, raw);
}

}  // namespace detail

/// Global optimum over all m^(m^n) partitions.
inline SearchResult exhaustive_search(const SearchTask& task, const Limits& limits = {}) {
    const int m = task.m, n = task.n;
    const std::uint64_t size = dense_size(m, n, limits.max_dense, "exhaustive_search");
    const std::uint64_t count = checked_pow(m, static_cast<int>(size));
    if (count == 0 || count > limits.function_budget / size)
        throw CapacityExceeded("exhaustive_search: " + std::to_string(m) + "^" +
                               std::to_string(size) + " partitions exceed the budget of " +
                               std::to_string(limits.function_budget) + " table entries");

    SearchResult r;
    r.m = m;
    r.n = n;
    r.constraint = task.constraint;
    r.method = "exhaustive";
    std::vector<std::uint8_t> table(size, 0);
    for (std::uint64_t k = 0; k < count; ++k) {
        const VertexPartition p(m, n, table);
        if (satisfies(p, task.constraint)) {
            const int obj = degree_stats(p).max_Delta();
            if (!r.best || obj < r.objective) {
                r.best = p;
                r.objective = obj;
                r.trace.emplace_back(k, obj);
            }
        }
        for (std::uint64_t i = 0; i < size; ++i) {
            if (++table[i] < m) break;
            table[i] = 0;
        }
    }
    if (r.best) r.certificate = constraint_certificate(*r.best, task.constraint);
    return r;
}

namespace detail {

// Incremental state for single-vertex reassignment moves.
class AnnealState {
  public:
    AnnealState(const VertexPartition& p, Constraint c)
        : space_(p.space()), m_(p.m()), n_(p.n()), constraint_(c), cls_(p.classes()),
          deg_(same_class_degrees(p)), hist_((m_ - 1) * n_ + 1, 0), sizes_(m_, 0),
          rot_sizes_(m_, 0), color_(space_.size()) {
        Vertex x(n_, 0);
        for (std::uint64_t i = 0; i < space_.size(); ++i, space_.next(x)) {
            color_[i] = static_cast<std::uint8_t>(color_class(x, m_));
            ++hist_[deg_[i]];
            ++sizes_[cls_[i]];
            ++rot_sizes_[(cls_[i] + color_[i]) % m_];
        }
    }

    std::uint64_t size() const { return space_.size(); }
    int cls(std::uint64_t v) const { return cls_[v]; }

    int max_degree() const {
        for (int d = static_cast<int>(hist_.size()) - 1; d >= 0; --d)
            if (hist_[d] > 0) return d;
        return 0;
    }

    /// Energy: max degree first, then how many vertices attain it.
    double energy() const {
        const int d = max_degree();
        return d * static_cast<double>(space_.size() + 1) + static_cast<double>(hist_[d]);
    }

    bool feasible() const {
        return sizes_satisfy(m_, constraint_ == Constraint::rotated ? rot_sizes_ : sizes_,
                             constraint_);
    }

    bool move_feasible(std::uint64_t v, int to) {
        const int from = cls_[v];
        auto& sz = constraint_ == Constraint::rotated ? rot_sizes_ : sizes_;
        const int c = constraint_ == Constraint::rotated ? color_[v] : 0;
        --sz[(from + c) % m_];
        ++sz[(to + c) % m_];
        const bool ok = sizes_satisfy(m_, sz, constraint_);
        ++sz[(from + c) % m_];
        --sz[(to + c) % m_];
        return ok;
    }

    void move(std::uint64_t v, int to) {
        const int from = cls_[v];
        if (from == to) return;
        int new_deg = 0;
        for (int j = 0; j < n_; ++j) {
            const int xj = space_.digit(v, j);
            const std::uint64_t base = v - static_cast<std::uint64_t>(xj) * space_.stride(j);
            for (int u = 0; u < m_; ++u) {
                if (u == xj) continue;
                const std::uint64_t w = base + u * space_.stride(j);
                if (cls_[w] == from) bump(w, -1);
                else if (cls_[w] == to) {
                    bump(w, +1);
                    ++new_deg;
                }
            }
        }
        --hist_[deg_[v]];
        deg_[v] = new_deg;
        ++hist_[new_deg];
        --sizes_[from];
        ++sizes_[to];
        --rot_sizes_[(from + color_[v]) % m_];
        ++rot_sizes_[(to + color_[v]) % m_];
        cls_[v] = static_cast<std::uint8_t>(to);
    }

    VertexPartition partition() const { return VertexPartition(m_, n_, cls_); }

  private:
    void bump(std::uint64_t w, int delta) {
        --hist_[deg_[w]];
        deg_[w] += delta;
        ++hist_[deg_[w]];
    }

    HammingSpace space_;
    int m_, n_;
    Constraint constraint_;
    std::vector<std::uint8_t> cls_;
    std::vector<int> deg_;
    std::vector<std::uint64_t> hist_;
    std::vector<std::uint64_t> sizes_;
    std::vector<std::uint64_t> rot_sizes_;
    std::vector<std::uint8_t> color_;
};

inline VertexPartition initial_partition(const SearchTask& task, std::mt19937_64& rng,
                                         const Limits& limits) {
    const int m = task.m, n = task.n;
    const std::uint64_t size = dense_size(m, n, limits.max_dense, "anneal_search");
    HammingSpace space(m, n);
    // single class; for the rotated constraint use its preimage under rho,
    // whose rotation is the single class
    auto single = [&] {
        std::vector<std::uint8_t> cls(size, 0);
        if (task.constraint == Constraint::rotated) {
            Vertex x(n, 0);
            for (std::uint64_t i = 0; i < size; ++i, space.next(x))
                cls[i] = static_cast<std::uint8_t>(mod(-color_class(x, m), m));
        }
        return VertexPartition(m, n, std::move(cls));
    };
    if (task.start == StartKind::single_class) return single();
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::vector<std::uint8_t> cls(size);
        for (auto& c : cls) c = static_cast<std::uint8_t>(pick(rng));
        VertexPartition p(m, n, std::move(cls));
        if (satisfies(p, task.constraint)) return p;
    }
    return single();
}

inline SearchResult anneal_chain(const SearchTask& task, std::uint64_t chain_seed,
                                 const Limits& limits) {
    std::mt19937_64 rng(chain_seed);
    AnnealState state(initial_partition(task, rng, limits), task.constraint);

    SearchResult r;
    r.m = task.m;
    r.n = task.n;
    r.constraint = task.constraint;
    r.method = "anneal";
    if (state.feasible()) {
        r.best = state.partition();
        r.objective = state.max_degree();
        r.trace.emplace_back(0, r.objective);
    }

    const double t_end = task.t_start / 100.0;
    const double decay =
        task.t_decay > 0.0
            ? task.t_decay
            : (task.budget > 0 ? std::pow(t_end / task.t_start, 1.0 / static_cast<double>(task.budget))
                               : 1.0);
    double temp = task.t_start;
    std::uniform_int_distribution<std::uint64_t> pick_vertex(0, state.size() - 1);
    std::uniform_int_distribution<int> pick_shift(1, task.m - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double scale = static_cast<double>(state.size() + 1);

    for (std::uint64_t step = 1; step <= task.budget; ++step, temp *= decay) {
        const std::uint64_t v = pick_vertex(rng);
        const int from = state.cls(v);
        const int to = (from + pick_shift(rng)) % task.m;
        if (!state.move_feasible(v, to)) continue;
        const double before = state.energy();
        state.move(v, to);
        const double delta = (state.energy() - before) / scale;
        if (delta > 0 && unit(rng) >= std::exp(-delta / temp)) {
            state.move(v, from);
            continue;
        }
        const int obj = state.max_degree();
        if (!r.best || obj < r.objective) {
            r.best = state.partition();
            r.objective = obj;
            r.trace.emplace_back(step, obj);
        }
    }
    if (r.best) r.certificate = constraint_certificate(*r.best, task.constraint);
    return r;
}

// splitmix64 step, used to derive independent chain seeds from the master seed
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t chain) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (chain + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Simulated annealing with single-vertex class reassignment. Moves that break
/// the constraint are rejected. Chains are merged by (objective, chain index).
inline SearchResult anneal_search(const SearchTask& task, const Limits& limits = {}) {
    const int chains = std::max(1, task.chains);
    std::vector<SearchResult> results(chains);
    auto run = [&](int c) { results[c] = detail::anneal_chain(task, detail::derive_seed(task.seed, c), limits); };
    const int workers = std::clamp(task.threads, 1, chains);
    if (workers == 1) {
        for (int c = 0; c < chains; ++c) run(c);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int c = w; c < chains; c += workers) run(c);
            });
        for (auto& t : pool) t.join();
    }
    int best = -1;
    for (int c = 0; c < chains; ++c) {
        if (!results[c].found()) continue;
        if (best < 0 || results[c].objective < results[best].objective) best = c;
    }
    if (best < 0) return results.front();
    return results[best];
}

struct TableRow {
    int m = 0;
    int n = 0;
    Constraint constraint = Constraint::strong;
    std::string method;
    int objective = 0;
    std::string certificate;
    int sqrt_n_ceiling = 0;
};

/// One row per result, best objective kept per (m, n, constraint).
inline std::vector<TableRow> tabulate(const std::vector<SearchResult>& results) {
    std::vector<TableRow> rows;
    for (const auto& r : results) {
        if (!r.found()) continue;
        auto it = std::find_if(rows.begin(), rows.end(), [&](const TableRow& row) {
            return row.m == r.m && row.n == r.n && row.constraint == r.constraint;
        });
        TableRow row{r.m, r.n, r.constraint, r.method, r.objective, r.certificate.to_string(),
                     static_cast<int>(std::ceil(std::sqrt(static_cast<double>(r.n)) - 1e-9))};
        if (it == rows.end()) {
            rows.push_back(std::move(row));
        } else if (r.objective < it->objective) {
            *it = std::move(row);
        }
    }
    std::sort(rows.begin(), rows.end(), [](const TableRow& a, const TableRow& b) {
        return std::tie(a.m, a.n, a.constraint) < std::tie(b.m, b.n, b.constraint);
    });
    return rows;
}

inline std::string render_table(const std::vector<TableRow>& rows) {
    if (rows.empty()) return {};
    std::ostringstream os;
    os << std::left << std::setw(4) << "m" << std::setw(4) << "n" << std::setw(10) << "constraint"
       << std::setw(12) << "method" << std::setw(10) << "maxDelta" << std::setw(10) << "ceil(sqrt n)"
       << "  certificate\n";
    for (const auto& r : rows)
        os << std::left << std::setw(4) << r.m << std::setw(4) << r.n << std::setw(10)
           << to_string(r.constraint) << std::setw(12) << r.method << std::setw(10) << r.objective
           << std::setw(12) << r.sqrt_n_ceiling << "  " << r.certificate << "\n";
    return os.str();
}

}  // namespace msens
