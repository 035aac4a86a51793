#pragma once

// Acceptance suites. Each criterion returns one pass/fail record; a criterion
// with a runtime ceiling fails when the ceiling is exceeded.

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "msens/common.hpp"
#include "msens/construction.hpp"
#include "msens/exact_arith.hpp"
#include "msens/function.hpp"
#include "msens/partition.hpp"
#include "msens/representation.hpp"
#include "msens/search.hpp"

namespace msens {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    double limit_seconds = 0.0;  // 0 = no ceiling
};

struct VerifyOptions {
    Limits limits;
    std::uint64_t seed = 1;
    int threads = 1;
    int m = 0;  // suite-specific override, 0 = default instance
    int n = 0;
};

namespace detail {

class Checker {
  public:
    void expect(bool ok, const std::string& what) {
        if (ok) return;
        ++failures_;
        if (failures_ <= 5) notes_ << (notes_.tellp() > 0 ? "; " : "") << what;
    }
    void note(const std::string& s) { info_ << (info_.tellp() > 0 ? " " : "") << s; }
    bool ok() const { return failures_ == 0; }
    std::string detail() const {
        if (failures_ == 0) return info_.str();
        std::ostringstream os;
        os << failures_ << " failure(s): " << notes_.str();
        return os.str();
    }

  private:
    std::uint64_t failures_ = 0;
    std::ostringstream notes_;
    std::ostringstream info_;
};

inline CriterionResult timed(int id, std::string title, double limit,
                             const std::function<void(Checker&)>& body) {
    CriterionResult r;
    r.id = id;
    r.title = std::move(title);
    r.limit_seconds = limit;
    Checker c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && r.seconds > limit) {
        std::ostringstream os;
        os << "runtime " << r.seconds << " s exceeds " << limit << " s";
        c.expect(false, os.str());
    }
    r.passed = c.ok();
    r.detail = c.detail();
    return r;
}

inline MAryFunction random_function(int m, int n, Alphabet a, std::mt19937_64& rng) {
    HammingSpace space(m, n);
    std::uniform_int_distribution<int> label(0, m - 1);
    std::vector<std::uint8_t> t(space.size());
    for (auto& v : t) v = static_cast<std::uint8_t>(label(rng));
    return MAryFunction::dense(m, n, a, std::move(t));
}

inline VertexPartition random_partition(int m, int n, std::mt19937_64& rng) {
    return from_function(random_function(m, n, Alphabet::unity, rng));
}

}  // namespace detail

/// The tabulated nine-point function on {0,1,2}^2 with integer labels.
inline MAryFunction sample_function_function() {
    return MAryFunction::dense(3, 2, Alphabet::integer, {2, 0, 1, 2, 2, 1, 2, 2, 1});
}

inline CriterionResult verify_sample_function(const VerifyOptions& o = {}) {
    return detail::timed(1, "example function: deg=4 s=4 bs=2, interpolant, local values", 1.0,
                         [&](detail::Checker& c) {
        const MAryFunction f = sample_function_function();
        const int deg = degree(f, o.limits), s = sensitivity(f, o.limits),
                  bs = block_sensitivity(f, o.limits);
        c.expect(deg == 4, "deg=" + std::to_string(deg));
        c.expect(s == 4, "s=" + std::to_string(s));
        c.expect(bs == 2, "bs=" + std::to_string(bs));

        const RationalPolynomial p = interpolate_integer(f, o.limits);
        const std::map<std::vector<int>, BigRational> expected = {
            {{0, 0}, BigRational(2)},     {{1, 1}, BigRational(6)},
            {{0, 1}, BigRational(-7, 2)}, {{2, 1}, BigRational(-2)},
            {{2, 2}, BigRational(1)},     {{1, 2}, BigRational(-3)},
            {{0, 2}, BigRational(3, 2)},
        };
        c.expect(p.terms.size() == expected.size(),
                 "interpolant has " + std::to_string(p.terms.size()) + " terms");
        for (const auto& [e, v] : expected) {
            const BigRational* got = p.find(e);
            c.expect(got && *got == v, "coefficient of x1^" + std::to_string(e[0]) + " x2^" +
                                           std::to_string(e[1]));
        }
        c.expect(local_sensitivity(f, std::vector<int>{0, 1}) == 4, "s_(0,1) != 4");
        c.expect(local_block_sensitivity(f, std::vector<int>{1, 0}, o.limits) == 1, "bs_(1,0) != 1");
        c.expect(local_block_sensitivity(f, std::vector<int>{0, 1}, o.limits) == 2, "bs_(0,1) != 2");
        c.note("deg=" + std::to_string(deg) + " s=" + std::to_string(s) + " bs=" + std::to_string(bs));
    });
}

/// Every function on H(n,m): bounds chain, constant/top coefficient identities
/// and the full-degree / rotated-imbalance biconditional.
inline CriterionResult verify_equivalence(const VerifyOptions& o = {}) {
    const int m = o.m ? o.m : 3, n = o.n ? o.n : 2;
    std::ostringstream title;
    title << "exhaustive m=" << m << " n=" << n
          << ": bounds chain, coefficient identities, full-degree biconditional";
    return detail::timed(2, title.str(), 300.0, [&](detail::Checker& c) {
        const EquivalenceReport eq = equivalence_exhaustive(m, n, o.limits);
        c.expect(eq.predicate_failures == 0,
                 std::to_string(eq.predicate_failures) + " biconditional failures");
        c.expect(eq.formula_failures == 0, std::to_string(eq.formula_failures) + " formula failures");
        c.expect(eq.min_sensitivity_full_degree == eq.min_partition_value,
                 "min sensitivity at full degree differs from min partition value");

        const std::uint64_t size = HammingSpace(m, n).size();
        std::vector<std::uint8_t> table(size, 0);
        std::uint64_t bound_failures = 0, identity_failures = 0;
        for (std::uint64_t k = 0; k < eq.functions; ++k) {
            const MAryFunction f = MAryFunction::dense(m, n, Alphabet::unity, table);
            if (!bounds_report(f, o.limits).all_hold()) ++bound_failures;
            if (!top_coefficient_identity(f, o.limits).holds()) ++identity_failures;
            for (std::uint64_t i = 0; i < size; ++i) {
                if (++table[i] < m) break;
                table[i] = 0;
            }
        }
        c.expect(bound_failures == 0, std::to_string(bound_failures) + " bound failures");
        c.expect(identity_failures == 0, std::to_string(identity_failures) + " identity failures");
        std::ostringstream os;
        os << eq.functions << " functions, " << eq.full_degree << " of full degree, min s at full degree = "
           << (eq.min_sensitivity_full_degree ? std::to_string(*eq.min_sensitivity_full_degree) : "none");
        c.note(os.str());
    });
}

namespace detail {

// Every partition of Q_n, n = 1..3: n - min delta = max Delta of the rotation.
inline void boolean_duality(Checker& c, std::uint64_t* count) {
    for (int n = 1; n <= 3; ++n) {
        const std::uint64_t size = std::uint64_t{1} << n;
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << size); ++bits) {
            std::vector<std::uint8_t> t(size);
            for (std::uint64_t i = 0; i < size; ++i) t[i] = (bits >> i) & 1;
            const DualityCheck d = rotation_duality_check(VertexPartition(2, n, std::move(t)));
            c.expect(d.holds() && d.lhs == d.rhs, "n=" + std::to_string(n) + " partition " +
                                                     std::to_string(bits) + ": " +
                                                     std::to_string(d.lhs) + " vs " +
                                                     std::to_string(d.rhs));
            if (count) ++*count;
        }
    }
}

}  // namespace detail

inline CriterionResult verify_boolean_duality(const VerifyOptions& = {}) {
    return detail::timed(3, "hypercube partitions n<=3: n - min delta = max Delta after rotation", 0.0,
                         [&](detail::Checker& c) {
        std::uint64_t count = 0;
        detail::boolean_duality(c, &count);
        c.note(std::to_string(count) + " partitions");
    });
}

inline CriterionResult verify_min_degree(const VerifyOptions& o = {}) {
    return detail::timed(4, "block construction: analytic min degrees match brute force", 30.0,
                         [&](detail::Checker& c) {
        const std::vector<std::pair<int, std::vector<int>>> cases = {
            {3, {2, 2}}, {3, {3, 3}}, {3, {2, 4}}, {3, {1, 5}}, {4, {2, 2}}};
        for (const auto& [m, sizes] : cases) {
            const BlockPartition bp = BlockPartition::from_sizes(sizes);
            const MinDegreeFormula f = min_degree_formula(bp, m);
            const DegreeStats st = degree_stats(construction_partition(m, bp, o.limits));
            std::string tag = "m=" + std::to_string(m) + " blocks";
            for (int a : sizes) tag += " " + std::to_string(a);
            for (int i = 0; i < m; ++i)
                c.expect(st.min_degree[i] == f.delta[i], tag + ": class " + std::to_string(i));
            c.expect(f.headline == f.headline_closed, tag + ": headline");
            c.expect(st.sensitivity_value() == f.headline, tag + ": brute-force headline");
        }
        c.note(std::to_string(cases.size()) + " shapes");
    });
}

inline CriterionResult verify_residue_closed_form(const VerifyOptions& = {}) {
    return detail::timed(5, "residue counts on [0,m-2]^l: closed form and spread <= 1", 0.0,
                         [&](detail::Checker& c) {
        for (int m = 3; m <= 7; ++m) {
            for (int l = 1; l <= 12; ++l) {
                const ResidueProfile prof = residue_profile(m, 0, m - 2, l);
                for (int s = 0; s < m; ++s) {
                    c.expect(h_closed_form(m, l, s) == prof.counts[s],
                             "m=" + std::to_string(m) + " l=" + std::to_string(l) + " s=" + std::to_string(s));
                    for (int t = 0; t < m; ++t) {
                        const BigInt d = prof.counts[s] - prof.counts[t];
                        c.expect(d >= -1 && d <= 1, "spread at m=" + std::to_string(m) + " l=" + std::to_string(l));
                    }
                }
            }
        }
        c.note("m=3..7, l=1..12");
    });
}

inline CriterionResult verify_delta_divisibility(const VerifyOptions& = {}) {
    return detail::timed(6, "difference counts divisible by p, row sums (t+1)^N - t^N", 1.0,
                         [&](detail::Checker& c) {
        const std::vector<std::tuple<int, int, int>> cases = {
            {3, 1, 6}, {3, 1, 12}, {5, 1, 20}, {5, 2, 20}, {5, 3, 20}};
        for (const auto& [p, t, N] : cases) {
            const std::string tag = "p=" + std::to_string(p) + " t=" + std::to_string(t) + " N=" + std::to_string(N);
            BigInt row = 0;
            for (int s = 0; s < p; ++s) {
                const BigInt d = delta_count(p, t, N, s);
                c.expect(d % p == 0, tag + " s=" + std::to_string(s));
                row += d;
            }
            c.expect(row == big_pow(t + 1, N) - big_pow(t, N), tag + ": row sum");
        }
        c.note(std::to_string(cases.size()) + " cases");
    });
}

inline CriterionResult verify_proof_items(const VerifyOptions& = {}) {
    return detail::timed(7, "p=3 N=6 (n=36): proof items, rotated sizes differ, s=12", 1.0,
                         [&](detail::Checker& c) {
        const int p = 3, N = 6;
        const ConstructionReport r = class_residue_counts(BlockPartition::balanced_square(N), p);
        c.expect(r.total() == big_pow(p, N * N), "class sizes do not sum to p^n");
        c.expect(r.items.has_value(), "no proof items");
        if (!r.items) return;
        c.expect(r.items->item_i_holds, "item (i) = " + r.items->item_i.str());
        c.expect(r.items->item_ii_holds, "item (ii) = " + r.items->item_ii.str());
        c.expect(r.items->item_iii_holds, "item (iii)");
        c.expect(r.rotated_sizes[2] != r.rotated_sizes[1], "rotated sizes of classes 1 and 2 agree");
        c.expect(r.sensitivity_value == 12, "sensitivity value " + std::to_string(r.sensitivity_value));
        c.expect(r.sensitivity_value == (p - 1) * N, "value != (p-1) sqrt(n)");
        c.note("item(i)=" + r.items->item_i.str() + " rotated difference=" + r.items->rotated_difference.str());
    });
}

inline CriterionResult verify_separation(const VerifyOptions& o = {}) {
    return detail::timed(8, "separation function p=3 N=6: certified deg 72, s 12", 10.0,
                         [&](detail::Checker& c) {
        const SeparationWitness w = separation_function(3, 6);
        c.expect(w.degree_certified(), "imbalance certificate is zero");
        c.expect(w.degree == 72, "deg=" + std::to_string(w.degree));
        c.expect(w.sensitivity == 12, "s=" + std::to_string(w.sensitivity));
        c.expect(w.sensitivity * w.sensitivity == 2 * w.degree, "s^2 != (p-1) deg");
        c.expect(w.sensitivity * w.sensitivity == 18 * 8 && 18 <= w.degree, "s^2/(p-1)^3 = 18 <= deg");
        c.expect(w.witness_sensitivity == 12, "witness s=" + std::to_string(w.witness_sensitivity));

        std::mt19937_64 rng(o.seed ^ 0x5e9a7a7eULL);
        const SampledBound b = sampled_sensitivity(w.function, 10000, rng);
        c.expect(b.value <= 12, "sampled vertex with s=" + std::to_string(b.value));
        c.note("certificate " + w.certificate.to_string() + ", sampled max s=" + std::to_string(b.value));
    });
}

inline CriterionResult verify_rotation_duality(const VerifyOptions& o = {}) {
    return detail::timed(9, "(m-1)n - min delta >= max Delta after rotation on random partitions", 0.0,
                         [&](detail::Checker& c) {
        std::mt19937_64 rng(o.seed * 0x9e3779b97f4a7c15ULL + 9);
        for (const auto& [m, n] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {4, 3}}) {
            for (int i = 0; i < 1000; ++i) {
                const DualityCheck d = rotation_duality_check(detail::random_partition(m, n, rng));
                c.expect(d.inequality_holds, "m=" + std::to_string(m) + " n=" + std::to_string(n) +
                                                 " sample " + std::to_string(i));
            }
        }
        detail::boolean_duality(c, nullptr);
        c.note("3000 random partitions plus hypercube cases");
    });
}

inline CriterionResult verify_relabel(const VerifyOptions& o = {}) {
    return detail::timed(10, "relabeling keeps s and bs, degree ratio within (m-1)^2", 0.0,
                         [&](detail::Checker& c) {
        std::mt19937_64 rng(o.seed * 0x9e3779b97f4a7c15ULL + 10);
        for (const auto& [m, n] : std::vector<std::pair<int, int>>{{3, 2}, {3, 3}, {4, 2}}) {
            const long long r2 = static_cast<long long>(m - 1) * (m - 1);
            for (int i = 0; i < 100; ++i) {
                const MAryFunction f = detail::random_function(m, n, Alphabet::integer, rng);
                const MAryFunction g = relabel(f, Alphabet::unity);
                const std::string tag = "m=" + std::to_string(m) + " n=" + std::to_string(n) + " #" + std::to_string(i);
                c.expect(sensitivity(f) == sensitivity(g), tag + ": s");
                c.expect(block_sensitivity(f, o.limits) == block_sensitivity(g, o.limits), tag + ": bs");
                const long long df = degree(f, o.limits), dg = degree(g, o.limits);
                c.expect(df <= r2 * dg && dg <= r2 * df, tag + ": degrees " + std::to_string(df) +
                                                             ", " + std::to_string(dg));
            }
        }
        c.note("300 functions");
    });
}

inline CriterionResult verify_search(const VerifyOptions& o = {}) {
    return detail::timed(11, "search m=3 n=2: exhaustive optimum, anneal never below, >= 90% match", 120.0,
                         [&](detail::Checker& c) {
        SearchTask task;
        task.m = 3;
        task.n = 2;
        task.constraint = Constraint::strong;
        task.threads = o.threads;
        const SearchResult ex = exhaustive_search(task, o.limits);
        c.expect(ex.found(), "exhaustive search found nothing");
        if (!ex.found()) return;

        // independent pass over every partition
        int truth = kDegreePlusInf;
        std::vector<std::uint8_t> t(9, 0);
        for (int k = 0; k < 19683; ++k) {
            const VertexPartition p(3, 2, t);
            if (satisfies(p, task.constraint)) truth = std::min(truth, degree_stats(p).max_Delta());
            for (auto& v : t) {
                if (++v < 3) break;
                v = 0;
            }
        }
        c.expect(ex.objective == truth, "exhaustive " + std::to_string(ex.objective) + " vs " + std::to_string(truth));
        c.expect(satisfies(*ex.best, task.constraint) && degree_stats(*ex.best).max_Delta() == ex.objective,
                 "exhaustive result does not re-validate");

        int matched = 0;
        for (int run = 0; run < 100; ++run) {
            SearchTask a = task;
            a.seed = o.seed * 1000 + static_cast<std::uint64_t>(run);
            const SearchResult r = anneal_search(a, o.limits);
            c.expect(r.found() && r.objective >= truth, "anneal run " + std::to_string(run) + " below optimum");
            if (r.found() && r.objective == truth) ++matched;
        }
        c.expect(matched >= 90, "anneal matched the optimum in " + std::to_string(matched) + "/100 runs");
        c.note("optimum " + std::to_string(truth) + ", anneal matched " + std::to_string(matched) + "/100");
    });
}

using CriterionFn = CriterionResult (*)(const VerifyOptions&);

struct Suite {
    std::string name;
    CriterionFn run;
};

inline const std::vector<Suite>& suites() {
    static const std::vector<Suite> all = {
        {"example", verify_sample_function},          {"equivalence", verify_equivalence},
        {"hypercube", verify_boolean_duality},  {"min-degree", verify_min_degree},
        {"residue", verify_residue_closed_form}, {"delta", verify_delta_divisibility},
        {"proof-items", verify_proof_items},    {"separation", verify_separation},
        {"duality", verify_rotation_duality},   {"relabel", verify_relabel},
        {"search", verify_search},
    };
    return all;
}

/// Runs one named suite, or all of them for "all".
inline std::vector<CriterionResult> run_suites(const std::string& name, const VerifyOptions& o = {}) {
    std::vector<CriterionResult> out;
    for (const auto& s : suites())
        if (name == "all" || name == s.name) out.push_back(s.run(o));
    if (out.empty()) throw InvalidParameter("unknown verify suite '" + name + "'");
    return out;
}

inline std::string format_result(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.passed ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " ("
       << std::fixed;
    os.precision(3);
    os << r.seconds << " s)";
    if (!r.detail.empty()) os << ": " << r.detail;
    return os.str();
}

}  // namespace msens
