#pragma once

// Command-line entry point. Exit codes: 0 ok, 1 validation failure,
// 2 capacity exceeded, 3 I/O or parse error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "msens/msens.hpp"
#include "msens/verify.hpp"

namespace msens::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kCapacity = 2, kInput = 3 };

/// A check that the command itself performed came out false.
class ValidationFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Relative output paths land under $MSENS_OUTPUT_DIR when it is set.
inline std::filesystem::path resolve_output(const std::string& path) {
    std::filesystem::path p(path);
    if (p.is_relative()) {
        if (const char* dir = std::getenv("MSENS_OUTPUT_DIR"); dir && *dir) return std::filesystem::path(dir) / p;
    }
    return p;
}

inline void write_text(const std::string& path, const std::string& text) {
    const auto target = resolve_output(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
    }
    std::ofstream os(target);
    if (!os) throw IoError(target.string(), "cannot open for writing");
    os << text;
    if (!os) throw IoError(target.string(), "write failed");
}

/// Reads a .mfun, or a .mpart taken as its label function over the unity alphabet.
inline MAryFunction load_function(const std::string& path, const Limits& limits) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::istringstream probe(text);
    std::string line, magic;
    while (std::getline(probe, line))
        if (!skippable_line(line)) {
            std::istringstream(line) >> magic;
            break;
        }
    std::istringstream body(text);
    if (magic == "mpart") return to_function(read_mpart(body, path, limits));
    return read_mfun(body, path, limits);
}

inline const char* holds_text(bool b) { return b ? "holds" : "FAILS"; }

inline std::string analyze_report(const MAryFunction& f, const Config& cfg) {
    const BoundsReport b = bounds_report(f, cfg.limits);
    std::ostringstream os;
    os << cfg.echo() << "\n"
       << "function m=" << f.m() << " n=" << f.n() << " alphabet=" << to_string(f.alphabet()) << "\n"
       << "s=" << b.s << " bs=" << b.bs << " deg=" << b.deg << "\n"
       << "s <= (m-1) bs and bs <= n: " << holds_text(b.chain_holds) << "\n"
       << "s <= 2 (m-1)^3 deg^2: " << holds_text(b.sensitivity_bound) << "\n"
       << "2 (m-1)^2 deg^2 >= bs: " << holds_text(b.block_bound) << "\n";
    if (!b.all_hold()) throw ValidationFailure(os.str() + "bounds report failed");
    return os.str();
}

inline std::string partition_report(const VertexPartition& p, const Config& cfg) {
    const DegreeStats st = degree_stats(p);
    const DualityCheck d = rotation_duality_check(p);
    std::ostringstream os;
    os << cfg.echo() << "\n"
       << "partition m=" << p.m() << " n=" << p.n() << "\n"
       << std::left << std::setw(7) << "class" << std::setw(12) << "size" << std::setw(12)
       << "min_degree" << "max_degree\n";
    for (int k = 0; k < p.m(); ++k)
        os << std::setw(7) << k << std::setw(12) << st.size[k] << std::setw(12)
           << degree_text(st.min_degree[k]) << degree_text(st.max_degree[k]) << "\n";
    os << "min_delta=" << st.min_delta() << " max_Delta=" << st.max_Delta()
       << " value=" << st.sensitivity_value() << "\n"
       << "imbalance=" << imbalance(p, false).to_string() << "\n"
       << "rotated_imbalance=" << imbalance(p, true).to_string() << "\n"
       << "duality lhs=" << d.lhs << " rhs=" << d.rhs << " inequality=" << holds_text(d.inequality_holds)
       << " equality=" << (d.equality_required ? holds_text(d.equality_holds) : "not required") << "\n";
    if (!d.holds()) throw ValidationFailure(os.str() + "duality check failed");
    return os.str();
}

inline std::string construction_report(int m, int n, const std::vector<int>& sizes, const Config& cfg) {
    const BlockPartition bp = BlockPartition::from_sizes(sizes);
    if (bp.n() != n)
        throw InvalidParameter("block sizes sum to " + std::to_string(bp.n()) + ", expected n=" +
                               std::to_string(n));
    const ConstructionReport r = class_residue_counts(bp, m);
    const bool certified = !r.imbalance.is_zero();
    std::ostringstream os;
    os << cfg.echo() << "\n" << "cfgs m=" << m << " n=" << n << " blocks=";
    for (std::size_t i = 0; i < sizes.size(); ++i) os << (i ? "," : "") << sizes[i];
    os << "\n";
    os << "s=" << r.sensitivity_value << " deg="
       << (certified ? std::to_string(static_cast<long long>(m - 1) * n) + " (certified)" : "uncertified")
       << "\n";
    os << std::left << std::setw(7) << "class" << std::setw(8) << "delta" << std::setw(24) << "size"
       << "rotated_size\n";
    for (int k = 0; k < m; ++k)
        os << std::setw(7) << k << std::setw(8) << r.formula.delta[k] << std::setw(24)
           << r.class_sizes[k].str() << r.rotated_sizes[k].str() << "\n";
    os << "sensitivity value (m-1)n - min delta = " << r.sensitivity_value << "\n"
       << "closed form (m-1) max(k, max block) = " << r.formula.headline_closed << "\n"
       << "rotated imbalance = " << r.imbalance.to_string() << "\n";
    if (r.items) {
        os << "item (i) = " << r.items->item_i.str() << " " << holds_text(r.items->item_i_holds) << "\n"
           << "item (ii) = " << r.items->item_ii.str() << " " << holds_text(r.items->item_ii_holds) << "\n"
           << "item (iii) " << holds_text(r.items->item_iii_holds) << "\n"
           << "rotated difference = " << r.items->rotated_difference.str() << " "
           << holds_text(r.items->congruence_holds) << "\n";
    }
    os << "[counts]\n";
    for (int s = 0; s < m; ++s)
        for (int j = 0; j < m; ++j) os << "counts[" << s << "][" << j << "] = " << r.counts[s][j].str() << "\n";
    return os.str();
}

inline std::string search_block(const SearchTask& task, const SearchResult& r, const Config& cfg) {
    std::ostringstream os;
    os << cfg.echo() << "\n"
       << "# search m=" << task.m << " n=" << task.n << " constraint=" << to_string(task.constraint)
       << " method=" << r.method << " seed=" << task.seed << " chains=" << task.chains
       << " budget=" << task.budget << " t_start=" << task.t_start << " t_decay=" << task.t_decay << "\n";
    if (!r.found()) {
        os << "# no partition satisfies the constraint\n";
        return os.str();
    }
    os << "# objective max_Delta=" << r.objective << "\n"
       << "# certificate=" << r.certificate.to_string() << " zero=" << (r.certificate.is_zero() ? "yes" : "no")
       << "\n";
    if (cfg.verbosity > 0) {
        os << "# trace";
        for (const auto& [step, value] : r.trace) os << " " << step << ":" << value;
        os << "\n";
    }
    return os.str();
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact tools for m-ary functions, Hamming-graph partitions and their sensitivity."};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    int threads = 0;
    app.add_option("--config", config_path, "key=value configuration file");
    app.add_option("--threads", threads, "worker cap")->check(CLI::PositiveNumber);

    std::string file;
    auto* analyze = app.add_subcommand("analyze", "s, bs, deg and the bounds relating them");
    analyze->add_option("file", file, ".mfun or .mpart input")->required();

    auto* interp = app.add_subcommand("interpolate", "print the representing polynomial");
    interp->add_option("file", file, ".mfun input")->required();

    auto* pstats = app.add_subcommand("partition-stats", "degree statistics, imbalance, duality check");
    pstats->add_option("file", file, ".mpart input")->required();

    std::string out_path;
    auto* rot = app.add_subcommand("rotate", "rotate a partition");
    rot->add_option("file", file, ".mpart input")->required();
    rot->add_option("--out", out_path, "output .mpart path");

    int m = 0, n = 0;
    std::vector<int> blocks;
    std::string report_path;
    auto* cfgs = app.add_subcommand("cfgs", "block construction report");
    cfgs->add_option("--m", m)->required();
    cfgs->add_option("--n", n)->required();
    cfgs->add_option("--blocks", blocks, "comma-separated block sizes")->delimiter(',')->required();
    cfgs->add_option("--report", report_path, "write the report here");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "run acceptance suites");
    verify->add_option("suite", suite, "suite name or 'all'");
    verify->add_option("--m", m);
    verify->add_option("--n", n);

    SearchTask task;
    std::string constraint = "strong", method = "anneal", start = "random";
    std::optional<std::uint64_t> seed;
    auto* search = app.add_subcommand("search", "search for constrained partitions with small max degree");
    search->add_option("--m", task.m)->required();
    search->add_option("--n", task.n)->required();
    search->add_option("--constraint", constraint)->check(CLI::IsMember({"strong", "rotated", "unequal"}));
    search->add_option("--budget", task.budget);
    search->add_option("--seed", seed);
    search->add_option("--chains", task.chains)->check(CLI::PositiveNumber);
    search->add_option("--method", method)->check(CLI::IsMember({"anneal", "exhaustive"}));
    search->add_option("--start", start)->check(CLI::IsMember({"random", "single"}));
    search->add_option("--t-start", task.t_start);
    search->add_option("--t-decay", task.t_decay);
    search->add_option("--out", out_path, "output .mpart path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kValidation;
    }

    try {
        Config cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw IoError(config_path, "cannot open file");
            cfg = read_config(in, config_path);
        }
        if (threads > 0) cfg.threads = threads;
        if (seed) cfg.seed = *seed;

        if (*analyze) {
            out << analyze_report(load_function(file, cfg.limits), cfg);
        } else if (*interp) {
            const MAryFunction f = load_mfun(file, cfg.limits);
            out << cfg.echo() << "\n";
            print_polynomial(out, interpolate(f, cfg.limits));
        } else if (*pstats) {
            out << partition_report(load_mpart(file, cfg.limits), cfg);
        } else if (*rot) {
            std::ostringstream os;
            os << cfg.echo() << "\n";
            write_mpart(os, rotate(load_mpart(file, cfg.limits)));
            if (out_path.empty()) out << os.str();
            else write_text(out_path, os.str());
        } else if (*cfgs) {
            const std::string text = construction_report(m, n, blocks, cfg);
            if (report_path.empty()) {
                out << text;
            } else {
                write_text(report_path, text);
                std::istringstream first(text);
                std::string line;
                std::getline(first, line);
                std::getline(first, line);
                out << line << "\n";
                std::getline(first, line);
                out << line << "\nreport written to " << resolve_output(report_path).string() << "\n";
            }
        } else if (*verify) {
            VerifyOptions o{cfg.limits, cfg.seed, cfg.threads, m, n};
            out << cfg.echo() << "\n";
            bool all = true;
            for (const auto& r : run_suites(suite, o)) {
                out << format_result(r) << "\n";
                all = all && r.passed;
            }
            out << (all ? "PASS" : "FAIL") << "\n";
            if (!all) return kValidation;
        } else if (*search) {
            task.constraint = parse_constraint(constraint);
            task.seed = cfg.seed;
            task.threads = cfg.threads;
            task.start = start == "single" ? StartKind::single_class : StartKind::random;
            const SearchResult r =
                method == "exhaustive" ? exhaustive_search(task, cfg.limits) : anneal_search(task, cfg.limits);
            const std::string block = search_block(task, r, cfg);
            std::ostringstream part;
            if (r.found()) write_mpart(part, *r.best);
            out << block;
            if (out_path.empty()) out << part.str();
            else if (r.found()) write_text(out_path, block + part.str());
            if (!r.found()) return kValidation;
        }
        return kOk;
    } catch (const ValidationFailure& e) {
        err << e.what() << "\n";
        return kValidation;
    } catch (const CapacityExceeded& e) {
        err << "capacity exceeded: " << e.what() << "\n";
        return kCapacity;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kInput;
    } catch (const IoError& e) {
        err << "i/o error: " << e.what() << "\n";
        return kInput;
    } catch (const InvalidParameter& e) {
        err << "invalid parameter: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }
}

}  // namespace msens::cli
