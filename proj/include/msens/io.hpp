#pragma once

// Text formats.
//
//   .mfun   mfun m=<int> n=<int> alphabet=<unity|int>
//           followed by m^n whitespace-separated labels in index order
//   .mpart  mpart m=<int> n=<int>    (an alphabet= field is accepted and ignored)
//           followed by m^n class labels
//   config  key = value lines
//
// In all three, '#' starts a comment that runs to the end of the line.

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "msens/common.hpp"
#include "msens/function.hpp"
#include "msens/partition.hpp"

namespace msens {

namespace detail {

struct TableFile {
    int m = 0;
    int n = 0;
    Alphabet alphabet = Alphabet::unity;
    std::vector<std::uint8_t> labels;
};

inline TableFile read_table(std::istream& in, const std::string& magic, bool needs_alphabet,
                            const std::string& source, const Limits& limits) {
    std::string line;
    std::size_t line_no = 0;
    do {
        if (!std::getline(in, line)) throw ParseError(source, line_no + 1, 1, "missing '" + magic + "' header");
        ++line_no;
    } while (skippable_line(line));

    std::istringstream hs(line);
    std::string tok;
    hs >> tok;
    if (tok != magic) throw ParseError(source, line_no, 1, "expected '" + magic + "' header, got '" + tok + "'");

    TableFile t;
    bool have_m = false, have_n = false, have_alpha = false;
    while (hs >> tok) {
        const auto col = line.find(tok) + 1;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, col, "expected key=value, got '" + tok + "'");
        const std::string key = tok.substr(0, eq), value = tok.substr(eq + 1);
        auto to_int = [&](const std::string& v) {
            try {
                std::size_t used = 0;
                const int r = std::stoi(v, &used);
                if (used != v.size()) throw std::invalid_argument(v);
                return r;
            } catch (const std::exception&) {
                throw ParseError(source, line_no, col, "'" + key + "' is not an integer: '" + v + "'");
            }
        };
        if (key == "m") {
            t.m = to_int(value);
            have_m = true;
        } else if (key == "n") {
            t.n = to_int(value);
            have_n = true;
        } else if (key == "alphabet") {
            if (value == "unity") t.alphabet = Alphabet::unity;
            else if (value == "int") t.alphabet = Alphabet::integer;
            else throw ParseError(source, line_no, col, "alphabet must be 'unity' or 'int', got '" + value + "'");
            have_alpha = true;
        } else {
            throw ParseError(source, line_no, col, "unknown header field '" + key + "'");
        }
    }
    if (!have_m || !have_n) throw ParseError(source, line_no, 1, "header needs m= and n=");
    if (needs_alphabet && !have_alpha) throw ParseError(source, line_no, 1, "header needs alphabet=");
    if (t.m < 2 || t.m > 255) throw ParseError(source, line_no, 1, "m must lie in [2,255]");
    if (t.n < 1) throw ParseError(source, line_no, 1, "n must be >= 1");
    const std::uint64_t expected = dense_size(t.m, t.n, limits.max_dense, "read");

    t.labels.reserve(expected);
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::size_t pos = 0;
        while (true) {
            pos = line.find_first_not_of(" \t\r", pos);
            if (pos == std::string::npos) break;
            const auto end = line.find_first_of(" \t\r", pos);
            const std::string word = line.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
            const std::size_t col = pos + 1;
            if (t.labels.size() >= expected)
                throw ParseError(source, line_no, col, "too many labels: expected " + std::to_string(expected));
            int v = -1;
            try {
                std::size_t used = 0;
                v = std::stoi(word, &used);
                if (used != word.size()) v = -1;
            } catch (const std::exception&) {
                v = -1;
            }
            if (v < 0 || v >= t.m)
                throw ParseError(source, line_no, col,
                                 "label #" + std::to_string(t.labels.size() + 1) + " '" + word +
                                     "' outside [0," + std::to_string(t.m - 1) + "]");
            t.labels.push_back(static_cast<std::uint8_t>(v));
            if (end == std::string::npos) break;
            pos = end;
        }
    }
    if (t.labels.size() != expected)
        throw ParseError(source, line_no, 1,
                         "expected " + std::to_string(expected) + " labels, found " +
                             std::to_string(t.labels.size()));
    return t;
}

inline void write_labels(std::ostream& os, const std::vector<std::uint8_t>& labels, int m) {
    // one row per value of the last coordinate block
    const std::size_t row = static_cast<std::size_t>(m);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        os << static_cast<int>(labels[i]);
        os << ((i + 1) % row == 0 || i + 1 == labels.size() ? '\n' : ' ');
    }
}

}  // namespace detail

inline MAryFunction read_mfun(std::istream& in, const std::string& source = "<mfun>",
                              const Limits& limits = {}) {
    auto t = detail::read_table(in, "mfun", true, source, limits);
    return MAryFunction::dense(t.m, t.n, t.alphabet, std::move(t.labels));
}

inline VertexPartition read_mpart(std::istream& in, const std::string& source = "<mpart>",
                                  const Limits& limits = {}) {
    auto t = detail::read_table(in, "mpart", false, source, limits);
    return VertexPartition(t.m, t.n, std::move(t.labels));
}

inline void write_mfun(std::ostream& os, const MAryFunction& f) {
    os << "mfun m=" << f.m() << " n=" << f.n() << " alphabet=" << to_string(f.alphabet()) << "\n";
    detail::write_labels(os, f.table(), f.m());
}

inline void write_mpart(std::ostream& os, const VertexPartition& p) {
    os << "mpart m=" << p.m() << " n=" << p.n() << "\n";
    detail::write_labels(os, p.classes(), p.m());
}

template <class Reader>
auto read_file(const std::string& path, Reader&& reader, const Limits& limits) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open file");
    return reader(in, path, limits);
}

inline MAryFunction load_mfun(const std::string& path, const Limits& limits = {}) {
    return read_file(path, [](std::istream& in, const std::string& p, const Limits& l) { return read_mfun(in, p, l); }, limits);
}

inline VertexPartition load_mpart(const std::string& path, const Limits& limits = {}) {
    return read_file(path, [](std::istream& in, const std::string& p, const Limits& l) { return read_mpart(in, p, l); }, limits);
}

/// Effective run configuration; echoed into every report header.
struct Config {
    Limits limits;
    std::uint64_t seed = 1;
    int verbosity = 1;
    int threads = 1;

    std::string echo() const {
        std::ostringstream os;
        os << "# config max_dense=" << limits.max_dense << " max_bitmask_n=" << limits.max_bitmask_n
           << " function_budget=" << limits.function_budget << " seed=" << seed
           << " verbosity=" << verbosity << " threads=" << threads;
        return os.str();
    }
};

inline Config read_config(std::istream& in, const std::string& source = "<config>") {
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, first + 1, "expected key = value");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        long long v = 0;
        try {
            std::size_t used = 0;
            v = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ParseError(source, line_no, eq + 2, "value for '" + key + "' is not an integer");
        }
        const bool positive = v > 0;
        if (key == "max_dense" && positive) cfg.limits.max_dense = static_cast<std::uint64_t>(v);
        else if (key == "max_bitmask_n" && positive && v <= 30) cfg.limits.max_bitmask_n = static_cast<int>(v);
        else if (key == "function_budget" && positive) cfg.limits.function_budget = static_cast<std::uint64_t>(v);
        else if (key == "seed" && v >= 0) cfg.seed = static_cast<std::uint64_t>(v);
        else if (key == "verbosity" && v >= 0) cfg.verbosity = static_cast<int>(v);
        else if (key == "threads" && positive) cfg.threads = static_cast<int>(v);
        else if (key == "max_dense" || key == "max_bitmask_n" || key == "function_budget" ||
                 key == "seed" || key == "verbosity" || key == "threads")
            throw ParseError(source, line_no, eq + 2, "value out of range for '" + key + "'");
        else
            throw ParseError(source, line_no, first + 1, "unknown config key '" + key + "'");
    }
    return cfg;
}

}  // namespace msens
