#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msens/cli.hpp"
#include "oracles.hpp"

using namespace msens;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "msens");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string example_path() { return std::string(MSENS_DATA_DIR) + "/sample3x2.mfun"; }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "msens_tests";
    fs::create_directories(dir);
    return dir / name;
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string strip_config(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.rfind("# config", 0) != 0) out << line << "\n";
    return out.str();
}

}  // namespace

TEST(Mfun, ReadWriteRoundTrip) {
    const auto f = load_mfun(example_path());
    EXPECT_EQ(f.m(), 3);
    EXPECT_EQ(f.alphabet(), Alphabet::integer);
    EXPECT_EQ(f.table(), (std::vector<std::uint8_t>{2, 0, 1, 2, 2, 1, 2, 2, 1}));
    std::stringstream ss;
    write_mfun(ss, f);
    EXPECT_EQ(read_mfun(ss), f);
}

TEST(Mfun, Diagnostics) {
    std::istringstream range("mfun m=3 n=1 alphabet=int\n0 1\n  7\n");
    try {
        read_mfun(range);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.position(), 3u);
        EXPECT_NE(std::string(e.what()).find("label #3"), std::string::npos);
    }
    std::istringstream few("mfun m=2 n=2 alphabet=unity\n0 1 1\n");
    EXPECT_THROW(read_mfun(few), ParseError);
    std::istringstream many("mfun m=2 n=1 alphabet=unity\n0 1\n1\n");
    try {
        read_mfun(many);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.position(), 1u);
    }
    std::istringstream word("mfun m=3 n=1 alphabet=int\n0 x 1\n");
    EXPECT_THROW(read_mfun(word), ParseError);
    std::istringstream no_alpha("mfun m=3 n=1\n0 1 2\n");
    EXPECT_THROW(read_mfun(no_alpha), ParseError);
    std::istringstream wrong_magic("mpart m=3 n=1\n0 1 2\n");
    EXPECT_THROW(read_mfun(wrong_magic), ParseError);
    std::istringstream bad_field("mfun m=3 n=1 alphabet=int k=2\n0 1 2\n");
    EXPECT_THROW(read_mfun(bad_field), ParseError);
    EXPECT_THROW(load_mfun("/nonexistent/file.mfun"), IoError);
}

TEST(Mfun, CapacityLimit) {
    Limits tight;
    tight.max_dense = 4;
    std::istringstream in("mfun m=3 n=2 alphabet=int\n0 0 0 0 0 0 0 0 0\n");
    EXPECT_THROW(read_mfun(in, "<t>", tight), CapacityExceeded);
}

TEST(Mpart, ReadWriteAndOptionalAlphabet) {
    std::istringstream in("# comment\nmpart m=2 n=2 alphabet=unity\n0 1 # trailing\n1 1\n");
    const VertexPartition p = read_mpart(in);
    EXPECT_EQ(p.classes(), (std::vector<std::uint8_t>{0, 1, 1, 1}));
    std::stringstream ss;
    write_mpart(ss, p);
    EXPECT_EQ(read_mpart(ss), p);
}

TEST(Config, ParseAndReject) {
    std::istringstream ok("# limits\nmax_dense = 1000\nmax_bitmask_n=10\nfunction_budget=5\nseed=9\nverbosity=0\nthreads=3\n");
    const Config c = read_config(ok);
    EXPECT_EQ(c.limits.max_dense, 1000u);
    EXPECT_EQ(c.limits.max_bitmask_n, 10);
    EXPECT_EQ(c.limits.function_budget, 5u);
    EXPECT_EQ(c.seed, 9u);
    EXPECT_EQ(c.verbosity, 0);
    EXPECT_EQ(c.threads, 3);
    EXPECT_NE(c.echo().find("max_dense=1000"), std::string::npos);

    std::istringstream unknown("max_dense=10\nbogus=1\n");
    try {
        read_config(unknown);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    std::istringstream zero("max_dense=0\n");
    EXPECT_THROW(read_config(zero), ParseError);
    std::istringstream text("threads=many\n");
    EXPECT_THROW(read_config(text), ParseError);
    std::istringstream no_eq("threads\n");
    EXPECT_THROW(read_config(no_eq), ParseError);
}

TEST(Cli, AnalyzeExample) {
    const CliResult r = run_cli({"analyze", example_path()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("s=4 bs=2 deg=4"), std::string::npos);
    EXPECT_NE(r.out.find("# config"), std::string::npos);
}

TEST(Cli, InterpolateReparses) {
    const CliResult r = run_cli({"interpolate", example_path()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream in(r.out);
    EXPECT_EQ(parse_polynomial(in), interpolate(load_mfun(example_path())));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run_cli({"analyze", "/nonexistent.mfun"}).code, 3);
    const fs::path bad = scratch("bad.mfun");
    write_file(bad, "mfun m=3 n=1 alphabet=int\n0 1 5\n");
    const CliResult parse = run_cli({"analyze", bad.string()});
    EXPECT_EQ(parse.code, 3);
    EXPECT_NE(parse.err.find(":2:5:"), std::string::npos) << parse.err;
    const fs::path wide = scratch("wide.mfun");
    std::string body = "mfun m=2 n=17 alphabet=unity\n";
    for (int i = 0; i < (1 << 17); ++i) body += "0 ";
    write_file(wide, body + "\n");
    EXPECT_EQ(run_cli({"analyze", wide.string()}).code, 2);
    EXPECT_EQ(run_cli({"search", "--m", "3", "--n", "3", "--method", "exhaustive"}).code, 2);
    EXPECT_EQ(run_cli({"cfgs", "--m", "3", "--n", "5", "--blocks", "2,2"}).code, 1);
    EXPECT_EQ(run_cli({"verify", "nosuchsuite"}).code, 1);
    EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    const fs::path cfg = scratch("bad.cfg");
    write_file(cfg, "colour=blue\n");
    EXPECT_EQ(run_cli({"--config", cfg.string(), "analyze", example_path()}).code, 3);
}

TEST(Cli, ConfigLimitsApply) {
    const fs::path cfg = scratch("tight.cfg");
    write_file(cfg, "max_bitmask_n = 1\n");
    const CliResult r = run_cli({"--config", cfg.string(), "analyze", example_path()});
    EXPECT_EQ(r.code, 2);
}

TEST(Cli, PartitionStatsAndRotateCycle) {
    std::mt19937_64 rng(61);
    const VertexPartition p = oracle::random_partition(3, 3, rng);
    const fs::path in = scratch("p.mpart");
    {
        std::ofstream os(in);
        write_mpart(os, p);
    }
    const CliResult stats = run_cli({"partition-stats", in.string()});
    ASSERT_EQ(stats.code, 0) << stats.err;
    EXPECT_NE(stats.out.find("rotated_imbalance="), std::string::npos);

    const CliResult before = run_cli({"analyze", in.string()});
    ASSERT_EQ(before.code, 0) << before.err;
    fs::path cur = in;
    for (int i = 0; i < 3; ++i) {
        const fs::path next = scratch("r" + std::to_string(i) + ".mpart");
        ASSERT_EQ(run_cli({"rotate", cur.string(), "--out", next.string()}).code, 0);
        cur = next;
    }
    EXPECT_EQ(load_mpart(cur.string()), p);
    EXPECT_EQ(run_cli({"analyze", cur.string()}).out, before.out);
    EXPECT_EQ(load_mpart(scratch("r0.mpart").string()), rotate(p));
}

TEST(Cli, PartitionStatsPrintsSentinels) {
    const fs::path in = scratch("single.mpart");
    write_file(in, "mpart m=3 n=2\n0 0 0 0 0 0 0 0 0\n");
    const CliResult r = run_cli({"partition-stats", in.string()});
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("inf"), std::string::npos);
    EXPECT_NE(r.out.find("-inf"), std::string::npos);
}

TEST(Cli, CfgsFullScale) {
    const fs::path report = scratch("cfgs.txt");
    const CliResult r = run_cli({"cfgs", "--m", "3", "--n", "36", "--blocks", "6,6,6,6,6,6", "--report", report.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("s=12 deg=72 (certified)"), std::string::npos) << r.out;
    std::ifstream in(report);
    std::stringstream text;
    text << in.rdbuf();
    const ConstructionReport want = class_residue_counts(BlockPartition::balanced_square(6), 3);
    int entries = 0;
    std::string line;
    while (std::getline(text, line)) {
        int s = 0, j = 0;
        char value[128];
        if (std::sscanf(line.c_str(), "counts[%d][%d] = %127s", &s, &j, value) == 3) {
            EXPECT_EQ(BigInt(value), want.counts[s][j]);
            ++entries;
        }
    }
    EXPECT_EQ(entries, 9);
}

TEST(Cli, OutputDirOverride) {
    const fs::path dir = scratch("outdir");
    fs::create_directories(dir);
    ::setenv("MSENS_OUTPUT_DIR", dir.string().c_str(), 1);
    const CliResult r = run_cli({"cfgs", "--m", "3", "--n", "4", "--blocks", "2,2", "--report", "rel.txt"});
    ::unsetenv("MSENS_OUTPUT_DIR");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(fs::exists(dir / "rel.txt"));
}

TEST(Cli, SearchWritesReparsablePartition) {
    const fs::path out = scratch("search.mpart");
    const CliResult r = run_cli({"search", "--m", "3", "--n", "2", "--constraint", "rotated", "--budget", "2000",
                                 "--seed", "5", "--chains", "2", "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("certificate="), std::string::npos);
    const VertexPartition p = load_mpart(out.string());
    EXPECT_TRUE(satisfies(p, Constraint::rotated));
    const CliResult again = run_cli({"search", "--m", "3", "--n", "2", "--constraint", "rotated", "--budget", "2000",
                                     "--seed", "5", "--chains", "2", "--threads", "2"});
    ASSERT_EQ(again.code, 0);
    std::istringstream body(again.out);
    EXPECT_EQ(read_mpart(body), p);
    EXPECT_EQ(strip_config(again.out).substr(0, 40), strip_config(r.out).substr(0, 40));
}

TEST(Cli, VerifyEquivalenceSuite) {
    const CliResult r = run_cli({"verify", "equivalence", "--m", "2", "--n", "2"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
}
