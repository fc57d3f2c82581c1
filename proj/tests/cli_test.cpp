#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "dpor/cli.hpp"

namespace dpor {
namespace {

namespace fs = std::filesystem;

const fs::path kSource = DPOR_SOURCE_DIR;
const fs::path kData = kSource / "data";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t line_count(const fs::path& p) {
    const auto text = slurp(p);
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / fmt_name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    static std::string fmt_name() {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        return std::string("dpor_cli_") + info->name();
    }

    int run(std::vector<std::string> args) {
        out_.str("");
        err_.str("");
        return run_cli(args, out_, err_);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    int score(const std::string& rep, const std::string& loops) {
        return run({"score", "--ledger", (kData / "sample_ledger.txt").string(), "--config", (kData / "sample.cfg").string(),
                    "--out", rep, "--loops", loops});
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

TEST_F(Cli, ScoreWritesOneRowPerAccountAndManifest) {
    ASSERT_EQ(score(path("rep.csv"), path("loops.csv")), 0) << err_.str();
    EXPECT_EQ(line_count(path("rep.csv")), 93u);
    EXPECT_EQ(slurp(path("rep.csv")).substr(0, 29), "account,P,U,R_raw,R_norm,Rep\n");

    const auto manifest = nlohmann::json::parse(slurp(path("rep.csv.manifest.json")));
    EXPECT_EQ(manifest["tool"], "dpor-cli");
    EXPECT_EQ(manifest["command"], "score");
    EXPECT_EQ(manifest["config"]["rank.alpha"], "0.85");
    EXPECT_EQ(manifest["inputs"].size(), 2u);
    EXPECT_EQ(manifest["outputs"][0]["sha256"], file_digest(path("rep.csv")));
    EXPECT_EQ(manifest["outputs"][0]["sha256"].get<std::string>().size(), 64u);
}

TEST_F(Cli, ElectWritesProducerAndStandbySlices) {
    ASSERT_EQ(score(path("rep.csv"), path("loops.csv")), 0);
    ASSERT_EQ(run({"elect", "--ballots", (kData / "sample_ballots.txt").string(), "--report", path("rep.csv"), "--out-dir",
                   dir_.string()}),
              0)
        << err_.str();
    EXPECT_EQ(line_count(path("producers.csv")), 22u);
    EXPECT_EQ(line_count(path("standby.csv")), 52u);
}

TEST_F(Cli, SimulateWritesOneRowPerMultiplicity) {
    ASSERT_EQ(run({"simulate", "--scenario", (kData / "loop_attack.cfg").string(), "--sweep", "1,10,100", "--out",
                   path("exp.csv")}),
              0)
        << err_.str();
    EXPECT_EQ(line_count(path("exp.csv")), 4u);
    const auto manifest = nlohmann::json::parse(slurp(path("exp.csv.manifest.json")));
    EXPECT_EQ(manifest["config"]["scenario.rng"], "mt19937_64");
}

TEST_F(Cli, SimulateEmitsTheBundledSample) {
    ASSERT_EQ(run({"simulate", "--scenario", (kData / "sample_scenario.cfg").string(), "--sweep", "10", "--out",
                   path("x.csv"), "--emit-ledger", path("ledger.txt"), "--emit-ballots", path("ballots.txt")}),
              0);
    EXPECT_EQ(slurp(path("ledger.txt")), slurp(kData / "sample_ledger.txt"));
    EXPECT_EQ(slurp(path("ballots.txt")), slurp(kData / "sample_ballots.txt"));
}

TEST_F(Cli, DetectLoopsAndCompareRankers) {
    const auto ledger = (kData / "sample_ledger.txt").string();
    ASSERT_EQ(run({"detect-loops", "--ledger", ledger, "--out", path("loops.csv")}), 0) << err_.str();
    EXPECT_EQ(slurp(path("loops.csv")).substr(0, 28), "account,energy,share,flagged");
    ASSERT_EQ(run({"compare-rankers", "--ledger", ledger, "--out", path("cmp.csv")}), 0) << err_.str();
    EXPECT_EQ(line_count(path("cmp.csv")), 93u);

    std::ofstream(path("part.txt")) << "block,all,x\n";
    EXPECT_EQ(run({"compare-rankers", "--ledger", ledger, "--partition", path("part.txt"), "--out", path("cmp2.csv")}), 2);
}

TEST_F(Cli, ExportPlotCurves) {
    ASSERT_EQ(run({"export-plot", "--curve", "stake", "--stake", "1000", "--theta", "100", "--out", path("stake.csv")}), 0);
    EXPECT_EQ(line_count(path("stake.csv")), 32u);
    ASSERT_EQ(run({"export-plot", "--curve", "shrink", "--amount", "1000", "--phi", "2", "--eta", "0.02", "--out",
                   path("shrink.csv")}),
              0);
    EXPECT_EQ(line_count(path("shrink.csv")), 366u);
    EXPECT_NE(slurp(path("shrink.csv")).find("\n50,500\n"), std::string::npos);
}

TEST_F(Cli, IngestPrintsSummaryAndManifest) {
    ASSERT_EQ(run({"ingest", "--ledger", (kData / "sample_ledger.txt").string()}), 0);
    EXPECT_NE(out_.str().find("blocks=240"), std::string::npos);
    EXPECT_NE(out_.str().find("\"command\": \"ingest\""), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run({}), 1);
    EXPECT_EQ(run({"frobnicate"}), 1);
    EXPECT_EQ(run({"score", "--ledger", path("missing.txt"), "--out", path("r.csv")}), 1);
    EXPECT_EQ(run({"export-plot", "--curve", "bogus", "--out", path("c.csv")}), 1);
    EXPECT_EQ(run({"simulate", "--scenario", (kData / "loop_attack.cfg").string(), "--sweep", "1,x", "--out", path("e.csv")}), 1);

    std::ofstream(path("bad.txt")) << "meta,d,1\ntx,1,a,b,-5\n";
    EXPECT_EQ(run({"score", "--ledger", path("bad.txt"), "--out", path("r.csv")}), 2);
    EXPECT_NE(err_.str().find("line 2"), std::string::npos) << err_.str();

    std::ofstream(path("bad.cfg")) << "rank.alpha=1.5\n";
    EXPECT_EQ(run({"score", "--ledger", (kData / "sample_ledger.txt").string(), "--config", path("bad.cfg"), "--out",
                   path("r.csv")}),
              1);
    std::ofstream(path("unknown.cfg")) << "rank.alpah=0.5\n";
    EXPECT_EQ(run({"score", "--ledger", (kData / "sample_ledger.txt").string(), "--config", path("unknown.cfg"), "--out",
                   path("r.csv")}),
              1);

    std::ofstream(path("tight.cfg")) << "solve.tol=1e-300\nsolve.max_iter=1\n";
    EXPECT_EQ(run({"score", "--ledger", (kData / "sample_ledger.txt").string(), "--config", path("tight.cfg"), "--out",
                   path("r.csv")}),
              3);
}

// Bundled sample ledger + config reproduce the frozen outputs byte for byte.
TEST_F(Cli, GoldenOutputs) {
    for (int pass = 0; pass < 2; ++pass) {
        ASSERT_EQ(score(path("rep.csv"), path("loopreport.csv")), 0);
        ASSERT_EQ(run({"elect", "--ballots", (kData / "sample_ballots.txt").string(), "--report", path("rep.csv"),
                       "--config", (kData / "sample.cfg").string(), "--out-dir", dir_.string()}),
                  0);
        for (const char* name : {"rep.csv", "producers.csv", "standby.csv", "loopreport.csv"})
            EXPECT_EQ(slurp(path(name)), slurp(kSource / "tests" / "golden" / name)) << name << " pass " << pass;
    }
}

}  // namespace
}  // namespace dpor
