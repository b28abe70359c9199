#include <parlow/csv.hpp>
#include <parlow/json_io.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

using parlow::Json;

std::string test_dir(const std::string& leaf) {
    const std::string dir = ::testing::TempDir() + "parlow_cli_" + leaf;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the built binary with stdout/stderr captured in the working dir.
CliResult run_cli(const std::string& args, const std::string& dir) {
    const std::string out_file = dir + "/stdout.txt";
    const std::string err_file = dir + "/stderr.txt";
    const std::string cmd =
        std::string(PARLOW_CLI_PATH) + " " + args + " > " + out_file + " 2> " + err_file;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

bool single_error_line(const std::string& err) {
    return err.rfind("error: ", 0) == 0 && std::count(err.begin(), err.end(), '\n') == 1;
}

TEST(Cli, DemoDiag2MatchesClosedForm) {
    const std::string dir = test_dir("demo_diag2");
    const auto r = run_cli("demo diag2 --out " + dir, dir);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const parlow::Matrix csv = parlow::read_csv_file(dir + "/demo_diag2_sigma.csv");
    ASSERT_EQ(csv.rows(), 101);
    ASSERT_EQ(csv.cols(), 5);
    for (Eigen::Index k = 0; k < csv.rows(); ++k) {
        const double xi = csv(k, 0);
        EXPECT_NEAR(csv(k, 1), std::max(xi, 1.0 - xi), 1e-12);
        EXPECT_NEAR(csv(k, 2), std::min(xi, 1.0 - xi), 1e-12);
        EXPECT_EQ(csv(k, 4) != 0.0, xi == 0.5);
    }
}

TEST(Cli, SweepWritesCsvAndHashedReport) {
    const std::string dir = test_dir("sweep");
    const auto r = run_cli("sweep --family diag2 --grid 0:1:101 --n 1 --out " + dir, dir);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const parlow::Matrix csv = parlow::read_csv_file(dir + "/sweep_path.csv");
    EXPECT_EQ(csv.rows(), 101);
    EXPECT_EQ(csv.cols(), 5);

    const Json report = parlow::read_json_file(dir + "/sweep_report.json");
    EXPECT_EQ(report["content"]["command"], "sweep");
    EXPECT_EQ(report["content"]["n"], 1);
    ASSERT_EQ(report["content"]["degenerate_xi"].size(), 1u);
    EXPECT_EQ(report["content"]["degenerate_xi"][0].get<double>(), 0.5);
    // The envelope hash covers exactly the canonical content bytes.
    EXPECT_EQ(report["content_hash"],
              parlow::fnv1a64_hex(report["content"].dump()));
}

TEST(Cli, SweepRejectsZeroRank) {
    const std::string dir = test_dir("sweep_n0");
    const auto r = run_cli("sweep --family diag2 --grid 0:1:11 --n 0 --out " + dir, dir);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(single_error_line(r.err)) << r.err;
}

TEST(Cli, SweepRequiresExactlyOneFamilySource) {
    const std::string dir = test_dir("sweep_nofam");
    const auto r = run_cli("sweep --grid 0:1:11 --n 1 --out " + dir, dir);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(single_error_line(r.err)) << r.err;
}

TEST(Cli, GapFlagsTheDiag2Crossing) {
    const std::string dir = test_dir("gap");
    const auto r = run_cli("gap --family diag2 --grid 0:1:101 --n 1 --out " + dir, dir);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Json report = parlow::read_json_file(dir + "/gap_report.json");
    const Json& crossings = report["content"]["report"]["suspected_crossings"];
    ASSERT_EQ(crossings.size(), 1u);
    EXPECT_EQ(crossings[0][0].get<double>(), 0.5);
    EXPECT_EQ(crossings[0][1].get<double>(), 0.51);
}

TEST(Cli, SurrogateCertifiesRot2Projector) {
    const std::string dir = test_dir("surrogate");
    const auto r = run_cli(
        "surrogate --family rot2 --grid 0.1:1:19 --n 1 --eps 0.1 --out " + dir, dir);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const Json report = parlow::read_json_file(dir + "/cert_report.json");
    EXPECT_TRUE(report["content"]["report"]["pass"].get<bool>());
    // The written model is loadable and self-consistent.
    const auto model = parlow::model_from_json(parlow::read_json_file(dir + "/model.json"));
    EXPECT_EQ(model.n, 1);
    EXPECT_EQ(model.grid.size(), 19u);
}

TEST(Cli, SurrogateUnattainableEpsExitsTwo) {
    const std::string dir = test_dir("surrogate_tight");
    const auto r = run_cli(
        "surrogate --family rot2 --grid 0.1:1:4 --n 1 --eps 1e-9 --out " + dir, dir);
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_TRUE(single_error_line(r.err)) << r.err;
    EXPECT_NE(r.err.find("certification failed"), std::string::npos);
    const Json report = parlow::read_json_file(dir + "/cert_report.json");
    EXPECT_FALSE(report["content"]["report"]["pass"].get<bool>());
}

TEST(Cli, VerifyPassesAndContentIsDeterministic) {
    const std::string dir1 = test_dir("verify1");
    const std::string dir2 = test_dir("verify2");
    const auto r1 = run_cli("verify --seed 0 --out " + dir1, dir1);
    const auto r2 = run_cli("verify --seed 0 --out " + dir2, dir2);
    ASSERT_EQ(r1.exit_code, 0) << r1.err;
    ASSERT_EQ(r2.exit_code, 0) << r2.err;
    EXPECT_NE(r1.out.find(", 0 failed"), std::string::npos) << r1.out;

    const Json a = parlow::read_json_file(dir1 + "/verify_report.json");
    const Json b = parlow::read_json_file(dir2 + "/verify_report.json");
    EXPECT_EQ(a["content"].dump(), b["content"].dump());
    EXPECT_EQ(a["content_hash"], b["content_hash"]);
}

TEST(Cli, PodReadsJsonEnsembleFamily) {
    const std::string dir = test_dir("pod");
    Json family;
    family["kind"] = "grid";
    Json xi = Json::array();
    Json items = Json::array();
    for (int k = 1; k <= 4; ++k) {
        const double x = 0.1 * static_cast<double>(k);
        xi.push_back(x);
        // Two atoms whose covariance is exactly diag(x, 1 - x); points are
        // sample-major (one row per sample).
        Json points = Json::array();
        points.push_back(Json::array({std::sqrt(2.0 * x), 0.0}));
        points.push_back(Json::array({0.0, std::sqrt(2.0 * (1.0 - x))}));
        items.push_back(Json{{"points", points}});
    }
    family["xi"] = xi;
    family["items"] = items;
    const std::string family_path = dir + "/family.json";
    parlow::write_json_file(family_path, family);

    const auto r = run_cli("pod --input " + family_path + " --n 1 --out " + dir, dir);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const parlow::Matrix csv = parlow::read_csv_file(dir + "/pod_path.csv");
    ASSERT_EQ(csv.rows(), 4);
    ASSERT_EQ(csv.cols(), 5);
    for (Eigen::Index k = 0; k < csv.rows(); ++k) {
        const double x = csv(k, 0);
        EXPECT_NEAR(csv(k, 1), 1.0 - x, 1e-12);
        EXPECT_NEAR(csv(k, 2), x, 1e-12);
    }
}

TEST(Cli, UnknownSubcommandExitsOne) {
    const std::string dir = test_dir("unknown");
    const auto r = run_cli("frobnicate", dir);
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(single_error_line(r.err)) << r.err;
}

}  // namespace
