#include <parlow/csv.hpp>
#include <parlow/json_io.hpp>
#include <parlow/random.hpp>
#include <parlow/surrogate.hpp>
#include <parlow/sweep.hpp>

#include <gtest/gtest.h>

#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace parlow {
namespace {

std::string temp_path(const std::string& name) {
    return ::testing::TempDir() + "parlow_io_" + name;
}

TEST(Csv, ParsesPlainAndCrlfInput) {
    std::istringstream in("1,2\n3,4\n");
    const Matrix m = read_csv(in);
    ASSERT_EQ(m.rows(), 2);
    ASSERT_EQ(m.cols(), 2);
    EXPECT_EQ(m(0, 0), 1.0);
    EXPECT_EQ(m(1, 1), 4.0);
    std::istringstream crlf("1, 2\r\n-3e-2,\t4\r\n");
    const Matrix c = read_csv(crlf);
    EXPECT_EQ(c(1, 0), -0.03);
    EXPECT_EQ(c(0, 1), 2.0);
}

TEST(Csv, WriteReadRoundTripIsExact) {
    std::mt19937_64 rng(12001);
    Matrix m = gaussian_matrix(rng, 7, 5);
    m(0, 0) = 1.0 / 3.0;
    m(1, 1) = 1e-300;
    m(2, 2) = -9.87654321e100;
    m(3, 3) = 0.0;
    const auto path = temp_path("roundtrip.csv");
    write_csv_file(path, m);
    const Matrix back = read_csv_file(path);
    ASSERT_EQ(back.rows(), m.rows());
    ASSERT_EQ(back.cols(), m.cols());
    EXPECT_EQ(std::memcmp(m.data(), back.data(), sizeof(double) * 35), 0);
}

TEST(Csv, RejectsMalformedInput) {
    const auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_csv(in);
    };
    EXPECT_THROW(parse("1,2\n3\n"), std::invalid_argument);
    EXPECT_THROW(parse("1,abc\n"), std::invalid_argument);
    EXPECT_THROW(parse("1,,2\n"), std::invalid_argument);
    EXPECT_THROW(parse("1,2 3\n"), std::invalid_argument);
    EXPECT_THROW(parse(""), std::invalid_argument);
    EXPECT_THROW(parse("1,2\n\n3,4\n"), std::invalid_argument);
    EXPECT_THROW(read_csv_file("/nonexistent/x.csv"), std::invalid_argument);
}

TEST(JsonIo, EnsembleRoundTripAndUniformDefault) {
    std::mt19937_64 rng(12002);
    const Ensemble e = random_ensemble(rng, 3, 6);
    const Ensemble back = ensemble_from_json(ensemble_to_json(e));
    EXPECT_EQ((back.points() - e.points()).lpNorm<Eigen::Infinity>(), 0.0);
    EXPECT_EQ((back.weights() - e.weights()).lpNorm<Eigen::Infinity>(), 0.0);

    Json j;
    j["points"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 1.0})});
    const Ensemble uniform = ensemble_from_json(j);
    EXPECT_EQ(uniform.dim(), 2);
    EXPECT_EQ(uniform.weights()[0], 0.5);

    j["dim"] = 3;
    EXPECT_THROW(ensemble_from_json(j), std::invalid_argument);
    EXPECT_THROW(ensemble_from_json(Json::array()), std::invalid_argument);
}

TEST(JsonIo, AnalyticFamilyFromJson) {
    Json j;
    j["kind"] = "analytic";
    j["id"] = "rot2";
    const auto f = family_from_json(j);
    EXPECT_EQ(f.xi_min(), 0.1);
    EXPECT_EQ(f.xi_max(), 1.0);
    j["params"]["xi_min"] = 0.2;
    EXPECT_EQ(family_from_json(j).xi_min(), 0.2);
    j["id"] = "unknown";
    EXPECT_THROW(family_from_json(j), std::invalid_argument);
    Json bad;
    bad["kind"] = "other";
    EXPECT_THROW(family_from_json(bad), std::invalid_argument);
}

TEST(JsonIo, GridFamilyFromInlinePathsAndObjects) {
    const auto csv_path = temp_path("item0.csv");
    Matrix a0(2, 2);
    a0 << 5.0, 0.0, 0.0, 1.0;
    write_csv_file(csv_path, a0);

    Json j;
    j["kind"] = "grid";
    j["xi"] = Json::array({0.0, 1.0});
    j["items"] = Json::array(
        {csv_path, Json::array({Json::array({2.0, 0.0}), Json::array({0.0, 3.0})})});
    const auto f = family_from_json(j, "/");
    EXPECT_EQ(f.matrix_at(0.0)(0, 0), 5.0);
    EXPECT_EQ(f.matrix_at(1.0)(1, 1), 3.0);

    Json je;
    je["kind"] = "grid";
    je["xi"] = Json::array({0.0, 1.0});
    Json ens;
    ens["points"] = Json::array({Json::array({1.0, 0.0}), Json::array({0.0, 2.0})});
    je["items"] = Json::array({ens, ens});
    EXPECT_EQ(family_from_json(je).ensemble_at(1.0).dim(), 2);

    Json mixed = je;
    mixed["items"] = Json::array({ens, csv_path});
    EXPECT_THROW(family_from_json(mixed, "/"), std::invalid_argument);
    Json short_items = j;
    short_items["items"] = Json::array({csv_path});
    EXPECT_THROW(family_from_json(short_items, "/"), std::invalid_argument);
}

TEST(JsonIo, ProjectorModelRoundTripBitExact) {
    const auto f = ParamFamily::builtin("heat3");
    const auto grid = uniform_grid(0.0, 1.0, 11);
    const auto m = fit_projector(sweep_svd(f, grid, 2), 2);
    const auto path = temp_path("model.json");
    write_json_file(path, model_to_json(m));
    const auto back = model_from_json(read_json_file(path));
    EXPECT_EQ(back.kind, SurrogateKind::projector);
    EXPECT_EQ(back.n, 2);
    ASSERT_EQ(back.grid.size(), m.grid.size());
    for (double xi : {0.05, 0.33, 0.98}) {
        const Matrix p0 = eval_projector(m, xi);
        const Matrix p1 = eval_projector(back, xi);
        EXPECT_EQ(std::memcmp(p0.data(), p1.data(), sizeof(double) * 9), 0) << "xi=" << xi;
    }
}

TEST(JsonIo, FactorModelRoundTripBitExact) {
    const auto f = ParamFamily::builtin("rot2");
    const auto grid = uniform_grid(0.1, 1.0, 19);
    const auto m = fit_factors(align_frames(sweep_svd(f, grid, 1)), 1);
    const auto back = model_from_json(model_to_json(m));
    for (double xi : {0.11, 0.55, 0.99}) {
        const SvdFactors g0 = eval_factors(m, xi);
        const SvdFactors g1 = eval_factors(back, xi);
        EXPECT_EQ((g0.u - g1.u).lpNorm<Eigen::Infinity>(), 0.0);
        EXPECT_EQ(g0.sigma[0], g1.sigma[0]);
        EXPECT_EQ((g0.v - g1.v).lpNorm<Eigen::Infinity>(), 0.0);
    }
}

TEST(JsonIo, ModelValidation) {
    Json j;
    j["kind"] = "spline";
    j["n"] = 1;
    j["grid"] = Json::array({0.0, 1.0});
    EXPECT_THROW(model_from_json(j), std::invalid_argument);
    j["kind"] = "projector";
    EXPECT_THROW(model_from_json(j), std::invalid_argument);  // missing projectors
    j["projectors"] = Json::array({matrix_to_json(Matrix::Identity(2, 2))});
    EXPECT_THROW(model_from_json(j), std::invalid_argument);  // count mismatch
    j["grid"] = Json::array({1.0, 0.0});
    EXPECT_THROW(model_from_json(j), std::invalid_argument);  // unsorted grid
}

TEST(JsonIo, FnvHashPinnedVectors) {
    EXPECT_EQ(fnv1a64_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a64_hex("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(fnv1a64_hex("foobar"), "85944171f73967e8");
}

TEST(JsonIo, ReportEnvelopeHashCoversContentOnly) {
    Json content;
    content["value"] = 1.25;
    content["name"] = "sweep";
    const Json a = wrap_report(content);
    const Json b = wrap_report(content);
    EXPECT_EQ(a["content_hash"], b["content_hash"]);
    EXPECT_EQ(a["content"], b["content"]);
    EXPECT_EQ(a["content_hash"].get<std::string>(), fnv1a64_hex(content.dump()));
    EXPECT_TRUE(a.contains("timestamp"));
    Json other = content;
    other["value"] = 1.26;
    EXPECT_NE(wrap_report(other)["content_hash"], a["content_hash"]);
}

TEST(JsonIo, GapAndCertReportsSerialize) {
    const auto f = ParamFamily::builtin("diag2");
    const auto s = sweep_svd(f, uniform_grid(0.0, 1.0, 101), 1);
    const Json gj = gap_report_to_json(gap_report(s, 1));
    EXPECT_EQ(gj["entries"].size(), 101u);
    EXPECT_EQ(gj["suspected_crossings"].size(), 1u);
    EXPECT_EQ(gj["n"].get<int>(), 1);

    const auto rf = ParamFamily::builtin("diag2", 0.0, 0.4);
    const auto m = fit_projector(sweep_svd(rf, uniform_grid(0.0, 0.4, 11), 1), 1);
    const Json cj = cert_report_to_json(certify(m, rf, uniform_grid(0.0, 0.4, 21), 1e-6));
    EXPECT_TRUE(cj["pass"].get<bool>());
    EXPECT_EQ(cj["entries"].size(), 21u);
    EXPECT_EQ(cj["kind"].get<std::string>(), "projector");
    EXPECT_LE(cj["max_excess"].get<double>(), 1e-12);
}

TEST(JsonIo, FileErrorsNameThePath) {
    EXPECT_THROW(read_json_file("/nonexistent/y.json"), std::invalid_argument);
    const auto path = temp_path("broken.json");
    std::ofstream(path) << "{ not json";
    try {
        read_json_file(path);
        FAIL() << "expected parse failure";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find(path), std::string::npos);
    }
}

}  // namespace
}  // namespace parlow
