// Command line front end: sweeps, gap reports, surrogate fitting and
// certification, the seeded verification suite, and demo data sets.
//
// Exit codes: 0 success, 1 input or validation error, 2 verification or
// certification failure. Every failure path prints a single line starting
// with "error: " on stderr.

#include <parlow/argmin.hpp>
#include <parlow/csv.hpp>
#include <parlow/family.hpp>
#include <parlow/json_io.hpp>
#include <parlow/surrogate.hpp>
#include <parlow/sweep.hpp>
#include <parlow/types.hpp>
#include <parlow/verify.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace parlow;

struct Options {
    std::string input;
    std::string family_id;
    std::string grid_spec;
    std::string test_grid_spec;
    std::string target = "projector";
    std::string out_dir = ".";
    std::string demo_subject;
    long long n = -1;
    double gap_tol = 1e-8;
    double rank_tol = 1e-10;
    double eps = 0.1;
    std::uint64_t seed = 0;
};

std::vector<double> parse_grid_spec(const std::string& spec) {
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? 0 : first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        spec.find(':', second + 1) != std::string::npos) {
        throw std::invalid_argument("grid spec must be start:stop:count, got '" + spec + "'");
    }
    const double a = detail::parse_csv_field(spec.substr(0, first), "grid spec");
    const double b =
        detail::parse_csv_field(spec.substr(first + 1, second - first - 1), "grid spec");
    const double raw_count = detail::parse_csv_field(spec.substr(second + 1), "grid spec");
    const auto count = static_cast<Eigen::Index>(std::llround(raw_count));
    if (static_cast<double>(count) != raw_count) {
        throw std::invalid_argument("grid count must be an integer, got " +
                                    spec.substr(second + 1));
    }
    return uniform_grid(a, b, count);
}

ParamFamily load_family(const Options& opt) {
    if (opt.family_id.empty() == opt.input.empty()) {
        throw std::invalid_argument("exactly one of --family and --input is required");
    }
    if (!opt.family_id.empty()) {
        return ParamFamily::builtin(opt.family_id);
    }
    return family_from_json(read_json_file(opt.input), detail::dirname_of(opt.input));
}

std::string family_label(const Options& opt) {
    return opt.family_id.empty() ? opt.input : opt.family_id;
}

// Train/sweep grid: explicit spec if given, else the family's own grid.
std::vector<double> resolve_grid(const Options& opt, const ParamFamily& fam) {
    if (!opt.grid_spec.empty()) return parse_grid_spec(opt.grid_spec);
    if (fam.analytic()) {
        throw std::invalid_argument("--grid is required for analytic families");
    }
    return fam.grid();
}

Eigen::Index require_n(const Options& opt) {
    if (opt.n < 1) {
        throw std::invalid_argument("--n must be >= 1, got " + std::to_string(opt.n));
    }
    return static_cast<Eigen::Index>(opt.n);
}

std::string out_path(const Options& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) / name).string();
}

void announce(const std::string& path) { std::cout << "wrote: " << path << "\n"; }

Json grid_to_json(const std::vector<double>& grid) {
    Json j = Json::array();
    for (double xi : grid) j.push_back(xi);
    return j;
}

Json common_content(const char* command, const Options& opt) {
    Json content;
    content["command"] = command;
    content["family"] = family_label(opt);
    content["n"] = opt.n;
    content["gap_tol"] = opt.gap_tol;
    content["rank_tol"] = opt.rank_tol;
    content["seed"] = opt.seed;
    return content;
}

// Path CSV shared by sweep and pod: xi, full spectrum row, gap_n, degenerate.
Matrix path_csv(const std::vector<double>& grid, const Matrix& spectrum,
                const std::vector<double>& gap, const std::vector<bool>& degenerate) {
    const auto k = static_cast<Eigen::Index>(grid.size());
    Matrix csv(k, spectrum.cols() + 3);
    for (Eigen::Index row = 0; row < k; ++row) {
        const auto r = static_cast<size_t>(row);
        csv(row, 0) = grid[r];
        csv.row(row).segment(1, spectrum.cols()) = spectrum.row(row);
        csv(row, spectrum.cols() + 1) = gap[r];
        csv(row, spectrum.cols() + 2) = degenerate[r] ? 1.0 : 0.0;
    }
    return csv;
}

Json degenerate_points(const std::vector<double>& grid, const std::vector<bool>& flags) {
    Json j = Json::array();
    for (size_t k = 0; k < grid.size(); ++k) {
        if (flags[k]) j.push_back(grid[k]);
    }
    return j;
}

int run_sweep(const Options& opt) {
    const auto n = require_n(opt);
    const auto fam = load_family(opt);
    const auto grid = resolve_grid(opt, fam);
    const auto s = sweep_svd(fam, grid, n, opt.gap_tol, opt.rank_tol);

    const std::string csv_path = out_path(opt, "sweep_path.csv");
    write_csv_file(csv_path, path_csv(s.grid, s.sigma_path, s.gap, s.degenerate));
    announce(csv_path);

    Json content = common_content("sweep", opt);
    content["grid"] = grid_to_json(s.grid);
    content["path_csv"] = "sweep_path.csv";
    content["degenerate_xi"] = degenerate_points(s.grid, s.degenerate);
    content["min_gap"] = *std::min_element(s.gap.begin(), s.gap.end());
    const std::string report_path = out_path(opt, "sweep_report.json");
    write_json_file(report_path, wrap_report(std::move(content)));
    announce(report_path);
    return 0;
}

int run_pod(const Options& opt) {
    const auto n = require_n(opt);
    const auto fam = load_family(opt);
    const auto grid = resolve_grid(opt, fam);
    const auto s = sweep_pod(fam, grid, n, opt.gap_tol);

    const std::string csv_path = out_path(opt, "pod_path.csv");
    write_csv_file(csv_path, path_csv(s.grid, s.lambda_path, s.gap, s.degenerate));
    announce(csv_path);

    Json content = common_content("pod", opt);
    content["grid"] = grid_to_json(s.grid);
    content["path_csv"] = "pod_path.csv";
    content["degenerate_xi"] = degenerate_points(s.grid, s.degenerate);
    content["min_gap"] = *std::min_element(s.gap.begin(), s.gap.end());
    const std::string report_path = out_path(opt, "pod_report.json");
    write_json_file(report_path, wrap_report(std::move(content)));
    announce(report_path);
    return 0;
}

int run_gap(const Options& opt) {
    const auto n = require_n(opt);
    const auto fam = load_family(opt);
    const auto grid = resolve_grid(opt, fam);
    const GapReport rep = fam.value_type() == FamilyValue::ensemble
                              ? gap_report(sweep_pod(fam, grid, n, opt.gap_tol), n)
                              : gap_report(sweep_svd(fam, grid, n, opt.gap_tol, opt.rank_tol), n);

    Json content = common_content("gap", opt);
    content["report"] = gap_report_to_json(rep);
    const std::string report_path = out_path(opt, "gap_report.json");
    write_json_file(report_path, wrap_report(std::move(content)));
    announce(report_path);
    return 0;
}

int run_surrogate(const Options& opt) {
    const auto n = require_n(opt);
    const auto fam = load_family(opt);
    const auto train = resolve_grid(opt, fam);
    std::vector<double> test;
    if (!opt.test_grid_spec.empty()) {
        test = parse_grid_spec(opt.test_grid_spec);
    } else if (fam.analytic()) {
        test = uniform_grid(train.front(), train.back(), 201);
    } else {
        test = fam.grid();
    }

    SurrogateModel model;
    if (opt.target == "projector") {
        model = fam.value_type() == FamilyValue::ensemble
                    ? fit_projector(sweep_pod(fam, train, n, opt.gap_tol), n)
                    : fit_projector(sweep_svd(fam, train, n, opt.gap_tol, opt.rank_tol), n);
    } else if (opt.target == "factors") {
        model = fit_factors(align_frames(sweep_svd(fam, train, n, opt.gap_tol, opt.rank_tol)), n);
    } else {
        throw std::invalid_argument("--target must be projector or factors, got '" +
                                    opt.target + "'");
    }
    const CertReport rep = certify(model, fam, test, opt.eps);

    const std::string model_path = out_path(opt, "model.json");
    write_json_file(model_path, model_to_json(model));
    announce(model_path);

    Json content = common_content("surrogate", opt);
    content["target"] = opt.target;
    content["eps"] = opt.eps;
    content["train_grid"] = grid_to_json(train);
    content["test_grid"] = grid_to_json(test);
    content["model_json"] = "model.json";
    content["report"] = cert_report_to_json(rep);
    const std::string report_path = out_path(opt, "cert_report.json");
    write_json_file(report_path, wrap_report(std::move(content)));
    announce(report_path);

    if (!rep.pass) {
        std::cerr << "error: certification failed: max excess " << format_double(rep.max_excess)
                  << " is not below eps " << format_double(opt.eps) << "\n";
        return 2;
    }
    std::cout << "certified: max excess " << format_double(rep.max_excess) << " below eps "
              << format_double(opt.eps) << "\n";
    return 0;
}

int run_verify(const Options& opt) {
    const auto checks = run_all_checks(opt.seed);
    std::vector<std::string> failed;
    for (const auto& c : checks) {
        std::string line = c.name;
        line.resize(std::max<size_t>(line.size() + 2, 32), ' ');
        std::cout << line << (c.pass ? "pass  " : "FAIL  ") << c.detail << "\n";
        if (!c.pass) failed.push_back(c.name);
    }
    std::cout << checks.size() << " checks, " << failed.size() << " failed\n";

    Json content;
    content["command"] = "verify";
    content["seed"] = opt.seed;
    Json rows = Json::array();
    for (const auto& c : checks) {
        rows.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    content["checks"] = std::move(rows);
    content["failed"] = failed;
    const std::string report_path = out_path(opt, "verify_report.json");
    write_json_file(report_path, wrap_report(std::move(content)));
    announce(report_path);

    if (!failed.empty()) {
        std::string names;
        for (const auto& name : failed) names += (names.empty() ? "" : ", ") + name;
        std::cerr << "error: verification failed: " << names << "\n";
        return 2;
    }
    return 0;
}

int run_demo(const Options& opt) {
    if (opt.demo_subject == "diag2") {
        const auto fam = ParamFamily::builtin("diag2");
        const auto s = sweep_svd(fam, uniform_grid(0.0, 1.0, 101), 1);
        const std::string csv_path = out_path(opt, "demo_diag2_sigma.csv");
        write_csv_file(csv_path, path_csv(s.grid, s.sigma_path, s.gap, s.degenerate));
        announce(csv_path);
        return 0;
    }
    if (opt.demo_subject == "cubic") {
        const auto fam = ParamFamily::builtin("cubic-argmin");
        const auto xi_grid = uniform_grid(1.0, 2.0, 101);
        const auto c_grid = uniform_grid(-1.0, 1.0, 2001);

        Matrix argmin_csv(static_cast<Eigen::Index>(xi_grid.size()), 3);
        for (size_t k = 0; k < xi_grid.size(); ++k) {
            const double xi = xi_grid[k];
            const auto r = grid_argmin([&](double c) { return fam.objective_at(xi, c); }, c_grid);
            const auto row = static_cast<Eigen::Index>(k);
            argmin_csv(row, 0) = xi;
            argmin_csv(row, 1) = r.c_star;
            argmin_csv(row, 2) = r.value;
        }
        const std::string argmin_path = out_path(opt, "demo_cubic_argmin.csv");
        write_csv_file(argmin_path, argmin_csv);
        announce(argmin_path);

        // Objective profiles on both sides of the branch switch at 2/sqrt(3).
        const std::vector<double> profile_xi = {1.0, 2.0 / std::sqrt(3.0), 1.5};
        Matrix profile_csv(static_cast<Eigen::Index>(c_grid.size()), 4);
        for (size_t k = 0; k < c_grid.size(); ++k) {
            const auto row = static_cast<Eigen::Index>(k);
            profile_csv(row, 0) = c_grid[k];
            for (size_t i = 0; i < profile_xi.size(); ++i) {
                profile_csv(row, static_cast<Eigen::Index>(i) + 1) =
                    fam.objective_at(profile_xi[i], c_grid[k]);
            }
        }
        const std::string profile_path = out_path(opt, "demo_cubic_profiles.csv");
        write_csv_file(profile_path, profile_csv);
        announce(profile_path);
        return 0;
    }
    throw std::invalid_argument("demo subject must be diag2 or cubic, got '" +
                                opt.demo_subject + "'");
}

void add_family_options(CLI::App* cmd, Options& opt) {
    cmd->add_option("--family", opt.family_id, "builtin family id");
    cmd->add_option("--input", opt.input, "family description JSON file");
    cmd->add_option("--grid", opt.grid_spec, "uniform grid start:stop:count");
    cmd->add_option("--gap-tol", opt.gap_tol, "relative spectral gap tolerance");
    cmd->add_option("--rank-tol", opt.rank_tol, "relative rank floor");
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"parametric low-rank approximation toolkit"};
    app.require_subcommand(1);

    CLI::App* sweep = app.add_subcommand("sweep", "singular value path of a matrix family");
    CLI::App* pod = app.add_subcommand("pod", "covariance eigenvalue path of an ensemble family");
    CLI::App* gap = app.add_subcommand("gap", "spectral gap report with crossing detection");
    CLI::App* surrogate =
        app.add_subcommand("surrogate", "fit and certify a continuous surrogate");
    CLI::App* verify = app.add_subcommand("verify", "run the seeded property check suites");
    CLI::App* demo = app.add_subcommand("demo", "write example data sets");

    for (CLI::App* cmd : {sweep, pod, gap, surrogate}) {
        add_family_options(cmd, opt);
        cmd->add_option("--n", opt.n, "truncation rank");
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--seed", opt.seed, "seed recorded in the report");
    }
    surrogate->add_option("--target", opt.target, "projector or factors");
    surrogate->add_option("--eps", opt.eps, "certification tolerance");
    surrogate->add_option("--test-grid", opt.test_grid_spec, "test grid start:stop:count");
    verify->add_option("--seed", opt.seed, "seed for the randomized checks");
    verify->add_option("--out", opt.out_dir, "output directory");
    demo->add_option("subject", opt.demo_subject, "diag2 or cubic")->required();
    demo->add_option("--out", opt.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        const std::string what = e.what();
        std::cerr << "error: " << what.substr(0, what.find('\n')) << "\n";
        return 1;
    }

    try {
        if (sweep->parsed()) return run_sweep(opt);
        if (pod->parsed()) return run_pod(opt);
        if (gap->parsed()) return run_gap(opt);
        if (surrogate->parsed()) return run_surrogate(opt);
        if (verify->parsed()) return run_verify(opt);
        return run_demo(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
