#pragma once

// JSON serialization for ensembles, families, surrogate models, and
// reports. Objects use alphabetically ordered keys and shortest round-trip
// doubles, so a dump is a deterministic function of the content; report
// files wrap the content with its 64-bit FNV-1a hash plus a timestamp that
// stays outside the hashed bytes.

#include <parlow/csv.hpp>
#include <parlow/ensemble.hpp>
#include <parlow/family.hpp>
#include <parlow/surrogate.hpp>
#include <parlow/svd.hpp>
#include <parlow/sweep.hpp>
#include <parlow/types.hpp>

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parlow {

using Json = nlohmann::json;

inline Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) {
        throw std::invalid_argument(where + ": expected a non-empty array of rows");
    }
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) {
        throw std::invalid_argument(where + ": rows must be non-empty arrays");
    }
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != cols) {
            throw std::invalid_argument(where + ": ragged row " + std::to_string(i));
        }
        for (size_t c = 0; c < cols; ++c) {
            if (!j[i][c].is_number()) {
                throw std::invalid_argument(where + ": non-numeric entry at row " +
                                            std::to_string(i));
            }
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                j[i][c].get<double>();
        }
    }
    return m;
}

inline Json vector_to_json(const Vector& v) {
    Json arr = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

inline Vector vector_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) {
        throw std::invalid_argument(where + ": expected an array");
    }
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            throw std::invalid_argument(where + ": non-numeric entry " + std::to_string(i));
        }
        v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    }
    return v;
}

// Ensembles serialize sample-major: points[k] is the k-th sample vector.
// Omitted weights mean uniform.
inline Json ensemble_to_json(const Ensemble& e) {
    Json j;
    j["dim"] = e.dim();
    Json pts = Json::array();
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        Json sample = Json::array();
        for (Eigen::Index i = 0; i < e.dim(); ++i) sample.push_back(e.points()(i, k));
        pts.push_back(std::move(sample));
    }
    j["points"] = std::move(pts);
    j["weights"] = vector_to_json(e.weights());
    return j;
}

inline Ensemble ensemble_from_json(const Json& j, const std::string& where = "ensemble") {
    if (!j.is_object() || !j.contains("points")) {
        throw std::invalid_argument(where + ": expected an object with 'points'");
    }
    const Matrix samples = matrix_from_json(j["points"], where + ".points");
    const Matrix pts = samples.transpose();
    if (j.contains("dim") && j["dim"].get<Eigen::Index>() != pts.rows()) {
        throw std::invalid_argument(where + ": dim does not match points");
    }
    if (j.contains("weights")) {
        return Ensemble(pts, vector_from_json(j["weights"], where + ".weights"));
    }
    return Ensemble::uniform(pts);
}

namespace detail {

inline std::string dirname_of(const std::string& path) {
    const size_t slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

inline std::string join_path(const std::string& dir, const std::string& rel) {
    if (rel.empty() || rel.front() == '/' || dir.empty()) return rel;
    return dir + "/" + rel;
}

}  // namespace detail

// Family description:
//   {"kind": "analytic", "id": "rot2", "params": {"xi_min": .., "xi_max": ..}}
//   {"kind": "grid", "xi": [..], "items": [item, ..]}
// where each grid item is a CSV path string, inline matrix rows, or an
// ensemble object. Items must all be matrices or all ensembles.
inline ParamFamily family_from_json(const Json& j, const std::string& base_dir = ".") {
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("family: expected an object with 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "analytic") {
        if (!j.contains("id")) {
            throw std::invalid_argument("family: analytic family needs 'id'");
        }
        const std::string id = j["id"].get<std::string>();
        if (j.contains("params")) {
            const Json& p = j["params"];
            ParamFamily defaults = ParamFamily::builtin(id);
            const double lo =
                p.contains("xi_min") ? p["xi_min"].get<double>() : defaults.xi_min();
            const double hi =
                p.contains("xi_max") ? p["xi_max"].get<double>() : defaults.xi_max();
            return ParamFamily::builtin(id, lo, hi);
        }
        return ParamFamily::builtin(id);
    }
    if (kind != "grid") {
        throw std::invalid_argument("family: unknown kind '" + kind + "'");
    }
    if (!j.contains("xi") || !j.contains("items")) {
        throw std::invalid_argument("family: grid family needs 'xi' and 'items'");
    }
    std::vector<double> xi;
    for (const auto& x : j["xi"]) xi.push_back(x.get<double>());
    const Json& items = j["items"];
    if (!items.is_array() || items.size() != xi.size()) {
        throw std::invalid_argument("family: need one item per xi value");
    }
    std::vector<Matrix> mats;
    std::vector<Ensemble> ens;
    for (size_t k = 0; k < items.size(); ++k) {
        const Json& item = items[k];
        const std::string where = "family item " + std::to_string(k);
        if (item.is_string()) {
            mats.push_back(
                read_csv_file(detail::join_path(base_dir, item.get<std::string>())));
        } else if (item.is_array()) {
            mats.push_back(matrix_from_json(item, where));
        } else if (item.is_object()) {
            ens.push_back(ensemble_from_json(item, where));
        } else {
            throw std::invalid_argument(where + ": expected path, matrix, or ensemble");
        }
    }
    if (!mats.empty() && !ens.empty()) {
        throw std::invalid_argument("family: cannot mix matrix and ensemble items");
    }
    if (!ens.empty()) return ParamFamily::ensemble_grid(std::move(xi), std::move(ens));
    return ParamFamily::matrix_grid(std::move(xi), std::move(mats));
}

inline Json model_to_json(const SurrogateModel& m) {
    Json j;
    j["kind"] = m.kind == SurrogateKind::projector ? "projector" : "factors";
    j["n"] = m.n;
    j["retraction_tol"] = m.retraction_tol;
    Json grid = Json::array();
    for (double xi : m.grid) grid.push_back(xi);
    j["grid"] = std::move(grid);
    if (m.kind == SurrogateKind::projector) {
        Json ps = Json::array();
        for (const Matrix& p : m.projectors) ps.push_back(matrix_to_json(p));
        j["projectors"] = std::move(ps);
    } else {
        Json fs = Json::array();
        for (const SvdFactors& f : m.factors) {
            Json jf;
            jf["u"] = matrix_to_json(f.u);
            jf["sigma"] = vector_to_json(f.sigma);
            jf["v"] = matrix_to_json(f.v);
            fs.push_back(std::move(jf));
        }
        j["factors"] = std::move(fs);
    }
    return j;
}

inline SurrogateModel model_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("n") || !j.contains("grid")) {
        throw std::invalid_argument("model: expected an object with kind, n, grid");
    }
    SurrogateModel m;
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "projector") {
        m.kind = SurrogateKind::projector;
    } else if (kind == "factors") {
        m.kind = SurrogateKind::factors;
    } else {
        throw std::invalid_argument("model: unknown kind '" + kind + "'");
    }
    m.n = j["n"].get<Eigen::Index>();
    if (j.contains("retraction_tol")) {
        m.retraction_tol = j["retraction_tol"].get<double>();
    }
    for (const auto& x : j["grid"]) m.grid.push_back(x.get<double>());
    for (size_t k = 0; k + 1 < m.grid.size(); ++k) {
        if (!(m.grid[k] < m.grid[k + 1])) {
            throw std::invalid_argument("model: grid must be strictly increasing");
        }
    }
    if (m.kind == SurrogateKind::projector) {
        if (!j.contains("projectors") || j["projectors"].size() != m.grid.size()) {
            throw std::invalid_argument("model: need one projector per grid point");
        }
        for (size_t k = 0; k < m.grid.size(); ++k) {
            m.projectors.push_back(
                matrix_from_json(j["projectors"][k], "model projector " + std::to_string(k)));
        }
    } else {
        if (!j.contains("factors") || j["factors"].size() != m.grid.size()) {
            throw std::invalid_argument("model: need one factor triple per grid point");
        }
        for (size_t k = 0; k < m.grid.size(); ++k) {
            const Json& jf = j["factors"][k];
            const std::string where = "model factors " + std::to_string(k);
            if (!jf.is_object() || !jf.contains("u") || !jf.contains("sigma") ||
                !jf.contains("v")) {
                throw std::invalid_argument(where + ": expected u, sigma, v");
            }
            SvdFactors f;
            f.u = matrix_from_json(jf["u"], where + ".u");
            f.sigma = vector_from_json(jf["sigma"], where + ".sigma");
            f.v = matrix_from_json(jf["v"], where + ".v");
            m.factors.push_back(std::move(f));
        }
    }
    return m;
}

inline Json cert_report_to_json(const CertReport& r) {
    Json j;
    j["pass"] = r.pass;
    j["eps"] = r.eps;
    j["n"] = r.n;
    j["kind"] = r.kind == SurrogateKind::projector ? "projector" : "factors";
    j["max_excess"] = r.max_excess;
    j["mean_optimal_hs"] = r.mean_optimal_hs;
    j["mean_achieved_hs"] = r.mean_achieved_hs;
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json je;
        je["xi"] = e.xi;
        je["optimal_op"] = e.optimal_op;
        je["achieved_op"] = e.achieved_op;
        je["optimal_hs"] = e.optimal_hs;
        je["achieved_hs"] = e.achieved_hs;
        je["excess"] = e.excess;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

inline Json gap_report_to_json(const GapReport& r) {
    Json j;
    j["n"] = r.n;
    j["gap_tol"] = r.gap_tol;
    Json entries = Json::array();
    for (const auto& e : r.entries) {
        Json je;
        je["xi"] = e.xi;
        je["relative_gap"] = e.relative_gap;
        je["degenerate"] = e.degenerate;
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    Json crossings = Json::array();
    for (const auto& [a, b] : r.suspected_crossings) {
        crossings.push_back(Json::array({a, b}));
    }
    j["suspected_crossings"] = std::move(crossings);
    return j;
}

// 64-bit FNV-1a of a byte string, as 16 hex digits.
inline std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Report envelope: the hash covers exactly the dumped content, so two runs
// with equal content agree on content and content_hash even though the
// timestamp differs.
inline Json wrap_report(Json content) {
    Json j;
    j["content_hash"] = fnv1a64_hex(content.dump());
    j["content"] = std::move(content);
    j["timestamp"] = utc_timestamp();
    return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("write_json_file: cannot open '" + path + "'");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write_json_file: write failed for '" + path + "'");
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("read_json_file: cannot open '" + path + "'");
    }
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw std::invalid_argument("read_json_file: '" + path + "': " + e.what());
    }
}

}  // namespace parlow
