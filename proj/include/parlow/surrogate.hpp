#pragma once

// Continuous surrogates for swept low-rank structure. A projector model
// interpolates certified projector paths and retracts back onto rank n; a
// factor model interpolates aligned factor frames and re-orthonormalizes.
// Certification compares surrogate error against the optimal rank-n error
// on a test grid, point by point.

#include <parlow/eig.hpp>
#include <parlow/ensemble.hpp>
#include <parlow/family.hpp>
#include <parlow/norms.hpp>
#include <parlow/svd.hpp>
#include <parlow/sweep.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace parlow {

enum class SurrogateKind { projector, factors };

struct SurrogateModel {
    SurrogateKind kind = SurrogateKind::projector;
    Eigen::Index n = 0;
    double retraction_tol = 1e-10;
    std::vector<double> grid;         // train grid, strictly increasing
    std::vector<Matrix> projectors;   // projector kind: one per grid point
    std::vector<SvdFactors> factors;  // factors kind: one per grid point
};

struct CertEntry {
    double xi = 0.0;
    double optimal_op = 0.0;   // matrix families: sigma_{n+1}
    double achieved_op = 0.0;  // matrix families: ||A - A~||_2
    double optimal_hs = 0.0;   // tail norm, or root mean square for ensembles
    double achieved_hs = 0.0;
    double excess = 0.0;  // worst metric gap at this point
};

struct CertReport {
    bool pass = false;
    double eps = 0.0;
    Eigen::Index n = 0;
    SurrogateKind kind = SurrogateKind::projector;
    std::vector<CertEntry> entries;
    double max_excess = 0.0;
    // Informational grid means (uniform weights) of the HS-type metric.
    double mean_optimal_hs = 0.0;
    double mean_achieved_hs = 0.0;
};

namespace detail {

inline std::string join_xi(const std::vector<double>& xs) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ", ";
        out += "xi=" + std::to_string(xs[i]);
    }
    return out;
}

// Degenerate grid points at level n, read off a stored spectrum path.
inline std::vector<double> degenerate_points(const std::vector<double>& grid,
                                             const Matrix& path, Eigen::Index n,
                                             double gap_tol) {
    std::vector<double> bad;
    for (Eigen::Index k = 0; k < path.rows(); ++k) {
        const Vector row = path.row(k);
        if (spectrum_gap(row, n, gap_tol).second) {
            bad.push_back(grid[static_cast<size_t>(k)]);
        }
    }
    return bad;
}

// Bracket index k with grid[k] <= xi <= grid[k+1] and the interpolation
// weight toward k+1.
inline std::pair<size_t, double> bracket(const std::vector<double>& grid, double xi,
                                         const char* op) {
    if (grid.size() < 2) {
        throw std::invalid_argument(std::string(op) + ": model needs at least 2 grid points");
    }
    if (!(xi >= grid.front() && xi <= grid.back())) {
        throw std::invalid_argument(std::string(op) + ": xi=" + std::to_string(xi) +
                                    " outside train range [" + std::to_string(grid.front()) +
                                    ", " + std::to_string(grid.back()) + "]");
    }
    size_t k = static_cast<size_t>(std::upper_bound(grid.begin(), grid.end(), xi) -
                                   grid.begin());
    if (k > 0) --k;
    if (k + 1 >= grid.size()) k = grid.size() - 2;
    const double t = (xi - grid[k]) / (grid[k + 1] - grid[k]);
    return {k, t};
}

}  // namespace detail

// Projector surrogate from a certified SVD sweep of symmetric PSD inputs.
// A degenerate gap anywhere on the train grid makes interpolation
// ill-posed, so fitting refuses and names the offending points.
inline SurrogateModel fit_projector(const SvdSweep& s, Eigen::Index n) {
    const auto path = projector_path(s, n);
    if (!path.continuity_certified) {
        throw std::invalid_argument(
            "fit_projector: spectral gap degenerate at " +
            detail::join_xi(detail::degenerate_points(s.grid, s.sigma_path, n, s.gap_tol)));
    }
    if (s.grid.size() < 2) {
        throw std::invalid_argument("fit_projector: need at least 2 grid points");
    }
    SurrogateModel m;
    m.kind = SurrogateKind::projector;
    m.n = n;
    m.grid = s.grid;
    m.projectors = path.projectors;
    return m;
}

inline SurrogateModel fit_projector(const PodSweep& s, Eigen::Index n) {
    const auto path = projector_path(s, n);
    if (!path.continuity_certified) {
        throw std::invalid_argument(
            "fit_projector: spectral gap degenerate at " +
            detail::join_xi(detail::degenerate_points(s.grid, s.lambda_path, n, s.gap_tol)));
    }
    if (s.grid.size() < 2) {
        throw std::invalid_argument("fit_projector: need at least 2 grid points");
    }
    SurrogateModel m;
    m.kind = SurrogateKind::projector;
    m.n = n;
    m.grid = s.grid;
    m.projectors = path.projectors;
    return m;
}

// Factor surrogate from an aligned SVD sweep. Requires alignment with no
// skipped steps and a clear gap at level n everywhere on the train grid.
inline SurrogateModel fit_factors(const SvdSweep& s, Eigen::Index n) {
    if (n < 1 || n > s.n) {
        throw std::invalid_argument("fit_factors: n must lie in [1, " + std::to_string(s.n) +
                                    "], got " + std::to_string(n));
    }
    if (!s.aligned) {
        throw std::invalid_argument("fit_factors: sweep is not aligned");
    }
    std::vector<double> skipped;
    for (size_t k = 0; k < s.align_skipped.size(); ++k) {
        if (s.align_skipped[k]) skipped.push_back(s.grid[k + 1]);
    }
    if (!skipped.empty()) {
        throw std::invalid_argument("fit_factors: alignment was skipped before " +
                                    detail::join_xi(skipped));
    }
    const auto bad = detail::degenerate_points(s.grid, s.sigma_path, n, s.gap_tol);
    if (!bad.empty()) {
        throw std::invalid_argument("fit_factors: spectral gap degenerate at " +
                                    detail::join_xi(bad));
    }
    if (s.grid.size() < 2) {
        throw std::invalid_argument("fit_factors: need at least 2 grid points");
    }
    SurrogateModel m;
    m.kind = SurrogateKind::factors;
    m.n = n;
    m.grid = s.grid;
    for (const SvdFactors& f : s.factors) {
        SvdFactors lead;
        lead.u = f.u.leftCols(n);
        lead.sigma = f.sigma.head(n);
        lead.v = f.v.leftCols(n);
        lead.rank_tol = f.rank_tol;
        m.factors.push_back(std::move(lead));
    }
    return m;
}

// Interpolated rank-n projector at xi: linear blend of the bracketing
// projectors retracted onto rank n through its top-n eigenspace. The output
// is exactly symmetric. Fails if the blend has no clear spectral gap, which
// signals a branch crossing between train points.
inline Matrix eval_projector(const SurrogateModel& m, double xi) {
    if (m.kind != SurrogateKind::projector) {
        throw std::invalid_argument("eval_projector: model does not hold projectors");
    }
    const auto [k, t] = detail::bracket(m.grid, xi, "eval_projector");
    Matrix blend = (1.0 - t) * m.projectors[k] + t * m.projectors[k + 1];
    blend = ((blend + blend.transpose()) / 2.0).eval();
    const Eigen::Index dim = blend.rows();
    if (m.n == dim) {
        return Matrix::Identity(dim, dim);
    }
    const auto e = sym_eig(blend);
    if (e.values[m.n - 1] - e.values[m.n] <= m.retraction_tol) {
        throw std::invalid_argument(
            "eval_projector: retraction undefined at xi=" + std::to_string(xi) +
            ", interpolant eigenvalue gap " +
            std::to_string(e.values[m.n - 1] - e.values[m.n]));
    }
    const Matrix w = e.vectors.leftCols(m.n);
    Matrix p = w * w.transpose();
    return ((p + p.transpose()) / 2.0).eval();
}

// Interpolated factor triple at xi: entrywise blend of the aligned frames
// pulled back onto orthonormal columns through the polar factor, singular
// values blended directly.
inline SvdFactors eval_factors(const SurrogateModel& m, double xi) {
    if (m.kind != SurrogateKind::factors) {
        throw std::invalid_argument("eval_factors: model does not hold factors");
    }
    const auto [k, t] = detail::bracket(m.grid, xi, "eval_factors");
    const SvdFactors& a = m.factors[k];
    const SvdFactors& b = m.factors[k + 1];
    SvdFactors out;
    out.sigma = (1.0 - t) * a.sigma + t * b.sigma;
    out.rank_tol = a.rank_tol;
    const auto polar = [xi](const Matrix& raw) {
        const SvdFactors f = svd(raw);
        if (f.sigma[f.sigma.size() - 1] <= 1e-8) {
            throw std::invalid_argument(
                "eval_factors: interpolated frame is rank deficient at xi=" +
                std::to_string(xi));
        }
        return (f.u * f.v.transpose()).eval();
    };
    out.u = polar((1.0 - t) * a.u + t * b.u);
    out.v = polar((1.0 - t) * a.v + t * b.v);
    return out;
}

// Surrogate reconstruction of the family member at xi.
inline Matrix surrogate_matrix(const SurrogateModel& m, const Matrix& a, double xi) {
    if (m.kind == SurrogateKind::projector) {
        const Matrix p = eval_projector(m, xi);
        return p * a * p;
    }
    const SvdFactors f = eval_factors(m, xi);
    return f.u * f.sigma.asDiagonal() * f.v.transpose();
}

// Pointwise comparison of surrogate error against the optimal rank-n error
// over a test grid. Matrix families are scored in both the operator and HS
// norms against the truncation optimum; ensemble families in the root mean
// square norm against the spectral tail. Passing means every point beats
// the optimum up to eps.
inline CertReport certify(const SurrogateModel& m, const ParamFamily& f,
                          const std::vector<double>& test_grid, double eps) {
    if (test_grid.empty()) {
        throw std::invalid_argument("certify: empty test grid");
    }
    for (size_t k = 0; k + 1 < test_grid.size(); ++k) {
        if (!(test_grid[k] < test_grid[k + 1])) {
            throw std::invalid_argument("certify: test grid must be strictly increasing");
        }
    }
    if (f.value_type() == FamilyValue::objective) {
        throw std::invalid_argument("certify: objective families have no low-rank error");
    }
    if (f.value_type() == FamilyValue::ensemble && m.kind != SurrogateKind::projector) {
        throw std::invalid_argument("certify: ensemble families need a projector model");
    }
    CertReport rep;
    rep.eps = eps;
    rep.n = m.n;
    rep.kind = m.kind;
    for (const double xi : test_grid) {
        CertEntry entry;
        entry.xi = xi;
        if (f.value_type() == FamilyValue::matrix) {
            const Matrix a = f.matrix_at(xi);
            const SvdFactors full = svd(a);
            const Eigen::Index r = full.sigma.size();
            entry.optimal_op = m.n < r ? full.sigma[m.n] : 0.0;
            entry.optimal_hs = m.n < r ? full.sigma.tail(r - m.n).norm() : 0.0;
            const Matrix approx = surrogate_matrix(m, a, xi);
            entry.achieved_op = operator_norm(a - approx);
            entry.achieved_hs = (a - approx).norm();
            entry.excess = std::max(entry.achieved_op - entry.optimal_op,
                                    entry.achieved_hs - entry.optimal_hs);
        } else {
            const Ensemble e = f.ensemble_at(xi);
            const auto eig = sym_eig(covariance(e));
            double tail = 0.0;
            for (Eigen::Index i = m.n; i < eig.values.size(); ++i) {
                tail += std::max(eig.values[i], 0.0);
            }
            entry.optimal_hs = std::sqrt(tail);
            const Matrix p = eval_projector(m, xi);
            entry.achieved_hs = std::sqrt(projection_error(e, p));
            entry.excess = entry.achieved_hs - entry.optimal_hs;
        }
        // The optimum is a hard floor; beating it beyond round-off means the
        // reference spectra and the surrogate disagree about the family.
        const double scale = std::max(1.0, entry.optimal_hs);
        if (entry.excess < -1e-10 * scale) {
            throw std::runtime_error("certify: surrogate beats the optimal error at xi=" +
                                     std::to_string(xi) + ", excess " +
                                     std::to_string(entry.excess));
        }
        rep.max_excess = rep.entries.empty() ? entry.excess
                                             : std::max(rep.max_excess, entry.excess);
        rep.mean_optimal_hs += entry.optimal_hs;
        rep.mean_achieved_hs += entry.achieved_hs;
        rep.entries.push_back(entry);
    }
    rep.mean_optimal_hs /= static_cast<double>(rep.entries.size());
    rep.mean_achieved_hs /= static_cast<double>(rep.entries.size());
    rep.pass = rep.max_excess < eps;
    return rep;
}

}  // namespace parlow
