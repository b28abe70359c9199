#pragma once

// Parameter sweeps: factor a family pointwise over a grid, track spectral
// paths and gaps, certify projector continuity, and align factor frames for
// interpolation. Per-point failures carry the offending xi in the message.

#include <parlow/ensemble.hpp>
#include <parlow/family.hpp>
#include <parlow/svd.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parlow {

struct SvdSweep {
    std::vector<double> grid;
    Eigen::Index n = 0;
    double gap_tol = 1e-8;
    std::vector<Matrix> inputs;
    std::vector<SvdFactors> factors;  // leading n triplets per grid point
    Matrix sigma_path;                // K x r, full spectrum per row
    std::vector<double> gap;          // sigma_n - sigma_{n+1} (0 past rank)
    std::vector<bool> degenerate;     // gap <= gap_tol * sigma_1
    bool aligned = false;
    std::vector<bool> align_skipped;  // K-1 step flags once aligned
};

struct PodSweep {
    std::vector<double> grid;
    Eigen::Index n = 0;
    double gap_tol = 1e-8;
    std::vector<PodBasis> bases;   // leading n modes per grid point
    Matrix lambda_path;            // K x N, full spectrum per row
    std::vector<double> gap;       // lambda_n - lambda_{n+1} (0 past dim)
    std::vector<bool> degenerate;  // gap <= gap_tol * lambda_1
    bool aligned = false;
    std::vector<bool> align_skipped;
};

struct GapEntry {
    double xi = 0.0;
    double relative_gap = 0.0;  // (s_n - s_{n+1}) / max(s_1, tiny)
    bool degenerate = false;
};

struct GapReport {
    Eigen::Index n = 0;
    double gap_tol = 1e-8;
    std::vector<GapEntry> entries;
    // Open intervals where linear continuation of the folded gap would go
    // negative, i.e. where two spectral branches likely cross between grid
    // points.
    std::vector<std::pair<double, double>> suspected_crossings;
};

struct ProjectorPath {
    std::vector<double> grid;
    Eigen::Index n = 0;
    std::vector<Matrix> projectors;     // exactly symmetric, rank n
    std::vector<double> hs_increments;  // K-1 values ||P_{k+1} - P_k||_F
    bool continuity_certified = false;  // no degenerate gap along the path
};

namespace detail {

inline void check_sweep_grid(const std::vector<double>& grid, const char* op) {
    if (grid.empty()) {
        throw std::invalid_argument(std::string(op) + ": empty grid");
    }
    for (size_t k = 0; k + 1 < grid.size(); ++k) {
        if (!(grid[k] < grid[k + 1])) {
            throw std::invalid_argument(std::string(op) +
                                        ": grid must be strictly increasing");
        }
    }
}

[[noreturn]] inline void rethrow_at_xi(const char* op, double xi,
                                       const std::exception& e, bool internal) {
    const std::string msg = std::string(op) + " at xi=" + std::to_string(xi) + ": " + e.what();
    if (internal) throw std::runtime_error(msg);
    throw std::invalid_argument(msg);
}

// gap[k] and degenerate[k] at truncation level n from a full spectrum row.
inline std::pair<double, bool> spectrum_gap(const Vector& s, Eigen::Index n,
                                            double gap_tol) {
    const Eigen::Index r = s.size();
    const double tail = n < r ? s[n] : 0.0;
    const double gap = s[n - 1] - tail;
    return {gap, gap <= gap_tol * s[0]};
}

}  // namespace detail

// Pointwise SVD of a matrix family over the grid. Keeps the leading n
// triplets per point plus the full singular value path for gap analysis.
inline SvdSweep sweep_svd(const ParamFamily& f, const std::vector<double>& grid,
                          Eigen::Index n, double gap_tol = 1e-8,
                          double rank_tol = 1e-10) {
    detail::check_sweep_grid(grid, "sweep_svd");
    if (n < 1) {
        throw std::invalid_argument("sweep_svd: n must be >= 1, got " + std::to_string(n));
    }
    SvdSweep s;
    s.grid = grid;
    s.n = n;
    s.gap_tol = gap_tol;
    const Eigen::Index k_count = static_cast<Eigen::Index>(grid.size());
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const double xi = grid[static_cast<size_t>(k)];
        try {
            Matrix a = f.matrix_at(xi);
            const SvdFactors full = svd(a, rank_tol);
            const Eigen::Index r = full.sigma.size();
            if (n > r) {
                throw std::invalid_argument("n=" + std::to_string(n) +
                                            " exceeds min dimension " + std::to_string(r));
            }
            if (k == 0) s.sigma_path.resize(k_count, r);
            SvdFactors lead;
            lead.u = full.u.leftCols(n);
            lead.sigma = full.sigma.head(n);
            lead.v = full.v.leftCols(n);
            lead.rank_tol = full.rank_tol;
            s.sigma_path.row(k) = full.sigma;
            const auto [gap, degen] = detail::spectrum_gap(full.sigma, n, gap_tol);
            s.gap.push_back(gap);
            s.degenerate.push_back(degen);
            s.inputs.push_back(std::move(a));
            s.factors.push_back(std::move(lead));
        } catch (const std::runtime_error& e) {
            detail::rethrow_at_xi("sweep_svd", xi, e, true);
        } catch (const std::exception& e) {
            detail::rethrow_at_xi("sweep_svd", xi, e, false);
        }
    }
    return s;
}

// Pointwise POD of an ensemble family over the grid.
inline PodSweep sweep_pod(const ParamFamily& f, const std::vector<double>& grid,
                          Eigen::Index n, double gap_tol = 1e-8) {
    detail::check_sweep_grid(grid, "sweep_pod");
    if (n < 1) {
        throw std::invalid_argument("sweep_pod: n must be >= 1, got " + std::to_string(n));
    }
    PodSweep s;
    s.grid = grid;
    s.n = n;
    s.gap_tol = gap_tol;
    const Eigen::Index k_count = static_cast<Eigen::Index>(grid.size());
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const double xi = grid[static_cast<size_t>(k)];
        try {
            const Ensemble e = f.ensemble_at(xi);
            PodBasis b = pod(e, n, gap_tol);
            if (k == 0) s.lambda_path.resize(k_count, e.dim());
            s.lambda_path.row(k) = b.eigenvalues;
            const auto [gap, degen] = detail::spectrum_gap(b.eigenvalues, n, gap_tol);
            s.gap.push_back(gap);
            s.degenerate.push_back(degen);
            s.bases.push_back(std::move(b));
        } catch (const std::runtime_error& e) {
            detail::rethrow_at_xi("sweep_pod", xi, e, true);
        } catch (const std::exception& e) {
            detail::rethrow_at_xi("sweep_pod", xi, e, false);
        }
    }
    return s;
}

namespace detail {

inline GapReport gap_report_from_path(const std::vector<double>& grid, const Matrix& path,
                                      Eigen::Index n, double gap_tol) {
    if (n < 1 || n > path.cols()) {
        throw std::invalid_argument("gap_report: n must lie in [1, " +
                                    std::to_string(path.cols()) + "], got " +
                                    std::to_string(n));
    }
    GapReport rep;
    rep.n = n;
    rep.gap_tol = gap_tol;
    const double tiny = std::numeric_limits<double>::min();
    for (Eigen::Index k = 0; k < path.rows(); ++k) {
        const Vector row = path.row(k);
        const auto [gap, degen] = spectrum_gap(row, n, gap_tol);
        GapEntry e;
        e.xi = grid[static_cast<size_t>(k)];
        e.relative_gap = gap / std::max(row[0], tiny);
        e.degenerate = degen;
        rep.entries.push_back(e);
    }
    // The folded gap |s_n - s_{n+1}| cannot change sign, so continue it
    // linearly instead: a predicted negative value past point k means the
    // branches must have crossed inside (xi_k, xi_{k+1}).
    for (size_t k = 1; k + 1 < rep.entries.size(); ++k) {
        const double predicted =
            2.0 * rep.entries[k].relative_gap - rep.entries[k - 1].relative_gap;
        if (predicted < -gap_tol) {
            rep.suspected_crossings.emplace_back(rep.entries[k].xi,
                                                 rep.entries[k + 1].xi);
        }
    }
    return rep;
}

inline ProjectorPath projector_path_impl(const std::vector<double>& grid,
                                         const std::vector<Matrix>& frames,
                                         const Matrix& path, Eigen::Index n,
                                         double gap_tol) {
    ProjectorPath p;
    p.grid = grid;
    p.n = n;
    p.continuity_certified = true;
    for (size_t k = 0; k < frames.size(); ++k) {
        const Matrix& w = frames[k];
        Matrix proj = w * w.transpose();
        proj = ((proj + proj.transpose()) / 2.0).eval();
        const double hs = proj.norm();
        if (std::abs(hs - std::sqrt(static_cast<double>(n))) > 1e-10) {
            throw std::runtime_error("projector_path: frame at xi=" +
                                     std::to_string(grid[k]) +
                                     " lost orthonormality, ||P||_HS=" + std::to_string(hs));
        }
        const Vector row = path.row(static_cast<Eigen::Index>(k));
        if (spectrum_gap(row, n, gap_tol).second) p.continuity_certified = false;
        p.projectors.push_back(std::move(proj));
    }
    for (size_t k = 0; k + 1 < p.projectors.size(); ++k) {
        p.hs_increments.push_back((p.projectors[k + 1] - p.projectors[k]).norm());
    }
    return p;
}

}  // namespace detail

// Relative gap profile at truncation level n, recomputed from the stored
// spectral path (n may differ from the sweep's own n).
inline GapReport gap_report(const SvdSweep& s, Eigen::Index n) {
    return detail::gap_report_from_path(s.grid, s.sigma_path, n, s.gap_tol);
}
inline GapReport gap_report(const PodSweep& s, Eigen::Index n) {
    return detail::gap_report_from_path(s.grid, s.lambda_path, n, s.gap_tol);
}

// Spectral projector path P = V_n V_n^T from a sweep of symmetric PSD
// matrices. Rejects non-symmetric inputs and retained negative eigenvalues;
// certification means every grid point has a clear gap at level n.
inline ProjectorPath projector_path(const SvdSweep& s, Eigen::Index n) {
    if (n < 1 || n > s.n) {
        throw std::invalid_argument("projector_path: n must lie in [1, " +
                                    std::to_string(s.n) + "], got " + std::to_string(n));
    }
    std::vector<Matrix> frames;
    for (size_t k = 0; k < s.factors.size(); ++k) {
        const Matrix& a = s.inputs[k];
        const double scale = std::max(1.0, a.lpNorm<Eigen::Infinity>());
        if ((a - a.transpose()).lpNorm<Eigen::Infinity>() > 1e-10 * scale) {
            throw std::invalid_argument("projector_path: input at xi=" +
                                        std::to_string(s.grid[k]) + " is not symmetric");
        }
        const SvdFactors& f = s.factors[k];
        // For symmetric input, u_i = sign(lambda_i) * v_i: a negative dot
        // product exposes a negative eigenvalue in the retained block.
        const double floor = f.rank_tol * s.sigma_path(static_cast<Eigen::Index>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (f.sigma[i] > floor && f.u.col(i).dot(f.v.col(i)) < 0.0) {
                throw std::invalid_argument("projector_path: input at xi=" +
                                            std::to_string(s.grid[k]) +
                                            " is not positive semidefinite");
            }
        }
        frames.push_back(f.v.leftCols(n));
    }
    return detail::projector_path_impl(s.grid, frames, s.sigma_path, n, s.gap_tol);
}

// Projector path P = B_n B_n^T from a POD sweep.
inline ProjectorPath projector_path(const PodSweep& s, Eigen::Index n) {
    if (n < 1 || n > s.n) {
        throw std::invalid_argument("projector_path: n must lie in [1, " +
                                    std::to_string(s.n) + "], got " + std::to_string(n));
    }
    std::vector<Matrix> frames;
    for (const PodBasis& b : s.bases) frames.push_back(b.basis.leftCols(n));
    return detail::projector_path_impl(s.grid, frames, s.lambda_path, n, s.gap_tol);
}

namespace detail {

// Procrustes factor aligning frame w_next to w_prev: the orthogonal polar
// factor of w_next^T * w_prev. Empty when the cross-Gram is rank deficient
// (spans nearly orthogonal), in which case the step must be skipped.
inline Matrix procrustes_rotation(const Matrix& w_prev, const Matrix& w_next) {
    const Matrix cross = w_next.transpose() * w_prev;
    const SvdFactors f = svd(cross);
    if (f.sigma.size() == 0 || f.sigma[f.sigma.size() - 1] <= 1e-8) {
        return Matrix();
    }
    return f.u * f.v.transpose();
}

}  // namespace detail

// Rotate each frame onto its predecessor so the factor paths vary as little
// as the projector path allows. The rotation acts on u and v together, so
// spans and singular values are untouched. Steps whose spans have turned
// too far to match are skipped and flagged.
inline SvdSweep align_frames(const SvdSweep& s) {
    SvdSweep out = s;
    out.aligned = true;
    out.align_skipped.assign(s.factors.empty() ? 0 : s.factors.size() - 1, false);
    for (size_t k = 0; k + 1 < out.factors.size(); ++k) {
        const Matrix q =
            detail::procrustes_rotation(out.factors[k].v, out.factors[k + 1].v);
        if (q.size() == 0) {
            out.align_skipped[k] = true;
            continue;
        }
        out.factors[k + 1].v = (out.factors[k + 1].v * q).eval();
        out.factors[k + 1].u = (out.factors[k + 1].u * q).eval();
    }
    return out;
}

inline PodSweep align_frames(const PodSweep& s) {
    PodSweep out = s;
    out.aligned = true;
    out.align_skipped.assign(s.bases.empty() ? 0 : s.bases.size() - 1, false);
    for (size_t k = 0; k + 1 < out.bases.size(); ++k) {
        const Matrix q =
            detail::procrustes_rotation(out.bases[k].basis, out.bases[k + 1].basis);
        if (q.size() == 0) {
            out.align_skipped[k] = true;
            continue;
        }
        out.bases[k + 1].basis = (out.bases[k + 1].basis * q).eval();
    }
    return out;
}

}  // namespace parlow
