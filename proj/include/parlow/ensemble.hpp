#pragma once

// Weighted finite ensembles: square-integrable random vectors whose
// expectations are exact weighted sums, so covariance identities and
// perturbation bounds can be asserted at round-off tolerances.

#include <parlow/eig.hpp>
#include <parlow/norms.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace parlow {

class Ensemble {
  public:
    // points: one sample per column (N x K); weights: length K, nonnegative,
    // summing to 1 within 1e-12.
    Ensemble(Matrix points, Vector weights)
        : points_(std::move(points)), weights_(std::move(weights)) {
        require_nonempty(points_, "Ensemble");
        require_finite(points_, "Ensemble");
        if (weights_.size() != points_.cols()) {
            throw std::invalid_argument("Ensemble: weight count must match point count");
        }
        for (Eigen::Index k = 0; k < weights_.size(); ++k) {
            if (!(weights_[k] >= 0.0)) {
                throw std::invalid_argument("Ensemble: negative weight at index " +
                                            std::to_string(k));
            }
        }
        if (std::abs(weights_.sum() - 1.0) > 1e-12) {
            throw std::invalid_argument("Ensemble: weights must sum to 1, got " +
                                        std::to_string(weights_.sum()));
        }
    }

    static Ensemble uniform(Matrix points) {
        const Eigen::Index k = points.cols();
        return Ensemble(std::move(points), Vector::Constant(k, 1.0 / static_cast<double>(k)));
    }

    Eigen::Index dim() const { return points_.rows(); }
    Eigen::Index size() const { return points_.cols(); }
    const Matrix& points() const { return points_; }
    const Vector& weights() const { return weights_; }

  private:
    Matrix points_;
    Vector weights_;
};

// Joint law of a pair (Z, Z') on a shared finite sample space.
class CoupledEnsemble {
  public:
    CoupledEnsemble(Matrix first, Matrix second, Vector weights)
        : first_(Ensemble(std::move(first), weights)),
          second_(Ensemble(std::move(second), std::move(weights))) {
        if (first_.dim() != second_.dim() || first_.size() != second_.size()) {
            throw std::invalid_argument("CoupledEnsemble: mismatched member shapes");
        }
    }

    const Ensemble& first() const { return first_; }
    const Ensemble& second() const { return second_; }
    const Vector& weights() const { return first_.weights(); }

  private:
    Ensemble first_;
    Ensemble second_;
};

struct PodBasis {
    Eigen::Index n = 0;
    Matrix basis;        // N x n, orthonormal, deterministic signs
    Vector eigenvalues;  // all N, nonincreasing, clamped at 0
    bool gap_degenerate = false;  // lambda_n ~ lambda_{n+1}: basis not unique
};

// E||X||^2, the trace of the covariance.
inline double mean_square_norm(const Ensemble& e) {
    double acc = 0.0;
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        acc += e.weights()[k] * e.points().col(k).squaredNorm();
    }
    return acc;
}

// Uncentered covariance sum_k w_k x_k x_k^T, symmetrized on output.
inline Matrix covariance(const Ensemble& e) {
    const Matrix c = e.points() * e.weights().asDiagonal() * e.points().transpose();
    return (c + c.transpose()) / 2.0;
}

// Top-n eigenbasis of the covariance. Eigenvalues in [-1e-12, 0) are
// round-off and clamp to zero; anything lower is an internal error.
inline PodBasis pod(const Ensemble& e, Eigen::Index n, double gap_tol = 1e-8) {
    if (n < 1 || n > e.dim()) {
        throw std::invalid_argument("pod: n must lie in [1, " + std::to_string(e.dim()) +
                                    "], got " + std::to_string(n));
    }
    const auto eig = sym_eig(covariance(e));
    PodBasis b;
    b.n = n;
    b.basis = eig.vectors.leftCols(n);
    b.eigenvalues = eig.values;
    for (Eigen::Index i = 0; i < b.eigenvalues.size(); ++i) {
        if (b.eigenvalues[i] < -1e-12) {
            throw std::runtime_error("pod: covariance eigenvalue " + std::to_string(i) +
                                     " is negative beyond round-off: " +
                                     std::to_string(b.eigenvalues[i]));
        }
        if (b.eigenvalues[i] < 0.0) b.eigenvalues[i] = 0.0;
    }
    if (n < e.dim()) {
        b.gap_degenerate =
            b.eigenvalues[n - 1] - b.eigenvalues[n] <= gap_tol * b.eigenvalues[0];
    }
    return b;
}

// E||X - PX||^2 for an orthogonal projector, as a direct weighted sum.
inline double projection_error(const Ensemble& e, const Matrix& p) {
    if (p.rows() != p.cols() || p.rows() != e.dim()) {
        throw std::invalid_argument("projection_error: projector must be " +
                                    std::to_string(e.dim()) + "x" + std::to_string(e.dim()));
    }
    require_finite(p, "projection_error");
    const double asym = (p - p.transpose()).lpNorm<Eigen::Infinity>();
    if (asym > 1e-10) {
        throw std::invalid_argument("projection_error: projector not symmetric (defect " +
                                    std::to_string(asym) + ")");
    }
    const double idem = (p * p - p).lpNorm<Eigen::Infinity>();
    if (idem > 1e-10) {
        throw std::invalid_argument("projection_error: projector not idempotent (defect " +
                                    std::to_string(idem) + ")");
    }
    double acc = 0.0;
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        acc += e.weights()[k] * (e.points().col(k) - p * e.points().col(k)).squaredNorm();
    }
    return acc;
}

// Normalized modal coefficients eta_{k,i} = <x_k, v_i> / sqrt(lambda_i),
// one row per sample. Requested modes must sit above the rank floor.
inline Matrix kkl_coefficients(const Ensemble& e, const PodBasis& b,
                               double rank_tol = 1e-10) {
    const double floor = rank_tol * b.eigenvalues[0];
    for (Eigen::Index i = 0; i < b.n; ++i) {
        if (!(b.eigenvalues[i] > floor)) {
            throw std::invalid_argument(
                "kkl_coefficients: eigenvalue " + std::to_string(i) +
                " is at or below rank tolerance; coefficients undefined");
        }
    }
    Matrix eta(e.size(), b.n);
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        for (Eigen::Index i = 0; i < b.n; ++i) {
            eta(k, i) = e.points().col(k).dot(b.basis.col(i)) / std::sqrt(b.eigenvalues[i]);
        }
    }
    return eta;
}

struct PerturbationBound {
    double lhs = 0.0;  // trace-norm distance of the two covariances
    double rhs = 0.0;  // E^(1/2)||Z-Z'||^2 * (E^(1/2)||Z||^2 + E^(1/2)||Z'||^2)
};

inline PerturbationBound covariance_perturbation(const CoupledEnsemble& ce) {
    const Matrix diff = covariance(ce.first()) - covariance(ce.second());
    PerturbationBound out;
    out.lhs = schatten_norm(diff, 1.0);
    double mean_sq_gap = 0.0;
    for (Eigen::Index k = 0; k < ce.first().size(); ++k) {
        mean_sq_gap += ce.weights()[k] *
                       (ce.first().points().col(k) - ce.second().points().col(k)).squaredNorm();
    }
    out.rhs = std::sqrt(mean_sq_gap) *
              (std::sqrt(mean_square_norm(ce.first())) + std::sqrt(mean_square_norm(ce.second())));
    return out;
}

}  // namespace parlow
