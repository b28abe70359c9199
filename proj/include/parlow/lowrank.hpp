#pragma once

// Best rank-n approximation and the functionals that certify it: truncation
// with exact error formulas, the capped-simplex maximum, the trace-pairing
// slack, and frame energies.

#include <parlow/norms.hpp>
#include <parlow/svd.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace parlow {

template <typename Scalar>
struct RankNApproxT {
    Eigen::Index n = 0;           // target rank
    DenseMatrix<Scalar> approx;   // N x M, rank <= n
    SvdFactorsT<Scalar> factors;  // first n triplets of the input factors
    Scalar op_error = Scalar(0);    // sigma_{n+1}
    Scalar frob_error = Scalar(0);  // sqrt(sum_{i>n} sigma_i^2)
    // True when sigma_n and sigma_{n+1} tie within gap_tol * sigma_1; the
    // minimizer is then not unique and continuity guarantees do not apply.
    bool gap_degenerate = false;
};

using RankNApprox = RankNApproxT<double>;

template <typename Scalar>
struct CappedSimplexSolutionT {
    DenseVector<Scalar> weights;  // in [0,1], summing to n
    Scalar value = Scalar(0);
};

using CappedSimplexSolution = CappedSimplexSolutionT<double>;

// Keeps the n leading triplets of f. Error fields come from the sigma vector
// alone (no re-factorization): the discarded head of the spectrum is exactly
// the optimal error in both norms.
template <typename Scalar>
RankNApproxT<Scalar> truncate(const SvdFactorsT<Scalar>& f, Eigen::Index n,
                              Scalar gap_tol = Scalar(1e-8)) {
    const Eigen::Index r = f.sigma.size();
    if (n < 0 || n > r) {
        throw std::invalid_argument("truncate: n must lie in [0, " + std::to_string(r) +
                                    "], got " + std::to_string(n));
    }
    RankNApproxT<Scalar> t;
    t.n = n;
    t.factors.u = f.u.leftCols(n);
    t.factors.v = f.v.leftCols(n);
    t.factors.sigma = f.sigma.head(n);
    t.factors.rank_tol = f.rank_tol;
    t.approx = t.factors.u * t.factors.sigma.asDiagonal() * t.factors.v.transpose();
    t.op_error = n < r ? f.sigma[n] : Scalar(0);
    t.frob_error = n < r ? f.sigma.tail(r - n).norm() : Scalar(0);
    if (n >= 1 && n < r) {
        t.gap_degenerate = f.sigma[n - 1] - f.sigma[n] <= gap_tol * f.sigma[0];
    }
    return t;
}

// n-th largest singular value, 1-indexed; 0 beyond min(rows, cols).
template <typename Derived>
typename Derived::Scalar singular_value(const Eigen::MatrixBase<Derived>& a, Eigen::Index n) {
    if (n < 1) {
        throw std::invalid_argument("singular_value: index must be >= 1, got " +
                                    std::to_string(n));
    }
    const auto f = svd(a);
    return n <= f.sigma.size() ? f.sigma[n - 1] : typename Derived::Scalar(0);
}

// Maximizes sum_i lambda_i * a_i over 0 <= a_i <= 1, sum_i a_i = n. For a
// nonincreasing lambda the top-n indicator is optimal.
template <typename Scalar>
CappedSimplexSolutionT<Scalar> capped_simplex_max(const DenseVector<Scalar>& lambda,
                                                  Eigen::Index n) {
    for (Eigen::Index i = 0; i + 1 < lambda.size(); ++i) {
        if (lambda[i] < lambda[i + 1]) {
            throw std::invalid_argument(
                "capped_simplex_max: lambda must be nonincreasing, violated at index " +
                std::to_string(i));
        }
    }
    if (n < 0 || n > lambda.size()) {
        throw std::invalid_argument("capped_simplex_max: n must lie in [0, " +
                                    std::to_string(lambda.size()) + "], got " +
                                    std::to_string(n));
    }
    CappedSimplexSolutionT<Scalar> s;
    s.weights = DenseVector<Scalar>::Zero(lambda.size());
    s.weights.head(n).setOnes();
    s.value = lambda.head(n).sum();
    return s;
}

// Nonnegative slack of the trace pairing against the singular value pairing:
// sum_i sigma_i(a) sigma_i(b) - <a, b>.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar von_neumann_slack(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
    require_same_shape(a, b, "von_neumann_slack");
    const auto fa = svd(a);
    const auto fb = svd(b);
    return fa.sigma.dot(fb.sigma) - hs_inner(a, b);
}

// sum_i ||a * f_i||^2 over the columns of an orthonormal frame. Bounded by
// the sum of the leading n squared singular values of a.
template <typename DerivedA, typename DerivedF>
typename DerivedA::Scalar frame_energy(const Eigen::MatrixBase<DerivedA>& a,
                                       const Eigen::MatrixBase<DerivedF>& frame) {
    using Scalar = typename DerivedA::Scalar;
    require_finite(a, "frame_energy");
    require_finite(frame, "frame_energy");
    if (a.cols() != frame.rows()) {
        throw std::invalid_argument("frame_energy: frame rows must match matrix columns");
    }
    const DenseMatrix<Scalar> gram = frame.derived().transpose() * frame.derived();
    const Scalar defect =
        (gram - DenseMatrix<Scalar>::Identity(gram.rows(), gram.cols()))
            .template lpNorm<Eigen::Infinity>();
    if (defect > Scalar(1e-10)) {
        throw std::invalid_argument("frame_energy: frame columns not orthonormal (defect " +
                                    std::to_string(defect) + ")");
    }
    return (a.derived() * frame.derived()).squaredNorm();
}

}  // namespace parlow
