#pragma once

// Thin singular value decomposition by one-sided cyclic Jacobi rotations.
// Deterministic: no randomness, no parallelism, and a sign convention that
// pins the otherwise-arbitrary column signs, so identical inputs yield
// bit-identical factors.

#include <parlow/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace parlow {

template <typename Scalar>
struct SvdFactorsT {
    DenseMatrix<Scalar> u;      // N x r, orthonormal columns
    DenseVector<Scalar> sigma;  // r, nonincreasing, nonnegative
    DenseMatrix<Scalar> v;      // M x r, orthonormal columns
    Scalar rank_tol = Scalar(1e-10);  // relative to sigma[0]

    // Number of singular values above rank_tol * sigma[0].
    Eigen::Index numerical_rank() const {
        if (sigma.size() == 0 || sigma[0] <= Scalar(0)) return 0;
        const Scalar floor = rank_tol * sigma[0];
        Eigen::Index r = 0;
        while (r < sigma.size() && sigma[r] > floor) ++r;
        return r;
    }
};

using SvdFactors = SvdFactorsT<double>;

namespace detail {

// True when the largest-magnitude entry of column k is negative (ties
// resolved at the lowest row index).
template <typename Scalar>
bool column_needs_flip(const DenseMatrix<Scalar>& u, Eigen::Index k) {
    Eigen::Index lead = 0;
    Scalar best = std::abs(u(0, k));
    for (Eigen::Index i = 1; i < u.rows(); ++i) {
        const Scalar m = std::abs(u(i, k));
        if (m > best) {
            best = m;
            lead = i;
        }
    }
    return u(lead, k) < Scalar(0);
}

// Flips column signs so the largest-magnitude entry of each column is
// nonnegative.
template <typename Scalar>
void apply_sign_convention(DenseMatrix<Scalar>& u) {
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        if (column_needs_flip(u, k)) u.col(k) = -u.col(k);
    }
}

// Pair form: v follows u so the reconstruction is unchanged.
template <typename Scalar>
void apply_sign_convention(DenseMatrix<Scalar>& u, DenseMatrix<Scalar>& v) {
    for (Eigen::Index k = 0; k < u.cols(); ++k) {
        if (column_needs_flip(u, k)) {
            u.col(k) = -u.col(k);
            v.col(k) = -v.col(k);
        }
    }
}

// Fills column k of u with a unit vector orthogonal to columns [0, k): the
// canonical basis vector with the largest residual after projection, then
// re-orthogonalized twice. Deterministic, lowest index wins ties.
template <typename Scalar>
void complete_orthonormal_column(DenseMatrix<Scalar>& u, Eigen::Index k) {
    const Eigen::Index n = u.rows();
    auto built = u.leftCols(k);
    Eigen::Index pick = 0;
    Scalar best = Scalar(-1);
    for (Eigen::Index j = 0; j < n; ++j) {
        DenseVector<Scalar> r = DenseVector<Scalar>::Unit(n, j);
        r -= built * (built.transpose() * r);
        const Scalar rn = r.norm();
        if (rn > best) {
            best = rn;
            pick = j;
        }
    }
    DenseVector<Scalar> r = DenseVector<Scalar>::Unit(n, pick);
    r -= built * (built.transpose() * r);
    r -= built * (built.transpose() * r);
    u.col(k) = r / r.norm();
}

// Core one-sided Jacobi on a matrix with rows >= cols. Returns factors of
// the input (unsorted, unsigned); caller sorts and applies the convention.
template <typename Scalar>
SvdFactorsT<Scalar> jacobi_svd_tall(DenseMatrix<Scalar> w, Scalar rank_tol) {
    constexpr int kMaxSweeps = 64;
    constexpr Scalar kGramTol = Scalar(1e-14);

    const Eigen::Index cols = w.cols();
    DenseMatrix<Scalar> v = DenseMatrix<Scalar>::Identity(cols, cols);

    // Power-of-two prescaling keeps the Gram entries away from overflow and
    // underflow; exactly undone on the singular values.
    Scalar scale = Scalar(1);
    const Scalar frob0 = w.norm();
    if (frob0 > Scalar(0) && (frob0 > Scalar(1e100) || frob0 < Scalar(1e-100))) {
        scale = std::ldexp(Scalar(1), -std::ilogb(frob0));
        w *= scale;
    }
    const Scalar frob2 = w.squaredNorm();
    const Scalar abs_gate = kGramTol * frob2;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool converged = true;
        for (Eigen::Index i = 0; i + 1 < cols; ++i) {
            for (Eigen::Index j = i + 1; j < cols; ++j) {
                const Scalar gii = w.col(i).squaredNorm();
                const Scalar gjj = w.col(j).squaredNorm();
                const Scalar gij = w.col(i).dot(w.col(j));
                const Scalar mag = std::abs(gij);
                // The absolute gate is the declared stopping rule; the
                // relative gate is what bounds |u_i . u_j| afterwards.
                if (mag <= abs_gate && mag <= kGramTol * std::sqrt(gii * gjj)) continue;
                converged = false;
                const Scalar tau = (gjj - gii) / (Scalar(2) * gij);
                Scalar t;
                if (std::abs(tau) > Scalar(1e150)) {
                    t = Scalar(1) / (Scalar(2) * tau);
                } else {
                    const Scalar sg = tau < Scalar(0) ? Scalar(-1) : Scalar(1);
                    t = sg / (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
                }
                const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
                const Scalar s = c * t;
                const DenseVector<Scalar> wi = w.col(i);
                w.col(i) = c * wi - s * w.col(j);
                w.col(j) = s * wi + c * w.col(j);
                const DenseVector<Scalar> vi = v.col(i);
                v.col(i) = c * vi - s * v.col(j);
                v.col(j) = s * vi + c * v.col(j);
            }
        }
        if (converged) break;
    }

    SvdFactorsT<Scalar> f;
    f.rank_tol = rank_tol;
    f.sigma.resize(cols);
    for (Eigen::Index k = 0; k < cols; ++k) f.sigma[k] = w.col(k).norm();

    std::vector<Eigen::Index> order(static_cast<size_t>(cols));
    std::iota(order.begin(), order.end(), Eigen::Index(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return f.sigma[a] > f.sigma[b]; });

    DenseVector<Scalar> sorted(cols);
    f.u.resize(w.rows(), cols);
    f.v.resize(cols, cols);
    for (Eigen::Index k = 0; k < cols; ++k) {
        const Eigen::Index src = order[static_cast<size_t>(k)];
        sorted[k] = f.sigma[src];
        f.v.col(k) = v.col(src);
        if (f.sigma[src] > Scalar(0)) {
            f.u.col(k) = w.col(src) / f.sigma[src];
        } else {
            f.u.col(k).setZero();  // placeholder, completed below
        }
    }
    f.sigma = sorted / scale;
    for (Eigen::Index k = 0; k < cols; ++k) {
        if (f.sigma[k] <= Scalar(0)) complete_orthonormal_column(f.u, k);
    }
    return f;
}

}  // namespace detail

// Thin SVD a = u * sigma.asDiagonal() * v^T with r = min(rows, cols) factors.
// rank_tol is stored for numerical_rank and downstream rank checks.
template <typename Derived>
SvdFactorsT<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& a,
                                          typename Derived::Scalar rank_tol =
                                              typename Derived::Scalar(1e-10)) {
    using Scalar = typename Derived::Scalar;
    require_nonempty(a, "svd");
    require_finite(a, "svd");
    SvdFactorsT<Scalar> f;
    if (a.rows() >= a.cols()) {
        f = detail::jacobi_svd_tall<Scalar>(a.derived(), rank_tol);
    } else {
        f = detail::jacobi_svd_tall<Scalar>(a.derived().transpose(), rank_tol);
        std::swap(f.u, f.v);
    }
    detail::apply_sign_convention(f.u, f.v);
    return f;
}

}  // namespace parlow
