#pragma once

// Symmetric eigendecomposition, ordered nonincreasing, with the same
// deterministic sign convention as the SVD. Backed by Eigen's self-adjoint
// solver; intentionally a different algorithm from the Jacobi SVD so the two
// can cross-check each other.

#include <parlow/svd.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace parlow {

template <typename Scalar>
struct SymEigT {
    DenseVector<Scalar> values;   // nonincreasing
    DenseMatrix<Scalar> vectors;  // orthonormal columns, matching order
};

using SymEig = SymEigT<double>;

// Eigendecomposition of a symmetric matrix. Symmetry is enforced up to
// symmetry_tol relative to the largest entry; the symmetrized average is
// what gets decomposed.
template <typename Derived>
SymEigT<typename Derived::Scalar> sym_eig(const Eigen::MatrixBase<Derived>& s,
                                          typename Derived::Scalar symmetry_tol =
                                              typename Derived::Scalar(1e-12)) {
    using Scalar = typename Derived::Scalar;
    require_nonempty(s, "sym_eig");
    require_finite(s, "sym_eig");
    if (s.rows() != s.cols()) {
        throw std::invalid_argument("sym_eig: matrix must be square, got " +
                                    std::to_string(s.rows()) + "x" + std::to_string(s.cols()));
    }
    const DenseMatrix<Scalar> m = s.derived();
    const Scalar scale = std::max(Scalar(1), m.template lpNorm<Eigen::Infinity>());
    const Scalar asym = (m - m.transpose()).template lpNorm<Eigen::Infinity>();
    if (asym > symmetry_tol * scale) {
        throw std::invalid_argument("sym_eig: matrix is not symmetric (max asymmetry " +
                                    std::to_string(asym) + ")");
    }
    const DenseMatrix<Scalar> sym = (m + m.transpose()) / Scalar(2);
    Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("sym_eig: eigensolver failed to converge");
    }

    const Eigen::Index n = m.rows();
    SymEigT<Scalar> e;
    e.values.resize(n);
    e.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        e.values[k] = solver.eigenvalues()[n - 1 - k];
        e.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
    }
    detail::apply_sign_convention(e.vectors);
    return e;
}

}  // namespace parlow
