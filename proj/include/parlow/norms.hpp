#pragma once

// Spectral, Schatten, and Hilbert-Schmidt functionals. All of them reduce to
// the deterministic SVD, so they inherit its accuracy and reproducibility.

#include <parlow/svd.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace parlow {

// Largest singular value; 0 for the zero matrix.
template <typename Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
    const auto f = svd(a);
    return f.sigma.size() > 0 ? f.sigma[0] : typename Derived::Scalar(0);
}

// (sum_i sigma_i^p)^(1/p) for finite p >= 1. Evaluated in units of sigma[0]
// so large exponents do not overflow.
template <typename Derived>
typename Derived::Scalar schatten_norm(const Eigen::MatrixBase<Derived>& a,
                                       typename Derived::Scalar p) {
    using Scalar = typename Derived::Scalar;
    if (!(p >= Scalar(1)) || !std::isfinite(static_cast<double>(p))) {
        throw std::invalid_argument("schatten_norm: p must be a finite real >= 1, got " +
                                    std::to_string(static_cast<double>(p)));
    }
    const auto f = svd(a);
    const Scalar top = f.sigma[0];
    if (top <= Scalar(0)) return Scalar(0);
    Scalar acc = Scalar(0);
    for (Eigen::Index i = 0; i < f.sigma.size(); ++i) {
        acc += std::pow(f.sigma[i] / top, p);
    }
    return top * std::pow(acc, Scalar(1) / p);
}

// Frobenius inner product <a, b> = Tr(a^T b); shapes must match.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar hs_inner(const Eigen::MatrixBase<DerivedA>& a,
                                   const Eigen::MatrixBase<DerivedB>& b) {
    require_same_shape(a, b, "hs_inner");
    require_finite(a, "hs_inner");
    require_finite(b, "hs_inner");
    return (a.derived().transpose() * b.derived()).trace();
}

}  // namespace parlow
