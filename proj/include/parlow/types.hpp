#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <string>

namespace parlow {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = DenseMatrix<double>;
using Vector = DenseVector<double>;

// Throws invalid_argument naming the first non-finite entry. `op` prefixes the
// message so CLI diagnostics identify the failing operation.
template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* op) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (!std::isfinite(static_cast<double>(a(i, j)))) {
                throw std::invalid_argument(std::string(op) + ": non-finite entry at (" +
                                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
}

template <typename Derived>
void require_nonempty(const Eigen::MatrixBase<Derived>& a, const char* op) {
    if (a.rows() < 1 || a.cols() < 1) {
        throw std::invalid_argument(std::string(op) + ": matrix must have positive dimensions");
    }
}

template <typename DerivedA, typename DerivedB>
void require_same_shape(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                        const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch (" +
                                    std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                    " vs " + std::to_string(b.rows()) + "x" +
                                    std::to_string(b.cols()) + ")");
    }
}

}  // namespace parlow
