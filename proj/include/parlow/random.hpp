#pragma once

// Seeded generators for property suites. Every draw flows through one
// mt19937_64 stream owned by the caller, so a run is reproducible from its
// seed alone.

#include <parlow/ensemble.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>
#include <Eigen/QR>

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace parlow {

inline Matrix gaussian_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = normal(rng);
    }
    return a;
}

inline Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
    return gaussian_matrix(rng, n, 1);
}

inline Vector random_unit_vector(std::mt19937_64& rng, Eigen::Index n) {
    Vector v = gaussian_vector(rng, n);
    while (v.norm() < 1e-8) v = gaussian_vector(rng, n);
    return v / v.norm();
}

// n x k matrix with orthonormal columns: QR of a Gaussian draw, with the R
// diagonal sign absorbed so the result is unambiguous.
inline Matrix random_orthonormal(std::mt19937_64& rng, Eigen::Index n, Eigen::Index k) {
    const Matrix g = gaussian_matrix(rng, n, k);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(n, k);
    const Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

// rows x cols matrix with the prescribed singular values (nonincreasing,
// length min(rows, cols)) and random singular directions.
inline Matrix matrix_with_spectrum(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                                   const Vector& sigma) {
    const Matrix u = random_orthonormal(rng, rows, sigma.size());
    const Matrix v = random_orthonormal(rng, cols, sigma.size());
    return u * sigma.asDiagonal() * v.transpose();
}

// Random rank-n orthogonal projector on R^dim.
inline Matrix random_projector(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index n) {
    const Matrix q = random_orthonormal(rng, dim, n);
    Matrix p = q * q.transpose();
    return (p + p.transpose()) / 2.0;
}

// Gaussian ensemble with random positive weights normalized to sum 1.
inline Ensemble random_ensemble(std::mt19937_64& rng, Eigen::Index dim, Eigen::Index count) {
    std::uniform_real_distribution<double> w(0.1, 1.0);
    Vector weights(count);
    for (Eigen::Index k = 0; k < count; ++k) weights[k] = w(rng);
    weights /= weights.sum();
    return Ensemble(gaussian_matrix(rng, dim, count), weights);
}

// Callable xi -> SPD matrix, smooth on [0, 1], with eigenvalue gaps >= 0.25
// by construction: eigenvalues base_i + 0.1*sin(a_i + b_i*xi) spaced 0.45
// apart, conjugated by a product of Givens rotations with affine angles.
inline std::function<Matrix(double)> random_smooth_spd_family(std::mt19937_64& rng,
                                                              Eigen::Index dim) {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<std::array<double, 2>> phases(static_cast<size_t>(dim));
    for (auto& p : phases) p = {unit(rng), unit(rng)};
    std::vector<std::array<double, 2>> angles;
    for (Eigen::Index i = 0; i + 1 < dim; ++i) {
        angles.push_back({unit(rng), unit(rng)});
    }
    return [dim, phases, angles](double xi) {
        Vector lam(dim);
        for (Eigen::Index i = 0; i < dim; ++i) {
            const auto& p = phases[static_cast<size_t>(i)];
            lam[i] = 1.0 + 0.45 * static_cast<double>(dim - 1 - i) +
                     0.1 * std::sin(p[0] + p[1] * xi);
        }
        Matrix q = Matrix::Identity(dim, dim);
        for (size_t j = 0; j < angles.size(); ++j) {
            const double theta = angles[j][0] + angles[j][1] * xi;
            Matrix g = Matrix::Identity(dim, dim);
            const auto i = static_cast<Eigen::Index>(j);
            g(i, i) = std::cos(theta);
            g(i, i + 1) = -std::sin(theta);
            g(i + 1, i) = std::sin(theta);
            g(i + 1, i + 1) = std::cos(theta);
            q = (q * g).eval();
        }
        Matrix a = q * lam.asDiagonal() * q.transpose();
        return ((a + a.transpose()) / 2.0).eval();
    };
}

}  // namespace parlow
