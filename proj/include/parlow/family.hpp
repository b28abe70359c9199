#pragma once

// Parametric families: builtin analytic matrix families and objectives, plus
// grid families that pin one matrix or ensemble per parameter value. Grid
// families never interpolate; evaluation off the grid is an error.

#include <parlow/ensemble.hpp>
#include <parlow/types.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace parlow {

// Uniform grid with both endpoints pinned exactly.
inline std::vector<double> uniform_grid(double a, double b, Eigen::Index count) {
    if (count < 2) {
        throw std::invalid_argument("uniform_grid: count must be >= 2, got " +
                                    std::to_string(count));
    }
    if (!(a < b)) {
        throw std::invalid_argument("uniform_grid: need a < b");
    }
    std::vector<double> g(static_cast<size_t>(count));
    for (Eigen::Index k = 0; k < count; ++k) {
        g[static_cast<size_t>(k)] =
            a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    g.back() = b;
    return g;
}

// diag(xi, 1-xi): the canonical branching family, top direction switches at
// xi = 0.5.
inline Matrix diag2_matrix(double xi) {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = xi;
    a(1, 1) = 1.0 - xi;
    return a;
}

// Rotation-conjugated diag(1+xi, 1-xi): symmetric PSD with spectral gap
// 2*xi and eigenvectors turning at unit rate.
inline Matrix rot2_matrix(double xi) {
    const double c = std::cos(xi), s = std::sin(xi);
    Matrix r(2, 2);
    r << c, -s, s, c;
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 1.0 + xi, 1.0 - xi;
    return r * d * r.transpose();
}

// Smooth 3x3 SPD family with exact eigenvalues (3, 2+0.4*xi, 1): both gaps
// stay >= 0.6 on [0,1] while the eigenvectors rotate in two planes.
inline Matrix heat3_matrix(double xi) {
    const double theta = 0.2 + 0.7 * xi;
    const double phi = -0.3 + 0.5 * xi;
    Matrix g12 = Matrix::Identity(3, 3);
    g12(0, 0) = std::cos(theta);
    g12(0, 1) = -std::sin(theta);
    g12(1, 0) = std::sin(theta);
    g12(1, 1) = std::cos(theta);
    Matrix g23 = Matrix::Identity(3, 3);
    g23(1, 1) = std::cos(phi);
    g23(1, 2) = -std::sin(phi);
    g23(2, 1) = std::sin(phi);
    g23(2, 2) = std::cos(phi);
    const Matrix q = g12 * g23;
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 3.0, 2.0 + 0.4 * xi, 1.0;
    return q * d * q.transpose();
}

// Scalar objective with an argmin branch: interior minimizer 1/(sqrt(3)*xi)
// for small xi, boundary minimizer -1 for large xi, tie at xi = 2/sqrt(3).
inline double cubic_objective(double xi, double c) {
    const double t = xi * c;
    return t * t * t - t;
}

enum class FamilyValue { matrix, ensemble, objective };

class ParamFamily {
  public:
    static ParamFamily builtin(const std::string& id) {
        const auto [lo, hi] = builtin_range_limits(id);
        return builtin(id, lo, hi);
    }

    // Builtin restricted to [xi_min, xi_max]; must nest inside the canonical
    // parameter range.
    static ParamFamily builtin(const std::string& id, double xi_min, double xi_max) {
        const auto [lo, hi] = builtin_range_limits(id);
        if (!(xi_min < xi_max) || xi_min < lo || xi_max > hi) {
            throw std::invalid_argument("ParamFamily: range for '" + id + "' must nest in [" +
                                        std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        ParamFamily f;
        f.kind_ = Kind::analytic;
        f.value_ = id == "cubic-argmin" ? FamilyValue::objective : FamilyValue::matrix;
        f.id_ = id;
        f.xi_min_ = xi_min;
        f.xi_max_ = xi_max;
        return f;
    }

    static ParamFamily matrix_grid(std::vector<double> xi, std::vector<Matrix> items) {
        ParamFamily f;
        f.kind_ = Kind::grid;
        f.value_ = FamilyValue::matrix;
        f.init_grid(std::move(xi), items.size());
        f.mats_ = std::move(items);
        for (const auto& m : f.mats_) {
            require_nonempty(m, "ParamFamily");
            require_finite(m, "ParamFamily");
            if (m.rows() != f.mats_.front().rows() || m.cols() != f.mats_.front().cols()) {
                throw std::invalid_argument("ParamFamily: grid items must share one shape");
            }
        }
        return f;
    }

    static ParamFamily ensemble_grid(std::vector<double> xi, std::vector<Ensemble> items) {
        ParamFamily f;
        f.kind_ = Kind::grid;
        f.value_ = FamilyValue::ensemble;
        f.init_grid(std::move(xi), items.size());
        f.ens_ = std::move(items);
        for (const auto& e : f.ens_) {
            if (e.dim() != f.ens_.front().dim()) {
                throw std::invalid_argument("ParamFamily: grid ensembles must share dim");
            }
        }
        return f;
    }

    FamilyValue value_type() const { return value_; }
    bool analytic() const { return kind_ == Kind::analytic; }
    const std::string& id() const { return id_; }
    double xi_min() const { return xi_min_; }
    double xi_max() const { return xi_max_; }
    bool contains(double xi) const { return xi >= xi_min_ && xi <= xi_max_; }

    const std::vector<double>& grid() const {
        if (kind_ != Kind::grid) {
            throw std::invalid_argument("ParamFamily: analytic family has no grid");
        }
        return xi_;
    }

    Matrix matrix_at(double xi) const {
        if (value_ != FamilyValue::matrix) {
            throw std::invalid_argument("ParamFamily: family is not matrix-valued");
        }
        if (kind_ == Kind::analytic) {
            check_range(xi);
            if (id_ == "diag2") return diag2_matrix(xi);
            if (id_ == "rot2") return rot2_matrix(xi);
            return heat3_matrix(xi);
        }
        return mats_[grid_index(xi)];
    }

    Ensemble ensemble_at(double xi) const {
        if (value_ != FamilyValue::ensemble) {
            throw std::invalid_argument("ParamFamily: family is not ensemble-valued");
        }
        return ens_[grid_index(xi)];
    }

    double objective_at(double xi, double c) const {
        if (value_ != FamilyValue::objective) {
            throw std::invalid_argument("ParamFamily: family is not an objective");
        }
        check_range(xi);
        return cubic_objective(xi, c);
    }

  private:
    enum class Kind { analytic, grid };

    static std::pair<double, double> builtin_range_limits(const std::string& id) {
        if (id == "diag2") return {0.0, 1.0};
        if (id == "rot2") return {0.1, 1.0};
        if (id == "heat3") return {0.0, 1.0};
        if (id == "cubic-argmin") return {1.0, 2.0};
        throw std::invalid_argument("ParamFamily: unknown builtin id '" + id + "'");
    }

    void init_grid(std::vector<double> xi, size_t item_count) {
        if (xi.empty() || xi.size() != item_count) {
            throw std::invalid_argument("ParamFamily: grid needs one item per xi value");
        }
        for (size_t k = 0; k + 1 < xi.size(); ++k) {
            if (!(xi[k] < xi[k + 1])) {
                throw std::invalid_argument(
                    "ParamFamily: grid xi must be strictly increasing");
            }
        }
        xi_ = std::move(xi);
        xi_min_ = xi_.front();
        xi_max_ = xi_.back();
    }

    void check_range(double xi) const {
        if (!contains(xi)) {
            throw std::invalid_argument("ParamFamily: xi=" + std::to_string(xi) +
                                        " outside range [" + std::to_string(xi_min_) + ", " +
                                        std::to_string(xi_max_) + "]");
        }
    }

    // Exact membership; grid families do not interpolate.
    size_t grid_index(double xi) const {
        const auto it = std::lower_bound(xi_.begin(), xi_.end(), xi);
        if (it == xi_.end() || *it != xi) {
            throw std::invalid_argument("ParamFamily: xi=" + std::to_string(xi) +
                                        " is not a grid point");
        }
        return static_cast<size_t>(it - xi_.begin());
    }

    Kind kind_ = Kind::analytic;
    FamilyValue value_ = FamilyValue::matrix;
    std::string id_;
    double xi_min_ = 0.0;
    double xi_max_ = 1.0;
    std::vector<double> xi_;
    std::vector<Matrix> mats_;
    std::vector<Ensemble> ens_;
};

// Family member at xi; matrix or ensemble depending on the family kind.
inline std::variant<Matrix, Ensemble> eval_family(const ParamFamily& f, double xi) {
    if (f.value_type() == FamilyValue::matrix) return f.matrix_at(xi);
    if (f.value_type() == FamilyValue::ensemble) return f.ensemble_at(xi);
    throw std::invalid_argument("eval_family: objective families have no member matrices");
}

}  // namespace parlow
