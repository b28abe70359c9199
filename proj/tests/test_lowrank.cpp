#include <parlow/lowrank.hpp>
#include <parlow/norms.hpp>
#include <parlow/random.hpp>
#include <parlow/svd.hpp>

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace {

using parlow::Matrix;
using parlow::Vector;

// Exhaustive maximizer of sum_i lambda_i a_i over the capped simplex with
// every a_i restricted to multiples of `step`. Independent oracle for the
// greedy solution.
double brute_force_capped_max(const Vector& lambda, Eigen::Index n, double step) {
    const Eigen::Index len = lambda.size();
    const int levels = static_cast<int>(std::lround(1.0 / step)) + 1;
    double best = -std::numeric_limits<double>::infinity();
    std::vector<int> choice(static_cast<size_t>(len), 0);
    const int target = static_cast<int>(n) * (levels - 1);

    // Depth-first over quantized weights; the last coordinate is forced by
    // the sum constraint, pruned when the remainder is unreachable.
    auto rec = [&](auto&& self, Eigen::Index idx, int used) -> void {
        const Eigen::Index remaining = len - idx;
        if (target - used > static_cast<int>(remaining) * (levels - 1)) return;
        if (idx == len - 1) {
            const int last = target - used;
            if (last < 0 || last > levels - 1) return;
            choice[static_cast<size_t>(idx)] = last;
            double value = 0.0;
            for (Eigen::Index i = 0; i < len; ++i) {
                value += lambda[i] * (choice[static_cast<size_t>(i)] * step);
            }
            best = std::max(best, value);
            return;
        }
        for (int lv = 0; lv < levels && used + lv <= target; ++lv) {
            choice[static_cast<size_t>(idx)] = lv;
            self(self, idx + 1, used + lv);
        }
    };
    rec(rec, 0, 0);
    return best;
}

TEST(Truncate, PinnedDiagonalCase) {
    Matrix d = Vector::LinSpaced(3, 3.0, 1.0).asDiagonal();
    const auto t = parlow::truncate(parlow::svd(d), 2);
    Matrix expected = d;
    expected(2, 2) = 0.0;
    EXPECT_LE((t.approx - expected).norm(), 1e-12);
    EXPECT_NEAR(t.op_error, 1.0, 1e-14);
    EXPECT_NEAR(t.frob_error, 1.0, 1e-14);
    EXPECT_EQ(t.n, 2);
    EXPECT_FALSE(t.gap_degenerate);
}

TEST(Truncate, FullRankAndZeroRankEdges) {
    std::mt19937_64 rng(8001);
    const Matrix a = parlow::gaussian_matrix(rng, 5, 4);
    const auto f = parlow::svd(a);
    const auto full = parlow::truncate(f, 4);
    EXPECT_LE((full.approx - a).norm(), 1e-12 * std::max(1.0, a.norm()));
    EXPECT_LE(full.op_error, 1e-12);
    EXPECT_LE(full.frob_error, 1e-12);

    const auto zero = parlow::truncate(f, 0);
    EXPECT_EQ(zero.approx.rows(), 5);
    EXPECT_EQ(zero.approx.cols(), 4);
    EXPECT_LE(zero.approx.norm(), 0.0);
    EXPECT_NEAR(zero.op_error, f.sigma[0], 1e-14);
    EXPECT_NEAR(zero.frob_error, a.norm(), 1e-10);

    EXPECT_THROW(parlow::truncate(f, 5), std::invalid_argument);
    EXPECT_THROW(parlow::truncate(f, -1), std::invalid_argument);
}

TEST(Truncate, ErrorsMatchRefactoredResidual) {
    std::mt19937_64 rng(8002);
    std::uniform_int_distribution<int> dim(2, 8);
    for (int trial = 0; trial < 100; ++trial) {
        const Matrix a = parlow::gaussian_matrix(rng, dim(rng), dim(rng));
        const auto f = parlow::svd(a);
        const double scale = std::max(1.0, f.sigma[0]);
        for (Eigen::Index n = 0; n <= f.sigma.size(); ++n) {
            const auto t = parlow::truncate(f, n);
            const Matrix residual = a - t.approx;
            EXPECT_NEAR(parlow::operator_norm(residual), t.op_error, 1e-10 * scale);
            EXPECT_NEAR(residual.norm(), t.frob_error, 1e-10 * scale);
        }
    }
}

TEST(Truncate, BeatsRandomRankNCompetitors) {
    std::mt19937_64 rng(8003);
    const Matrix a = parlow::gaussian_matrix(rng, 6, 6);
    const auto t = parlow::truncate(parlow::svd(a), 2);
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix x = parlow::gaussian_matrix(rng, 6, 2);
        const Matrix y = parlow::gaussian_matrix(rng, 6, 2);
        const Matrix r = x * y.transpose();
        EXPECT_LE(t.op_error, parlow::operator_norm((a - r).eval()) + 1e-10);
        EXPECT_LE(t.frob_error, (a - r).norm() + 1e-10);
    }
}

TEST(Truncate, DegenerateGapFlagged) {
    std::mt19937_64 rng(8004);
    Vector sigma(4);
    sigma << 3.0, 2.0, 2.0, 1.0;
    const Matrix a = parlow::matrix_with_spectrum(rng, 5, 4, sigma);
    const auto f = parlow::svd(a);
    EXPECT_TRUE(parlow::truncate(f, 2).gap_degenerate);
    EXPECT_FALSE(parlow::truncate(f, 1).gap_degenerate);
    EXPECT_FALSE(parlow::truncate(f, 3).gap_degenerate);
}

TEST(Truncate, HsUniquenessUnderGap) {
    // Competitors essentially as good as the optimum must essentially be the
    // optimum. Perturbed-factor competitors probe the premise from inside.
    std::mt19937_64 rng(8005);
    Vector sigma(5);
    sigma << 3.0, 2.0, 1.0, 0.5, 0.25;  // sigma_2 - sigma_3 = 1 >= 0.1
    const Matrix a = parlow::matrix_with_spectrum(rng, 5, 5, sigma);
    const auto f = parlow::svd(a);
    const auto t = parlow::truncate(f, 2);
    int premise_hits = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const double delta = trial < 100 ? 1e-9 : 1e-2;
        const Matrix du = parlow::gaussian_matrix(rng, 5, 2) * delta;
        const Matrix dv = parlow::gaussian_matrix(rng, 5, 2) * delta;
        const Matrix r = (t.factors.u + du) * t.factors.sigma.asDiagonal() *
                         (t.factors.v + dv).transpose();
        if ((a - r).norm() <= t.frob_error + 1e-12) {
            ++premise_hits;
            EXPECT_LE((r - t.approx).norm(), 1e-6);
        }
    }
    EXPECT_GE(premise_hits, 50);  // the tiny-perturbation half must qualify
}

TEST(SingularValue, IndexingAndBeyondRank) {
    Matrix d = Vector::LinSpaced(3, 3.0, 1.0).asDiagonal();
    EXPECT_DOUBLE_EQ(parlow::singular_value(d, 2), 2.0);
    EXPECT_DOUBLE_EQ(parlow::singular_value(d, 7), 0.0);
    EXPECT_THROW(parlow::singular_value(d, 0), std::invalid_argument);

    std::mt19937_64 rng(8006);
    const Matrix a = parlow::gaussian_matrix(rng, 4, 4);
    EXPECT_NEAR(parlow::singular_value(a, 1), parlow::operator_norm(a), 1e-12);
}

TEST(SingularValue, OneLipschitzInTheMatrix) {
    std::mt19937_64 rng(8007);
    std::uniform_int_distribution<int> dim(2, 8);
    for (int trial = 0; trial < 500; ++trial) {
        const int rows = dim(rng), cols = dim(rng);
        const Matrix a = parlow::gaussian_matrix(rng, rows, cols);
        const Matrix b = parlow::gaussian_matrix(rng, rows, cols);
        const double dist = parlow::operator_norm((a - b).eval());
        const auto fa = parlow::svd(a);
        const auto fb = parlow::svd(b);
        for (Eigen::Index i = 0; i < fa.sigma.size(); ++i) {
            EXPECT_LE(std::abs(fa.sigma[i] - fb.sigma[i]), dist + 1e-10);
        }
    }
}

TEST(CappedSimplex, PinnedExamples) {
    Vector l3(3);
    l3 << 3.0, 2.0, 1.0;
    const auto s = parlow::capped_simplex_max(l3, 2);
    EXPECT_DOUBLE_EQ(s.value, 5.0);
    EXPECT_DOUBLE_EQ(s.weights[0], 1.0);
    EXPECT_DOUBLE_EQ(s.weights[1], 1.0);
    EXPECT_DOUBLE_EQ(s.weights[2], 0.0);

    Vector ones = Vector::Ones(3);
    EXPECT_DOUBLE_EQ(parlow::capped_simplex_max(ones, 3).value, 3.0);

    Vector bad(2);
    bad << 1.0, 2.0;
    EXPECT_THROW(parlow::capped_simplex_max(bad, 1), std::invalid_argument);
    EXPECT_THROW(parlow::capped_simplex_max(l3, 4), std::invalid_argument);
}

TEST(CappedSimplex, GreedyMatchesBruteForceGrid) {
    Vector pinned(5);
    pinned << 5.0, 4.0, 4.0, 1.0, 0.5;
    const auto g = parlow::capped_simplex_max(pinned, 2);
    EXPECT_DOUBLE_EQ(g.value, 9.0);
    EXPECT_DOUBLE_EQ(brute_force_capped_max(pinned, 2, 0.05), 9.0);

    std::mt19937_64 rng(8010);
    std::uniform_int_distribution<int> len_dist(1, 6);
    std::uniform_real_distribution<double> lam(0.0, 5.0);
    for (int trial = 0; trial < 25; ++trial) {
        const int len = len_dist(rng);
        Vector lambda(len);
        for (int i = 0; i < len; ++i) lambda[i] = lam(rng);
        std::sort(lambda.data(), lambda.data() + len, std::greater<double>());
        std::uniform_int_distribution<int> n_dist(0, len);
        const Eigen::Index n = n_dist(rng);
        const auto greedy = parlow::capped_simplex_max(lambda, n);
        const double brute = brute_force_capped_max(lambda, n, 0.05);
        EXPECT_LE(brute, greedy.value + 1e-12);
        EXPECT_LE(greedy.value - brute, static_cast<double>(n) * 0.05 * lambda[0] + 1e-12);
        EXPECT_NEAR(greedy.weights.sum(), static_cast<double>(n), 1e-12);
    }
}

TEST(VonNeumannSlack, PinnedAndRandomPairs) {
    Matrix d12 = Matrix::Zero(2, 2);
    d12.diagonal() << 1.0, 2.0;
    EXPECT_NEAR(parlow::von_neumann_slack(d12, d12), 0.0, 1e-12);

    Matrix e1 = Matrix::Zero(2, 2), e2 = Matrix::Zero(2, 2), e2neg = Matrix::Zero(2, 2);
    e1(0, 0) = 1.0;
    e2(1, 1) = 1.0;
    e2neg(1, 1) = -1.0;
    EXPECT_NEAR(parlow::von_neumann_slack(e1, e2), 1.0, 1e-12);  // sigma pairing 1, trace 0
    EXPECT_NEAR(parlow::von_neumann_slack(e1, e2neg), 1.0, 1e-12);
    EXPECT_THROW(parlow::von_neumann_slack(Matrix::Zero(2, 2), Matrix::Zero(3, 3)),
                 std::invalid_argument);

    std::mt19937_64 rng(8011);
    for (int trial = 0; trial < 200; ++trial) {
        const Matrix a = parlow::gaussian_matrix(rng, 4, 4);
        const Matrix b = parlow::gaussian_matrix(rng, 4, 4);
        EXPECT_GE(parlow::von_neumann_slack(a, b),
                  -1e-10 * (1.0 + a.norm() * b.norm()));
    }
}

TEST(FrameEnergy, PinnedAndBound) {
    Matrix d = Vector::LinSpaced(3, 3.0, 1.0).asDiagonal();
    EXPECT_NEAR(parlow::frame_energy(d, Matrix::Identity(3, 3).leftCols(2)), 13.0, 1e-12);
    EXPECT_NEAR(parlow::frame_energy(d, Matrix::Identity(3, 3).rightCols(2)), 5.0, 1e-12);

    Matrix skew(3, 2);
    skew << 1.0, 1.0, 0.0, 1.0, 0.0, 0.0;
    EXPECT_THROW(parlow::frame_energy(d, skew), std::invalid_argument);

    std::mt19937_64 rng(8012);
    const Matrix a = parlow::gaussian_matrix(rng, 5, 5);
    const auto f = parlow::svd(a);
    const double head2 = f.sigma[0] * f.sigma[0] + f.sigma[1] * f.sigma[1];
    for (int trial = 0; trial < 500; ++trial) {
        const Matrix frame = parlow::random_orthonormal(rng, 5, 2);
        EXPECT_LE(parlow::frame_energy(a, frame), head2 + 1e-10);
    }
    // The top-2 right singular frame saturates the bound under a strict gap.
    EXPECT_NEAR(parlow::frame_energy(a, f.v.leftCols(2).eval()), head2, 1e-10);
}

}  // namespace
