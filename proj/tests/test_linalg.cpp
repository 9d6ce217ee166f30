#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "orbit/errors.hpp"
#include "orbit/linalg.hpp"

using namespace orbit;

TEST(Inner, Examples) {
    EXPECT_EQ(inner(Vector{1, 0}, Vector{0, 1}), 0.0);
    EXPECT_EQ(inner(Vector{1, 2}, Vector{3, 4}), 11.0);
    EXPECT_EQ(inner(Vector{3, 4}, Vector{3, 4}), 25.0);
    EXPECT_DOUBLE_EQ(norm(Vector{3, 4}), 5.0);
}

TEST(Inner, DimensionMismatchThrows) {
    EXPECT_THROW(inner(Vector{1, 2}, Vector{1, 2, 3}), InputError);
}

TEST(Norm, ScaledAgainstOverflow) {
    EXPECT_DOUBLE_EQ(norm(Vector{3e200, 4e200}), 5e200);
    EXPECT_EQ(norm(Vector(3)), 0.0);
}

TEST(Orthonormalize, Examples) {
    const std::vector<Vector> collinear{Vector{1, 0}, Vector{2, 0}};
    OrthonormalBasis b = orthonormalize(collinear, 1e-9);
    ASSERT_EQ(b.rank, 1u);
    EXPECT_NEAR(b.q[0][0], 1.0, 1e-15);
    EXPECT_NEAR(b.q[0][1], 0.0, 1e-15);

    const std::vector<Vector> axes{Vector{1, 0}, Vector{0, 1}};
    b = orthonormalize(axes, 1e-9);
    EXPECT_EQ(b.rank, 2u);

    const std::vector<Vector> three{Vector{1, 1}, Vector{1, -1}, Vector{2, 0}};
    EXPECT_EQ(orthonormalize(three, 1e-9).rank, 2u);
    EXPECT_EQ(oracle::gauss_rank({{1, 1}, {1, -1}, {2, 0}}, 1e-12), 2u);
}

TEST(Orthonormalize, RankMatchesGaussianElimination) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> pick(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t dim = static_cast<std::size_t>(pick(rng));
        const std::size_t count = static_cast<std::size_t>(pick(rng));
        const std::size_t true_rank = std::min<std::size_t>(count, static_cast<std::size_t>(pick(rng)));
        // count vectors inside a random true_rank-dimensional span
        std::vector<Vector> gens;
        for (std::size_t g = 0; g < std::min(true_rank, dim); ++g)
            gens.push_back(oracle::random_vector(rng, dim));
        std::vector<Vector> vs;
        std::vector<std::vector<double>> rows;
        std::normal_distribution<double> n01;
        for (std::size_t i = 0; i < count; ++i) {
            Vector v(dim);
            for (const Vector& g : gens) v.axpy(n01(rng), g);
            vs.push_back(v);
            rows.push_back(v.std_vector());
        }
        const OrthonormalBasis b = orthonormalize(vs, 1e-9);
        EXPECT_EQ(b.rank, oracle::gauss_rank(rows, 1e-9)) << "trial " << trial;
        for (std::size_t i = 0; i < b.rank; ++i)
            for (std::size_t j = 0; j < b.rank; ++j)
                EXPECT_NEAR(inner(b.q[i], b.q[j]), i == j ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Projector, Algebra) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::vector<Vector> vs{oracle::random_vector(rng, 4), oracle::random_vector(rng, 4)};
        const OrthonormalBasis b = orthonormalize(vs, 1e-9);
        const Matrix p = projector(b.q, 4);
        EXPECT_LT(max_abs_diff(p * p, p), 1e-10);
        EXPECT_LT(max_abs_diff(p.transpose(), p), 1e-10);
        for (const Vector& v : vs) EXPECT_LT(max_abs_diff(p.apply(v), v), 1e-10);
    }
}

TEST(SingularValues, Examples) {
    std::vector<double> s = singular_values(Matrix::diagonal({3, -2}), 1e-12);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_NEAR(s[0], 3.0, 1e-12);
    EXPECT_NEAR(s[1], 2.0, 1e-12);
    s = singular_values(Matrix::identity(2), 1e-12);
    EXPECT_NEAR(s[0], 1.0, 1e-12);
    EXPECT_NEAR(s[1], 1.0, 1e-12);
}

TEST(SingularValues, SphereGridOracle3x3) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix m = oracle::random_matrix(rng, 3, 3);
        const std::vector<double> s = singular_values(m, 1e-12);
        EXPECT_NEAR(s.front(), oracle::sphere_grid_sigma1(m, 600), 1e-3);
        EXPECT_NEAR(s.back(), oracle::sphere_grid_sigma_min(m, 600), 1e-3 * std::max(1.0, s.back()) + 2e-3);
        for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i - 1], s[i]);
    }
}

TEST(SingularValues, FrobeniusIdentity) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t r = 1 + trial % 4;
        const std::size_t c = 1 + (trial / 4) % 4;
        const Matrix m = oracle::random_matrix(rng, r, c);
        double sum = 0.0;
        for (double v : singular_values(m, 1e-12)) sum += v * v;
        EXPECT_NEAR(sum, frobenius_norm(m) * frobenius_norm(m), 1e-9 * std::max(1.0, sum));
    }
}

TEST(SingularValues, ZeroMatrix) {
    for (double v : singular_values(Matrix(3, 3), 1e-12)) EXPECT_EQ(v, 0.0);
    EXPECT_EQ(spectral_norm(Matrix(2, 2)), 0.0);
}

TEST(SingularValues, NonFiniteIsInputError) {
    Matrix m = Matrix::identity(2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(singular_values(m, 1e-12), InputError);
}

TEST(Cholesky, SolvesSpd) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = oracle::random_matrix(rng, 4, 4);
        Matrix spd = a.transpose() * a;
        for (std::size_t i = 0; i < 4; ++i) spd(i, i) += 0.1;
        const Vector b = oracle::random_vector(rng, 4);
        const Vector x = cholesky_solve(spd, b);
        EXPECT_LT(max_abs_diff(spd.apply(x), b), 1e-9);
        EXPECT_LT(max_abs_diff(spd * spd_inverse(spd), Matrix::identity(4)), 1e-8);
    }
}

TEST(Cholesky, SingularThrows) {
    EXPECT_THROW(cholesky_solve(Matrix::diagonal({1, 0}), Vector{1, 1}), SolverError);
}
