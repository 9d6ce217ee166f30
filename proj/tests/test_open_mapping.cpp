#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "orbit/brouwerian_demo.hpp"
#include "orbit/errors.hpp"
#include "orbit/open_mapping.hpp"

using namespace orbit;

namespace {

void expect_member_invariants(const Decomposition& d, const LocatedSet& c) {
    ASSERT_TRUE(d.member()) << d.outcome_name();
    double prev = norm(d.y);
    for (const auto& s : d.steps) {
        EXPECT_EQ(s.lambda, 0);
        EXPECT_LT(s.residual, d.r);
        // ||y - partial|| <= 2^-i r, rescaled
        EXPECT_LE(std::ldexp(s.residual, -s.i), std::ldexp(d.r, -s.i) + 2 * d.oracle_tol);
        EXPECT_LE(s.residual, prev / 2 + 2 * d.oracle_tol + 1e-12);
        EXPECT_LE(c.gauge(s.x, 1e-9), 2.0 + 1e-6);
        prev = s.residual;
    }
    const Vector& xi = std::get<Decomposition::Member>(d.outcome).xi;
    EXPECT_LE(c.gauge(xi, 1e-9), 2.0 + 1e-6);
}

}  // namespace

TEST(GreedyDecompose, DiscMember) {
    const MatrixImageSet disc(Matrix::identity(2));
    const Decomposition d = greedy_decompose(Vector{0.3, 0}, disc, 0.5, 20);
    expect_member_invariants(d, disc);
    const Vector& xi = std::get<Decomposition::Member>(d.outcome).xi;
    EXPECT_LE(distance(xi, Vector{0.3, 0}), std::ldexp(0.5, -20));
}

TEST(GreedyDecompose, ZeroIsMember) {
    const MatrixImageSet disc(Matrix::identity(2));
    const Decomposition d = greedy_decompose(Vector{0, 0}, disc, 0.1, 20);
    ASSERT_TRUE(d.member());
    EXPECT_EQ(norm(std::get<Decomposition::Member>(d.outcome).xi), 0.0);
}

TEST(GreedyDecompose, SegmentWitness) {
    const MatrixImageSet seg(Matrix::diagonal({1, 0}));
    const Decomposition d = greedy_decompose(Vector{0, 0.3}, seg, 0.5, 20);
    ASSERT_TRUE(d.witness());
    const auto& w = std::get<Decomposition::Witness>(d.outcome);
    EXPECT_NEAR(w.dist_z, 0.3, 1e-12);
    EXPECT_LT(norm(w.z), 0.5);
    EXPECT_EQ(d.steps.back().lambda, 1);
}

TEST(GreedyDecompose, LambdaIsIncreasingBinary) {
    const MatrixImageSet seg(Matrix::diagonal({1, 0}));
    // starts near the segment, then the doubling pushes the normal part out
    const Decomposition d = greedy_decompose(Vector{0.4, 0.05}, seg, 0.45, 20);
    ASSERT_TRUE(d.witness());
    for (std::size_t i = 1; i < d.steps.size(); ++i)
        EXPECT_LE(d.steps[i - 1].lambda, d.steps[i].lambda);
    EXPECT_GT(d.steps.size(), 1u);
}

TEST(GreedyDecompose, Preconditions) {
    const MatrixImageSet disc(Matrix::identity(2));
    EXPECT_THROW(greedy_decompose(Vector{0.3, 0.4}, disc, 0.5, 10), InputError);
    EXPECT_THROW(greedy_decompose(Vector{0.3, 0}, disc, 0.5, 0), InputError);
    EXPECT_THROW(greedy_decompose(Vector{0.3, 0, 0}, disc, 0.5, 3), InputError);
}

TEST(GreedyDecompose, UndecidedWhenStepsRunOut) {
    // an ellipse with y well inside: nearest point is y itself, residual 0 at
    // step 1 unless oracle noise; use out_tol = 0 to force the budget.
    const MatrixImageSet body(Matrix{{1, 0.5}, {0, 0.3}});
    DecomposeOptions o;
    o.out_tol = -1.0;
    const Decomposition d = greedy_decompose(Vector{0.1, 0.05}, body, 0.2, 3, o);
    EXPECT_EQ(d.outcome_name(), "Undecided");
    EXPECT_EQ(d.steps.size(), 3u);
}

TEST(GreedyDecompose, OpenMappingConsistency) {
    std::mt19937_64 rng(61);
    const Matrix t{{1.5, 0.4}, {-0.2, 0.8}};
    const MatrixImageSet body(t);
    const RadiusResult rr = inner_radius(body, {Vector{1, 0}, Vector{0, 1}}, 1e-6);
    for (int trial = 0; trial < 40; ++trial) {
        Vector y = oracle::random_vector(rng, 2);
        y *= rr.r * (1 - 5e-6) * std::uniform_real_distribution<double>(0, 1)(rng) / norm(y);
        const Decomposition d = greedy_decompose(y, body, rr.r, 40);
        expect_member_invariants(d, body);
        Vector half = std::get<Decomposition::Member>(d.outcome).xi;
        half *= 0.5;
        EXPECT_LE(body.gauge(half, 1e-9), 1.0 + 1e-6);
    }
}

TEST(InnerRadius, DiagBox) {
    const OperatorSubspace d = diag_subspace();
    for (double c : {1.0, -0.7, 0.5, 0.1, 0.01}) {
        const OrbitBallSet body(d, Vector{1, c});
        const RadiusResult r = inner_radius(body, {Vector{1, 0}, Vector{0, 1}}, 1e-8);
        EXPECT_NEAR(r.r, std::min(1.0, std::abs(c)), 1e-10) << c;
        EXPECT_TRUE(r.certified);
        EXPECT_NEAR(norm(r.direction), 1.0, 1e-12);
        EXPECT_LE(body.gauge(r.r * r.direction, 1e-9), 1.0 + 1e-8);
        EXPECT_GT(body.gauge((1 + 5e-8) * r.r * r.direction, 1e-9), 1.0 - 1e-8);
    }
}

TEST(InnerRadius, ZeroWhenFlat) {
    const OrbitBallSet body(diag_subspace(), Vector{1, 0});
    const RadiusResult r = inner_radius(body, {Vector{1, 0}, Vector{0, 1}}, 1e-8);
    EXPECT_EQ(r.r, 0.0);
    EXPECT_FALSE(r.certified);
    EXPECT_EQ(body.gauge(r.direction, 1e-9), kInfiniteGauge);
    // within its own span the segment has radius 1
    EXPECT_NEAR(inner_radius(body, {Vector{1, 0}}, 1e-8).r, 1.0, 1e-12);
}

TEST(InnerRadius, PtpEqualsNormPx) {
    std::vector<Matrix> b;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            Matrix m(3, 3);
            m(i, j) = 1.0;
            b.push_back(m);
        }
    const OperatorSubspace s = make_subspace(b);
    for (const Vector& x : {Vector{0.6, 0.8, 0.3}, Vector{0.2, -0.5, 4.0}}) {
        const OrbitBallSet body(s, x);
        const RadiusResult r = inner_radius(body, body.ball().geometry().q, 1e-8);
        EXPECT_NEAR(r.r, std::hypot(x[0], x[1]), 1e-6);
    }
}

TEST(InnerRadius, ImageOfBallIsSigmaMin) {
    std::mt19937_64 rng(62);
    for (int trial = 0; trial < 12; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const Matrix t = oracle::random_matrix(rng, n, n);
        std::vector<Vector> basis;
        for (std::size_t i = 0; i < n; ++i) basis.push_back(Vector::unit(n, i));
        const RadiusResult r = inner_radius(MatrixImageSet(t), basis, 1e-7);
        const double smin = singular_values(t, 1e-13).back();
        EXPECT_NEAR(r.r, smin, 1e-4 * smin) << "trial " << trial;
        if (n <= 3) EXPECT_NEAR(r.r, oracle::sphere_grid_sigma_min(t, 800), 2e-3);
    }
}

TEST(InnerRadius, SerialEqualsParallel) {
    std::mt19937_64 rng(63);
    for (std::size_t n : {2u, 3u, 4u}) {
        const Matrix t = oracle::random_matrix(rng, n, n);
        std::vector<Vector> basis;
        for (std::size_t i = 0; i < n; ++i) basis.push_back(Vector::unit(n, i));
        RadiusOptions o;
        o.exec = Exec::Serial;
        const RadiusResult a = inner_radius(MatrixImageSet(t), basis, 1e-7, o);
        o.exec = Exec::Parallel;
        const RadiusResult b = inner_radius(MatrixImageSet(t), basis, 1e-7, o);
        EXPECT_EQ(a.r, b.r);
        EXPECT_EQ(a.direction, b.direction);
    }
}

TEST(InnerRadius, BadInput) {
    const MatrixImageSet disc(Matrix::identity(2));
    EXPECT_THROW(inner_radius(disc, {}, 1e-6), InputError);
    EXPECT_THROW(inner_radius(disc, {Vector{0, 0}}, 1e-6), InputError);
    EXPECT_THROW(inner_radius(disc, {Vector{1, 0}}, 0.0), InputError);
    EXPECT_THROW(inner_radius(disc, {Vector{1, 0, 0}}, 1e-6), InputError);
}

TEST(OpenMapRadius, Examples) {
    EXPECT_NEAR(open_map_radius(Matrix::diagonal({3, 2}), 1e-6).r, 2.0, 1e-9);
    EXPECT_NEAR(open_map_radius(Matrix::identity(3), 1e-6).r, 1.0, 1e-9);
    std::mt19937_64 rng(64);
    const Matrix t = oracle::random_matrix(rng, 3, 3);
    const std::vector<double> s = singular_values(t, 1e-13);
    EXPECT_NEAR(open_map_radius(t, 1e-6).r, s.back(), 0.02 * s.back());
}

TEST(OpenMapRadius, Rectangular) {
    // onto map R^3 -> R^2: radius is the second singular value
    const Matrix t{{1, 0, 2}, {0, 1, 1}};
    const RadiusResult r = open_map_radius(t, 1e-7);
    EXPECT_NEAR(r.r, singular_values(t, 1e-13)[1], 1e-6);
    EXPECT_TRUE(r.certified);
}

TEST(OpenMapRadius, RankDeficient) {
    try {
        open_map_radius(Matrix{{1, 2}, {2, 4}}, 1e-6);
        FAIL() << "expected InputError";
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("row rank 1 < 2"), std::string::npos) << e.what();
    }
}
