#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "orbit/linalg.hpp"
#include "orbit/operator_space.hpp"
#include "orbit/parallel.hpp"

namespace orbit {

inline constexpr double kInfiniteGauge = std::numeric_limits<double>::infinity();

/// rho(y, C) for C = n * (unit ball of the subspace) x, with the point and
/// operator coefficients that achieve the reported value.
struct DistanceResult {
    double value = 0.0;   // ||y - point||, an upper bound on the distance
    double lower = 0.0;   // certified lower bound on the distance
    Vector coeffs;        // point = sum coeffs_i B_i x
    Vector point;
    double tol = 0.0;
    int solver_iters = 0;
    bool converged = false;  // value - lower <= tol
};

/// Bracket [lower, upper] on a gauge value. upper is attained by an
/// explicit operator, so v lies in upper * C.
struct GaugeBracket {
    double lower = 0.0;
    double upper = 0.0;
    bool finite() const { return upper != kInfiniteGauge; }
};

/// Precomputed geometry of the orbit balls n * A_1 x for a fixed (A, x).
/// Reused across many distance and gauge queries on the same body.
class OrbitBall {
public:
    OrbitBall(const OperatorSubspace& subspace, Vector x, double rank_tol = kDefaultRankTol);

    const OperatorSubspace& subspace() const noexcept { return *subspace_; }
    const Vector& x() const noexcept { return x_; }
    const OrbitGeometry& geometry() const noexcept { return geometry_; }
    const Matrix& orbit_map() const noexcept { return g_; }

    /// Minimizes ||y - sum c_i B_i x|| subject to sigma_1(sum c_i B_i) <= n
    /// with ellipsoid cutting planes in coefficient space.
    DistanceResult distance(const Vector& y, double n, double tol) const;

    /// inf { t > 0 : v in t A_1 x } = min { sigma_1(M) : M in A, Mx = v }.
    /// Infinite when v has a component off W = span{B_i x} larger than
    /// tol ||v||.
    GaugeBracket gauge(const Vector& v, double tol) const;

private:
    std::shared_ptr<const OperatorSubspace> subspace_;
    Vector x_;
    OrbitGeometry geometry_;
    Matrix g_;               // dim x k, columns B_i x
    std::vector<Vector> row_basis_;   // orthonormal basis of row space of g_ (in R^k)
    std::vector<Vector> null_basis_;  // orthonormal basis of its null space
    Matrix reduced_gram_;    // (g R)^T (g R), SPD
    Matrix reduced_map_;     // g R, dim x rank
};

DistanceResult ball_distance(const Vector& y, const OperatorSubspace& subspace, const Vector& x,
                             double n, double tol);

/// Independent verification oracle: minimum of ||y - M(c) x|| over the
/// feasible points of a coefficient grid with spacing grid_step. Refuses
/// (InputError) when k > 4. The grid covers the box
/// |c_i| <= n sqrt(dim (Gram^{-1})_ii), which contains the ball.
double grid_oracle_distance(const Vector& y, const OperatorSubspace& subspace, const Vector& x,
                            double n, double grid_step, Exec exec = Exec::Parallel);

/// max_i ||B_i x|| * sqrt(k): the Lipschitz constant that relates the grid
/// oracle's resolution to a distance error.
double grid_oracle_lipschitz(const OperatorSubspace& subspace, const Vector& x);

/// Gauge of A_1 x at v; kInfiniteGauge off the orbit span.
double gauge_of_orbit_ball(const OperatorSubspace& subspace, const Vector& x, const Vector& v,
                           double tol);

/// A located bounded balanced convex body: approximate distance, nearest
/// point, and gauge (Minkowski functional), each to within tol.
class LocatedSet {
public:
    struct Nearest {
        double dist = 0.0;
        Vector point;
    };

    virtual ~LocatedSet() = default;

    virtual std::size_t ambient_dim() const = 0;
    virtual Nearest locate(const Vector& v, double tol) const = 0;
    virtual double gauge(const Vector& v, double tol) const = 0;
    virtual std::string description() const = 0;

    double dist(const Vector& v, double tol) const { return locate(v, tol).dist; }
    Vector nearest(const Vector& v, double tol) const { return locate(v, tol).point; }
};

/// C = n * A_1 x.
class OrbitBallSet final : public LocatedSet {
public:
    OrbitBallSet(const OperatorSubspace& subspace, Vector x, double n = 1.0);

    std::size_t ambient_dim() const override;
    Nearest locate(const Vector& v, double tol) const override;
    double gauge(const Vector& v, double tol) const override;
    std::string description() const override;

    const OrbitBall& ball() const noexcept { return ball_; }
    double scale() const noexcept { return n_; }

private:
    OrbitBall ball_;
    double n_;
};

/// C = T(closed unit ball) for a possibly rectangular, possibly rank
/// deficient T. Covers discs (T = I), segments (T = diag(1, 0)) and the
/// images used by the open mapping radius. Distance is the exact
/// trust-region solution; the gauge is the minimum-norm preimage length.
class MatrixImageSet final : public LocatedSet {
public:
    explicit MatrixImageSet(Matrix t, double rank_tol = kDefaultRankTol);

    std::size_t ambient_dim() const override { return t_.rows(); }
    Nearest locate(const Vector& v, double tol) const override;
    double gauge(const Vector& v, double tol) const override;
    std::string description() const override;

    const Matrix& map() const noexcept { return t_; }

private:
    Matrix t_;
    Matrix reduced_map_;   // T R with R an orthonormal basis of the row space
    Matrix reduced_gram_;  // (T R)^T (T R)
    std::size_t rank_ = 0;
};

/// Outcome of a randomized property probe.
struct ProbeResult {
    std::size_t samples = 0;
    double worst = 0.0;  // largest observed value of the probed quantity
    double bound = 0.0;  // the bound it must stay below
    bool passed = true;
};

/// Superconvexity probe: for random A_1..A_m in the unit ball, the point
/// sum_{j<=m} 2^-j A_j x + 2^-m A_m x (weights sum to 1) must have gauge at
/// most 1 + tol. `worst` is the largest gauge seen.
ProbeResult superconvexity_probe(const OperatorSubspace& subspace, const Vector& x,
                                 std::size_t terms, std::size_t samples, unsigned long long seed,
                                 double tol);

/// Closure of V = union n C under linear combinations: for random u, v in
/// the orbit span and scalar alpha, gauge(alpha u + v) is finite and at
/// most 2 (2 + |alpha|) max(gauge(u), gauge(v)). `worst` is the largest
/// observed ratio of the two sides.
ProbeResult linear_span_probe(const OperatorSubspace& subspace, const Vector& x,
                              std::size_t samples, unsigned long long seed, double tol);

}  // namespace orbit
