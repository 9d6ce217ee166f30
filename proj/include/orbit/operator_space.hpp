#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "orbit/cutting_plane.hpp"
#include "orbit/linalg.hpp"
#include "orbit/parallel.hpp"

namespace orbit {

inline constexpr double kDefaultRankTol = 1e-9;

/// A finite-dimensional linear subspace of B(H), given by a basis
/// B_1..B_k of dim x dim matrices that is linearly independent as vectors
/// in R^(dim^2). Finite dimension makes the span uniformly closed.
class OperatorSubspace {
public:
    const std::vector<Matrix>& basis() const noexcept { return basis_; }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t k() const noexcept { return basis_.size(); }

    /// sum_i c_i B_i
    Matrix combine(std::span<const double> coeffs) const;

    /// Frobenius Gram matrix <B_i, B_j>.
    const Matrix& gram() const noexcept { return gram_; }
    /// sigma_1(B_i) for each basis element.
    const std::vector<double>& basis_norms() const noexcept { return basis_norms_; }

private:
    friend OperatorSubspace make_subspace(std::vector<Matrix> basis, double rank_tol);

    std::vector<Matrix> basis_;
    std::size_t dim_ = 0;
    Matrix gram_;
    std::vector<double> basis_norms_;
};

/// Validates and wraps a basis. Throws InputError on an empty list, a
/// non-square or mismatched matrix, or a basis element that depends on the
/// earlier ones (the message names its index).
OperatorSubspace make_subspace(std::vector<Matrix> basis, double rank_tol = kDefaultRankTol);

/// The orbit Ax = { Ax : A in span(B) } of a fixed vector, which is the
/// subspace W = span{B_i x}, with an orthonormal basis and its projector.
struct OrbitGeometry {
    Vector x;
    std::vector<Vector> orbit_basis;  // B_i x
    std::vector<Vector> q;            // orthonormal basis of W
    Matrix projector;                 // sum_j q_j q_j^T
    std::size_t rank = 0;
};

OrbitGeometry orbit(const OperatorSubspace& subspace, const Vector& x,
                    double rank_tol = kDefaultRankTol);

/// The dim x k matrix whose columns are B_i x; coefficient vectors map to
/// orbit points through it.
Matrix orbit_map(const OperatorSubspace& subspace, const Vector& x);

/// sigma_1(sum c_i B_i).
double op_norm(const OperatorSubspace& subspace, std::span<const double> coeffs,
               double tol = 1e-13);

/// The scaled operator ball n * (unit ball of the subspace). Membership is
/// tested with a relative band: sigma_1(M) <= n (1 + mem_tol).
struct ScaledBall {
    const OperatorSubspace* subspace = nullptr;
    double n = 1.0;

    bool contains(std::span<const double> coeffs, double mem_tol = 1e-9) const;
};

/// Affine minorant of c -> sigma_1(sum c_i B_i) - n at c, built from the
/// top singular pair (u, v): value u^T M v - n, slope_i = u^T B_i v. Valid
/// for any unit u, v, so an imprecise singular pair never cuts off a
/// feasible point.
Linearization norm_constraint(const OperatorSubspace& subspace, const Vector& coeffs, double n);

/// Shape matrix of an ellipsoid (centred at 0) in coefficient space that
/// contains every c with sigma_1(sum c_i B_i) <= n. Uses
/// ||M||_F <= sqrt(dim) sigma_1(M).
Matrix coefficient_ellipsoid(const OperatorSubspace& subspace, double n);

/// max { c_i : sigma_1(sum c_j B_j) <= n }, the half-width of the
/// coefficient box around the ball.
double coefficient_extent(const OperatorSubspace& subspace, std::size_t i, double n,
                          double tol = 1e-12);

struct NetOptions {
    std::size_t max_points = 2'000'000;
    std::size_t verify_samples = 10'000;
    unsigned long long seed = 20'220'202;
    int max_refinements = 4;
};

/// Finite subset of the orbit ball such that every member is within eps of
/// some net point, checked on verify_samples sampled members.
struct EpsilonNet {
    std::vector<Vector> points;
    double spacing = 0.0;           // coefficient grid step
    std::size_t grid_points = 0;    // size of the coefficient grid scanned
    std::size_t samples_checked = 0;
    double worst_sample_gap = 0.0;  // max over samples of distance to the net
};

/// Grids coefficient space over the box of coefficient_extent half-widths,
/// keeps points inside the ball, and pulls grid points just outside the
/// ball radially onto its boundary. Throws CapacityError when the grid
/// would exceed options.max_points.
EpsilonNet epsilon_net(const OperatorSubspace& subspace, const Vector& x, double n, double eps,
                       const NetOptions& options = {}, Exec exec = Exec::Parallel);

}  // namespace orbit
