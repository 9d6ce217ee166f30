#include "orbit/operator_space.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "grid.hpp"
#include "orbit/errors.hpp"

namespace orbit {

namespace {

Vector vectorize(const Matrix& m) {
    return Vector(std::vector<double>(m.values().begin(), m.values().end()));
}

}  // namespace

Matrix OperatorSubspace::combine(std::span<const double> coeffs) const {
    if (coeffs.size() != basis_.size())
        throw InputError("combine: expected " + std::to_string(basis_.size()) +
                         " coefficients, got " + std::to_string(coeffs.size()));
    Matrix m(dim_, dim_);
    for (std::size_t i = 0; i < basis_.size(); ++i)
        if (coeffs[i] != 0.0) m.axpy(coeffs[i], basis_[i]);
    return m;
}

OperatorSubspace make_subspace(std::vector<Matrix> basis, double rank_tol) {
    if (basis.empty()) throw InputError("operator subspace: basis is empty");
    if (!(rank_tol > 0.0)) throw InputError("operator subspace: rank_tol must be positive");
    const std::size_t dim = basis.front().rows();
    if (dim == 0) throw InputError("operator subspace: zero-dimensional matrices");

    double max_norm = 0.0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const Matrix& b = basis[i];
        if (!b.square() || b.rows() != dim)
            throw InputError("operator subspace: basis matrix " + std::to_string(i) +
                             " is not " + std::to_string(dim) + "x" + std::to_string(dim));
        if (!b.all_finite())
            throw InputError("operator subspace: basis matrix " + std::to_string(i) +
                             " has non-finite entries");
        max_norm = std::max(max_norm, frobenius_norm(b));
    }

    std::vector<Vector> q;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        Vector r = vectorize(basis[i]);
        for (int pass = 0; pass < 2; ++pass)
            for (const Vector& e : q) r.axpy(-inner(e, r), e);
        const double rn = norm(r);
        if (max_norm == 0.0 || rn <= rank_tol * max_norm)
            throw InputError("operator subspace: basis matrix " + std::to_string(i) +
                             " is linearly dependent on the preceding ones");
        r *= 1.0 / rn;
        q.push_back(std::move(r));
    }

    OperatorSubspace s;
    s.dim_ = dim;
    s.basis_ = std::move(basis);
    const std::size_t k = s.basis_.size();
    s.gram_ = Matrix(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            const double g = frobenius_inner(s.basis_[i], s.basis_[j]);
            s.gram_(i, j) = g;
            s.gram_(j, i) = g;
        }
    for (const Matrix& b : s.basis_) s.basis_norms_.push_back(spectral_norm(b));
    return s;
}

Matrix orbit_map(const OperatorSubspace& subspace, const Vector& x) {
    if (x.dim() != subspace.dim())
        throw InputError("orbit: vector dimension " + std::to_string(x.dim()) +
                         " does not match operator dimension " + std::to_string(subspace.dim()));
    Matrix g(subspace.dim(), subspace.k());
    for (std::size_t j = 0; j < subspace.k(); ++j) {
        const Vector col = subspace.basis()[j].apply(x);
        for (std::size_t i = 0; i < subspace.dim(); ++i) g(i, j) = col[i];
    }
    return g;
}

OrbitGeometry orbit(const OperatorSubspace& subspace, const Vector& x, double rank_tol) {
    const Matrix g = orbit_map(subspace, x);
    OrbitGeometry geo;
    geo.x = x;
    for (std::size_t j = 0; j < subspace.k(); ++j) geo.orbit_basis.push_back(g.column(j));
    OrthonormalBasis ob = orthonormalize(geo.orbit_basis, rank_tol);
    geo.q = std::move(ob.q);
    geo.rank = ob.rank;
    geo.projector = projector(geo.q, subspace.dim());
    return geo;
}

double op_norm(const OperatorSubspace& subspace, std::span<const double> coeffs, double tol) {
    return spectral_norm(subspace.combine(coeffs), tol);
}

bool ScaledBall::contains(std::span<const double> coeffs, double mem_tol) const {
    return op_norm(*subspace, coeffs) <= n * (1.0 + mem_tol);
}

Linearization norm_constraint(const OperatorSubspace& subspace, const Vector& coeffs, double n) {
    const Matrix m = subspace.combine(coeffs.values());
    const SingularTriplet t = top_singular_triplet(m);
    Linearization lin;
    lin.slope = Vector(subspace.k());
    for (std::size_t i = 0; i < subspace.k(); ++i)
        lin.slope[i] = inner(t.left, subspace.basis()[i].apply(t.right));
    lin.value = inner(t.left, m.apply(t.right)) - n;
    return lin;
}

Matrix coefficient_ellipsoid(const OperatorSubspace& subspace, double n) {
    // ||sum c_i B_i||_F^2 = c^T Gram c <= dim n^2, padded against round-off.
    const double radius2 = static_cast<double>(subspace.dim()) * n * n * (1.0 + 1e-9);
    return radius2 * spd_inverse(subspace.gram());
}

double coefficient_extent(const OperatorSubspace& subspace, std::size_t i, double n, double tol) {
    if (i >= subspace.k()) throw InputError("coefficient_extent: index out of range");
    if (!(n > 0.0)) throw InputError("coefficient_extent: n must be positive");
    const std::size_t k = subspace.k();
    ConvexProgram prog;
    prog.center = Vector(k);
    prog.shape = coefficient_ellipsoid(subspace, n);
    prog.floor = -std::sqrt(prog.shape(i, i));
    prog.objective = [i, k](const Vector& c) {
        Linearization lin;
        lin.value = -c[i];
        lin.slope = Vector(k);
        lin.slope[i] = -1.0;
        return lin;
    };
    prog.constraint = [&subspace, n](const Vector& c) { return norm_constraint(subspace, c, n); };
    const double scale = std::sqrt(prog.shape(i, i));
    const ConvexSolution sol = minimize_convex(prog, tol * std::max(1.0, scale), 200'000);
    if (!sol.feasible)
        throw SolverError("coefficient_extent: no feasible point found", sol.lower, sol.upper);
    // The optimum of -c_i lies in [lower, upper]; report the outer end so the
    // box is guaranteed to contain the ball.
    return -sol.lower;
}

// ------------------------------------------------------------ epsilon net

namespace {

struct NetContext {
    const OperatorSubspace& subspace;
    const Matrix& g;
    double n;
    double reach;  // grid points with sigma_1 <= n + reach are kept
};

void net_chunk(const NetContext& ctx, const detail::CoefficientGrid& grid, std::size_t begin,
               std::size_t end, std::vector<Vector>& out) {
    Vector c(ctx.subspace.k());
    for (std::size_t idx = begin; idx < end; ++idx) {
        grid.decode(idx, c);
        const double s = op_norm(ctx.subspace, c.values());
        if (s <= ctx.n) {
            out.push_back(ctx.g.apply(c));
        } else if (s <= ctx.n + ctx.reach) {
            Vector scaled = c;
            scaled *= ctx.n / s;
            out.push_back(ctx.g.apply(scaled));
        }
    }
}

std::vector<Vector> build_net(const NetContext& ctx, const detail::CoefficientGrid& grid,
                              Exec exec) {
    const std::size_t total = grid.size();
    const std::size_t chunks = chunk_count(total);
    std::vector<std::vector<Vector>> parts(chunks);
    const auto bounds = [&](std::size_t chunk) {
        return std::pair{total * chunk / chunks, total * (chunk + 1) / chunks};
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t ch = 0; ch < static_cast<std::ptrdiff_t>(chunks); ++ch) {
            const auto [b, e] = bounds(static_cast<std::size_t>(ch));
            net_chunk(ctx, grid, b, e, parts[static_cast<std::size_t>(ch)]);
        }
    } else {
        for (std::size_t ch = 0; ch < chunks; ++ch) {
            const auto [b, e] = bounds(ch);
            net_chunk(ctx, grid, b, e, parts[ch]);
        }
    }
    std::vector<Vector> points;
    for (auto& part : parts)
        for (auto& p : part) points.push_back(std::move(p));
    return points;
}

double nearest_gap(const std::vector<Vector>& points, const Vector& v) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vector& p : points) best = std::min(best, squared_norm(v - p));
    return std::sqrt(best);
}

double worst_gap(const std::vector<Vector>& points, const std::vector<Vector>& samples,
                 Exec exec) {
    double worst = 0.0;
    const auto count = static_cast<std::ptrdiff_t>(samples.size());
    if (exec == Exec::Parallel) {
#pragma omp parallel for reduction(max : worst) schedule(static)
        for (std::ptrdiff_t s = 0; s < count; ++s)
            worst = std::max(worst, nearest_gap(points, samples[static_cast<std::size_t>(s)]));
    } else {
        for (std::ptrdiff_t s = 0; s < count; ++s)
            worst = std::max(worst, nearest_gap(points, samples[static_cast<std::size_t>(s)]));
    }
    return worst;
}

}  // namespace

EpsilonNet epsilon_net(const OperatorSubspace& subspace, const Vector& x, double n, double eps,
                       const NetOptions& options, Exec exec) {
    if (!(n > 0.0)) throw InputError("epsilon_net: n must be positive");
    if (!(eps > 0.0)) throw InputError("epsilon_net: eps must be positive");
    const Matrix g = orbit_map(subspace, x);
    const std::size_t k = subspace.k();

    EpsilonNet net;
    // ||Mx|| <= n ||x|| on the ball, so {0} already covers.
    const double gmap = spectral_norm(g);
    if (eps >= n * norm(x) || gmap == 0.0) {
        net.points.push_back(Vector(subspace.dim()));
        net.grid_points = 1;
        net.worst_sample_gap = n * norm(x);
        return net;
    }

    std::vector<double> extent(k);
    for (std::size_t i = 0; i < k; ++i) extent[i] = coefficient_extent(subspace, i, n);

    std::mt19937_64 rng(options.seed);
    std::vector<Vector> samples;
    samples.reserve(options.verify_samples);
    for (std::size_t s = 0; s < options.verify_samples; ++s) {
        Vector c(k);
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_real_distribution<double> u(-extent[i], extent[i]);
            c[i] = u(rng);
        }
        const double sn = op_norm(subspace, c.values());
        if (sn > n) c *= n / sn;
        samples.push_back(g.apply(c));
    }

    double sum_basis_norms = 0.0;
    for (double b : subspace.basis_norms()) sum_basis_norms += b;

    double step = eps / (std::sqrt(static_cast<double>(k)) * gmap);
    for (int attempt = 0; attempt <= options.max_refinements; ++attempt, step *= 0.5) {
        detail::CoefficientGrid grid;
        for (std::size_t i = 0; i < k; ++i) {
            grid.half_counts.push_back(
                static_cast<std::size_t>(std::ceil(extent[i] / step - 1e-9)));
            grid.steps.push_back(step);
        }
        const std::size_t total = grid.size();
        if (total > options.max_points)
            throw CapacityError("epsilon_net: grid needs " + std::to_string(total) +
                                    " points, cap is " + std::to_string(options.max_points),
                                total);

        const NetContext ctx{subspace, g, n, 0.5 * step * sum_basis_norms};
        net.points = build_net(ctx, grid, exec);
        net.spacing = step;
        net.grid_points = total;
        net.samples_checked = samples.size();
        net.worst_sample_gap = worst_gap(net.points, samples, exec);
        if (net.worst_sample_gap <= eps) return net;
    }
    throw SolverError("epsilon_net: sampled coverage failed after refinement",
                      eps, net.worst_sample_gap);
}

}  // namespace orbit
