#include "orbit/located_sets.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "grid.hpp"
#include "orbit/errors.hpp"

namespace orbit {

namespace {

Matrix columns_matrix(const std::vector<Vector>& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
}

Matrix gram_of(const Matrix& a) { return a.transpose() * a; }

int distance_budget(std::size_t k) { return 5000 + 4000 * static_cast<int>(k * k); }

}  // namespace

// ------------------------------------------------------------- OrbitBall

OrbitBall::OrbitBall(const OperatorSubspace& subspace, Vector x, double rank_tol)
    : subspace_(std::make_shared<const OperatorSubspace>(subspace)), x_(std::move(x)) {
    g_ = orbit::orbit_map(subspace, x_);
    geometry_ = orbit::orbit(subspace, x_, rank_tol);

    const std::size_t k = subspace.k();
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < g_.rows(); ++i) rows.push_back(g_.row(i));
    row_basis_ = orthonormalize(rows, rank_tol).q;

    std::vector<Vector> completion = row_basis_;
    for (std::size_t i = 0; i < k; ++i) completion.push_back(Vector::unit(k, i));
    OrthonormalBasis full = orthonormalize(completion, 1e-8);
    for (std::size_t j = row_basis_.size(); j < full.q.size(); ++j)
        null_basis_.push_back(full.q[j]);

    if (!row_basis_.empty()) {
        reduced_map_ = g_ * columns_matrix(row_basis_, k);
        reduced_gram_ = gram_of(reduced_map_);
    }
}

DistanceResult OrbitBall::distance(const Vector& y, double n, double tol) const {
    if (!(n > 0.0)) throw InputError("ball_distance: n must be positive");
    if (!(tol > 0.0)) throw InputError("ball_distance: tol must be positive");
    if (y.dim() != subspace_->dim())
        throw InputError("ball_distance: y has dimension " + std::to_string(y.dim()) +
                         ", expected " + std::to_string(subspace_->dim()));

    const std::size_t k = subspace_->k();
    DistanceResult res;
    res.tol = tol;
    res.coeffs = Vector(k);
    if (row_basis_.empty()) {
        // x lies in the common kernel: every orbit set is {0}.
        res.point = Vector(subspace_->dim());
        res.value = norm(y);
        res.lower = res.value;
        res.converged = true;
        return res;
    }

    ConvexProgram prog;
    prog.center = Vector(k);
    prog.shape = coefficient_ellipsoid(*subspace_, n);
    prog.floor = 0.0;
    prog.objective = [this, &y](const Vector& c) {
        Vector r = y - g_.apply(c);
        Linearization lin;
        lin.value = norm(r);
        if (lin.value > 0.0) {
            lin.slope = g_.apply_transpose(r);
            lin.slope *= -1.0 / lin.value;
        } else {
            lin.slope = Vector(c.dim());
        }
        return lin;
    };
    prog.constraint = [this, n](const Vector& c) { return norm_constraint(*subspace_, c, n); };

    const ConvexSolution sol = minimize_convex(prog, tol, distance_budget(k));
    if (!sol.feasible)
        throw SolverError("ball_distance: no feasible coefficient vector found", sol.lower,
                          sol.upper);
    res.coeffs = sol.argmin;
    res.point = g_.apply(sol.argmin);
    res.value = sol.upper;
    res.lower = sol.lower;
    res.solver_iters = sol.iterations;
    res.converged = sol.converged;
    return res;
}

GaugeBracket OrbitBall::gauge(const Vector& v, double tol) const {
    if (v.dim() != subspace_->dim()) throw InputError("gauge: dimension mismatch");
    if (!(tol > 0.0)) throw InputError("gauge: tol must be positive");
    const double vn = norm(v);
    if (vn == 0.0) return {0.0, 0.0};
    if (row_basis_.empty()) return {kInfiniteGauge, kInfiniteGauge};
    const Vector off = v - geometry_.projector.apply(v);
    if (norm(off) > tol * vn) return {kInfiniteGauge, kInfiniteGauge};

    // Minimum-norm coefficients reaching v, then minimize sigma_1 over the
    // affine set of all coefficient vectors reaching v.
    const std::size_t k = subspace_->k();
    const Vector a = cholesky_solve(reduced_gram_, reduced_map_.apply_transpose(v));
    Vector c0(k);
    for (std::size_t j = 0; j < row_basis_.size(); ++j) c0.axpy(a[j], row_basis_[j]);

    const double t0 = op_norm(*subspace_, c0.values());
    if (null_basis_.empty() || t0 == 0.0) return {t0, t0};

    const std::size_t d = null_basis_.size();
    const Matrix nb = columns_matrix(null_basis_, k);  // k x d
    const Matrix gram = subspace_->gram();
    const Matrix h = nb.transpose() * gram * nb;
    const Matrix h_inv = spd_inverse(h);
    Vector z_star = h_inv.apply(nb.apply_transpose(gram.apply(c0)));
    z_star *= -1.0;

    ConvexProgram prog;
    prog.center = z_star;
    prog.shape = (static_cast<double>(subspace_->dim()) * t0 * t0 * (1.0 + 1e-9)) * h_inv;
    prog.floor = 0.0;
    prog.objective = [&](const Vector& z) {
        Vector c = c0 + nb.apply(z);
        const Matrix m = subspace_->combine(c.values());
        const SingularTriplet t = top_singular_triplet(m);
        Vector full(k);
        for (std::size_t i = 0; i < k; ++i)
            full[i] = inner(t.left, subspace_->basis()[i].apply(t.right));
        Linearization lin;
        lin.value = inner(t.left, m.apply(t.right));
        lin.slope = nb.apply_transpose(full);
        return lin;
    };
    const ConvexSolution sol = minimize_convex(prog, tol, distance_budget(d + 1));
    if (!sol.converged)
        throw SolverError("gauge: minimization did not converge", sol.lower, sol.upper);
    return {sol.lower, sol.upper};
}

DistanceResult ball_distance(const Vector& y, const OperatorSubspace& subspace, const Vector& x,
                             double n, double tol) {
    return OrbitBall(subspace, x).distance(y, n, tol);
}

double gauge_of_orbit_ball(const OperatorSubspace& subspace, const Vector& x, const Vector& v,
                           double tol) {
    return OrbitBall(subspace, x).gauge(v, tol).upper;
}

// ----------------------------------------------------------- grid oracle

double grid_oracle_lipschitz(const OperatorSubspace& subspace, const Vector& x) {
    double m = 0.0;
    for (const Matrix& b : subspace.basis()) m = std::max(m, norm(b.apply(x)));
    return m * std::sqrt(static_cast<double>(subspace.k()));
}

namespace {

struct GridContext {
    const OperatorSubspace& subspace;
    const Matrix& g;
    const Vector& y;
    double n;
    double sqrt_dim;
};

double grid_chunk_min(const GridContext& ctx, const detail::CoefficientGrid& grid,
                      std::size_t begin, std::size_t end) {
    double best = std::numeric_limits<double>::infinity();
    Vector c(ctx.subspace.k());
    for (std::size_t idx = begin; idx < end; ++idx) {
        grid.decode(idx, c);
        const double r = norm(ctx.y - ctx.g.apply(c));
        if (r >= best) continue;
        const Matrix m = ctx.subspace.combine(c.values());
        // sigma_1 <= ||M||_F <= sqrt(dim) sigma_1 settles most points cheaply.
        const double fro = frobenius_norm(m);
        bool feasible = fro <= ctx.n;
        if (!feasible && fro <= ctx.sqrt_dim * ctx.n * (1.0 + 1e-12))
            feasible = spectral_norm(m) <= ctx.n * (1.0 + 1e-12);
        if (feasible) best = r;
    }
    return best;
}

}  // namespace

double grid_oracle_distance(const Vector& y, const OperatorSubspace& subspace, const Vector& x,
                            double n, double grid_step, Exec exec) {
    if (subspace.k() > 4)
        throw InputError("grid oracle: k = " + std::to_string(subspace.k()) +
                         " is too large to grid (limit 4)");
    if (!(n > 0.0) || !(grid_step > 0.0))
        throw InputError("grid oracle: n and grid_step must be positive");
    if (y.dim() != subspace.dim()) throw InputError("grid oracle: dimension mismatch");

    const Matrix g = orbit_map(subspace, x);
    const Matrix gram_inv = spd_inverse(subspace.gram());
    detail::CoefficientGrid grid;
    for (std::size_t i = 0; i < subspace.k(); ++i) {
        const double half =
            n * std::sqrt(static_cast<double>(subspace.dim()) * gram_inv(i, i));
        grid.half_counts.push_back(static_cast<std::size_t>(std::ceil(half / grid_step)));
        grid.steps.push_back(grid_step);
    }
    const std::size_t total = grid.size();
    if (total > 400'000'000)
        throw InputError("grid oracle: " + std::to_string(total) + " grid points is too many");

    const GridContext ctx{subspace, g, y, n, std::sqrt(static_cast<double>(subspace.dim()))};
    const std::size_t chunks = chunk_count(total);
    std::vector<double> minima(chunks, std::numeric_limits<double>::infinity());
    const auto run = [&](std::size_t ch) {
        minima[ch] = grid_chunk_min(ctx, grid, total * ch / chunks, total * (ch + 1) / chunks);
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t ch = 0; ch < static_cast<std::ptrdiff_t>(chunks); ++ch)
            run(static_cast<std::size_t>(ch));
    } else {
        for (std::size_t ch = 0; ch < chunks; ++ch) run(ch);
    }
    return *std::min_element(minima.begin(), minima.end());
}

// ---------------------------------------------------------- OrbitBallSet

OrbitBallSet::OrbitBallSet(const OperatorSubspace& subspace, Vector x, double n)
    : ball_(subspace, std::move(x)), n_(n) {
    if (!(n > 0.0)) throw InputError("orbit ball set: n must be positive");
}

std::size_t OrbitBallSet::ambient_dim() const { return ball_.subspace().dim(); }

LocatedSet::Nearest OrbitBallSet::locate(const Vector& v, double tol) const {
    DistanceResult r = ball_.distance(v, n_, tol);
    if (!r.converged)
        throw SolverError("orbit ball: distance did not converge", r.lower, r.value);
    return {r.value, std::move(r.point)};
}

double OrbitBallSet::gauge(const Vector& v, double tol) const {
    return ball_.gauge(v, tol * n_).upper / n_;
}

std::string OrbitBallSet::description() const {
    std::ostringstream os;
    os << "orbit ball n=" << n_ << " (k=" << ball_.subspace().k()
       << ", dim=" << ball_.subspace().dim() << ", orbit rank=" << ball_.geometry().rank << ")";
    return os.str();
}

// -------------------------------------------------------- MatrixImageSet

MatrixImageSet::MatrixImageSet(Matrix t, double rank_tol) : t_(std::move(t)) {
    if (t_.rows() == 0 || t_.cols() == 0) throw InputError("matrix image: empty matrix");
    if (!t_.all_finite()) throw InputError("matrix image: non-finite entries");
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < t_.rows(); ++i) rows.push_back(t_.row(i));
    const OrthonormalBasis rb = orthonormalize(rows, rank_tol);
    rank_ = rb.rank;
    if (rank_ > 0) {
        reduced_map_ = t_ * columns_matrix(rb.q, t_.cols());
        reduced_gram_ = gram_of(reduced_map_);
    }
}

LocatedSet::Nearest MatrixImageSet::locate(const Vector& v, double tol) const {
    if (v.dim() != t_.rows()) throw InputError("matrix image: dimension mismatch");
    if (rank_ == 0) return {norm(v), Vector(v.dim())};

    // min ||v - A a|| over ||a|| <= 1 with A = T R of full column rank:
    // a(lambda) = (A^T A + lambda I)^{-1} A^T v has ||a(lambda)|| decreasing.
    const Vector atv = reduced_map_.apply_transpose(v);
    const auto solve = [&](double lambda) {
        Matrix s = reduced_gram_;
        for (std::size_t i = 0; i < rank_; ++i) s(i, i) += lambda;
        return cholesky_solve(s, atv);
    };
    Vector a = solve(0.0);
    if (norm(a) > 1.0) {
        double lo = 0.0;
        double hi = norm(atv);
        const double stop = std::max(1e-17 * hi, 1e-3 * tol * tol);
        for (int it = 0; it < 400 && hi - lo > stop; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (norm(solve(mid)) > 1.0)
                lo = mid;
            else
                hi = mid;
        }
        a = solve(hi);
        const double an = norm(a);
        if (an > 1.0) a *= 1.0 / an;
    }
    Vector point = reduced_map_.apply(a);
    return {norm(v - point), std::move(point)};
}

double MatrixImageSet::gauge(const Vector& v, double tol) const {
    if (v.dim() != t_.rows()) throw InputError("matrix image: dimension mismatch");
    const double vn = norm(v);
    if (vn == 0.0) return 0.0;
    if (rank_ == 0) return kInfiniteGauge;
    const Vector a = cholesky_solve(reduced_gram_, reduced_map_.apply_transpose(v));
    if (norm(v - reduced_map_.apply(a)) > tol * vn) return kInfiniteGauge;
    return norm(a);
}

std::string MatrixImageSet::description() const {
    std::ostringstream os;
    os << "image of the closed unit ball under a " << t_.rows() << "x" << t_.cols()
       << " map of rank " << rank_;
    return os.str();
}

// ---------------------------------------------------------------- probes

namespace {

Vector random_coeffs(std::mt19937_64& rng, std::size_t k) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector c(k);
    for (std::size_t i = 0; i < k; ++i) c[i] = normal(rng);
    return c;
}

}  // namespace

ProbeResult superconvexity_probe(const OperatorSubspace& subspace, const Vector& x,
                                 std::size_t terms, std::size_t samples, unsigned long long seed,
                                 double tol) {
    if (terms == 0) throw InputError("superconvexity probe: need at least one term");
    const OrbitBall ball(subspace, x);
    std::mt19937_64 rng(seed);
    ProbeResult res;
    res.bound = 1.0 + tol;
    for (std::size_t s = 0; s < samples; ++s) {
        Vector combined(subspace.k());
        for (std::size_t j = 1; j <= terms; ++j) {
            Vector c = random_coeffs(rng, subspace.k());
            const double cn = op_norm(subspace, c.values());
            if (cn > 0.0) c *= 1.0 / cn;
            double w = std::ldexp(1.0, -static_cast<int>(j));
            if (j == terms) w *= 2.0;  // 2^-m A_m x counted twice
            combined.axpy(w, c);
        }
        const Vector p = ball.orbit_map().apply(combined);
        const double gval = ball.gauge(p, tol * 1e-2).upper;
        res.worst = std::max(res.worst, gval);
        res.passed = res.passed && gval <= res.bound;
        ++res.samples;
    }
    return res;
}

ProbeResult linear_span_probe(const OperatorSubspace& subspace, const Vector& x,
                              std::size_t samples, unsigned long long seed, double tol) {
    const OrbitBall ball(subspace, x);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> scale(0.1, 3.0);
    std::uniform_real_distribution<double> alpha_dist(-3.0, 3.0);
    ProbeResult res;
    res.bound = 1.0;
    for (std::size_t s = 0; s < samples; ++s) {
        const Vector u = scale(rng) * ball.orbit_map().apply(random_coeffs(rng, subspace.k()));
        const Vector v = scale(rng) * ball.orbit_map().apply(random_coeffs(rng, subspace.k()));
        const double alpha = alpha_dist(rng);
        const double gu = ball.gauge(u, tol).upper;
        const double gv = ball.gauge(v, tol).upper;
        const double gw = ball.gauge(alpha * u + v, tol).upper;
        ++res.samples;
        if (gw == kInfiniteGauge || gu == kInfiniteGauge || gv == kInfiniteGauge) {
            res.passed = false;
            res.worst = kInfiniteGauge;
            continue;
        }
        const double limit = 2.0 * (2.0 + std::abs(alpha)) * std::max(gu, gv);
        if (limit > 0.0) res.worst = std::max(res.worst, gw / limit);
        res.passed = res.passed && gw <= limit + tol;
    }
    return res;
}

}  // namespace orbit
