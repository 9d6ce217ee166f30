#include "orbit/projection_pipeline.hpp"

#include <cmath>
#include <exception>
#include <random>
#include <sstream>

#include "orbit/errors.hpp"
#include "orbit/located_sets.hpp"

namespace orbit {

std::int64_t truncation_index(const Vector& y, double r) {
    if (!(r > 0.0)) throw InputError("truncation_index: r must be positive");
    const double bound = 2.0 * norm(y) / r * (1.0 + 1e-12);
    if (!(bound < 9e15))
        throw CapacityError("truncation_index: 2||y||/r is too large to truncate", 0);
    return static_cast<std::int64_t>(std::floor(bound)) + 1;
}

namespace {

std::string obstruction(double r, double tol) {
    std::ostringstream os;
    os << "pipeline refused: the orbit ball contains no ball of radius above tol in the orbit"
          " span (r = "
       << r << ", tol = " << tol
       << "). No truncation index exists; deciding the distance here is the Brouwerian"
          " obstruction of the diagonal example at c = 0. Use the nested-limit route.";
    return os.str();
}

PipelineDistance truncated(const OrbitBall& ball, double r, const Vector& y, double tol) {
    PipelineDistance out;
    out.r = r;
    out.N = truncation_index(y, r);
    const DistanceResult res = ball.distance(y, static_cast<double>(out.N), tol);
    if (!res.converged)
        throw SolverError("pipeline: distance at the truncation index did not converge",
                          res.lower, res.value);
    out.d = res.value;
    out.lower = res.lower;
    out.oracle = norm(y - ball.geometry().projector.apply(y));
    return out;
}

}  // namespace

PipelineDistance pipeline_distance(const Vector& y, const OperatorSubspace& subspace,
                                   const Vector& x, double tol,
                                   const RadiusOptions& radius_options) {
    if (!(tol > 0.0)) throw InputError("pipeline_distance: tol must be positive");
    if (y.dim() != subspace.dim()) throw InputError("pipeline_distance: dimension mismatch");
    const OrbitBallSet c(subspace, x);
    const OrbitBall& ball = c.ball();
    if (ball.geometry().rank == 0) {
        PipelineDistance out;
        out.d = out.lower = out.oracle = norm(y);
        out.N = 1;
        return out;
    }
    const RadiusResult radius = inner_radius(c, ball.geometry().q, tol, radius_options);
    if (!(radius.r > tol)) throw RefusalError(obstruction(radius.r, tol));
    return truncated(ball, radius.r, y, tol);
}

ProjectionCertificate build_projection(const OperatorSubspace& subspace, const Vector& x,
                                       double tol, const ProjectionOptions& options) {
    if (!(tol > 0.0)) throw InputError("build_projection: tol must be positive");
    const OrbitBallSet c(subspace, x);
    const OrbitBall& ball = c.ball();
    const std::size_t dim = subspace.dim();

    ProjectionCertificate cert;
    cert.P = ball.geometry().projector;
    cert.rank = ball.geometry().rank;
    cert.seed = options.seed;
    if (cert.rank == 0) {
        cert.P = Matrix(dim, dim);
        cert.note = "orbit is {0}: P = 0, no inner radius, no probes";
        return cert;
    }

    RadiusOptions ropt;
    ropt.exec = options.exec;
    const RadiusResult radius = inner_radius(c, ball.geometry().q, tol, ropt);
    cert.r = radius.r;
    cert.direction = radius.direction;
    cert.radius_certified = radius.certified;
    const bool usable = radius.r > tol;
    if (!usable && !options.nested_fallback) {
        cert.note = obstruction(radius.r, tol);
        return cert;
    }
    if (!usable) cert.note = "inner radius not usable; probe distances from the nested limit";

    std::vector<Vector> probes;
    for (std::size_t i = 0; i < dim; ++i) probes.push_back(Vector::unit(dim, i));
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t s = 0; s < options.random_probes; ++s) {
        Vector y(dim);
        for (std::size_t i = 0; i < dim; ++i) y[i] = normal(rng);
        probes.push_back(std::move(y));
    }

    cert.per_y_trace.resize(probes.size());
    std::vector<std::exception_ptr> errors(probes.size());
    const auto one = [&](std::size_t i) {
        try {
            ProbeTrace t;
            t.y = probes[i];
            t.d_oracle = norm(t.y - cert.P.apply(t.y));
            if (usable) {
                const PipelineDistance pd = truncated(ball, radius.r, t.y, tol);
                t.N = pd.N;
                t.d_pipeline = pd.d;
                t.route = "truncation";
            } else {
                NestedOptions nopt = options.nested;
                nopt.exec = Exec::Serial;
                const DistanceReport rep = locate_distance(t.y, subspace, x, nopt);
                t.N = static_cast<std::int64_t>(rep.levels.back().n);
                t.d_pipeline = verdict_distance(rep.verdict);
                t.route = verdict_name(rep.verdict);
            }
            cert.per_y_trace[i] = std::move(t);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    const auto count = static_cast<std::ptrdiff_t>(probes.size());
    if (options.exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) one(static_cast<std::size_t>(i));
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return cert;
}

RadiusResult metric_complement_distance(const OperatorSubspace& subspace, const Vector& x,
                                        double tol, const RadiusOptions& options) {
    const OrbitBallSet c(subspace, x);
    if (c.ball().geometry().rank == 0)
        throw InputError("metric_complement_distance: orbit is {0}");
    return inner_radius(c, c.ball().geometry().q, tol, options);
}

}  // namespace orbit
