#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "orbit/linalg.hpp"
#include "orbit/nested_limit.hpp"
#include "orbit/open_mapping.hpp"
#include "orbit/operator_space.hpp"
#include "orbit/parallel.hpp"

namespace orbit {

/// Smallest integer N > 2||y||/r, with a 1e-12 relative safety margin on
/// the comparison. r <= 0 is an InputError.
std::int64_t truncation_index(const Vector& y, double r);

struct PipelineDistance {
    double d = 0.0;       // ball_distance(y, N)
    double lower = 0.0;   // certified lower bound from the solver
    std::int64_t N = 0;
    double r = 0.0;       // inner radius of A_1 x within W
    double oracle = 0.0;  // ||y - Py||
};

/// rho(y, Ax) through the inner radius: once A_1 x contains a ball of
/// radius r in W, rho(y, Ax) = rho(y, A_N x) for N > 2||y||/r. Throws
/// RefusalError when r <= tol, which is the situation of the diagonal
/// example at c = 0 seen from the ambient plane. A zero orbit gives
/// d = ||y||, N = 1, r = 0.
PipelineDistance pipeline_distance(const Vector& y, const OperatorSubspace& subspace,
                                   const Vector& x, double tol,
                                   const RadiusOptions& radius_options = {});

struct ProbeTrace {
    Vector y;
    std::int64_t N = 0;  // truncation index, or the deciding level on the fallback path
    double d_pipeline = 0.0;
    double d_oracle = 0.0;
    std::string route;  // "truncation" or the nested-limit verdict
};

struct ProjectionCertificate {
    Matrix P;
    std::size_t rank = 0;
    double r = 0.0;
    Vector direction;
    bool radius_certified = false;
    std::vector<ProbeTrace> per_y_trace;
    std::uint64_t seed = 0;
    std::string note;
};

struct ProjectionOptions {
    std::size_t random_probes = 8;
    std::uint64_t seed = 20220202;
    /// When the inner radius is not usable, fall back to the nested limit
    /// for the probe distances instead of leaving the trace empty.
    bool nested_fallback = false;
    NestedOptions nested;
    Exec exec = Exec::Parallel;
};

/// [Ax] with its inner radius and a probe trace comparing the pipeline
/// distance to ||y - Py|| on the canonical basis and seeded random points.
ProjectionCertificate build_projection(const OperatorSubspace& subspace, const Vector& x,
                                       double tol, const ProjectionOptions& options = {});

/// rho_{Ax}(0, -A_1 x), read as the inner radius of A_1 x within W = Ax.
/// A zero orbit is an InputError.
RadiusResult metric_complement_distance(const OperatorSubspace& subspace, const Vector& x,
                                        double tol, const RadiusOptions& options = {});

}  // namespace orbit
