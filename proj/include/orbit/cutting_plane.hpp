#pragma once

#include <functional>
#include <limits>

#include "orbit/linalg.hpp"

namespace orbit {

/// Value of a convex function at a point together with a subgradient.
struct Linearization {
    double value = 0.0;
    Vector slope;
};

/// Minimize a convex objective over {z : constraint(z) <= 0} inside an
/// initial ellipsoid {z : (z - c)^T P^{-1} (z - c) <= 1} that is known to
/// contain a minimizer.
///
/// The constraint callback may return any valid affine minorant of the
/// constraint at z (q(w) >= value + slope.(w - z) for all w); it need not
/// be tight. Its value is what decides feasibility of z.
struct ConvexProgram {
    std::function<Linearization(const Vector&)> objective;
    std::function<Linearization(const Vector&)> constraint;  // optional
    Vector center;
    Matrix shape;  // P, symmetric positive definite
    /// Known lower bound on the optimum (e.g. 0 for a norm).
    double floor = -std::numeric_limits<double>::infinity();
};

struct ConvexSolution {
    Vector argmin;      // best feasible point found
    double upper = 0.0; // objective at argmin
    double lower = 0.0; // certified lower bound on the optimum
    int iterations = 0;
    bool feasible = false;
    bool converged = false;  // upper - lower <= tol
};

/// Deep-cut ellipsoid method. The lower bound is the usual certificate
/// f(z_j) - sqrt(g_j^T P_j g_j), maximized over feasible centres.
ConvexSolution minimize_convex(const ConvexProgram& program, double tol, int max_iterations);

}  // namespace orbit
