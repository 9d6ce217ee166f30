#include "orbit/cutting_plane.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "orbit/errors.hpp"

namespace orbit {

namespace {

double quadratic_form(const Matrix& p, const Vector& g) { return inner(g, p.apply(g)); }

bool is_zero(const Vector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

}  // namespace

ConvexSolution minimize_convex(const ConvexProgram& program, double tol, int max_iterations) {
    const std::size_t n = program.center.dim();
    if (n == 0) throw InputError("minimize_convex: empty search space");
    if (program.shape.rows() != n || program.shape.cols() != n)
        throw InputError("minimize_convex: shape/center mismatch");

    Vector z = program.center;
    Matrix p = program.shape;

    ConvexSolution sol;
    sol.upper = std::numeric_limits<double>::infinity();
    sol.lower = program.floor;
    const double dn = static_cast<double>(n);

    for (int it = 0; it < max_iterations; ++it) {
        sol.iterations = it + 1;

        Linearization cut;
        double depth = 0.0;
        bool objective_cut = true;
        if (program.constraint) {
            Linearization c = program.constraint(z);
            if (c.value > 0.0) {
                depth = c.value;
                cut = std::move(c);
                objective_cut = false;
            }
        }

        if (objective_cut) {
            Linearization f = program.objective(z);
            if (f.value < sol.upper) {
                sol.upper = f.value;
                sol.argmin = z;
                sol.feasible = true;
            }
            if (is_zero(f.slope)) {
                sol.lower = std::max(sol.lower, f.value);
                break;
            }
            const double spread = quadratic_form(p, f.slope);
            sol.lower = std::max(sol.lower, f.value - std::sqrt(std::max(spread, 0.0)));
            if (sol.upper - sol.lower <= tol) break;
            depth = f.value - sol.upper;
            cut = std::move(f);
        }

        const double spread = quadratic_form(p, cut.slope);
        if (!(spread > 0.0)) {
            // The ellipsoid has collapsed in the cut direction.
            break;
        }
        const double s = std::sqrt(spread);
        const double alpha = depth / s;
        if (alpha >= 1.0) {
            // No point of the current ellipsoid survives the cut.
            if (objective_cut) sol.lower = std::max(sol.lower, sol.upper);
            break;
        }

        if (n == 1) {
            const double half = std::sqrt(p(0, 0));
            double lo = z[0] - half;
            double hi = z[0] + half;
            const double g = cut.slope[0];
            if (g > 0.0) {
                hi = std::min(hi, z[0] - depth / g);
            } else {
                lo = std::max(lo, z[0] + depth / (-g));
            }
            z[0] = 0.5 * (lo + hi);
            const double w = 0.5 * (hi - lo);
            p(0, 0) = w * w;
        } else {
            Vector b = p.apply(cut.slope);
            b *= 1.0 / s;
            z.axpy(-(1.0 + dn * alpha) / (dn + 1.0), b);
            const double shrink = dn * dn * (1.0 - alpha * alpha) / (dn * dn - 1.0);
            const double rank_one = 2.0 * (1.0 + dn * alpha) / ((dn + 1.0) * (1.0 + alpha));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i; j < n; ++j) {
                    const double v = shrink * (p(i, j) - rank_one * b[i] * b[j]);
                    p(i, j) = v;
                    p(j, i) = v;
                }
        }
    }

    if (sol.feasible) {
        sol.lower = std::min(sol.lower, sol.upper);
        sol.converged = sol.upper - sol.lower <= tol;
    }
    return sol;
}

}  // namespace orbit
