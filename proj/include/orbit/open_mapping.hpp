#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "orbit/linalg.hpp"
#include "orbit/located_sets.hpp"
#include "orbit/parallel.hpp"

namespace orbit {

/// Greedy dyadic decomposition of y against a located body C.
///
/// z_0 = y. While rho(z_{i-1}, C) < r/2 the step picks x_i = 2 * nearest
/// point, so x_i lies in 2C, and sets z_i = 2 z_{i-1} - x_i. Then
/// ||z_i|| = 2^i ||y - sum_{j<=i} 2^-j x_j|| stays below r. Otherwise z is
/// far from C and is reported as a witness.
struct Decomposition {
    struct Step {
        int i = 0;
        Vector x;       // x_i in 2C, zero on the witness step
        int lambda = 0;  // 1 only on the final witness step
        double residual = 0.0;  // ||z_i||
    };
    struct Member {
        Vector xi;  // sum 2^-i x_i
    };
    struct Witness {
        Vector z;
        double dist_z = 0.0;
    };
    struct Undecided {
        double residual = 0.0;  // 2^-n ||z_n|| at the last step
    };

    std::vector<Step> steps;
    std::variant<Member, Witness, Undecided> outcome;
    double r = 0.0;
    Vector y;
    double oracle_tol = 0.0;

    bool member() const { return std::holds_alternative<Member>(outcome); }
    bool witness() const { return std::holds_alternative<Witness>(outcome); }
    std::string outcome_name() const;
};

struct DecomposeOptions {
    double oracle_tol = 1e-12;  // accuracy asked of C.locate
    double out_tol = 1e-12;     // Member once ||y - partial sum|| <= out_tol
};

/// Requires r > ||y|| and max_steps >= 1 (InputError otherwise).
Decomposition greedy_decompose(const Vector& y, const LocatedSet& c, double r, int max_steps,
                               const DecomposeOptions& options = {});

/// Largest r with B_W(0, r) inside C, for C balanced convex and located in
/// W = span(W_basis): r = 1 / max over unit w in W of gauge_C(w).
struct RadiusResult {
    double r = 0.0;
    Vector direction;  // unit w in W with the largest gauge found
    std::string method;
    double tol = 0.0;
    std::size_t directions_checked = 0;
    double worst_gauge = 0.0;
    bool certified = false;  // greedy_decompose returned Member at r(1 - tol) direction
};

struct RadiusOptions {
    /// Sample directions per dimension of W, for dim W >= 2.
    std::size_t directions_per_dim = 256;
    Exec exec = Exec::Parallel;
};

/// Scans a deterministic set of directions in W (a half circle when
/// dim W = 2, a Halton set on the sphere plus the axes otherwise), refines
/// around the worst one, and certifies with a greedy decomposition. An
/// unbounded gauge along some direction gives r = 0 with that direction.
RadiusResult inner_radius(const LocatedSet& c, const std::vector<Vector>& w_basis, double tol,
                          const RadiusOptions& options = {});

/// Radius of the largest ball around 0 inside T(closed unit ball) for a
/// surjective m x n map T. Throws InputError when the row rank is below m.
RadiusResult open_map_radius(const Matrix& t, double tol, const RadiusOptions& options = {},
                             double rank_tol = 1e-9);

}  // namespace orbit
