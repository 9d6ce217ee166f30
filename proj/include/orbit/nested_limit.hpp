#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "orbit/errors.hpp"
#include "orbit/linalg.hpp"
#include "orbit/operator_space.hpp"
#include "orbit/parallel.hpp"

namespace orbit {

inline constexpr double kDefaultStabTol = 1e-7;

/// One level n of the nested computation: d_n approximates rho(y, A_n x)
/// and y_n in A_n x satisfies ||y - y_n|| = d_n < rho(y, A_n x) + 2^-n.
struct Level {
    int n = 0;
    double d = 0.0;
    double lower = 0.0;  // certified lower bound on rho(y, A_n x)
    Vector y_n;
    Vector coeffs;
};

/// Squared-distance bound between minimizers of two levels, next to the
/// observed value.
struct CauchyEntry {
    int m = 0;
    int n = 0;
    double bound = 0.0;     // cauchy_bound(d_m, d_n, m, n)
    double observed = 0.0;  // ||y_m - y_n||^2
};

/// The tail bound certified that the minimizers have converged: y_inf is
/// the last minimizer and d = ||y - y_inf||.
struct Located {
    double d = 0.0;
    Vector y_inf;
    int level = 0;
};

/// rho(y, A_N x) = rho(y, A_{N+1} x) within stab_tol, which pins the global
/// distance to d = d_N.
struct Stabilized {
    int N = 0;
    double d = 0.0;
};

/// Budget exhausted. No finite set of levels certifies a positive lower
/// bound, so lower is always 0.
struct Undecided {
    int budget = 0;
    double lower = 0.0;
    double upper = 0.0;
};

using Verdict = std::variant<Located, Stabilized, Undecided>;

struct DistanceReport {
    std::vector<Level> levels;
    std::vector<CauchyEntry> cauchy_bounds;  // consecutive pairs plus (last, first)
    Verdict verdict;
    double tol = 0.0;
    double stab_tol = 0.0;
};

std::string verdict_name(const Verdict& v);
/// Distance carried by a Located/Stabilized verdict, upper end otherwise.
double verdict_distance(const Verdict& v);

struct NestedOptions {
    int budget = 30;
    double tol = 1e-6;
    double stab_tol = kDefaultStabTol;
    /// Evaluate all levels concurrently and then scan them; gives the same
    /// verdict as the sequential scan, which stops at the first decision.
    Exec exec = Exec::Serial;
};

/// Thrown when the distance solver fails at some level. Carries the levels
/// completed before the failure.
class NestedLimitError : public SolverError {
public:
    NestedLimitError(const std::string& what, double lower, double upper, DistanceReport partial)
        : SolverError(what, lower, upper), partial_(std::move(partial)) {}
    const DistanceReport& partial() const noexcept { return partial_; }

private:
    DistanceReport partial_;
};

/// Upper bound on ||x_m - x_n||^2 from the parallelogram law, for m >= n:
/// 2((d_m + 2^-m)^2 - d_m^2) + 2((d_n + 2^-n)^2 - d_m^2).
double cauchy_bound(double d_m, double d_n, int m, int n);

/// Worst case of cauchy_bound(d_M, d_m, M, m) over all later levels M > m
/// and all 0 <= d_M <= d_m: 2 (d_m + 2^-m)^2 + 2^-2m.
double tail_bound(double d_m, int m);

/// True iff |d_N - d_{N+1}| <= stab_tol.
bool stabilize_check(double d_N, double d_N1, double stab_tol);

/// Computes d_n = rho(y, A_n x) for n = 1, 2, ... and decides, per level:
/// Stabilized when two consecutive levels agree within stab_tol, Located
/// when the tail bound drops below tol^2, Undecided when the budget runs
/// out.
DistanceReport locate_distance(const Vector& y, const OperatorSubspace& subspace,
                               const Vector& x, const NestedOptions& options = {});

/// ||y - v||^2 - d^2 for an orbit point v, next to half of ||v - y_inf||^2,
/// which it must dominate (up to tol) when y_inf is the nearest point.
struct StrictExcess {
    double excess = 0.0;
    double half_gap = 0.0;
    bool holds = true;
};

StrictExcess strict_excess(double d, const Vector& y_inf, const Vector& v, const Vector& y,
                           double tol = 1e-8);

}  // namespace orbit
