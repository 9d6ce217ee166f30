#include "orbit/nested_limit.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <optional>

#include "orbit/located_sets.hpp"

namespace orbit {

std::string verdict_name(const Verdict& v) {
    if (std::holds_alternative<Located>(v)) return "Located";
    if (std::holds_alternative<Stabilized>(v)) return "Stabilized";
    return "Undecided";
}

double verdict_distance(const Verdict& v) {
    if (const auto* l = std::get_if<Located>(&v)) return l->d;
    if (const auto* s = std::get_if<Stabilized>(&v)) return s->d;
    return std::get<Undecided>(v).upper;
}

double cauchy_bound(double d_m, double d_n, int m, int n) {
    const double em = std::ldexp(1.0, -m);
    const double en = std::ldexp(1.0, -n);
    return 2.0 * ((d_m + em) * (d_m + em) - d_m * d_m) +
           2.0 * ((d_n + en) * (d_n + en) - d_m * d_m);
}

double tail_bound(double d_m, int m) {
    const double em = std::ldexp(1.0, -m);
    return 2.0 * (d_m + em) * (d_m + em) + em * em;
}

bool stabilize_check(double d_N, double d_N1, double stab_tol) {
    return std::abs(d_N - d_N1) <= stab_tol;
}

namespace {

double level_tol(const NestedOptions& o, int n) {
    return std::min({o.tol, std::ldexp(1.0, -n - 2), 0.25 * o.stab_tol});
}

Level solve_level(const OrbitBall& ball, const Vector& y, int n, const NestedOptions& o) {
    DistanceResult r = ball.distance(y, static_cast<double>(n), level_tol(o, n));
    if (!r.converged)
        throw SolverError("level " + std::to_string(n) + ": distance solver did not converge",
                          r.lower, r.value);
    Level lv;
    lv.n = n;
    lv.d = r.value;
    lv.lower = r.lower;
    lv.y_n = std::move(r.point);
    lv.coeffs = std::move(r.coeffs);
    return lv;
}

std::optional<Verdict> decide(const std::vector<Level>& levels, const NestedOptions& o) {
    const Level& last = levels.back();
    if (levels.size() >= 2) {
        const Level& prev = levels[levels.size() - 2];
        if (stabilize_check(prev.d, last.d, o.stab_tol)) return Stabilized{prev.n, prev.d};
    }
    if (tail_bound(last.d, last.n) < o.tol * o.tol) return Located{last.d, last.y_n, last.n};
    return std::nullopt;
}

void fill_cauchy(DistanceReport& report) {
    const auto& lv = report.levels;
    const auto entry = [&](std::size_t hi, std::size_t lo) {
        CauchyEntry e;
        e.m = lv[hi].n;
        e.n = lv[lo].n;
        e.bound = cauchy_bound(lv[hi].d, lv[lo].d, e.m, e.n);
        e.observed = squared_norm(lv[hi].y_n - lv[lo].y_n);
        return e;
    };
    for (std::size_t i = 1; i < lv.size(); ++i) report.cauchy_bounds.push_back(entry(i, i - 1));
    if (lv.size() > 2) report.cauchy_bounds.push_back(entry(lv.size() - 1, 0));
}

}  // namespace

DistanceReport locate_distance(const Vector& y, const OperatorSubspace& subspace,
                               const Vector& x, const NestedOptions& options) {
    if (options.budget < 1) throw InputError("locate_distance: budget must be at least 1");
    if (!(options.tol > 0.0) || !(options.stab_tol > 0.0))
        throw InputError("locate_distance: tolerances must be positive");

    const OrbitBall ball(subspace, x);
    DistanceReport report;
    report.tol = options.tol;
    report.stab_tol = options.stab_tol;

    const auto fail = [&](const SolverError& e) {
        fill_cauchy(report);
        report.verdict = Undecided{options.budget, 0.0,
                                   report.levels.empty() ? norm(y) : report.levels.back().d};
        throw NestedLimitError(e.what(), e.lower(), e.upper(), report);
    };

    const auto budget = static_cast<std::size_t>(options.budget);
    std::vector<std::optional<Level>> precomputed;
    std::vector<std::exception_ptr> errors;
    if (options.exec == Exec::Parallel) {
        precomputed.resize(budget);
        errors.resize(budget);
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(budget); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            try {
                precomputed[idx] = solve_level(ball, y, static_cast<int>(idx) + 1, options);
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    }

    for (std::size_t idx = 0; idx < budget; ++idx) {
        const int n = static_cast<int>(idx) + 1;
        try {
            if (options.exec == Exec::Parallel) {
                if (errors[idx]) std::rethrow_exception(errors[idx]);
                report.levels.push_back(std::move(*precomputed[idx]));
            } else {
                report.levels.push_back(solve_level(ball, y, n, options));
            }
        } catch (const SolverError& e) {
            fail(e);
        }
        if (auto verdict = decide(report.levels, options)) {
            report.verdict = std::move(*verdict);
            fill_cauchy(report);
            return report;
        }
    }
    report.verdict = Undecided{options.budget, 0.0, report.levels.back().d};
    fill_cauchy(report);
    return report;
}

StrictExcess strict_excess(double d, const Vector& y_inf, const Vector& v, const Vector& y,
                           double tol) {
    StrictExcess s;
    s.excess = squared_norm(y - v) - d * d;
    s.half_gap = 0.5 * squared_norm(v - y_inf);
    s.holds = s.excess >= s.half_gap - tol;
    return s;
}

}  // namespace orbit
