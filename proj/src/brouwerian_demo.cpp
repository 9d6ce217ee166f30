#include "orbit/brouwerian_demo.hpp"

#include <cmath>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "orbit/errors.hpp"
#include "orbit/located_sets.hpp"
#include "orbit/nested_limit.hpp"
#include "orbit/open_mapping.hpp"
#include "orbit/projection_pipeline.hpp"

namespace orbit {

OperatorSubspace diag_subspace() {
    return make_subspace({Matrix::diagonal({1.0, 0.0}), Matrix::diagonal({0.0, 1.0})});
}

std::vector<double> default_demo_values() {
    return {0.0, 1.0, -1.0, 0.5, -0.5, 0.1, -0.1, 0.01, -0.01, 0.001, -0.001};
}

namespace {

std::string describe(const Verdict& v) {
    std::ostringstream os;
    os << verdict_name(v);
    if (const auto* s = std::get_if<Stabilized>(&v)) os << "(N=" << s->N << ")";
    if (const auto* l = std::get_if<Located>(&v)) os << "(level=" << l->level << ")";
    if (const auto* u = std::get_if<Undecided>(&v)) os << "(budget=" << u->budget << ")";
    return os.str();
}

DemoRow demo_row(const OperatorSubspace& sub, double c, int budget, double tol) {
    const Vector x{1.0, c};
    const Vector y{0.0, 1.0};
    DemoRow row;
    row.c = c;

    // The radius is taken in the whole plane, so c = 0 gives r = 0 and the
    // truncation route is closed.
    const OrbitBallSet body(sub, x);
    RadiusOptions ropt;
    ropt.exec = Exec::Serial;
    row.r = inner_radius(body, {Vector{1.0, 0.0}, Vector{0.0, 1.0}}, tol, ropt).r;

    NestedOptions nopt;
    nopt.budget = budget;
    nopt.tol = tol;
    nopt.stab_tol = 0.1 * tol;
    // Solve each distance well inside tol so a zero distance reads as zero.
    const double solve_tol = 0.01 * tol;
    const DistanceReport rep = locate_distance(y, sub, x, nopt);
    row.levels_to_locate = static_cast<int>(rep.levels.size());
    row.undecided = std::holds_alternative<Undecided>(rep.verdict);

    if (row.r > tol) {
        row.N = truncation_index(y, row.r);
        const DistanceResult dr = body.ball().distance(y, static_cast<double>(*row.N), solve_tol);
        if (!dr.converged) throw SolverError("demo: ball distance did not converge", dr.lower, dr.value);
        row.d = dr.value;
        row.verdicts = "pipeline/" + describe(rep.verdict);
    } else {
        row.d = verdict_distance(rep.verdict);
        row.verdicts = "refused/" + describe(rep.verdict);
    }
    return row;
}

}  // namespace

std::vector<DemoRow> demo_table(const std::vector<double>& c_values, int budget, double tol,
                                Exec exec) {
    if (budget < 1) throw InputError("demo: budget must be at least 1");
    if (!(tol > 0.0)) throw InputError("demo: tol must be positive");
    for (double c : c_values)
        if (!(std::abs(c) <= 1.0)) throw InputError("demo: each |c| must be at most 1");

    const OperatorSubspace sub = diag_subspace();
    std::vector<DemoRow> rows(c_values.size());
    std::vector<std::exception_ptr> errors(c_values.size());
    const auto count = static_cast<std::ptrdiff_t>(c_values.size());
    const auto one = [&](std::ptrdiff_t i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            rows[idx] = demo_row(sub, c_values[idx], budget, tol);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) one(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) one(i);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

void write_demo_table(std::ostream& out, const std::vector<DemoRow>& rows) {
    std::ostringstream os;
    os << std::setprecision(9);
    os << std::left << std::setw(10) << "c" << std::setw(14) << "r" << std::setw(8) << "N"
       << std::setw(16) << "d" << std::setw(8) << "levels" << "verdict\n";
    for (const DemoRow& row : rows) {
        os << std::setw(10) << row.c << std::setw(14) << row.r << std::setw(8)
           << (row.N ? std::to_string(*row.N) : std::string("NA")) << std::setw(16) << row.d
           << std::setw(8) << row.levels_to_locate << row.verdicts
           << (row.undecided ? "  [undecided at budget]" : "") << "\n";
    }
    out << os.str();
}

void write_demo_csv(std::ostream& out, const std::vector<DemoRow>& rows) {
    std::ostringstream os;
    os << std::setprecision(9);
    os << "c,r,N,d,levels,verdict\n";
    for (const DemoRow& row : rows)
        os << row.c << ',' << row.r << ',' << (row.N ? std::to_string(*row.N) : std::string("NA"))
           << ',' << row.d << ',' << row.levels_to_locate << ',' << row.verdicts << '\n';
    out << os.str();
}

}  // namespace orbit
