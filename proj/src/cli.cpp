#include "orbit/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "orbit/errors.hpp"
#include "orbit/report.hpp"

namespace orbit {

namespace {

struct Settings {
    double tol = CliDefaults::tol;
    double stab_tol = CliDefaults::stab_tol;
    int budget = CliDefaults::budget;
    double rank_tol = CliDefaults::rank_tol;
    std::optional<std::uint64_t> seed;
    bool validate = false;
    bool serial = false;

    bool tol_set = false;
    bool budget_set = false;

    std::string file;
    std::optional<double> n;
    std::optional<double> r;
    int steps = 60;
    bool fallback = false;
    bool pipeline = false;
    std::size_t probes = 8;
    std::string csv;
    std::vector<double> c_values;
    bool json = false;
};

// Problem values apply unless the matching flag was given.
void merge(Settings& s, const Problem& p) {
    if (p.tol && !s.tol_set) s.tol = *p.tol;
    if (p.budget && !s.budget_set) s.budget = *p.budget;
    if (p.seed && !s.seed) s.seed = p.seed;
}

Exec exec_of(const Settings& s) { return s.serial ? Exec::Serial : Exec::Parallel; }

const Vector& need_y(const Problem& p) {
    if (!p.y) throw InputError("problem file: this subcommand needs field 'y'");
    return *p.y;
}

struct Emitted {
    Json report;
    ReportKind kind;
};

Emitted distance_cmd(Settings& s) {
    const Problem p = load_problem(s.file);
    merge(s, p);
    const OperatorSubspace sub = make_subspace(p.basis, s.rank_tol);
    if (s.pipeline) {
        RadiusOptions ro;
        ro.exec = exec_of(s);
        return {to_json(pipeline_distance(need_y(p), sub, p.x, s.tol, ro)), ReportKind::Pipeline};
    }
    NestedOptions o;
    o.budget = s.budget;
    o.tol = s.tol;
    o.stab_tol = s.stab_tol;
    o.exec = exec_of(s);
    return {to_json(locate_distance(need_y(p), sub, p.x, o)), ReportKind::Distance};
}

Emitted balldist_cmd(Settings& s) {
    const Problem p = load_problem(s.file);
    merge(s, p);
    const std::optional<double> n = s.n ? s.n : p.n;
    if (!n) throw InputError("balldist: give --n or field 'n'");
    const OperatorSubspace sub = make_subspace(p.basis, s.rank_tol);
    const DistanceResult r = ball_distance(need_y(p), sub, p.x, *n, s.tol);
    if (!r.converged) throw SolverError("balldist: solver did not converge", r.lower, r.value);
    return {to_json(r), ReportKind::BallDistance};
}

Emitted project_cmd(Settings& s) {
    const Problem p = load_problem(s.file);
    merge(s, p);
    const OperatorSubspace sub = make_subspace(p.basis, s.rank_tol);
    ProjectionOptions o;
    o.random_probes = s.probes;
    if (s.seed) o.seed = *s.seed;
    o.nested_fallback = s.fallback;
    o.nested.budget = s.budget;
    o.nested.tol = s.tol;
    o.nested.stab_tol = s.stab_tol;
    o.exec = exec_of(s);
    return {to_json(build_projection(sub, p.x, s.tol, o)), ReportKind::Projection};
}

Emitted radius_cmd(Settings& s) {
    const Problem p = load_problem(s.file);
    merge(s, p);
    const OperatorSubspace sub = make_subspace(p.basis, s.rank_tol);
    RadiusOptions o;
    o.exec = exec_of(s);
    return {to_json(metric_complement_distance(sub, p.x, s.tol, o)), ReportKind::Radius};
}

Emitted decompose_cmd(Settings& s) {
    const Problem p = load_problem(s.file);
    merge(s, p);
    if (!s.r) throw InputError("decompose: --r is required");
    const OperatorSubspace sub = make_subspace(p.basis, s.rank_tol);
    const OrbitBallSet body(sub, p.x, p.n.value_or(1.0));
    DecomposeOptions o;
    o.oracle_tol = std::min(1e-10, s.tol);
    return {to_json(greedy_decompose(need_y(p), body, *s.r, s.steps, o)),
            ReportKind::Decomposition};
}

Emitted omt_cmd(Settings& s) {
    const Problem p = load_problem(s.file, true);
    merge(s, p);
    if (p.basis.size() != 1)
        throw InputError("omt: basis must hold exactly one matrix, got " +
                         std::to_string(p.basis.size()));
    RadiusOptions o;
    o.exec = exec_of(s);
    return {to_json(open_map_radius(p.basis.front(), s.tol, o, s.rank_tol)), ReportKind::OpenMap};
}

std::string demo_cmd(Settings& s, std::optional<Emitted>& as_json) {
    const std::vector<double> cs = s.c_values.empty() ? default_demo_values() : s.c_values;
    const std::vector<DemoRow> rows = demo_table(cs, s.budget, s.tol, exec_of(s));
    if (!s.csv.empty()) {
        std::ofstream f(s.csv);
        if (!f) throw InputError("demo: cannot write '" + s.csv + "'");
        write_demo_csv(f, rows);
    }
    if (s.json || s.validate) as_json = Emitted{to_json(rows), ReportKind::Demo};
    std::ostringstream os;
    write_demo_table(os, rows);
    return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    apply_thread_cap_from_env();
    Settings s;

    CLI::App app{"Distances to operator orbits, projections and open mapping radii",
                 args.empty() ? "orbit-locator" : args.front()};
    app.require_subcommand(1);
    app.add_option("--tol", s.tol, "solver tolerance")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { s.tol_set = true; });
    app.add_option("--stab-tol", s.stab_tol, "stabilization threshold")->check(CLI::PositiveNumber);
    app.add_option("--budget", s.budget, "nested-limit level budget")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { s.budget_set = true; });
    app.add_option("--rank-tol", s.rank_tol, "relative rank tolerance")->check(CLI::PositiveNumber);
    app.add_option("--seed", s.seed, "probe seed");
    app.add_flag("--validate", s.validate, "re-parse the report and check its schema");
    app.add_flag("--serial", s.serial, "run the serial reference kernels");

    const auto with_file = [&](const char* name, const char* help) {
        CLI::App* sub = app.add_subcommand(name, help)->fallthrough();
        sub->add_option("file", s.file, "problem file (JSON)")->required();
        return sub;
    };
    CLI::App* distance = with_file("distance", "locate rho(y, Ax) by nested limits");
    distance->add_flag("--pipeline", s.pipeline,
                       "truncate at N > 2||y||/r instead; refuses when r is about 0");
    CLI::App* balldist = with_file("balldist", "rho(y, n A_1 x)");
    balldist->add_option("--n", s.n, "ball scale")->check(CLI::PositiveNumber);
    CLI::App* project = with_file("project", "projection onto Ax with certificate");
    project->add_flag("--fallback", s.fallback, "use nested limits when the inner radius is unusable");
    project->add_option("--probes", s.probes, "number of random probe vectors");
    CLI::App* radius = with_file("radius", "inner radius of A_1 x within Ax");
    CLI::App* decompose = with_file("decompose", "greedy decomposition of y against A_1 x");
    decompose->add_option("--r", s.r, "radius, must exceed ||y||")->required();
    decompose->add_option("--steps", s.steps, "step budget")->check(CLI::PositiveNumber);
    CLI::App* omt = with_file("omt", "open mapping radius of the single basis matrix");
    CLI::App* demo = app.add_subcommand("demo", "diagonal-algebra table")->fallthrough();
    demo->add_option("--csv", s.csv, "also write CSV here");
    demo->add_option("--c", s.c_values, "c values (default: 0, +-1, +-0.5, +-0.1, +-0.01, +-0.001)");
    demo->add_flag("--json", s.json, "print JSON rows instead of the table");

    if (args.size() > 1 && !args[1].empty() && args[1].front() != '-' &&
        app.get_subcommand_no_throw(args[1]) == nullptr) {
        err << "error: unknown subcommand '" << args[1] << "'\n";
        return 1;
    }
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        if (!reversed.empty()) reversed.pop_back();
        app.parse(std::move(reversed));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        std::optional<Emitted> emitted;
        std::string text;
        if (distance->parsed()) emitted = distance_cmd(s);
        else if (balldist->parsed()) emitted = balldist_cmd(s);
        else if (project->parsed()) emitted = project_cmd(s);
        else if (radius->parsed()) emitted = radius_cmd(s);
        else if (decompose->parsed()) emitted = decompose_cmd(s);
        else if (omt->parsed()) emitted = omt_cmd(s);
        else if (demo->parsed()) text = demo_cmd(s, emitted);

        if (emitted) {
            const std::string dumped = emitted->report.dump(2) + "\n";
            if (s.validate) {
                const std::string why = validate_report(emitted->kind, Json::parse(dumped));
                if (!why.empty()) {
                    err << "error: report failed validation: " << why << "\n";
                    return 3;
                }
            }
            if (text.empty() || s.json) text = dumped;
        }
        out << text << std::flush;
        return 0;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const RefusalError& e) {
        err << "refused: " << e.what() << "\n";
        return 2;
    } catch (const CapacityError& e) {
        err << "refused: " << e.what() << " (required " << e.required() << ")\n";
        return 2;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << " [lower " << e.lower() << ", upper " << e.upper()
            << "]\n";
        return 3;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace orbit
