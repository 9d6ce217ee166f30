#include "orbit/report.hpp"

#include <fstream>
#include <functional>
#include <sstream>
#include <utility>

#include "orbit/errors.hpp"

namespace orbit {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InputError("problem file: " + what); }

std::vector<double> number_array(const Json& j, const std::string& field) {
    if (!j.is_array()) bad("field '" + field + "' must be an array of numbers");
    std::vector<double> out;
    for (const Json& e : j) {
        if (!e.is_number()) bad("field '" + field + "' must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

Vector vector_field(const Json& j, const std::string& field, std::size_t dim) {
    std::vector<double> v = number_array(j, field);
    if (v.size() != dim)
        bad("field '" + field + "' has " + std::to_string(v.size()) + " entries, expected " +
            std::to_string(dim));
    return Vector(std::move(v));
}

Matrix matrix_field(const Json& j, const std::string& field, std::size_t rows,
                    std::optional<std::size_t> cols) {
    if (!j.is_array() || j.size() != rows)
        bad(field + " must have " + std::to_string(rows) + " rows");
    std::vector<std::vector<double>> data;
    for (std::size_t i = 0; i < rows; ++i) {
        data.push_back(number_array(j[i], field + " row " + std::to_string(i)));
        const std::size_t want = cols ? *cols : data.front().size();
        if (data.back().size() != want || want == 0)
            bad(field + " row " + std::to_string(i) + " has " +
                std::to_string(data.back().size()) + " entries, expected " +
                std::to_string(want));
    }
    Matrix m(rows, data.front().size());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t k = 0; k < m.cols(); ++k) m(i, k) = data[i][k];
    return m;
}

double positive(const Json& j, const std::string& field) {
    if (!j.is_number() || !(j.get<double>() > 0.0)) bad("field '" + field + "' must be positive");
    return j.get<double>();
}

}  // namespace

Problem parse_problem(const Json& j, bool allow_rectangular) {
    if (!j.is_object()) bad("top level must be an object");
    for (const char* key : {"dim", "basis", "x"})
        if (!j.contains(key)) bad(std::string("missing field '") + key + "'");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
        bad("field 'dim' must be a positive integer");

    Problem p;
    p.dim = j["dim"].get<std::size_t>();
    const Json& basis = j["basis"];
    if (!basis.is_array() || basis.empty()) bad("field 'basis' must be a nonempty array");
    if (allow_rectangular && basis.size() == 1) {
        p.basis.push_back(matrix_field(basis[0], "basis[0]", p.dim, std::nullopt));
    } else {
        for (std::size_t i = 0; i < basis.size(); ++i)
            p.basis.push_back(
                matrix_field(basis[i], "basis[" + std::to_string(i) + "]", p.dim, p.dim));
    }
    p.x = vector_field(j["x"], "x", p.basis.front().cols());
    if (j.contains("y")) p.y = vector_field(j["y"], "y", p.dim);
    if (j.contains("n")) p.n = positive(j["n"], "n");
    if (j.contains("tol")) p.tol = positive(j["tol"], "tol");
    if (j.contains("budget")) {
        if (!j["budget"].is_number_integer() || j["budget"].get<long long>() < 1)
            bad("field 'budget' must be a positive integer");
        p.budget = j["budget"].get<int>();
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("field 'seed' must be a nonnegative integer");
        p.seed = j["seed"].get<std::uint64_t>();
    }
    return p;
}

Problem load_problem(const std::string& path, bool allow_rectangular) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open problem file '" + path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw InputError("malformed JSON in '" + path + "': " + e.what());
    }
    return parse_problem(j, allow_rectangular);
}

// ---------------------------------------------------------- serialization

Json to_json(const Vector& v) { return Json(v.std_vector()); }

Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(to_json(m.row(i)));
    return rows;
}

namespace {

Json verdict_json(const Verdict& v) {
    Json j;
    j["kind"] = verdict_name(v);
    if (const auto* l = std::get_if<Located>(&v)) {
        j["d"] = l->d;
        j["y_inf"] = to_json(l->y_inf);
        j["level"] = l->level;
    } else if (const auto* s = std::get_if<Stabilized>(&v)) {
        j["N"] = s->N;
        j["d"] = s->d;
    } else {
        const auto& u = std::get<Undecided>(v);
        j["budget"] = u.budget;
        j["lower"] = u.lower;
        j["upper"] = u.upper;
    }
    return j;
}

}  // namespace

Json to_json(const DistanceReport& r) {
    Json j;
    j["levels"] = Json::array();
    for (const Level& lv : r.levels)
        j["levels"].push_back(
            {{"n", lv.n}, {"d", lv.d}, {"lower", lv.lower}, {"y_n", to_json(lv.y_n)}});
    j["cauchy_bounds"] = Json::array();
    for (const CauchyEntry& c : r.cauchy_bounds)
        j["cauchy_bounds"].push_back(
            {{"m", c.m}, {"n", c.n}, {"bound", c.bound}, {"observed", c.observed}});
    j["verdict"] = verdict_json(r.verdict);
    j["tol"] = r.tol;
    j["stab_tol"] = r.stab_tol;
    return j;
}

Json to_json(const DistanceResult& r) {
    return {{"d", r.value},          {"lower", r.lower},     {"coeffs", to_json(r.coeffs)},
            {"point", to_json(r.point)}, {"tol", r.tol},     {"solver_iters", r.solver_iters},
            {"converged", r.converged}};
}

Json to_json(const RadiusResult& r) {
    return {{"r", r.r},
            {"direction", to_json(r.direction)},
            {"method", r.method},
            {"tol", r.tol},
            {"directions_checked", r.directions_checked},
            {"worst_gauge", r.worst_gauge},
            {"certified", r.certified}};
}

Json to_json(const ProjectionCertificate& c) {
    Json j;
    j["P"] = to_json(c.P);
    j["rank"] = c.rank;
    j["r"] = c.r;
    j["direction"] = to_json(c.direction);
    j["radius_certified"] = c.radius_certified;
    j["per_y_trace"] = Json::array();
    for (const ProbeTrace& t : c.per_y_trace)
        j["per_y_trace"].push_back({{"y", to_json(t.y)},
                                    {"N", t.N},
                                    {"d_pipeline", t.d_pipeline},
                                    {"d_oracle", t.d_oracle},
                                    {"route", t.route}});
    j["seed"] = c.seed;
    j["note"] = c.note;
    return j;
}

Json to_json(const Decomposition& d) {
    Json j;
    j["y"] = to_json(d.y);
    j["r"] = d.r;
    j["oracle_tol"] = d.oracle_tol;
    j["steps"] = Json::array();
    for (const auto& s : d.steps)
        j["steps"].push_back(
            {{"i", s.i}, {"x", to_json(s.x)}, {"lambda", s.lambda}, {"residual", s.residual}});
    Json out;
    out["kind"] = d.outcome_name();
    if (const auto* m = std::get_if<Decomposition::Member>(&d.outcome)) {
        out["xi"] = to_json(m->xi);
    } else if (const auto* w = std::get_if<Decomposition::Witness>(&d.outcome)) {
        out["z"] = to_json(w->z);
        out["dist_z"] = w->dist_z;
    } else {
        out["residual"] = std::get<Decomposition::Undecided>(d.outcome).residual;
    }
    j["outcome"] = out;
    return j;
}

Json to_json(const PipelineDistance& p) {
    return {{"d", p.d}, {"lower", p.lower}, {"N", p.N}, {"r", p.r}, {"oracle", p.oracle}};
}

Json to_json(const std::vector<DemoRow>& rows) {
    Json j = Json::array();
    for (const DemoRow& row : rows)
        j.push_back({{"c", row.c},
                     {"r", row.r},
                     {"N", row.N ? Json(*row.N) : Json(nullptr)},
                     {"d", row.d},
                     {"levels", row.levels_to_locate},
                     {"verdict", row.verdicts},
                     {"undecided", row.undecided}});
    return {{"rows", j}};
}

// ------------------------------------------------------------- validation

namespace {

using Check = std::function<bool(const Json&)>;

bool is_real(const Json& j) { return j.is_number() || j.is_null(); }
bool is_int(const Json& j) { return j.is_number_integer(); }
bool is_text(const Json& j) { return j.is_string(); }
bool is_flag(const Json& j) { return j.is_boolean(); }
bool is_vec(const Json& j) {
    if (!j.is_array()) return false;
    for (const Json& e : j)
        if (!is_real(e)) return false;
    return true;
}
bool is_mat(const Json& j) {
    if (!j.is_array()) return false;
    for (const Json& row : j)
        if (!is_vec(row) || row.size() != j.front().size()) return false;
    return true;
}

std::string require(const Json& j, const std::string& where,
                    std::initializer_list<std::pair<const char*, Check>> fields) {
    if (!j.is_object()) return where + " is not an object";
    for (const auto& [key, check] : fields) {
        if (!j.contains(key)) return where + " lacks '" + key + "'";
        if (!check(j[key])) return where + "." + key + " has the wrong type";
    }
    return {};
}

std::string each(const Json& j, const std::string& where,
                 const std::function<std::string(const Json&, const std::string&)>& item) {
    if (!j.is_array()) return where + " is not an array";
    for (std::size_t i = 0; i < j.size(); ++i)
        if (auto why = item(j[i], where + "[" + std::to_string(i) + "]"); !why.empty()) return why;
    return {};
}

std::string radius_schema(const Json& j) {
    return require(j, "report",
                   {{"r", is_real}, {"direction", is_vec}, {"method", is_text}, {"tol", is_real},
                    {"directions_checked", is_int}, {"worst_gauge", is_real},
                    {"certified", is_flag}});
}

}  // namespace

std::string validate_report(ReportKind kind, const Json& j) {
    std::string why;
    switch (kind) {
    case ReportKind::Distance: {
        why = require(j, "report",
                      {{"levels", [](const Json& a) { return a.is_array(); }},
                       {"cauchy_bounds", [](const Json& a) { return a.is_array(); }},
                       {"verdict", [](const Json& a) { return a.is_object(); }},
                       {"tol", is_real}, {"stab_tol", is_real}});
        if (!why.empty()) return why;
        why = each(j["levels"], "levels", [](const Json& e, const std::string& w) {
            return require(e, w, {{"n", is_int}, {"d", is_real}, {"lower", is_real},
                                  {"y_n", is_vec}});
        });
        if (!why.empty()) return why;
        why = each(j["cauchy_bounds"], "cauchy_bounds", [](const Json& e, const std::string& w) {
            return require(e, w, {{"m", is_int}, {"n", is_int}, {"bound", is_real},
                                  {"observed", is_real}});
        });
        if (!why.empty()) return why;
        const Json& v = j["verdict"];
        why = require(v, "verdict", {{"kind", is_text}});
        if (!why.empty()) return why;
        const std::string k = v["kind"].get<std::string>();
        if (k == "Located")
            return require(v, "verdict", {{"d", is_real}, {"y_inf", is_vec}, {"level", is_int}});
        if (k == "Stabilized") return require(v, "verdict", {{"N", is_int}, {"d", is_real}});
        if (k == "Undecided")
            return require(v, "verdict",
                           {{"budget", is_int}, {"lower", is_real}, {"upper", is_real}});
        return "verdict.kind '" + k + "' is unknown";
    }
    case ReportKind::Pipeline:
        return require(j, "report",
                       {{"d", is_real}, {"lower", is_real}, {"N", is_int}, {"r", is_real},
                        {"oracle", is_real}});
    case ReportKind::BallDistance:
        return require(j, "report",
                       {{"d", is_real}, {"lower", is_real}, {"coeffs", is_vec}, {"point", is_vec},
                        {"tol", is_real}, {"solver_iters", is_int}, {"converged", is_flag}});
    case ReportKind::Radius:
    case ReportKind::OpenMap:
        return radius_schema(j);
    case ReportKind::Projection:
        why = require(j, "report",
                      {{"P", is_mat}, {"rank", is_int}, {"r", is_real}, {"direction", is_vec},
                       {"radius_certified", is_flag},
                       {"per_y_trace", [](const Json& a) { return a.is_array(); }},
                       {"seed", is_int}, {"note", is_text}});
        if (!why.empty()) return why;
        return each(j["per_y_trace"], "per_y_trace", [](const Json& e, const std::string& w) {
            return require(e, w, {{"y", is_vec}, {"N", is_int}, {"d_pipeline", is_real},
                                  {"d_oracle", is_real}, {"route", is_text}});
        });
    case ReportKind::Decomposition:
        why = require(j, "report",
                      {{"y", is_vec}, {"r", is_real}, {"oracle_tol", is_real},
                       {"steps", [](const Json& a) { return a.is_array(); }},
                       {"outcome", [](const Json& a) { return a.is_object(); }}});
        if (!why.empty()) return why;
        why = each(j["steps"], "steps", [](const Json& e, const std::string& w) {
            return require(e, w, {{"i", is_int}, {"x", is_vec}, {"lambda", is_int},
                                  {"residual", is_real}});
        });
        if (!why.empty()) return why;
        return require(j["outcome"], "outcome", {{"kind", is_text}});
    case ReportKind::Demo:
        why = require(j, "report", {{"rows", [](const Json& a) { return a.is_array(); }}});
        if (!why.empty()) return why;
        return each(j["rows"], "rows", [](const Json& e, const std::string& w) {
            return require(e, w,
                           {{"c", is_real}, {"r", is_real},
                            {"N", [](const Json& a) { return a.is_null() || a.is_number_integer(); }},
                            {"d", is_real}, {"levels", is_int}, {"verdict", is_text},
                            {"undecided", is_flag}});
        });
    }
    return "unknown report kind";
}

}  // namespace orbit
