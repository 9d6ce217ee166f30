#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "orbit/brouwerian_demo.hpp"
#include "orbit/located_sets.hpp"
#include "orbit/nested_limit.hpp"
#include "orbit/open_mapping.hpp"
#include "orbit/projection_pipeline.hpp"

namespace orbit {

using Json = nlohmann::json;

/// Problem file. Field names match the JSON keys.
struct Problem {
    std::size_t dim = 0;
    std::vector<Matrix> basis;
    Vector x;
    std::optional<Vector> y;
    std::optional<double> n;
    std::optional<double> tol;
    std::optional<int> budget;
    std::optional<std::uint64_t> seed;
};

/// Throws InputError on missing fields or inconsistent shapes. With
/// allow_rectangular the single basis matrix may be m x n (omt).
Problem parse_problem(const Json& j, bool allow_rectangular = false);
Problem load_problem(const std::string& path, bool allow_rectangular = false);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);
Json to_json(const DistanceReport& r);
Json to_json(const DistanceResult& r);
Json to_json(const RadiusResult& r);
Json to_json(const ProjectionCertificate& c);
Json to_json(const Decomposition& d);
Json to_json(const PipelineDistance& p);
Json to_json(const std::vector<DemoRow>& rows);

/// Report kinds checked by validate_report.
enum class ReportKind { Distance, Pipeline, BallDistance, Radius, Projection, Decomposition, OpenMap, Demo };

/// Structural check of an emitted report: required keys with the right
/// JSON types. Returns an empty string when valid, else the first problem.
std::string validate_report(ReportKind kind, const Json& j);

}  // namespace orbit
