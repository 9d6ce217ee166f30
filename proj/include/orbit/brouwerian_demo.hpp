#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "orbit/operator_space.hpp"
#include "orbit/parallel.hpp"

namespace orbit {

/// The diagonal 2x2 matrices T_{a,b} = diag(a, b), with ||T_{a,b}|| = max(|a|, |b|).
OperatorSubspace diag_subspace();

/// One row of the table for xi = (1, c) and y = (0, 1).
struct DemoRow {
    double c = 0.0;
    double r = 0.0;                // inner radius of A_1 xi in the plane, min(1, |c|)
    std::optional<std::int64_t> N;  // truncation index; empty when r = 0
    double d = 0.0;                // computed rho(y, A xi)
    int levels_to_locate = 0;      // levels the nested limit used
    std::string verdicts;          // route and nested-limit verdict
    bool undecided = false;        // nested limit hit the budget without a verdict
};

std::vector<double> default_demo_values();

/// Rows in input order. Requires |c| <= 1 and budget >= 1.
std::vector<DemoRow> demo_table(const std::vector<double>& c_values, int budget, double tol,
                                Exec exec = Exec::Parallel);

/// Aligned text table.
void write_demo_table(std::ostream& out, const std::vector<DemoRow>& rows);

/// Header c,r,N,d,levels,verdict; reals with 9 significant digits, NA for a
/// missing N.
void write_demo_csv(std::ostream& out, const std::vector<DemoRow>& rows);

}  // namespace orbit
