#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace orbit {

/// Defaults shared by every subcommand, overridable by flags.
struct CliDefaults {
    static constexpr double tol = 1e-6;
    static constexpr double stab_tol = 1e-7;
    static constexpr int budget = 30;
    static constexpr double rank_tol = 1e-9;
};

/// Entry point of orbit-locator. args[0] is the program name. Exit codes:
/// 0 success, 1 input error, 2 refusal, 3 solver failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace orbit
