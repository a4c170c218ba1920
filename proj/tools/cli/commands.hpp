#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/verify.hpp"

namespace crot::cli {

enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2, kVerifyFailed = 3 };

/// Runs one `crot` invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        const VerifyHooks& hooks = {});

inline constexpr const char* kSweepHeader = "theta_rad,alpha_rad,case,x,y,p_max,e_alpha,avg_cost";

}  // namespace crot::cli
