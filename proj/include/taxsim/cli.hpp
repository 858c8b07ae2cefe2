#pragma once

#include "taxsim/policy.hpp"
#include "taxsim/population.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace taxsim {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

/// Runs the `taxsim` command line. `args` excludes the program name.
/// Exit codes: 0 success, 1 usage or validation error, 2 I/O error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "seed=7,n=1000[,location=6.68,scale=0.8,floor=460]"
SynthesisParams parse_synth_spec(std::string_view spec);

/// Preset name, or a path to a policy file when no preset matches.
Policy resolve_policy_ref(std::string_view ref);

}  // namespace taxsim
