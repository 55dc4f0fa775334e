#pragma once

#include <iosfwd>

#include "edpm/config.hpp"

namespace edpm {

// Exit codes of the edpm tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitCheckFailed = 2;

// R(F_i) per arm and R(F_p) per configured mixture.
void cmd_eval(const ExperimentConfig& cfg, std::ostream& os);
// Best arm, gaps, simplex maximizer, L and pull-count bounds for each ucb policy.
void cmd_oracle(const ExperimentConfig& cfg, std::ostream& os);
// Runs every policy and the reference; writes the estimator CSV.
void cmd_simulate(const ExperimentConfig& cfg, std::ostream& os);
// Returns false when any check fails.
bool cmd_check(const ExperimentConfig& cfg, std::ostream& os);

}  // namespace edpm
