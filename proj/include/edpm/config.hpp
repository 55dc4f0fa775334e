#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edpm/criteria.hpp"
#include "edpm/dist.hpp"
#include "edpm/policy.hpp"
#include "edpm/sim.hpp"

namespace edpm {

// Bad config file: the message starts with "line:col" for syntax errors or
// with the JSON path of the offending value.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kConfigVersion = 1;

struct ExperimentConfig {
    std::vector<RewardDistribution> arms;
    RiskCriterion criterion = RiskCriterion::mean();  // certificates already resolved
    std::vector<PolicySpec> policies;
    std::optional<PolicySpec> reference;  // empty: simple policy on the best arm
    std::size_t horizon = 1000;
    std::vector<std::size_t> checkpoints;
    std::size_t replications = 100;
    std::uint64_t seed = 1;
    std::size_t parallel = 1;
    std::vector<std::vector<double>> mixtures;
    double resolution = 0.05;
    Rate rate;
    std::string output;
    std::size_t check_pairs = 500;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// The reference policy actually used by simulate.
PolicySpec resolved_reference(const ExperimentConfig& cfg);

}  // namespace edpm
