#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edpm/criteria.hpp"
#include "edpm/dist.hpp"
#include "edpm/norms.hpp"

namespace edpm {

struct BestArm {
    std::size_t index = 0;  // zero-based
    double value = 0.0;
    std::vector<double> values;
    std::vector<double> gaps;  // best - R(F_i)
};

// Argmax over the vertices; ties go to the lowest index.
BestArm best_single_arm(const RiskCriterion& criterion, std::span<const RewardDistribution> arms);

struct SimplexPoint {
    std::vector<double> p;
    double value = 0.0;
};

// Exhaustive search over the lattice {c / n : c in N^K, sum c = n}, n = round(1/resolution).
// Limited to K <= 4.
SimplexPoint simplex_grid_argmax(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                                 double resolution);

// L = b (1 + max_{i,j} ||F_i - F_j||^(q-1)); L = b for a single arm.
double lipschitz_constant_L(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                            const NormSpec& norm);

struct PullCountBound {
    std::vector<double> tau_bound;  // per arm; 0 for the best arm
    double proxy_regret_bound = 0.0;
    double L = 0.0;
    bool warning = false;
    std::string note;
};

// u_i = ucb_alpha log T / phi(Delta_i / 2) + (ucb_alpha + 6) / (ucb_alpha - 2)
PullCountBound pull_count_bound(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                                 double ucb_alpha, double T);

struct OracleReport {
    BestArm best;
    std::optional<SimplexPoint> p_star;  // K <= 4 only
    std::optional<double> L;
};

OracleReport oracle_report(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                           double resolution);

}  // namespace edpm
