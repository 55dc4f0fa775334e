#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "edpm/criteria.hpp"
#include "edpm/dist.hpp"
#include "edpm/policy.hpp"
#include "edpm/sim.hpp"

namespace edpm {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Random point of the simplex, uniform (Dirichlet(1,...,1)).
std::vector<double> random_simplex_point(std::size_t K, Rng& rng);

// R(l F + (1-l) G) <= max{R(F), R(G)} (+ the convex inequality for convex
// criteria) on random mixture pairs and l in {0.1, ..., 0.9}.
CheckResult check_convexity(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                            std::size_t pairs, std::uint64_t seed);

// |R(F) - R(G)| <= psi(||F - G||) with F a mixture and G a mixture or an
// empirical sample of one.
CheckResult check_modulus(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                          std::size_t pairs, std::uint64_t seed);

// |Res(G, F)| <= d2/2 ||G - F||^2 on pairs with ||G - F|| <= M0.
CheckResult check_residual(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                           std::size_t pairs, std::uint64_t seed);

// phi(phi_inv(x)) = x on a log grid.
CheckResult check_phi_identity(const UcbParams& params, double tol = 1e-12);

// quantile(F, a) <= y  <=>  a <= F(y)
CheckResult check_galois(DistRef F, std::size_t trials, std::uint64_t seed);

struct DkwPoint {
    std::size_t t = 0;
    double x = 0.0;
};

// Empirical exceedance <= slack * 2 exp(-2 t x^2) at every grid point.
CheckResult check_dkw(DistRef F, std::span<const DkwPoint> grid, std::size_t reps, std::uint64_t seed,
                      double slack = 1.2);

// CVaR of a sample of size t agrees with the mean of the lowest t alpha
// order statistics whenever t alpha is an integer.
CheckResult check_cvar_order_statistics(DistRef F, std::span<const double> alphas, std::size_t max_t,
                                        std::uint64_t seed);

// C1-C5 per arm for quantile criteria; C1/C2 for the others.
std::vector<CheckResult> check_conditions(const RiskCriterion& criterion, std::span<const RewardDistribution> arms);

// Serial and threaded replications agree bit for bit.
CheckResult check_determinism(const Experiment& ex, std::size_t reps, std::uint64_t seed, std::size_t parallel);

}  // namespace edpm
