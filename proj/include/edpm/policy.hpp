#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edpm/criteria.hpp"
#include "edpm/dist.hpp"

namespace edpm {

// Rewards observed so far. Arms are zero-based.
class PolicyState {
public:
    explicit PolicyState(std::size_t arms);

    void update(std::size_t arm, double reward);

    std::size_t arms() const { return counts_.size(); }
    std::size_t time() const { return rewards_.size(); }
    std::span<const std::size_t> counts() const { return counts_; }
    std::span<const double> rewards() const { return rewards_; }  // chronological, all arms
    std::span<const std::size_t> pulls() const { return pulls_; }  // chronological arm indices
    std::span<const double> arm_rewards(std::size_t arm) const { return arm_rewards_.at(arm); }

    EmpiricalDistribution arm_empirical(std::size_t arm) const;
    EmpiricalDistribution pooled_empirical() const;

private:
    std::vector<std::size_t> counts_;
    std::vector<std::vector<double>> arm_rewards_;
    std::vector<double> rewards_;
    std::vector<std::size_t> pulls_;
};

struct UcbParams {
    double a = 2.0;
    double b = 1.0;
    double q = 1.0;
    double ucb_alpha = 3.0;

    static UcbParams from(const StabilityCertificate& cert, double ucb_alpha);
    void validate() const;
};

// phi(y) = min{a (y/2b)^2, a (y/2b)^(2/q)}
double phi(const UcbParams& params, double y);
// phi_inv(x) = max{2b (x/a)^(1/2), 2b (x/a)^(q/2)}
double phi_inv(const UcbParams& params, double x);

// Round-robin for t <= K, then argmax_i R(F_hat_i) + phi_inv(ucb_alpha log t / tau_i).
std::size_t ucb_select(const PolicyState& state, const RiskCriterion& criterion, const UcbParams& params);
std::size_t simple_policy_select(std::span<const double> p, Rng& rng);
std::size_t bad1_oracle_select(const PolicyState& state);
std::size_t bad2_oracle_select(const PolicyState& state);

class Policy {
public:
    virtual ~Policy() = default;
    virtual std::size_t select(const PolicyState& state, Rng& rng) = 0;
    // Called after state.update(arm, reward).
    virtual void observe(std::size_t /*arm*/, double /*reward*/) {}
};

struct PolicySpec {
    enum class Kind { Ucb, Simple, Bad1Oracle, Bad2Oracle };
    Kind kind = Kind::Ucb;
    double ucb_alpha = 3.0;
    std::vector<double> p;  // simple policies

    static PolicySpec ucb(double ucb_alpha = 3.0) { return {Kind::Ucb, ucb_alpha, {}}; }
    static PolicySpec simple(std::vector<double> p) { return {Kind::Simple, 0.0, std::move(p)}; }
    static PolicySpec bad1_oracle() { return {Kind::Bad1Oracle, 0.0, {}}; }
    static PolicySpec bad2_oracle() { return {Kind::Bad2Oracle, 0.0, {}}; }

    std::string name() const;
    void validate(std::size_t arms) const;
};

// A fresh policy for one episode. UCB needs the criterion's stability certificate.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const RiskCriterion& criterion, std::size_t arms);

}  // namespace edpm
