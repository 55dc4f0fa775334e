#include "edpm/policy.hpp"

#include "format.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace edpm {

PolicyState::PolicyState(std::size_t arms) : counts_(arms, 0), arm_rewards_(arms) {
    if (arms == 0) throw DomainError("a bandit needs at least one arm");
}

void PolicyState::update(std::size_t arm, double reward) {
    if (arm >= counts_.size()) throw DomainError("arm index " + std::to_string(arm) + " out of range");
    ++counts_[arm];
    arm_rewards_[arm].push_back(reward);
    rewards_.push_back(reward);
    pulls_.push_back(arm);
}

EmpiricalDistribution PolicyState::arm_empirical(std::size_t arm) const {
    const auto& r = arm_rewards_.at(arm);
    if (r.empty()) throw DomainError("arm " + std::to_string(arm) + " has not been pulled");
    return EmpiricalDistribution(r);
}

EmpiricalDistribution PolicyState::pooled_empirical() const { return EmpiricalDistribution(rewards_); }

UcbParams UcbParams::from(const StabilityCertificate& cert, double ucb_alpha) {
    UcbParams p{cert.a, cert.b, cert.q, ucb_alpha};
    p.validate();
    return p;
}

void UcbParams::validate() const {
    StabilityCertificate{a, b, q}.validate();
    if (!(ucb_alpha > 2.0 && std::isfinite(ucb_alpha))) throw DomainError("ucb_alpha must exceed 2");
}

double phi(const UcbParams& params, double y) {
    if (y < 0.0) throw DomainError("phi needs y >= 0");
    const double z = y / (2.0 * params.b);
    return std::min(params.a * z * z, params.a * std::pow(z, 2.0 / params.q));
}

double phi_inv(const UcbParams& params, double x) {
    if (x < 0.0) throw DomainError("phi_inv needs x >= 0");
    const double r = x / params.a;
    return std::max(2.0 * params.b * std::sqrt(r), 2.0 * params.b * std::pow(r, params.q / 2.0));
}

namespace {

double evaluate_arm(const RiskCriterion& criterion, const EmpiricalDistribution& F, std::size_t arm) {
    try {
        return criterion.evaluate(F);
    } catch (const CriterionDomainError& e) {
        throw CriterionDomainError("arm " + std::to_string(arm) + ": " + e.what());
    }
}

std::size_t ucb_argmax(std::span<const double> values, std::span<const std::size_t> counts, std::size_t t,
                       const UcbParams& params) {
    const double log_t = std::log(static_cast<double>(t));
    std::size_t best = 0;
    double best_index = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double index =
            values[i] + phi_inv(params, params.ucb_alpha * log_t / static_cast<double>(counts[i]));
        if (index > best_index) {
            best_index = index;
            best = i;
        }
    }
    return best;
}

class UcbPolicy final : public Policy {
public:
    UcbPolicy(const RiskCriterion& criterion, UcbParams params, std::size_t arms)
        : criterion_(criterion), params_(params), empirical_(arms), values_(arms, 0.0) {}

    std::size_t select(const PolicyState& state, Rng&) override {
        const std::size_t t = state.time() + 1;
        if (t <= state.arms()) return t - 1;
        return ucb_argmax(values_, state.counts(), t, params_);
    }

    void observe(std::size_t arm, double reward) override {
        if (empirical_[arm]) empirical_[arm]->insert(reward);
        else empirical_[arm].emplace(std::vector<double>{reward});
        values_[arm] = evaluate_arm(criterion_, *empirical_[arm], arm);
    }

private:
    RiskCriterion criterion_;
    UcbParams params_;
    std::vector<std::optional<EmpiricalDistribution>> empirical_;
    std::vector<double> values_;
};

class SimplePolicy final : public Policy {
public:
    explicit SimplePolicy(std::vector<double> p) : p_(std::move(p)) {}
    std::size_t select(const PolicyState&, Rng& rng) override { return simple_policy_select(p_, rng); }

private:
    std::vector<double> p_;
};

class Bad1OraclePolicy final : public Policy {
public:
    std::size_t select(const PolicyState& state, Rng&) override {
        const std::size_t t = state.time() + 1;
        if (t == 1) return 1;
        return (static_cast<double>(at_most_one_) + 1.0) / static_cast<double>(t) >= 0.1 ? 1 : 0;
    }
    void observe(std::size_t, double reward) override {
        if (reward <= 1.0) ++at_most_one_;
    }

private:
    std::size_t at_most_one_ = 0;
};

class Bad2OraclePolicy final : public Policy {
public:
    std::size_t select(const PolicyState& state, Rng&) override { return bad2_oracle_select(state); }
};

void require_two_arms(std::size_t k, const char* who) {
    if (k != 2) throw DomainError(std::string(who) + " is defined for exactly two arms");
}

}  // namespace

std::size_t ucb_select(const PolicyState& state, const RiskCriterion& criterion, const UcbParams& params) {
    params.validate();
    const std::size_t t = state.time() + 1;
    if (t <= state.arms()) return t - 1;
    std::vector<double> values(state.arms());
    for (std::size_t i = 0; i < state.arms(); ++i) values[i] = evaluate_arm(criterion, state.arm_empirical(i), i);
    return ucb_argmax(values, state.counts(), t, params);
}

std::size_t simple_policy_select(std::span<const double> p, Rng& rng) {
    if (p.empty()) throw DomainError("simple policy needs a non-empty weight vector");
    double total = 0.0;
    for (double w : p) {
        if (!(w >= 0.0 && std::isfinite(w))) throw DomainError("simple policy weights must be non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("simple policy weights must sum to 1");
    const double u = uniform_open(rng) * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        last = i;
        acc += p[i];
        if (u < acc) return i;
    }
    return last;
}

std::size_t bad1_oracle_select(const PolicyState& state) {
    require_two_arms(state.arms(), "the bad1 oracle policy");
    const std::size_t t = state.time() + 1;
    if (t == 1) return 1;
    std::size_t c = 0;
    for (double r : state.rewards())
        if (r <= 1.0) ++c;
    return (static_cast<double>(c) + 1.0) / static_cast<double>(t) >= 0.1 ? 1 : 0;
}

std::size_t bad2_oracle_select(const PolicyState& state) {
    require_two_arms(state.arms(), "the bad2 oracle policy");
    return state.time() == 0 ? 0 : 1;
}

std::string PolicySpec::name() const {
    switch (kind) {
        case Kind::Ucb: return "ucb{" + detail::shortest(ucb_alpha) + "}";
        case Kind::Simple: {
            std::string s = "simple{";
            for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + detail::shortest(p[i]);
            return s + "}";
        }
        case Kind::Bad1Oracle: return "bad1-oracle";
        case Kind::Bad2Oracle: return "bad2-oracle";
    }
    return "?";
}

void PolicySpec::validate(std::size_t arms) const {
    switch (kind) {
        case Kind::Ucb:
            if (!(ucb_alpha > 2.0 && std::isfinite(ucb_alpha))) throw DomainError("ucb_alpha must exceed 2");
            break;
        case Kind::Simple: {
            if (p.size() != arms) throw DomainError("simple policy needs one weight per arm");
            double total = 0.0;
            for (double w : p) {
                if (!(w >= 0.0 && std::isfinite(w))) throw DomainError("simple policy weights must be non-negative");
                total += w;
            }
            if (std::abs(total - 1.0) > 1e-12) throw DomainError("simple policy weights must sum to 1");
            break;
        }
        case Kind::Bad1Oracle: require_two_arms(arms, "the bad1 oracle policy"); break;
        case Kind::Bad2Oracle: require_two_arms(arms, "the bad2 oracle policy"); break;
    }
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const RiskCriterion& criterion, std::size_t arms) {
    spec.validate(arms);
    switch (spec.kind) {
        case PolicySpec::Kind::Ucb: {
            if (!criterion.stability())
                throw DomainError("ucb needs a stability certificate for " + criterion.name());
            return std::make_unique<UcbPolicy>(criterion, UcbParams::from(*criterion.stability(), spec.ucb_alpha), arms);
        }
        case PolicySpec::Kind::Simple: return std::make_unique<SimplePolicy>(spec.p);
        case PolicySpec::Kind::Bad1Oracle: return std::make_unique<Bad1OraclePolicy>();
        case PolicySpec::Kind::Bad2Oracle: return std::make_unique<Bad2OraclePolicy>();
    }
    throw DomainError("unknown policy kind");
}

}  // namespace edpm
