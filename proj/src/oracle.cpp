#include "edpm/oracle.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "edpm/policy.hpp"

namespace edpm {

namespace {

void compositions(std::size_t k, std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    std::vector<std::size_t> c(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
        if (i + 1 == k) {
            c[i] = left;
            fn(c);
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            c[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, n);
}

}  // namespace

BestArm best_single_arm(const RiskCriterion& criterion, std::span<const RewardDistribution> arms) {
    if (arms.empty()) throw DomainError("best_single_arm needs at least one arm");
    BestArm out;
    out.values.reserve(arms.size());
    for (std::size_t i = 0; i < arms.size(); ++i) {
        try {
            out.values.push_back(criterion.evaluate(arms[i]));
        } catch (const CriterionDomainError& e) {
            throw CriterionDomainError("arm " + std::to_string(i) + ": " + e.what());
        }
        if (i == 0 || out.values[i] > out.value) {
            out.value = out.values[i];
            out.index = i;
        }
    }
    for (double v : out.values) out.gaps.push_back(out.value - v);
    return out;
}

SimplexPoint simplex_grid_argmax(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                                 double resolution) {
    const std::size_t K = arms.size();
    if (K == 0) throw DomainError("simplex search needs at least one arm");
    if (K > 4) throw UnsupportedOperation("exhaustive simplex grid is limited to K <= 4 arms");
    if (!(resolution > 0.0 && resolution <= 1.0)) throw DomainError("simplex resolution must lie in (0,1]");
    const auto n = static_cast<std::size_t>(std::llround(1.0 / resolution));
    SimplexPoint best;
    best.value = -std::numeric_limits<double>::infinity();
    compositions(K, n, [&](const std::vector<std::size_t>& c) {
        std::vector<double> p(K);
        for (std::size_t i = 0; i < K; ++i) p[i] = static_cast<double>(c[i]) / static_cast<double>(n);
        const double v = criterion.evaluate(mixture(arms, p));
        if (best.p.empty() || v > best.value) {
            best.value = v;
            best.p = std::move(p);
        }
    });
    return best;
}

double lipschitz_constant_L(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                            const NormSpec& norm) {
    if (!criterion.stability()) throw DomainError(criterion.name() + " has no stability certificate");
    const auto& cert = *criterion.stability();
    if (arms.size() <= 1) return cert.b;
    double widest = 0.0;
    for (std::size_t i = 0; i < arms.size(); ++i)
        for (std::size_t j = i + 1; j < arms.size(); ++j) {
            double d = norm_distance(arms[i], arms[j], norm);
            if (!std::isfinite(d))
                throw DomainError("arms " + std::to_string(i) + " and " + std::to_string(j) +
                                  " are at infinite distance; a tail integral diverges");
            widest = std::max(widest, d);
        }
    return cert.b * (1.0 + std::pow(widest, cert.q - 1.0));
}

PullCountBound pull_count_bound(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                                 double ucb_alpha, double T) {
    if (!(ucb_alpha > 2.0)) throw DomainError("the pull-count bound requires ucb_alpha > 2");
    if (!(T >= 1.0)) throw DomainError("the pull-count bound needs T >= 1");
    if (!criterion.stability()) throw DomainError(criterion.name() + " has no stability certificate");
    const UcbParams params = UcbParams::from(*criterion.stability(), ucb_alpha);
    const BestArm best = best_single_arm(criterion, arms);

    PullCountBound out;
    out.L = lipschitz_constant_L(criterion, arms, criterion.norm());
    out.tau_bound.assign(arms.size(), 0.0);
    const double constant = (ucb_alpha + 6.0) / (ucb_alpha - 2.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i == best.index) continue;
        const double gap = best.gaps[i];
        if (!(gap > 0.0))
            throw DomainError("arm " + std::to_string(i) + " ties the best arm; the bound needs positive gaps");
        out.tau_bound[i] = ucb_alpha * std::log(T) / phi(params, 0.5 * gap) + constant;
        sum += out.tau_bound[i] * norm_distance(arms[best.index], arms[i], criterion.norm());
    }
    out.proxy_regret_bound = out.L * sum / T;
    if (constant > 1e6) {
        out.warning = true;
        out.note = "ucb_alpha is close to 2; the constant term dominates the bound";
    }
    return out;
}

OracleReport oracle_report(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                           double resolution) {
    OracleReport out;
    out.best = best_single_arm(criterion, arms);
    if (arms.size() <= 4) out.p_star = simplex_grid_argmax(criterion, arms, resolution);
    if (criterion.stability()) out.L = lipschitz_constant_L(criterion, arms, criterion.norm());
    return out;
}

}  // namespace edpm
