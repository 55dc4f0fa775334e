#include <doctest.h>

#include <cmath>
#include <sstream>

#include "edpm/checks.hpp"
#include "edpm/error.hpp"
#include "edpm/oracle.hpp"
#include "edpm/sim.hpp"

using namespace edpm;

namespace {

Experiment make(std::vector<RewardDistribution> arms, RiskCriterion c, PolicySpec p, std::size_t T) {
    c = with_default_certificates(std::move(c), arms);
    return Experiment{std::move(arms), std::move(c), std::move(p), T, {}};
}

std::vector<RewardDistribution> two_gaussians() {
    return {RewardDistribution::gaussian(0.0, 1.0), RewardDistribution::gaussian(0.5, 1.0)};
}

}  // namespace

TEST_CASE("checkpoints") {
    CHECK(default_checkpoints(1, 10) == std::vector<std::size_t>{1, 2, 4, 8, 10});
    CHECK(default_checkpoints(3, 24) == std::vector<std::size_t>{3, 6, 12, 24});
    CHECK_THROWS_AS(default_checkpoints(3, 2), DomainError);
    auto ex = make({RewardDistribution::point_mass(5)}, RiskCriterion::mean(), PolicySpec::simple({1.0}), 10);
    ex.checkpoints = {0, 5};
    CHECK_THROWS_AS(run_episode(ex, 1), DomainError);
}

TEST_CASE("single point-mass arm") {
    const auto ex = make({RewardDistribution::point_mass(5)}, RiskCriterion::mean(), PolicySpec::simple({1.0}), 10);
    const auto ep = run_episode(ex, 3);
    for (const auto& c : ep.checkpoints) {
        CHECK(c.empirical_value == 5.0);
        CHECK(c.proxy_value == 5.0);
        CHECK(c.counts[0] == c.t);
    }
}

TEST_CASE("vertex simple policy has a constant proxy value") {
    const auto arms = two_gaussians();
    const auto c = RiskCriterion::cvar(0.2);
    const auto ex = make(arms, c, PolicySpec::simple({1.0, 0.0}), 64);
    const double target = c.evaluate(arms[0]);
    for (const auto& cp : run_episode(ex, 1).checkpoints) CHECK(cp.proxy_value == target);
}

TEST_CASE("episodes are deterministic and counts sum to t") {
    const auto ex = make(two_gaussians(), RiskCriterion::cvar(0.2), PolicySpec::ucb(3), 200);
    const auto a = run_episode(ex, 42), b = run_episode(ex, 42);
    REQUIRE(a.checkpoints.size() == b.checkpoints.size());
    for (std::size_t j = 0; j < a.checkpoints.size(); ++j) {
        CHECK(a.checkpoints[j].counts == b.checkpoints[j].counts);
        CHECK(a.checkpoints[j].empirical_value == b.checkpoints[j].empirical_value);
        std::size_t s = 0;
        for (auto n : a.checkpoints[j].counts) s += n;
        CHECK(s == a.checkpoints[j].t);
    }
    const auto r = check_determinism(ex, 8, 7, 3);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("proxy regret of fixed policies") {
    const auto arms = two_gaussians();
    const auto c = RiskCriterion::mean();
    const auto best = best_single_arm(c, arms);
    const auto at_best = run_replications(make(arms, c, PolicySpec::simple({0.0, 1.0}), 100), 5, 1);
    for (const auto& e : estimate_proxy_regret(at_best, best.value)) CHECK(e.value == 0.0);
    const auto at_worst = run_replications(make(arms, c, PolicySpec::simple({1.0, 0.0}), 100), 5, 1);
    for (const auto& e : estimate_proxy_regret(at_worst, best.value)) CHECK(e.value == doctest::Approx(best.gaps[0]));
}

TEST_CASE("horizon gap") {
    SUBCASE("linear criteria have no gap") {
        for (const auto& spec : {PolicySpec::ucb(3), PolicySpec::simple({0.5, 0.5})}) {
            const auto eps = run_replications(make(two_gaussians(), RiskCriterion::mean(), spec, 256), 400, 11);
            for (const auto& e : estimate_horizon_gap(eps)) CHECK(e.value <= 3.0 * e.std_error + 1e-12);
        }
    }
    SUBCASE("negative variance on one gaussian arm has gap sigma^2 / T") {
        auto ex = make({RewardDistribution::gaussian(0, 1)}, RiskCriterion::neg_variance(), PolicySpec::simple({1.0}), 100);
        ex.checkpoints = {25, 100};
        const auto eps = run_replications(ex, 4000, 5);
        for (const auto& e : estimate_horizon_gap(eps)) CHECK(std::abs(e.value - 1.0 / e.t) <= 3.0 * e.std_error);
    }
    const auto one = run_replications(make(two_gaussians(), RiskCriterion::mean(), PolicySpec::ucb(3), 8), 1, 1);
    CHECK_THROWS_AS(estimate_horizon_gap(one), DomainError);
}

TEST_CASE("reference regret") {
    const auto ex = make(two_gaussians(), RiskCriterion::mean(), PolicySpec::ucb(3), 64);
    const auto eps = run_replications(ex, 20, 3);
    for (const auto& e : estimate_reference_regret(eps, eps)) CHECK(e.value == 0.0);
    auto shorter = ex;
    shorter.horizon = 32;
    CHECK_THROWS_AS(estimate_reference_regret(eps, run_replications(shorter, 20, 3)), DomainError);
}

TEST_CASE("mean pull counts respect the bound") {
    const std::vector<RewardDistribution> arms{RewardDistribution::gaussian(0.0, 1.0), RewardDistribution::gaussian(0.6, 0.5),
                                               RewardDistribution::gaussian(0.2, 0.8)};
    const auto ex = make(arms, RiskCriterion::cvar(0.2), PolicySpec::ucb(3), 1000);
    const auto eps = run_replications(ex, 200, 9);
    const auto bound = pull_count_bound(ex.criterion, arms, 3.0, 1000.0);
    const auto best = best_single_arm(ex.criterion, arms);
    for (std::size_t i = 0; i < arms.size(); ++i) {
        if (i == best.index) continue;
        CHECK(estimate_mean_pulls(eps, i).back().value <= bound.tau_bound[i]);
    }
}

TEST_CASE("proxy regret decomposes over pull frequencies") {
    Rng rng(77);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<RewardDistribution> arms;
        for (int k = 0; k < 2 + trial % 2; ++k)
            arms.push_back(RewardDistribution::gaussian(0.2 + uniform_open(rng), 0.3 + uniform_open(rng)));
        for (const auto& base : {RiskCriterion::mean(), RiskCriterion::sharpe(0, 0.1), RiskCriterion::value_at_risk(0.3)}) {
            const auto ex = make(arms, base, PolicySpec::ucb(3), 256);
            const auto eps = run_replications(ex, 40, 100 + trial);
            const auto best = best_single_arm(ex.criterion, arms);
            const double L = lipschitz_constant_L(ex.criterion, arms, ex.criterion.norm());
            const auto regret = estimate_proxy_regret(eps, best.value);
            for (std::size_t j = 0; j < regret.size(); ++j) {
                double sum = 0.0;
                for (std::size_t i = 0; i < arms.size(); ++i)
                    sum += estimate_mean_pulls(eps, i)[j].value * norm_distance(arms[best.index], arms[i], ex.criterion.norm());
                INFO(ex.criterion.name(), " t=", regret[j].t);
                CHECK(regret[j].value <= L * sum / regret[j].t + 3.0 * regret[j].std_error + 1e-12);
            }
        }
    }
}

TEST_CASE("rates") {
    const std::vector<double> T{10, 100, 1000};
    std::vector<double> v;
    for (double t : T) v.push_back(2.0 * std::log(t) / t);
    for (double r : rate_curve(T, v, Rate::parse("logT/T"))) CHECK(r == doctest::Approx(2.0));
    std::vector<double> w;
    for (double t : T) w.push_back(1.0 / std::sqrt(t));
    const auto inc = rate_curve(T, w, Rate::parse("logT/T"));
    CHECK(inc[0] < inc[1]);
    CHECK(inc[1] < inc[2]);
    CHECK(Rate::parse("power{-0.5}")(100.0) == doctest::Approx(0.1));
    CHECK(Rate::parse("1/T")(4.0) == 0.25);
    CHECK(Rate::parse("1/sqrtT")(4.0) == 0.5);
    CHECK_THROWS_AS(Rate::parse("power{x}"), DomainError);
    CHECK_THROWS_AS(Rate::parse("exp"), DomainError);
    const std::vector<double> bad{10, 5};
    CHECK_THROWS_AS(rate_curve(bad, std::vector<double>{1, 1}, Rate::parse("1/T")), DomainError);
}

TEST_CASE("DKW exceedance") {
    const auto g = RewardDistribution::gaussian(0, 1);
    CHECK(dkw_exceedance(g, 50, 0.0, 100, 1) == 1.0);
    CHECK(dkw_bound(100, 0.2) == doctest::Approx(2 * std::exp(-8.0)));
    CHECK_THROWS_AS(dkw_exceedance(g, 50, 0.1, 10, 1), DomainError);
}

TEST_CASE("CSV round trip") {
    std::vector<CsvRow> rows{{"ucb{3}", "proxy-regret", {16, 0.125, 0.01, 200, 0}},
                             {"simple{0.5,0.5}", "horizon-gap", {32, 1.0 / 3.0, 1e-17, 199, 1}}};
    std::ostringstream os;
    write_csv(os, {{"criterion", "cvar{0.1}"}, {"seed", "7"}}, rows);
    std::istringstream is(os.str());
    const auto meta = read_csv_metadata(is);
    CHECK(meta.at("version") == "1");
    CHECK(meta.at("criterion") == "cvar{0.1}");
    std::istringstream is2(os.str());
    const auto back = read_csv_rows(is2);
    REQUIRE(back.size() == 2);
    CHECK(back[1].policy == "simple{0.5,0.5}");
    CHECK(back[1].estimate.value == 1.0 / 3.0);
    CHECK(back[1].estimate.flagged == 1);
    CHECK(back[0].estimate.t == 16);
}
