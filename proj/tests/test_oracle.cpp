#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "edpm/checks.hpp"
#include "edpm/error.hpp"
#include "edpm/oracle.hpp"

using namespace edpm;

namespace {

RewardDistribution bad1_arm1() { return RewardDistribution::piecewise_points({{0, 0}, {1, 0.1}, {5, 0.1}, {50, 1}}); }

RiskCriterion with_cert(RiskCriterion c, StabilityCertificate s, const char* norm = "sup") {
    c.set_norm(NormSpec::parse(norm));
    c.set_stability(s);
    return c;
}

}  // namespace

TEST_CASE("best single arm") {
    const std::vector<RewardDistribution> a{RewardDistribution::gaussian(0, 1), RewardDistribution::point_mass(-0.5)};
    const auto b = best_single_arm(RiskCriterion::cvar(0.05), a);
    CHECK(b.index == 1);
    CHECK(b.value == -0.5);
    CHECK(b.gaps[0] == doctest::Approx(2.0627128 - 0.5).epsilon(1e-7));

    const std::vector<RewardDistribution> d{RewardDistribution::point_mass(1), RewardDistribution::point_mass(2),
                                            RewardDistribution::point_mass(3)};
    const auto m = best_single_arm(RiskCriterion::mean(), d);
    CHECK(m.index == 2);
    CHECK(m.gaps == std::vector<double>{2, 1, 0});
    const std::vector<RewardDistribution> one{RewardDistribution::point_mass(1)};
    CHECK(best_single_arm(RiskCriterion::mean(), one).gaps == std::vector<double>{0});
    const std::vector<RewardDistribution> tie{RewardDistribution::point_mass(1), RewardDistribution::point_mass(1)};
    CHECK(best_single_arm(RiskCriterion::mean(), tie).index == 0);

    const std::vector<RewardDistribution> heavy{RewardDistribution::point_mass(1), RewardDistribution::neg_pareto(1, 1)};
    try {
        best_single_arm(RiskCriterion::cvar(0.1), heavy);
        FAIL("expected an error");
    } catch (const CriterionDomainError& e) {
        CHECK(std::string(e.what()).find("arm 1") != std::string::npos);
    }
}

TEST_CASE("gaps are permutation-equivariant") {
    std::vector<RewardDistribution> a{RewardDistribution::gaussian(0.1, 1), RewardDistribution::gaussian(0.3, 0.5),
                                      RewardDistribution::uniform(-1, 1.4)};
    const auto c = RiskCriterion::cvar(0.2);
    const auto base = best_single_arm(c, a);
    std::vector<std::size_t> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
        std::vector<RewardDistribution> b;
        for (auto i : perm) b.push_back(a[i]);
        const auto r = best_single_arm(c, b);
        for (std::size_t j = 0; j < 3; ++j) CHECK(r.gaps[j] == base.gaps[perm[j]]);
    }
}

TEST_CASE("simplex grid") {
    const std::vector<RewardDistribution> g{RewardDistribution::gaussian(0.1, 1), RewardDistribution::gaussian(0.3, 0.5),
                                            RewardDistribution::gaussian(-0.2, 0.3)};
    const auto c = RiskCriterion::cvar(0.1);
    const auto p = simplex_grid_argmax(c, g, 0.1);
    const auto b = best_single_arm(c, g);
    CHECK(p.value == b.value);
    CHECK(p.p[b.index] == 1.0);

    const auto mean = simplex_grid_argmax(RiskCriterion::mean(), g, 0.05);
    CHECK(mean.value == doctest::Approx(0.3));

    // bad1 supremum 50 is approached along the edge and never attained
    const std::vector<RewardDistribution> b1{bad1_arm1(), RewardDistribution::point_mass(5)};
    double prev = 0.0;
    for (int n : {10, 30, 90, 270}) {
        const auto s = simplex_grid_argmax(RiskCriterion::bad1(), b1, 1.0 / n);
        CHECK(s.value < 50.0);
        CHECK(s.value > prev);
        CHECK(s.p[1] == doctest::Approx(1.0 / n));
        prev = s.value;
    }
    CHECK(simplex_grid_argmax(RiskCriterion::bad1(), b1, 1.0 / 90).value == doctest::Approx(5 + (45 - 50.0 / 90) / (1 - 1.0 / 90)));

    const std::vector<RewardDistribution> five(5, RewardDistribution::point_mass(0));
    CHECK_THROWS_AS(simplex_grid_argmax(RiskCriterion::mean(), five, 0.5), UnsupportedOperation);
}

TEST_CASE("vertex optimality for (quasi)convex criteria") {
    Rng rng(12);
    const std::vector<RiskCriterion> cs{RiskCriterion::mean(), RiskCriterion::neg_variance(), RiskCriterion::mean_variance(0.4),
                                        RiskCriterion::sharpe(0, 0.1), RiskCriterion::value_at_risk(0.3), RiskCriterion::cvar(0.2),
                                        RiskCriterion::entropic(1.0)};
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<RewardDistribution> arms;
        for (int k = 0; k < 3; ++k) arms.push_back(RewardDistribution::gaussian(0.2 + uniform_open(rng), 0.2 + uniform_open(rng)));
        for (const auto& c : cs) {
            const auto grid = simplex_grid_argmax(c, arms, 0.1);
            const auto best = best_single_arm(c, arms);
            INFO(c.name());
            CHECK(grid.value <= best.value + 1e-9);
        }
    }
}

TEST_CASE("Lipschitz constant") {
    const std::vector<RewardDistribution> u{RewardDistribution::uniform(0, 1), RewardDistribution::uniform(0.5, 1.5)};
    const auto c2 = with_cert(RiskCriterion::mean(), {1, 1, 2});
    CHECK(lipschitz_constant_L(c2, u, c2.norm()) == doctest::Approx(1.5));
    const auto c1 = with_cert(RiskCriterion::mean(), {1, 1.7, 1});
    CHECK(lipschitz_constant_L(c1, u, c1.norm()) == doctest::Approx(3.4));
    const std::vector<RewardDistribution> one{RewardDistribution::uniform(0, 1)};
    CHECK(lipschitz_constant_L(c1, one, c1.norm()) == 1.7);
    const std::vector<RewardDistribution> heavy{RewardDistribution::uniform(0, 1), RewardDistribution::neg_pareto(1, 1)};
    const auto ct = with_cert(RiskCriterion::cvar(0.1), {1, 1, 2}, "sup+both-tails");
    CHECK_THROWS_AS(lipschitz_constant_L(ct, heavy, ct.norm()), DomainError);
}

TEST_CASE("expected pull-count bound") {
    const std::vector<RewardDistribution> d{RewardDistribution::point_mass(2), RewardDistribution::point_mass(0)};
    const auto c = with_cert(RiskCriterion::mean(), {1, 1, 2});
    const auto t = pull_count_bound(c, d, 3.0, std::exp(1.0));
    CHECK(t.tau_bound[0] == 0.0);
    CHECK(t.tau_bound[1] == doctest::Approx(21.0));
    CHECK(pull_count_bound(c, d, 3.0, 1.0).tau_bound[1] == doctest::Approx(9.0));
    // L = b (1 + 1) and ||F1 - F2|| = 1 under sup
    CHECK(t.proxy_regret_bound == doctest::Approx(2.0 * 21.0 / std::exp(1.0)));
    const auto near_two = pull_count_bound(c, d, 2.0 + 1e-8, 100.0);
    CHECK(near_two.warning);
    CHECK(std::isfinite(near_two.tau_bound[1]));
    CHECK_THROWS_AS(pull_count_bound(c, d, 2.0, 100.0), DomainError);
    const std::vector<RewardDistribution> tie{RewardDistribution::point_mass(1), RewardDistribution::point_mass(1)};
    CHECK_THROWS_AS(pull_count_bound(c, tie, 3.0, 100.0), DomainError);
}

TEST_CASE("oracle report") {
    const std::vector<RewardDistribution> g{RewardDistribution::gaussian(0.1, 1), RewardDistribution::gaussian(0.3, 0.5)};
    const auto c = with_default_certificates(RiskCriterion::sortino(0, 0.1), g);
    const auto r = oracle_report(c, g, 0.05);
    REQUIRE(r.p_star);
    REQUIRE(r.L);
    for (double gap : r.best.gaps) CHECK(gap >= 0.0);
    CHECK(r.p_star->value == doctest::Approx(r.best.value).epsilon(1e-9));
}
