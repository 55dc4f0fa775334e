#include <doctest.h>

#include <cmath>

#include "edpm/checks.hpp"
#include "edpm/norms.hpp"
#include "edpm/sim.hpp"
#include "oracle.hpp"

using namespace edpm;

namespace {

std::vector<RewardDistribution> arms() {
    return {
        RewardDistribution::gaussian(0.0, 1.0),
        RewardDistribution::gaussian(0.7, 0.4),
        RewardDistribution::uniform(-1.5, 1.0),
        RewardDistribution::scaled_bernoulli(0.4, -1.0, 2.0),
        RewardDistribution::piecewise_points({{-2, 0}, {0, 0.5}, {1, 0.5}, {3, 1}}),
    };
}

// A random distribution of any representation, built from the arms above.
Distribution random_dist(Rng& rng) {
    const auto a = arms();
    const double u = uniform_open(rng);
    if (u < 0.3) return a[static_cast<std::size_t>(uniform_open(rng) * a.size())];
    if (u < 0.7) return mixture(a, random_simplex_point(a.size(), rng));
    const auto m = mixture(a, random_simplex_point(a.size(), rng));
    return EmpiricalDistribution(sample(m, rng, 1 + static_cast<std::size_t>(uniform_open(rng) * 60)));
}

}  // namespace

TEST_CASE("sup distance examples") {
    const auto g = RewardDistribution::gaussian(0, 1);
    CHECK(sup_distance(g, g) == 0.0);
    CHECK(sup_distance(EmpiricalDistribution({0}), EmpiricalDistribution({1})) == 1.0);
    CHECK(sup_distance(g, RewardDistribution::point_mass(0)) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("sup distance matches a brute-force grid") {
    Rng rng(8);
    for (int i = 0; i < 60; ++i) {
        const Distribution F = random_dist(rng), G = random_dist(rng);
        const double exact = sup_distance(F, G);
        const double grid = oracle::sup_distance(F, G, -8.0, 8.0, 40000);
        // the grid can only under-estimate; the true sup is within its resolution
        CHECK(exact >= grid - 1e-12);
        CHECK(exact <= grid + 2e-4);
    }
}

TEST_CASE("seminorm values") {
    CHECK(seminorm_value(EmpiricalDistribution({1, 2, 3}), Moment::mean()) == 2.0);
    CHECK(seminorm_value(RewardDistribution::point_mass(3), Moment::second_moment()) == 9.0);
    const std::vector<RewardDistribution> two{RewardDistribution::point_mass(0), RewardDistribution::point_mass(-std::log(2.0))};
    CHECK(seminorm_value(mixture(two, std::vector<double>{0.5, 0.5}), Moment::exp_moment(1.0)) ==
          doctest::Approx(1.5).epsilon(1e-15));
    CHECK(std::isinf(seminorm_value(RewardDistribution::neg_pareto(1, 2), Moment::second_moment())));
}

TEST_CASE("norm distance") {
    const EmpiricalDistribution F({-2, 4}), G({-2, -2});
    CHECK(norm_distance(F, G, NormSpec::parse("sup+both-tails")) == 2.0);
    CHECK(norm_distance(F, F, NormSpec::parse("sup+both-tails")) == 0.0);
    const auto p = RewardDistribution::neg_pareto(1, 1.5);
    CHECK(std::isinf(norm_distance(p, F, NormSpec::parse("sup+mean+second-moment"))));
}

TEST_CASE("norm spec parsing") {
    for (const char* s : {"sup", "sup+lower-tail", "sup+both-tails", "sup+mean+second-moment", "sup+mean+tsv{0.5}",
                          "sup+exp-moment{2}"}) {
        const auto n = NormSpec::parse(s);
        CHECK(NormSpec::parse(n.name()).functionals == n.functionals);
    }
    CHECK(NormSpec::parse("sup+both-tails").dimension() == 2);
    CHECK_THROWS_AS(NormSpec::parse("mean"), DomainError);
    CHECK_THROWS_AS(NormSpec::parse("sup+bogus"), DomainError);
    CHECK_THROWS_AS(NormSpec::parse("sup+tsv{x}"), DomainError);
}

TEST_CASE("norm axioms on random triples") {
    Rng rng(21);
    for (const char* s : {"sup", "sup+both-tails", "sup+mean+second-moment", "sup+mean+tsv{0}"}) {
        const auto spec = NormSpec::parse(s);
        for (int i = 0; i < 500; ++i) {
            const Distribution F = random_dist(rng), G = random_dist(rng), H = random_dist(rng);
            const double fg = norm_distance(F, G, spec), gf = norm_distance(G, F, spec);
            CHECK(fg == gf);
            CHECK(norm_distance(F, F, spec) == 0.0);
            CHECK(fg >= sup_distance(F, G));
            CHECK(fg <= norm_distance(F, H, spec) + norm_distance(H, G, spec) + 1e-12);
        }
    }
    Rng r2(5);
    for (int i = 0; i < 50; ++i) {
        const Distribution F = random_dist(r2), G = random_dist(r2);
        CHECK(norm_distance(F, G, NormSpec::parse("sup")) == sup_distance(F, G));
    }
}

TEST_CASE("empirical distributions converge in norm") {
    const auto F = RewardDistribution::gaussian(0.5, 1.0);
    const auto spec = NormSpec::parse("sup+both-tails");
    double prev = INFINITY;
    for (std::size_t t : {100, 1000, 10000, 100000}) {
        std::vector<double> d;
        for (std::size_t r = 0; r < 100; ++r) {
            Rng rng(replication_seed(77, r));
            d.push_back(norm_distance(EmpiricalDistribution(sample(F, rng, t)), F, spec));
        }
        std::nth_element(d.begin(), d.begin() + 50, d.end());
        CHECK(d[50] < prev);
        prev = d[50];
    }
}
