#include "edpm/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "edpm/norms.hpp"
#include "format.hpp"

namespace edpm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> blend(const std::vector<double>& p, const std::vector<double>& q, double lambda) {
    std::vector<double> out(p.size());
    double total = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        out[i] = lambda * p[i] + (1.0 - lambda) * q[i];
        total += out[i];
    }
    for (double& w : out) w /= total;
    return out;
}

std::string fmt(double v) { return detail::shortest(v); }

bool is_quantile_criterion(const RiskCriterion& c) {
    return c.kind() == CriterionKind::VaR || c.kind() == CriterionKind::CVaR;
}

// Sharpe and Sortino are quasiconvex only above the target.
std::vector<RewardDistribution> convexity_arms(const RiskCriterion& criterion,
                                               std::span<const RewardDistribution> arms) {
    if (criterion.kind() != CriterionKind::Sharpe && criterion.kind() != CriterionKind::Sortino)
        return {arms.begin(), arms.end()};
    std::vector<RewardDistribution> out;
    for (const auto& a : arms)
        if (expectation(a, Moment::mean()) >= criterion.target()) out.push_back(a);
    return out;
}

}  // namespace

std::vector<double> random_simplex_point(std::size_t K, Rng& rng) {
    if (K == 0) throw DomainError("simplex needs at least one coordinate");
    std::vector<double> p(K);
    double total = 0.0;
    for (double& w : p) {
        w = -std::log(uniform_open(rng));
        total += w;
    }
    for (double& w : p) w /= total;
    return p;
}

CheckResult check_convexity(const RiskCriterion& criterion, std::span<const RewardDistribution> all_arms,
                            std::size_t pairs, std::uint64_t seed) {
    CheckResult out{"convexity " + criterion.name() + " (" + to_string(criterion.convexity()) + ")", true, ""};
    const ConvexityClass cls = criterion.convexity();
    if (cls == ConvexityClass::None) {
        out.detail = "no convexity claimed";
        return out;
    }
    const auto arms = convexity_arms(criterion, all_arms);
    if (arms.empty()) {
        out.detail = "no arm satisfies the domain restriction";
        return out;
    }
    Rng rng(seed);
    std::size_t violations = 0, tested = 0;
    double worst = 0.0;
    for (std::size_t n = 0; n < pairs; ++n) {
        const auto p = random_simplex_point(arms.size(), rng);
        const auto q = random_simplex_point(arms.size(), rng);
        const double rf = criterion.evaluate(mixture(arms, p));
        const double rg = criterion.evaluate(mixture(arms, q));
        for (int k = 1; k <= 9; ++k) {
            const double lambda = k / 10.0;
            const double rh = criterion.evaluate(mixture(arms, blend(p, q, lambda)));
            const double chord = lambda * rf + (1.0 - lambda) * rg;
            const double tol = 1e-9 * (1.0 + std::abs(rf) + std::abs(rg));
            double excess = 0.0;
            switch (cls) {
                case ConvexityClass::Linear: excess = std::abs(rh - chord); break;
                case ConvexityClass::Convex: excess = rh - chord; break;
                case ConvexityClass::Quasiconvex: excess = rh - std::max(rf, rg); break;
                case ConvexityClass::None: break;
            }
            ++tested;
            worst = std::max(worst, excess);
            if (excess > tol) ++violations;
        }
    }
    out.pass = violations == 0;
    out.detail = std::to_string(violations) + "/" + std::to_string(tested) + " violations, worst excess " + fmt(worst);
    return out;
}

CheckResult check_modulus(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                          std::size_t pairs, std::uint64_t seed) {
    CheckResult out{"modulus " + criterion.name(), true, ""};
    if (!criterion.stability()) {
        out.detail = "no stability certificate";
        return out;
    }
    const auto& cert = *criterion.stability();
    Rng rng(seed);
    std::size_t violations = 0, tested = 0, skipped = 0;
    double worst_ratio = 0.0;
    for (std::size_t n = 0; n < pairs; ++n) {
        const MixtureDistribution F = mixture(arms, random_simplex_point(arms.size(), rng));
        const MixtureDistribution Gm = mixture(arms, random_simplex_point(arms.size(), rng));
        auto test = [&](DistRef G) {
            double rf = 0.0, rg = 0.0;
            try {
                rf = criterion.evaluate(F);
                rg = criterion.evaluate(G);
            } catch (const CriterionDomainError&) {
                ++skipped;
                return;
            }
            const double d = norm_distance(F, G, criterion.norm());
            if (!std::isfinite(d)) {
                ++skipped;
                return;
            }
            const double bound = modulus(cert, d);
            const double diff = std::abs(rf - rg);
            ++tested;
            if (bound > 0.0) worst_ratio = std::max(worst_ratio, diff / bound);
            if (diff > bound * (1.0 + 1e-9) + 1e-12) ++violations;
        };
        test(Gm);
        if (n % 2 == 0) {
            const std::size_t size = std::size_t{10} << (2 * (n % 3));
            test(EmpiricalDistribution(sample(Gm, rng, size)));
        }
    }
    out.pass = violations == 0;
    out.detail = std::to_string(violations) + "/" + std::to_string(tested) + " violations, max |dR|/psi " +
                 fmt(worst_ratio) + (skipped ? ", " + std::to_string(skipped) + " skipped" : "");
    return out;
}

CheckResult check_residual(const RiskCriterion& criterion, std::span<const RewardDistribution> arms,
                           std::size_t pairs, std::uint64_t seed) {
    CheckResult out{"residual " + criterion.name(), true, ""};
    if (!criterion.smoothness()) {
        out.detail = "no smoothness certificate";
        return out;
    }
    const auto& cert = *criterion.smoothness();
    Rng rng(seed);
    std::size_t violations = 0, tested = 0, skipped = 0;
    double worst_ratio = 0.0;
    const double shifts[] = {0.01, 0.05, 0.2};
    for (std::size_t n = 0; n < pairs; ++n) {
        const auto p = random_simplex_point(arms.size(), rng);
        const MixtureDistribution F = mixture(arms, p);
        const auto noise = random_simplex_point(arms.size(), rng);
        const MixtureDistribution Gm = mixture(arms, blend(noise, p, shifts[n % 3]));
        auto test = [&](DistRef G) {
            const double d = norm_distance(G, F, criterion.norm());
            if (!(d <= cert.M0)) {
                ++skipped;
                return;
            }
            double res = 0.0, lin = 0.0;
            try {
                res = criterion.residual(G, F);
                lin = criterion.linear_term(F, G);
            } catch (const CriterionDomainError&) {
                ++skipped;
                return;
            }
            const double scale = 1e-10 * (1.0 + std::abs(criterion.evaluate(F)));
            const double bound = 0.5 * cert.d2 * d * d;
            ++tested;
            if (bound > 0.0) worst_ratio = std::max(worst_ratio, std::abs(res) / bound);
            if (std::abs(res) > bound * (1.0 + 1e-6) + scale) ++violations;
            if (std::abs(lin) > cert.d1 * d * (1.0 + 1e-9) + scale) ++violations;
        };
        test(Gm);
        if (n % 2 == 0) test(EmpiricalDistribution(sample(F, rng, 2000)));
    }
    out.pass = violations == 0;
    out.detail = std::to_string(violations) + "/" + std::to_string(tested) + " violations, max |Res|/(d2/2 d^2) " +
                 fmt(worst_ratio) + (skipped ? ", " + std::to_string(skipped) + " skipped" : "");
    return out;
}

CheckResult check_phi_identity(const UcbParams& params, double tol) {
    CheckResult out{"phi identity (b=" + fmt(params.b) + ", q=" + fmt(params.q) + ")", true, ""};
    params.validate();
    double worst = 0.0, prev = -1.0;
    bool monotone = true;
    for (int k = -32; k <= 32; ++k) {
        const double x = std::pow(10.0, k / 4.0);
        const double y = phi_inv(params, x);
        if (!(y > prev)) monotone = false;
        prev = y;
        worst = std::max(worst, std::abs(phi(params, y) - x) / std::max(1.0, x));
    }
    out.pass = monotone && worst <= tol;
    out.detail = "max relative error " + fmt(worst) + (monotone ? "" : ", phi_inv not increasing");
    return out;
}

CheckResult check_galois(DistRef F, std::size_t trials, std::uint64_t seed) {
    CheckResult out{"quantile/cdf Galois relation", true, ""};
    Rng rng(seed);
    std::vector<double> ys = breakpoints(F);
    std::size_t failures = 0, tested = 0;
    auto probe = [&](double a, double y) {
        ++tested;
        if ((quantile(F, a) <= y) != (a <= cdf(F, y))) ++failures;
    };
    for (std::size_t n = 0; n < trials; ++n) {
        const double a = uniform_open(rng);
        const double v = quantile(F, a);
        probe(a, v);
        probe(a, std::nextafter(v, -kInf));
        probe(a, std::nextafter(v, kInf));
        probe(a, sample_one(F, rng));
        if (!ys.empty()) probe(a, ys[n % ys.size()]);
        const double c = cdf(F, v);
        if (c > 0.0 && c < 1.0) probe(c, v);
    }
    out.pass = failures == 0;
    out.detail = std::to_string(failures) + "/" + std::to_string(tested) + " failures";
    return out;
}

CheckResult check_dkw(DistRef F, std::span<const DkwPoint> grid, std::size_t reps, std::uint64_t seed, double slack) {
    CheckResult out{"DKW concentration", true, ""};
    std::ostringstream detail;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto [t, x] = grid[i];
        const double e = dkw_exceedance(F, t, x, reps, splitmix64(seed + i));
        const double b = dkw_bound(t, x);
        const bool ok = e <= slack * b;
        if (!ok) out.pass = false;
        detail << (i ? "; " : "") << "t=" << t << " x=" << fmt(x) << ": " << fmt(e) << (ok ? " <= " : " > ") << fmt(slack * b);
    }
    out.detail = detail.str();
    return out;
}

CheckResult check_cvar_order_statistics(DistRef F, std::span<const double> alphas, std::size_t max_t,
                                        std::uint64_t seed) {
    CheckResult out{"CVaR order statistics", true, ""};
    Rng rng(seed);
    std::size_t failures = 0, tested = 0;
    double worst = 0.0;
    for (double alpha : alphas) {
        const RiskCriterion c = RiskCriterion::cvar(alpha);
        for (std::size_t t = 1; t <= max_t; ++t) {
            const double ta = static_cast<double>(t) * alpha;
            const double k = std::round(ta);
            if (k < 1.0 || std::abs(ta - k) > 1e-9) continue;
            auto xs = sample(F, rng, t);
            const double value = c.evaluate(EmpiricalDistribution(xs));
            std::sort(xs.begin(), xs.end());
            double s = 0.0, scale = 1.0;
            for (std::size_t j = 0; j < static_cast<std::size_t>(k); ++j) s += xs[j];
            for (double x : xs) scale = std::max(scale, std::abs(x));
            const double err = std::abs(value - s / k);
            worst = std::max(worst, err / scale);
            ++tested;
            if (err > 1e-9 * scale) ++failures;
        }
    }
    out.pass = failures == 0 && tested > 0;
    out.detail = std::to_string(failures) + "/" + std::to_string(tested) + " failures, worst relative error " + fmt(worst);
    return out;
}

std::vector<CheckResult> check_conditions(const RiskCriterion& criterion, std::span<const RewardDistribution> arms) {
    std::vector<CheckResult> out;
    const bool quantile_based = is_quantile_criterion(criterion);
    std::optional<GrowthFit> fit;
    if (quantile_based) fit = fit_growth_over_mixtures(arms, criterion.alpha());
    for (std::size_t i = 0; i < arms.size(); ++i) {
        const std::string arm = "arm " + std::to_string(i + 1) + " ";
        const auto& F = arms[i];
        out.push_back({arm + "C1 tail integrability", tail_integrable_c1(F), F.describe()});
        const bool is_pareto = std::holds_alternative<NegPareto>(F.kind());
        if (!quantile_based) continue;
        out.push_back({arm + "C2 sub-gaussian tails", sub_gaussian_c2(F), is_pareto ? "polynomial lower tail" : ""});
        const double alpha = criterion.alpha();
        const LevelSetReport ls = check_level_set_c3(F, alpha);
        out.push_back({arm + "C3 level set", ls.kind != LevelSet::Interval,
                       to_string(ls.kind) + (ls.kind == LevelSet::Interval ? " [" + fmt(ls.lo) + ", " + fmt(ls.hi) + "]" : "")});
        const GrowthCheck g = check_growth_condition_c4(F, alpha, fit->b_alpha, fit->M_alpha, fit->M_alpha / 100.0);
        out.push_back({arm + "C4 growth", g.pass,
                       "b=" + fmt(fit->b_alpha) + " worst slack " + fmt(g.worst_slack) + " at y=" + fmt(g.worst_y)});
        const bool smooth = smooth_at_quantile_c5(F, alpha);
        out.push_back({arm + "C5 smooth at quantile", smooth, smooth ? "" : "kink or atom at the quantile"});
    }
    return out;
}

CheckResult check_determinism(const Experiment& ex, std::size_t reps, std::uint64_t seed, std::size_t parallel) {
    CheckResult out{"determinism (1 vs " + std::to_string(parallel) + " threads)", true, ""};
    auto render = [&](std::size_t threads) {
        const auto eps = run_replications(ex, reps, seed, threads);
        std::vector<CsvRow> rows;
        for (const auto& e : estimate_empirical_value(eps)) rows.push_back({ex.policy.name(), "empirical", e});
        for (const auto& e : estimate_proxy_value(eps)) rows.push_back({ex.policy.name(), "proxy", e});
        for (std::size_t a = 0; a < ex.arms.size(); ++a)
            for (const auto& e : estimate_mean_pulls(eps, a))
                rows.push_back({ex.policy.name(), "pulls" + std::to_string(a + 1), e});
        std::ostringstream os;
        write_csv(os, {{"seed", std::to_string(seed)}}, rows);
        return os.str();
    };
    const std::string serial = render(1);
    const std::string threaded = render(parallel);
    out.pass = serial == threaded;
    out.detail = out.pass ? std::to_string(serial.size()) + " bytes identical" : "CSV output differs";
    return out;
}

}  // namespace edpm
