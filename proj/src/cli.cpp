#include "edpm/cli.hpp"

#include <cmath>
#include <ostream>

#include "edpm/checks.hpp"
#include "edpm/oracle.hpp"
#include "format.hpp"

namespace edpm {

namespace {

std::string fmt(double v) { return detail::shortest(v); }

std::string weights(std::span<const double> p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + fmt(p[i]);
    return s + ")";
}

void print_value(std::ostream& os, const std::string& label, const RiskCriterion& c, DistRef F) {
    os << label << std::string(label.size() < 28 ? 30 - label.size() : 2, ' ');
    try {
        const Evaluation e = c.evaluate_checked(F);
        os << fmt(e.value);
        if (e.warning) os << "  (warning: " << e.note << ")";
    } catch (const CriterionDomainError& e) {
        os << "undefined: " << e.what();
    }
    os << "\n";
}

double p_star_value(const ExperimentConfig& cfg, const BestArm& best) {
    if (cfg.arms.size() > 4) return best.value;
    return std::max(best.value, simplex_grid_argmax(cfg.criterion, cfg.arms, cfg.resolution).value);
}

void add_rows(std::vector<CsvRow>& rows, const std::string& policy, const std::string& estimator,
              const std::vector<Estimate>& es) {
    for (const auto& e : es) rows.push_back({policy, estimator, e});
}

}  // namespace

void cmd_eval(const ExperimentConfig& cfg, std::ostream& os) {
    os << "criterion " << cfg.criterion.name() << " (" << to_string(cfg.criterion.convexity()) << ")\n";
    for (std::size_t i = 0; i < cfg.arms.size(); ++i)
        print_value(os, "arm " + std::to_string(i + 1) + " " + cfg.arms[i].describe(), cfg.criterion, cfg.arms[i]);
    for (const auto& p : cfg.mixtures) print_value(os, "mixture " + weights(p), cfg.criterion, mixture(cfg.arms, p));
}

void cmd_oracle(const ExperimentConfig& cfg, std::ostream& os) {
    const OracleReport r = oracle_report(cfg.criterion, cfg.arms, cfg.resolution);
    os << "criterion " << cfg.criterion.name() << " (" << to_string(cfg.criterion.convexity()) << "), norm "
       << cfg.criterion.norm().name() << "\n";
    os << "arm,value,gap\n";
    for (std::size_t i = 0; i < cfg.arms.size(); ++i)
        os << i + 1 << "," << fmt(r.best.values[i]) << "," << fmt(r.best.gaps[i]) << "\n";
    os << "best arm " << r.best.index + 1 << " value " << fmt(r.best.value) << "\n";
    if (r.p_star)
        os << "simplex maximizer (resolution " << fmt(cfg.resolution) << ") " << weights(r.p_star->p) << " value "
           << fmt(r.p_star->value) << "\n";
    if (const auto& s = cfg.criterion.stability())
        os << "stability a=" << fmt(s->a) << " b=" << fmt(s->b) << " q=" << fmt(s->q) << "\n";
    else
        os << "no stability certificate\n";
    if (const auto& s = cfg.criterion.smoothness())
        os << "smoothness d1=" << fmt(s->d1) << " d2=" << fmt(s->d2) << " M0=" << fmt(s->M0) << "\n";
    if (r.L) os << "L " << fmt(*r.L) << "\n";

    bool positive_gaps = true;
    for (std::size_t i = 0; i < cfg.arms.size(); ++i)
        if (i != r.best.index && !(r.best.gaps[i] > 0.0)) positive_gaps = false;
    for (const auto& p : cfg.policies) {
        if (p.kind != PolicySpec::Kind::Ucb) continue;
        if (!positive_gaps || cfg.arms.size() < 2) {
            os << p.name() << ": pull-count bound needs positive gaps\n";
            continue;
        }
        const auto b = pull_count_bound(cfg.criterion, cfg.arms, p.ucb_alpha, static_cast<double>(cfg.horizon));
        os << p.name() << " at T=" << cfg.horizon << ": expected pulls bound";
        for (std::size_t i = 0; i < cfg.arms.size(); ++i)
            if (i != r.best.index) os << " arm " << i + 1 << " <= " << fmt(b.tau_bound[i]);
        os << ", proxy regret <= " << fmt(b.proxy_regret_bound);
        if (b.warning) os << " (" << b.note << ")";
        os << "\n";
    }
}

void cmd_simulate(const ExperimentConfig& cfg, std::ostream& os) {
    const BestArm best = best_single_arm(cfg.criterion, cfg.arms);
    const double pstar = p_star_value(cfg, best);
    const PolicySpec ref_spec = resolved_reference(cfg);

    auto run = [&](const PolicySpec& spec) {
        Experiment ex{cfg.arms, cfg.criterion, spec, cfg.horizon, cfg.checkpoints};
        return run_replications(ex, cfg.replications, cfg.seed, cfg.parallel);
    };
    const auto reference = run(ref_spec);

    std::vector<CsvRow> rows;
    std::vector<PolicySpec> specs = cfg.policies;
    if (specs.empty()) specs.push_back(ref_spec);
    for (const auto& spec : specs) {
        const std::string name = spec.name();
        const auto eps = spec.name() == ref_spec.name() ? reference : run(spec);
        add_rows(rows, name, "proxy-regret", estimate_proxy_regret(eps, pstar));
        add_rows(rows, name, "reference-regret", estimate_reference_regret(eps, reference));
        if (cfg.replications >= 2) {
            const auto gap = estimate_horizon_gap(eps);
            add_rows(rows, name, "horizon-gap", gap);
            std::vector<Estimate> ratio;
            for (auto e : gap) {
                if (e.t < 2) continue;
                const double f = cfg.rate(static_cast<double>(e.t));
                e.value /= f;
                e.std_error /= f;
                ratio.push_back(e);
            }
            add_rows(rows, name, "horizon-gap-ratio", ratio);
        }
        add_rows(rows, name, "empirical-value", estimate_empirical_value(eps));
        add_rows(rows, name, "proxy-value", estimate_proxy_value(eps));
        for (std::size_t i = 0; i < cfg.arms.size(); ++i)
            add_rows(rows, name, "pulls-arm" + std::to_string(i + 1), estimate_mean_pulls(eps, i));
    }

    std::map<std::string, std::string> meta{
        {"criterion", cfg.criterion.name()},
        {"norm", cfg.criterion.norm().name()},
        {"arms", std::to_string(cfg.arms.size())},
        {"horizon", std::to_string(cfg.horizon)},
        {"replications", std::to_string(cfg.replications)},
        {"seed", std::to_string(cfg.seed)},
        {"reference", ref_spec.name()},
        {"p_star_value", fmt(pstar)},
    };
    switch (cfg.rate.kind) {
        case Rate::Kind::LogTOverT: meta["rate"] = "logT/T"; break;
        case Rate::Kind::InvSqrtT: meta["rate"] = "1/sqrtT"; break;
        case Rate::Kind::InvT: meta["rate"] = "1/T"; break;
        case Rate::Kind::Power: meta["rate"] = "power{" + fmt(cfg.rate.exponent) + "}"; break;
    }
    write_csv(os, meta, rows);
}

bool cmd_check(const ExperimentConfig& cfg, std::ostream& os) {
    std::vector<CheckResult> results;
    const RiskCriterion& c = cfg.criterion;
    for (auto& r : check_conditions(c, cfg.arms)) results.push_back(std::move(r));

    bool finite = true;
    for (const auto& arm : cfg.arms)
        for (const Moment& m : c.norm().functionals)
            if (!std::isfinite(expectation(arm, m))) finite = false;
    if (finite) {
        results.push_back(check_convexity(c, cfg.arms, cfg.check_pairs, cfg.seed));
        results.push_back(check_modulus(c, cfg.arms, cfg.check_pairs, cfg.seed + 1));
        if (c.smoothness()) results.push_back(check_residual(c, cfg.arms, cfg.check_pairs, cfg.seed + 2));
    }
    for (const auto& p : cfg.policies)
        if (p.kind == PolicySpec::Kind::Ucb && c.stability())
            results.push_back(check_phi_identity(UcbParams::from(*c.stability(), p.ucb_alpha)));
    for (std::size_t i = 0; i < cfg.arms.size(); ++i) {
        auto g = check_galois(cfg.arms[i], 200, cfg.seed + 10 + i);
        g.name = "arm " + std::to_string(i + 1) + " " + g.name;
        results.push_back(std::move(g));
    }

    static const DkwPoint dkw_grid[] = {{10, 0.2}, {10, 0.3}, {50, 0.15}, {100, 0.1}, {500, 0.05}, {1000, 0.04}};
    for (std::size_t i = 0; i < cfg.arms.size(); ++i) {
        auto d = check_dkw(cfg.arms[i], dkw_grid, 2000, cfg.seed + 100 + i);
        d.name = "arm " + std::to_string(i + 1) + " " + d.name;
        results.push_back(std::move(d));
    }
    if (c.kind() == CriterionKind::CVaR) {
        const double alphas[] = {c.alpha(), 0.05, 0.25, 0.5};
        for (std::size_t i = 0; i < cfg.arms.size(); ++i) {
            auto o = check_cvar_order_statistics(cfg.arms[i], alphas, 400, cfg.seed + 200 + i);
            o.name = "arm " + std::to_string(i + 1) + " " + o.name;
            results.push_back(std::move(o));
        }
    }
    if (!cfg.policies.empty()) {
        std::vector<std::size_t> cps = cfg.checkpoints;
        const std::size_t T = std::min<std::size_t>(cfg.horizon, 200);
        std::erase_if(cps, [&](std::size_t t) { return t > T; });
        Experiment ex{cfg.arms, c, cfg.policies.front(), T, cps};
        results.push_back(check_determinism(ex, 16, cfg.seed, std::max<std::size_t>(cfg.parallel, 4)));
    }

    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.pass;
        os << (r.pass ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) os << ": " << r.detail;
        os << "\n";
    }
    os << (ok ? "all checks passed" : "some checks failed") << "\n";
    return ok;
}

}  // namespace edpm
