#include "edpm/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "edpm/oracle.hpp"

namespace edpm {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!ok.count(k)) fail(path, "unknown key '" + k + "'");
}

const json& need(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) fail(path, std::string("missing key '") + key + "'");
    return j.at(key);
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double number_at(const json& j, const std::string& path, const char* key) {
    return number(need(j, path, key), path + "." + key);
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// Runs fn and converts library errors into config errors at path.
template <class Fn>
auto at_path(const std::string& path, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainError& e) {
        fail(path, e.what());
    }
}

RewardDistribution parse_arm(const json& j, const std::string& path) {
    const std::string kind = text(need(j, path, "kind"), path + ".kind");
    return at_path(path, [&] {
        if (kind == "gaussian") {
            only_keys(j, path, {"kind", "mean", "stddev"});
            return RewardDistribution::gaussian(number_at(j, path, "mean"), number_at(j, path, "stddev"));
        }
        if (kind == "point-mass") {
            only_keys(j, path, {"kind", "value"});
            return RewardDistribution::point_mass(number_at(j, path, "value"));
        }
        if (kind == "uniform") {
            only_keys(j, path, {"kind", "lo", "hi"});
            return RewardDistribution::uniform(number_at(j, path, "lo"), number_at(j, path, "hi"));
        }
        if (kind == "scaled-bernoulli") {
            only_keys(j, path, {"kind", "p", "lo", "hi"});
            return RewardDistribution::scaled_bernoulli(number_at(j, path, "p"), number_at(j, path, "lo"),
                                                        number_at(j, path, "hi"));
        }
        if (kind == "neg-pareto") {
            only_keys(j, path, {"kind", "scale", "shape"});
            return RewardDistribution::neg_pareto(number_at(j, path, "scale"), number_at(j, path, "shape"));
        }
        if (kind == "piecewise") {
            only_keys(j, path, {"kind", "knots"});
            const json& ks = need(j, path, "knots");
            if (!ks.is_array() || ks.empty()) fail(path + ".knots", "expected a non-empty array of knots");
            std::vector<Knot> knots;
            for (std::size_t i = 0; i < ks.size(); ++i) {
                const std::string kp = path + ".knots[" + std::to_string(i) + "]";
                const auto v = numbers(ks[i], kp);
                // [y, F] is continuous at y (a jump from 0 on the first knot); [y, F(y-), F(y)] is explicit
                if (v.size() == 2) knots.push_back({v[0], i == 0 ? 0.0 : v[1], v[1]});
                else if (v.size() == 3) knots.push_back({v[0], v[1], v[2]});
                else fail(kp, "a knot is [y, F] or [y, F_left, F]");
            }
            return RewardDistribution::piecewise(std::move(knots));
        }
        fail(path + ".kind", "unknown distribution kind '" + kind +
                                 "' (gaussian, point-mass, uniform, scaled-bernoulli, piecewise, neg-pareto)");
    });
}

RiskCriterion parse_criterion_kind(const json& j, const std::string& path) {
    if (j.is_string()) return at_path(path, [&] { return RiskCriterion::parse(j.get<std::string>()); });
    const std::string kind = text(need(j, path, "kind"), path + ".kind");
    auto num = [&](const char* key) { return number_at(j, path, key); };
    return at_path(path, [&] {
        if (kind == "mean") return RiskCriterion::mean();
        if (kind == "second-moment") return RiskCriterion::second_moment();
        if (kind == "neg-tsv") return RiskCriterion::neg_tsv(num("r"));
        if (kind == "entropic") return RiskCriterion::entropic(num("theta"));
        if (kind == "neg-variance") return RiskCriterion::neg_variance();
        if (kind == "mean-variance") return RiskCriterion::mean_variance(num("rho"));
        if (kind == "sharpe") return RiskCriterion::sharpe(num("r"), num("eps_sigma"));
        if (kind == "sortino") return RiskCriterion::sortino(num("r"), num("eps_sigma"));
        if (kind == "var") return RiskCriterion::value_at_risk(num("alpha"));
        if (kind == "cvar") return RiskCriterion::cvar(num("alpha"));
        if (kind == "bad1") return RiskCriterion::bad1();
        if (kind == "bad2") return RiskCriterion::bad2();
        fail(path + ".kind", "unknown criterion '" + kind + "'");
    });
}

RiskCriterion parse_criterion(const json& j, const std::string& path, std::span<const RewardDistribution> arms) {
    if (!j.is_string())
        only_keys(j, path, {"kind", "alpha", "rho", "r", "eps_sigma", "theta", "norm", "stability", "smoothness"});
    RiskCriterion c = parse_criterion_kind(j, path);
    if (j.is_object() && j.contains("norm"))
        at_path(path + ".norm", [&] { c.set_norm(NormSpec::parse(text(j.at("norm"), path + ".norm"))); });

    const auto defaults = at_path(path, [&] { return default_certificates(c, arms); });
    c.set_stability(defaults.stability);
    c.set_smoothness(defaults.smoothness);
    if (j.is_object() && j.contains("stability")) {
        const std::string sp = path + ".stability";
        const json& s = j.at("stability");
        only_keys(s, sp, {"a", "b", "q"});
        StabilityCertificate cert{c.default_concentration_rate(), 1.0, 1.0};
        if (c.stability()) cert = *c.stability();
        if (s.contains("a")) cert.a = number(s.at("a"), sp + ".a");
        if (s.contains("b")) cert.b = number(s.at("b"), sp + ".b");
        if (s.contains("q")) cert.q = number(s.at("q"), sp + ".q");
        if (!c.stability() && !(s.contains("b") && s.contains("q")))
            fail(sp, "no default certificate for " + c.name() + "; give both b and q");
        at_path(sp, [&] { c.set_stability(cert); });
    }
    if (j.is_object() && j.contains("smoothness")) {
        const std::string sp = path + ".smoothness";
        const json& s = j.at("smoothness");
        only_keys(s, sp, {"d1", "d2", "M0"});
        if (!c.smoothness() && !(s.contains("d1") && s.contains("d2") && s.contains("M0")))
            fail(sp, "no default certificate for " + c.name() + "; give d1, d2 and M0");
        SmoothnessCertificate cert = c.smoothness().value_or(SmoothnessCertificate{});
        if (s.contains("d1")) cert.d1 = number(s.at("d1"), sp + ".d1");
        if (s.contains("d2")) cert.d2 = number(s.at("d2"), sp + ".d2");
        if (s.contains("M0")) cert.M0 = number(s.at("M0"), sp + ".M0");
        at_path(sp, [&] { c.set_smoothness(cert); });
    }
    return c;
}

PolicySpec parse_policy(const json& j, const std::string& path, std::size_t arms) {
    PolicySpec spec;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "ucb") spec = PolicySpec::ucb();
        else if (s == "bad1-oracle") spec = PolicySpec::bad1_oracle();
        else if (s == "bad2-oracle") spec = PolicySpec::bad2_oracle();
        else fail(path, "unknown policy '" + s + "' (ucb, simple, bad1-oracle, bad2-oracle)");
    } else {
        const std::string kind = text(need(j, path, "kind"), path + ".kind");
        if (kind == "ucb") {
            only_keys(j, path, {"kind", "alpha"});
            spec = PolicySpec::ucb(j.contains("alpha") ? number(j.at("alpha"), path + ".alpha") : 3.0);
        } else if (kind == "simple") {
            only_keys(j, path, {"kind", "p"});
            spec = PolicySpec::simple(numbers(need(j, path, "p"), path + ".p"));
        } else if (kind == "bad1-oracle" || kind == "bad2-oracle") {
            only_keys(j, path, {"kind"});
            spec = kind == "bad1-oracle" ? PolicySpec::bad1_oracle() : PolicySpec::bad2_oracle();
        } else {
            fail(path + ".kind", "unknown policy '" + kind + "' (ucb, simple, bad1-oracle, bad2-oracle)");
        }
    }
    at_path(path, [&] { spec.validate(arms); });
    return spec;
}

std::string line_col(const std::string& src, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < src.size(); ++i) {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

ExperimentConfig parse_config(const std::string& src) {
    json j;
    try {
        j = json::parse(src);
    } catch (const json::parse_error& e) {
        throw ConfigError(line_col(src, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
    }
    const std::string root = "$";
    only_keys(j, root,
              {"version", "arms", "criterion", "policies", "reference", "horizon", "checkpoints", "replications", "seed",
               "parallel", "mixtures", "oracle", "rate", "output", "checks"});
    const json& version = need(j, root, "version");
    if (!version.is_number_integer() || version.get<int>() != kConfigVersion)
        fail("$.version", "unsupported config version (expected " + std::to_string(kConfigVersion) + ")");

    ExperimentConfig cfg;
    const json& arms = need(j, root, "arms");
    if (!arms.is_array() || arms.empty()) fail("$.arms", "expected a non-empty array");
    for (std::size_t i = 0; i < arms.size(); ++i) cfg.arms.push_back(parse_arm(arms[i], "$.arms[" + std::to_string(i) + "]"));
    const std::size_t K = cfg.arms.size();

    cfg.criterion = parse_criterion(need(j, root, "criterion"), "$.criterion", cfg.arms);

    if (j.contains("policies")) {
        const json& ps = j.at("policies");
        if (!ps.is_array()) fail("$.policies", "expected an array");
        for (std::size_t i = 0; i < ps.size(); ++i)
            cfg.policies.push_back(parse_policy(ps[i], "$.policies[" + std::to_string(i) + "]", K));
    }
    if (j.contains("reference")) cfg.reference = parse_policy(j.at("reference"), "$.reference", K);
    for (std::size_t i = 0; i < cfg.policies.size(); ++i)
        if (cfg.policies[i].kind == PolicySpec::Kind::Ucb && !cfg.criterion.stability())
            fail("$.policies[" + std::to_string(i) + "]",
                 "ucb needs a stability certificate; add criterion.stability for " + cfg.criterion.name());

    if (j.contains("horizon")) cfg.horizon = count(j.at("horizon"), "$.horizon");
    if (cfg.horizon < K) fail("$.horizon", "must be at least the number of arms");
    if (j.contains("checkpoints")) {
        const json& cs = j.at("checkpoints");
        if (!cs.is_array()) fail("$.checkpoints", "expected an array");
        for (std::size_t i = 0; i < cs.size(); ++i) {
            const std::string cp = "$.checkpoints[" + std::to_string(i) + "]";
            const std::size_t t = count(cs[i], cp);
            if (t < K || t > cfg.horizon) fail(cp, "checkpoints must lie in [K, horizon]");
            cfg.checkpoints.push_back(t);
        }
    }
    if (j.contains("replications")) cfg.replications = count(j.at("replications"), "$.replications");
    if (cfg.replications == 0) fail("$.replications", "must be positive");
    if (j.contains("seed")) {
        const json& s = j.at("seed");
        if (!s.is_number_unsigned()) fail("$.seed", "expected a non-negative integer");
        cfg.seed = s.get<std::uint64_t>();
    }
    if (j.contains("parallel")) cfg.parallel = std::max<std::size_t>(1, count(j.at("parallel"), "$.parallel"));
    if (j.contains("mixtures")) {
        const json& ms = j.at("mixtures");
        if (!ms.is_array()) fail("$.mixtures", "expected an array of weight vectors");
        for (std::size_t i = 0; i < ms.size(); ++i) {
            const std::string mp = "$.mixtures[" + std::to_string(i) + "]";
            auto p = numbers(ms[i], mp);
            if (p.size() != K) fail(mp, "needs one weight per arm");
            at_path(mp, [&] { mixture(cfg.arms, p); });
            cfg.mixtures.push_back(std::move(p));
        }
    }
    if (j.contains("oracle")) {
        const json& o = j.at("oracle");
        only_keys(o, "$.oracle", {"resolution"});
        if (o.contains("resolution")) cfg.resolution = number(o.at("resolution"), "$.oracle.resolution");
        if (!(cfg.resolution > 0.0 && cfg.resolution <= 1.0)) fail("$.oracle.resolution", "must lie in (0, 1]");
    }
    if (j.contains("rate")) cfg.rate = at_path("$.rate", [&] { return Rate::parse(text(j.at("rate"), "$.rate")); });
    if (j.contains("output")) cfg.output = text(j.at("output"), "$.output");
    if (j.contains("checks")) {
        const json& c = j.at("checks");
        only_keys(c, "$.checks", {"pairs"});
        if (c.contains("pairs")) cfg.check_pairs = count(c.at("pairs"), "$.checks.pairs");
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path + ":" + e.what());
    }
}

PolicySpec resolved_reference(const ExperimentConfig& cfg) {
    if (cfg.reference) return *cfg.reference;
    const BestArm best = best_single_arm(cfg.criterion, cfg.arms);
    std::vector<double> p(cfg.arms.size(), 0.0);
    p[best.index] = 1.0;
    return PolicySpec::simple(std::move(p));
}

}  // namespace edpm
