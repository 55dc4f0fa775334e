#include "edpm/sim.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

#include "edpm/norms.hpp"
#include "format.hpp"

namespace edpm {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base, std::size_t rep) {
    return splitmix64(base + static_cast<std::uint64_t>(rep) * 0x9E3779B97F4A7C15ULL);
}

std::vector<std::size_t> default_checkpoints(std::size_t K, std::size_t T) {
    if (K == 0 || T < K) throw DomainError("checkpoints need 1 <= K <= T");
    std::vector<std::size_t> out;
    for (std::size_t t = K; t <= T; t *= 2) {
        out.push_back(t);
        if (t > T / 2) break;
    }
    if (out.back() != T) out.push_back(T);
    return out;
}

namespace {

std::vector<std::size_t> resolve_checkpoints(const Experiment& ex) {
    const std::size_t K = ex.arms.size();
    if (K == 0) throw DomainError("experiment needs at least one arm");
    if (ex.horizon < K) throw DomainError("horizon must be at least the number of arms");
    if (ex.checkpoints.empty()) return default_checkpoints(K, ex.horizon);
    std::vector<std::size_t> cps = ex.checkpoints;
    std::sort(cps.begin(), cps.end());
    cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
    if (cps.front() < K || cps.back() > ex.horizon)
        throw DomainError("checkpoints must lie in [K, T] = [" + std::to_string(K) + ", " + std::to_string(ex.horizon) + "]");
    return cps;
}

struct Moments {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

Moments summarize(const std::vector<double>& xs) {
    Moments m;
    m.n = xs.size();
    if (xs.empty()) return m;
    double s = 0.0;
    for (double x : xs) s += x;
    m.mean = s / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
    }
    return m;
}

template <class Fn>
std::vector<Estimate> per_checkpoint(std::span<const Episode> episodes, Fn value_of, bool skip_flagged = true) {
    if (episodes.empty()) throw DomainError("estimators need at least one episode");
    const auto& first = episodes.front().checkpoints;
    std::vector<Estimate> out;
    for (std::size_t j = 0; j < first.size(); ++j) {
        std::vector<double> xs;
        std::size_t flagged = 0;
        for (const Episode& ep : episodes) {
            if (ep.checkpoints.size() != first.size() || ep.checkpoints[j].t != first[j].t)
                throw DomainError("episodes do not share a checkpoint grid");
            const Checkpoint& c = ep.checkpoints[j];
            if (skip_flagged && c.flagged) {
                ++flagged;
                continue;
            }
            xs.push_back(value_of(c));
        }
        Moments m = summarize(xs);
        out.push_back({first[j].t, m.mean, m.std_error, m.n, flagged});
    }
    return out;
}

}  // namespace

Episode run_episode(const Experiment& ex, std::uint64_t seed) {
    const std::vector<std::size_t> cps = resolve_checkpoints(ex);
    const std::size_t K = ex.arms.size();
    auto policy = make_policy(ex.policy, ex.criterion, K);
    Rng reward_rng(splitmix64(seed));
    Rng policy_rng(splitmix64(seed ^ 0xD1B54A32D192ED03ULL));
    PolicyState state(K);
    Episode ep;
    ep.seed = seed;
    ep.horizon = ex.horizon;
    ep.checkpoints.reserve(cps.size());
    std::size_t next = 0;
    for (std::size_t t = 1; t <= ex.horizon; ++t) {
        const std::size_t arm = policy->select(state, policy_rng);
        if (arm >= K) throw DomainError("policy selected an invalid arm");
        const double reward = sample_one(ex.arms[arm], reward_rng);
        state.update(arm, reward);
        policy->observe(arm, reward);
        if (next < cps.size() && cps[next] == t) {
            Checkpoint c;
            c.t = t;
            c.counts.assign(state.counts().begin(), state.counts().end());
            try {
                c.empirical_value = ex.criterion.evaluate(state.pooled_empirical());
                c.proxy_value = ex.criterion.evaluate(proxy_distribution(ex.arms, c.counts, t));
            } catch (const DomainError& e) {
                c.flagged = true;
                c.note = e.what();
            }
            ep.checkpoints.push_back(std::move(c));
            ++next;
        }
    }
    return ep;
}

std::vector<Episode> run_replications(const Experiment& ex, std::size_t reps, std::uint64_t base_seed,
                                      std::size_t parallel) {
    if (reps == 0) throw DomainError("need at least one replication");
    resolve_checkpoints(ex);
    make_policy(ex.policy, ex.criterion, ex.arms.size());
    std::vector<Episode> out(reps);
    const std::size_t workers = std::max<std::size_t>(1, std::min(parallel, reps));
    if (workers == 1) {
        for (std::size_t r = 0; r < reps; ++r) out[r] = run_episode(ex, replication_seed(base_seed, r));
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t r = w; r < reps; r += workers) out[r] = run_episode(ex, replication_seed(base_seed, r));
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<Estimate> estimate_proxy_regret(std::span<const Episode> episodes, double p_star_value) {
    return per_checkpoint(episodes, [&](const Checkpoint& c) { return p_star_value - c.proxy_value; });
}

std::vector<Estimate> estimate_horizon_gap(std::span<const Episode> episodes) {
    if (episodes.size() < 2) throw DomainError("horizon gap needs at least two replications");
    auto out = per_checkpoint(episodes, [](const Checkpoint& c) { return c.empirical_value - c.proxy_value; });
    for (auto& e : out) e.value = std::abs(e.value);
    return out;
}

std::vector<Estimate> estimate_reference_regret(std::span<const Episode> candidate, std::span<const Episode> reference) {
    auto cand = estimate_empirical_value(candidate);
    auto ref = estimate_empirical_value(reference);
    if (cand.size() != ref.size()) throw DomainError("reference and candidate runs have different checkpoints");
    std::vector<Estimate> out;
    for (std::size_t j = 0; j < cand.size(); ++j) {
        if (cand[j].t != ref[j].t) throw DomainError("reference and candidate runs have different checkpoints");
        if (candidate.front().horizon != reference.front().horizon)
            throw DomainError("reference and candidate runs have different horizons");
        out.push_back({cand[j].t, ref[j].value - cand[j].value,
                       std::sqrt(ref[j].std_error * ref[j].std_error + cand[j].std_error * cand[j].std_error),
                       std::min(ref[j].reps, cand[j].reps), ref[j].flagged + cand[j].flagged});
    }
    return out;
}

std::vector<Estimate> estimate_empirical_value(std::span<const Episode> episodes) {
    return per_checkpoint(episodes, [](const Checkpoint& c) { return c.empirical_value; });
}

std::vector<Estimate> estimate_proxy_value(std::span<const Episode> episodes) {
    return per_checkpoint(episodes, [](const Checkpoint& c) { return c.proxy_value; });
}

std::vector<Estimate> estimate_mean_pulls(std::span<const Episode> episodes, std::size_t arm) {
    return per_checkpoint(
        episodes, [&](const Checkpoint& c) { return static_cast<double>(c.counts.at(arm)); }, false);
}

Rate Rate::parse(const std::string& text) {
    if (text == "logT/T") return {Kind::LogTOverT, 0.0};
    if (text == "1/sqrtT") return {Kind::InvSqrtT, 0.0};
    if (text == "1/T") return {Kind::InvT, 0.0};
    if (text.rfind("power{", 0) == 0 && text.back() == '}') {
        std::string inner = text.substr(6, text.size() - 7);
        std::size_t used = 0;
        double e = 0.0;
        try {
            e = std::stod(inner, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != inner.size() || !std::isfinite(e)) throw DomainError("bad rate exponent in '" + text + "'");
        return {Kind::Power, e};
    }
    throw DomainError("unknown rate '" + text + "'; expected logT/T, 1/sqrtT, 1/T or power{p}");
}

double Rate::operator()(double T) const {
    switch (kind) {
        case Kind::LogTOverT: return std::log(T) / T;
        case Kind::InvSqrtT: return 1.0 / std::sqrt(T);
        case Kind::InvT: return 1.0 / T;
        case Kind::Power: return std::pow(T, exponent);
    }
    return 1.0;
}

std::vector<double> rate_curve(std::span<const double> T, std::span<const double> values, const Rate& rate) {
    if (T.size() != values.size()) throw DomainError("rate curve needs one value per T");
    std::vector<double> out;
    for (std::size_t i = 0; i < T.size(); ++i) {
        if (i > 0 && !(T[i] > T[i - 1])) throw DomainError("rate curve needs an increasing T grid");
        out.push_back(values[i] / rate(T[i]));
    }
    return out;
}

double dkw_bound(std::size_t t, double x, double a) { return 2.0 * std::exp(-a * static_cast<double>(t) * x * x); }

double dkw_exceedance(DistRef F, std::size_t t, double x, std::size_t reps, std::uint64_t seed) {
    if (reps < 100) throw DomainError("dkw_exceedance needs at least 100 replications");
    if (t == 0) throw DomainError("dkw_exceedance needs t >= 1");
    std::size_t hits = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        Rng rng(replication_seed(seed, r));
        EmpiricalDistribution emp(sample(F, rng, t));
        if (sup_distance(emp, F) >= x) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(reps);
}

std::string format_double(double v) { return detail::shortest(v); }

void write_csv(std::ostream& os, const std::map<std::string, std::string>& metadata, std::span<const CsvRow> rows) {
    os << "# version=" << kCsvVersion << "\n";
    for (const auto& [k, v] : metadata)
        if (k != "version") os << "# " << k << "=" << v << "\n";
    os << "policy,checkpoint,estimator,value,stderr,reps,flagged\n";
    for (const CsvRow& r : rows) {
        os << r.policy << "," << r.estimate.t << "," << r.estimator << "," << format_double(r.estimate.value) << ","
           << format_double(r.estimate.std_error) << "," << r.estimate.reps << "," << r.estimate.flagged << "\n";
    }
}

std::map<std::string, std::string> read_csv_metadata(std::istream& is) {
    std::map<std::string, std::string> out;
    std::string line;
    while (is.peek() == '#' && std::getline(is, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos || line.size() < 2) continue;
        out[line.substr(2, eq - 2)] = line.substr(eq + 1);
    }
    return out;
}

std::vector<CsvRow> read_csv_rows(std::istream& is) {
    std::vector<CsvRow> out;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        // the policy name may itself contain commas inside braces
        std::vector<std::string> cells;
        std::string cur;
        int depth = 0;
        for (char ch : line) {
            if (ch == '{') ++depth;
            if (ch == '}') --depth;
            if (ch == ',' && depth == 0) {
                cells.push_back(cur);
                cur.clear();
            } else {
                cur += ch;
            }
        }
        cells.push_back(cur);
        if (cells.size() != 7) throw DomainError("malformed CSV row: " + line);
        CsvRow r;
        r.policy = cells[0];
        r.estimate.t = std::stoul(cells[1]);
        r.estimator = cells[2];
        r.estimate.value = std::stod(cells[3]);
        r.estimate.std_error = std::stod(cells[4]);
        r.estimate.reps = std::stoul(cells[5]);
        r.estimate.flagged = std::stoul(cells[6]);
        out.push_back(r);
    }
    return out;
}

}  // namespace edpm
