#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "edpm/criteria.hpp"
#include "edpm/dist.hpp"
#include "edpm/policy.hpp"

namespace edpm {

struct Checkpoint {
    std::size_t t = 0;
    std::vector<std::size_t> counts;
    double empirical_value = 0.0;  // R(F_hat_t), pooled rewards
    double proxy_value = 0.0;      // R(F_bar_t), arms weighted by tau_i / t
    bool flagged = false;
    std::string note;
};

struct Episode {
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    std::vector<Checkpoint> checkpoints;
};

struct Experiment {
    std::vector<RewardDistribution> arms;
    RiskCriterion criterion;
    PolicySpec policy;
    std::size_t horizon = 0;
    std::vector<std::size_t> checkpoints;  // empty: default_checkpoints(K, horizon)
};

std::uint64_t splitmix64(std::uint64_t x);
// seed of replication r: splitmix64(base + r * 0x9E3779B97F4A7C15)
std::uint64_t replication_seed(std::uint64_t base, std::size_t rep);

// K 2^j for j >= 0 while <= T, plus T.
std::vector<std::size_t> default_checkpoints(std::size_t K, std::size_t T);

Episode run_episode(const Experiment& ex, std::uint64_t seed);

// Replication r uses replication_seed(base_seed, r); results are in replication order
// whatever the thread count.
std::vector<Episode> run_replications(const Experiment& ex, std::size_t reps, std::uint64_t base_seed,
                                      std::size_t parallel = 1);

struct Estimate {
    std::size_t t = 0;
    double value = 0.0;
    double std_error = 0.0;
    std::size_t reps = 0;     // replications used
    std::size_t flagged = 0;  // replications excluded
};

// p_star_value - R(F_bar_t)
std::vector<Estimate> estimate_proxy_regret(std::span<const Episode> episodes, double p_star_value);
// |mean(R(F_hat_t) - R(F_bar_t))|, standard error of the signed mean
std::vector<Estimate> estimate_horizon_gap(std::span<const Episode> episodes);
// mean R(F_hat_t) of the reference minus that of the candidate
std::vector<Estimate> estimate_reference_regret(std::span<const Episode> candidate, std::span<const Episode> reference);
std::vector<Estimate> estimate_empirical_value(std::span<const Episode> episodes);
std::vector<Estimate> estimate_proxy_value(std::span<const Episode> episodes);
std::vector<Estimate> estimate_mean_pulls(std::span<const Episode> episodes, std::size_t arm);

struct Rate {
    enum class Kind { LogTOverT, InvSqrtT, InvT, Power };
    Kind kind = Kind::LogTOverT;
    double exponent = 0.0;  // Power: f(T) = T^exponent

    // "logT/T", "1/sqrtT", "1/T", "power{-0.5}"
    static Rate parse(const std::string& text);
    double operator()(double T) const;
};

// values[i] / f(T[i])
std::vector<double> rate_curve(std::span<const double> T, std::span<const double> values, const Rate& rate);

double dkw_bound(std::size_t t, double x, double a = 2.0);
// Fraction of replications with sup |F_hat_t - F| >= x.
double dkw_exceedance(DistRef F, std::size_t t, double x, std::size_t reps, std::uint64_t seed);

// ---- CSV ----

inline constexpr int kCsvVersion = 1;

struct CsvRow {
    std::string policy;
    std::string estimator;
    Estimate estimate;
};

// '# key=value' header lines followed by
// policy,checkpoint,estimator,value,stderr,reps,flagged
void write_csv(std::ostream& os, const std::map<std::string, std::string>& metadata, std::span<const CsvRow> rows);
std::map<std::string, std::string> read_csv_metadata(std::istream& is);
std::vector<CsvRow> read_csv_rows(std::istream& is);

std::string format_double(double v);

}  // namespace edpm
