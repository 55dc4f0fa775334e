#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "edpm/cli.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::size_t parallel = 0;
};

// --out names a directory; each command writes <dir>/<command>.csv or .txt there.
edpm::ExperimentConfig load(const Options& o, const std::string& command) {
    auto cfg = edpm::load_config(o.config);
    if (o.reps) cfg.replications = o.reps;
    if (o.seed_set) cfg.seed = o.seed;
    if (o.parallel) cfg.parallel = o.parallel;
    if (!o.out.empty()) {
        std::filesystem::create_directories(o.out);
        cfg.output = (std::filesystem::path(o.out) / (command + (command == "simulate" ? ".csv" : ".txt"))).string();
    }
    return cfg;
}

// Writes to cfg.output when set, stdout otherwise.
template <class Fn>
auto with_output(const edpm::ExperimentConfig& cfg, Fn fn) {
    if (cfg.output.empty()) return fn(std::cout);
    std::ofstream f(cfg.output);
    if (!f) throw edpm::ConfigError(cfg.output + ": cannot open output file");
    return fn(f);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Empirical distribution performance measures: evaluation, oracles, bandit simulation and checks"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("-o,--out", o.out, "output directory (overrides the config output file)");
    };
    auto* eval = app.add_subcommand("eval", "criterion value of every arm and configured mixture");
    auto* oracle = app.add_subcommand("oracle", "best arm, gaps, simplex maximizer, L and pull-count bounds");
    auto* simulate = app.add_subcommand("simulate", "run the policies and write the estimator CSV");
    auto* check = app.add_subcommand("check", "arm conditions, certificate and invariant checks");
    for (auto* s : {eval, oracle, simulate, check}) add_common(s);
    simulate->add_option("--reps", o.reps, "replications (overrides the config)")->check(CLI::PositiveNumber);
    simulate->add_option("--parallel", o.parallel, "worker threads")->check(CLI::PositiveNumber);
    for (auto* s : {simulate, check})
        s->add_option_function<std::uint64_t>(
            "--seed", [&](const std::uint64_t& v) { o.seed = v, o.seed_set = true; }, "base seed (overrides the config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? edpm::kExitOk : edpm::kExitInvalid;
    }

    try {
        const auto cfg = load(o, app.get_subcommands().front()->get_name());
        if (eval->parsed()) with_output(cfg, [&](std::ostream& os) { edpm::cmd_eval(cfg, os); });
        else if (oracle->parsed()) with_output(cfg, [&](std::ostream& os) { edpm::cmd_oracle(cfg, os); });
        else if (simulate->parsed()) with_output(cfg, [&](std::ostream& os) { edpm::cmd_simulate(cfg, os); });
        else if (check->parsed()) {
            const bool ok = with_output(cfg, [&](std::ostream& os) { return edpm::cmd_check(cfg, os); });
            return ok ? edpm::kExitOk : edpm::kExitCheckFailed;
        }
    } catch (const edpm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return edpm::kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return edpm::kExitInvalid;
    }
    return edpm::kExitOk;
}
