#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ltesched/config.hpp"
#include "ltesched/error.hpp"
#include "ltesched/experiment.hpp"

namespace {

struct Overrides {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::vector<std::string> schedulers;
    std::optional<double> duration_s;
    std::string out;
    bool trace = false;
    std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-c,--config", o.config_path, "INI config file (defaults apply when omitted)")
        ->check(CLI::ExistingFile);
    cmd->add_option("-s,--seed", o.seeds, "Seed(s); replaces sim.seeds");
    cmd->add_option("--scheduler", o.schedulers, "greedy-knapsack | knapsack | priority; replaces sim.schedulers");
    cmd->add_option("-d,--duration", o.duration_s, "Simulated seconds");
    cmd->add_option("--set", o.sets, "Extra override as section.key=value (repeatable)");
}

ltesched::ExperimentConfig load(const Overrides& o) {
    auto cfg = o.config_path.empty() ? ltesched::parse_config_text("") : ltesched::parse_config(o.config_path);
    if (!o.seeds.empty()) {
        std::string list;
        for (auto s : o.seeds) list += (list.empty() ? "" : ",") + std::to_string(s);
        ltesched::apply_override(cfg, "sim.seeds", list);
    }
    if (!o.schedulers.empty()) {
        std::string list;
        for (const auto& s : o.schedulers) list += (list.empty() ? "" : ",") + s;
        ltesched::apply_override(cfg, "sim.schedulers", list);
    }
    if (o.duration_s) ltesched::apply_override(cfg, "sim.duration_s", std::to_string(*o.duration_s));
    for (const auto& s : o.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ltesched::ConfigError("--set expects section.key=value, got '" + s + "'");
        ltesched::apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
    }
    if (o.trace) cfg.sim.trace_ledger = true;
    return cfg;
}

std::string output_dir(const Overrides& o, const ltesched::ExperimentConfig& cfg) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("LTESCHED_OUT_DIR"); env && *env) return env;
    return cfg.sim.output_dir;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Downlink LTE bearer scheduler simulator"};
    app.require_subcommand(1);

    Overrides run_opts;
    auto* run = app.add_subcommand("run", "Run the configured schedulers and seeds, write result files");
    add_common(run, run_opts);
    run->add_option("-o,--out", run_opts.out, "Output directory (default: $LTESCHED_OUT_DIR or sim.output_dir)");
    run->add_flag("--trace", run_opts.trace, "Also write the per-epoch ledger.csv");

    Overrides cmp_opts;
    auto* compare = app.add_subcommand("compare", "Run all three schedulers and write comparison.csv");
    add_common(compare, cmp_opts);
    compare->add_option("-o,--out", cmp_opts.out, "Output directory");
    compare->add_flag("--trace", cmp_opts.trace, "Also write the per-epoch ledger.csv");

    Overrides val_opts;
    auto* validate = app.add_subcommand("validate", "Run the built-in self checks");
    add_common(validate, val_opts);

    auto* keys = app.add_subcommand("keys", "List every recognised config key");

    CLI11_PARSE(app, argc, argv);

    try {
        if (keys->parsed()) {
            for (const auto& k : ltesched::config_keys()) std::cout << k << '\n';
            return 0;
        }
        if (validate->parsed()) {
            const auto cfg = load(val_opts);
            bool ok = true;
            for (const auto& c : ltesched::validate(cfg)) {
                std::cout << ltesched::check_status_name(c.status) << "  " << c.name << ": " << c.detail << '\n';
                ok = ok && c.status != ltesched::CheckStatus::Fail;
            }
            return ok ? 0 : 1;
        }
        auto& opts = run->parsed() ? run_opts : cmp_opts;
        if (compare->parsed() && opts.schedulers.empty()) opts.schedulers = {"greedy-knapsack", "knapsack", "priority"};
        const auto cfg = load(opts);
        const auto out = output_dir(opts, cfg);
        ltesched::run_experiment(cfg, out, std::cout);
        std::cout << "results in " << out << '\n';
        return 0;
    } catch (const ltesched::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ltesched::InvariantViolation& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
