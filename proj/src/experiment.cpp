#include "ltesched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "ltesched/engine.hpp"
#include "ltesched/error.hpp"
#include "ltesched/report_io.hpp"

namespace ltesched {

namespace {

std::filesystem::path replication_dir(const std::filesystem::path& out, SchedulerKind kind, std::uint64_t seed) {
    return out / std::string(scheduler_name(kind)) / ("seed_" + std::to_string(seed));
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

}  // namespace

std::vector<Replication> run_replications(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
    config.validate();
    std::vector<Replication> results;
    for (auto kind : config.sim.schedulers) {
        for (auto seed : config.sim.seeds) results.push_back({kind, seed, {}});
    }

    unsigned workers = config.sim.threads > 0 ? static_cast<unsigned>(config.sim.threads)
                                              : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(results.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= results.size() || failed.load()) return;
            auto& r = results[k];
            try {
                Simulation sim(config, r.scheduler, r.seed);
                if (!out_dir.empty() && config.sim.trace_ledger) {
                    const auto dir = replication_dir(out_dir, r.scheduler, r.seed);
                    std::filesystem::create_directories(dir);
                    LedgerWriter ledger(dir / "ledger.csv");
                    r.report = sim.run([&](const EpochLedger& l) { ledger.write(l); });
                } else {
                    r.report = sim.run();
                }
                if (!out_dir.empty()) write_report(r.report, replication_dir(out_dir, r.scheduler, r.seed));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };

    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

std::vector<Replication> run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                        std::ostream& log) {
    auto results = run_replications(config, out_dir);

    std::vector<SchedulerSummary> summaries;
    for (auto kind : config.sim.schedulers) {
        std::vector<MetricsReport> runs;
        for (const auto& r : results) {
            if (r.scheduler == kind) runs.push_back(r.report);
        }
        summaries.push_back(summarize(std::string(scheduler_name(kind)), runs));
    }
    if (summaries.size() > 1) {
        write_comparison(summaries.front(), {summaries.begin() + 1, summaries.end()}, out_dir / "comparison.csv");
    }

    for (const auto& s : summaries) {
        log << s.scheduler << " (" << config.sim.seeds.size() << " seed(s), " << format_number(config.sim.duration_s)
            << " s)\n";
        log << "  qci  throughput_mbps  loss_mbps  latency_ms\n";
        for (const auto& q : s.per_qci) {
            char line[160];
            std::snprintf(line, sizeof line, "  %3d  %15.6f  %9.6f  %10.3f\n", q.qci, q.throughput_mbps, q.loss_mbps,
                          q.latency_ms);
            log << line;
        }
    }
    return results;
}

std::string check_status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skip: return "SKIP";
    }
    return "?";
}

std::vector<CheckResult> validate(const ExperimentConfig& config) {
    config.validate();
    std::vector<CheckResult> checks;
    const std::uint64_t seed = config.sim.seeds.front();

    {
        Rng rng(derive_seed(seed, 0x6b6e6170));
        int mismatches = 0;
        int dominance = 0;
        constexpr int kInstances = 1000;
        for (int k = 0; k < kInstances; ++k) {
            const int n = 1 + static_cast<int>(uniform01(rng) * 12);
            std::vector<CandidateItem> items;
            std::vector<PriorityCandidate> prio;
            int total = 0;
            for (int i = 0; i < n; ++i) {
                CandidateItem c{static_cast<BearerId>(i), uniform01(rng) * 30.0, 1 + static_cast<int>(uniform01(rng) * 10)};
                total += c.size_rbs;
                items.push_back(c);
                prio.push_back({c, 1 + static_cast<int>(uniform01(rng) * 9)});
            }
            const double capacity = 1 + static_cast<int>(uniform01(rng) * total);
            const double greedy = greedy_knapsack(items, capacity).total_value;
            if (std::abs(greedy - oracle_optimal_value(items, capacity)) > 1e-9) ++mismatches;
            if (greedy < knapsack_rank_only(items, capacity).total_value ||
                greedy < priority_only(prio, capacity).total_value) {
                ++dominance;
            }
        }
        checks.push_back({"greedy matches oracle", mismatches == 0 ? CheckStatus::Pass : CheckStatus::Fail,
                          std::to_string(mismatches) + " of " + std::to_string(kInstances) + " instances differ"});
        checks.push_back({"greedy dominates baselines", dominance == 0 ? CheckStatus::Pass : CheckStatus::Fail,
                          std::to_string(dominance) + " violations"});
    }

    if (config.sim.duration_s < 60.0) {
        checks.push_back({"data traffic hurst band", CheckStatus::Skip, "simulation shorter than 60 s"});
    } else {
        DataParams params = config.traffic.data;
        params.mean_rate_bps = std::max(calibrated_data_rate_bps(config), 1.0);
        const double seconds = std::min(config.sim.duration_s, 120.0);
        const auto counts = data_arrival_bytes(params, std::max(config.traffic.data_bearers, 1), seconds,
                                                config.cell.epoch_ms, derive_seed(seed, 0x68757273));
        try {
            const auto h = hurst_estimate(counts);
            const bool ok = h.variance_time >= 0.8 && h.variance_time <= 0.95 &&
                            std::abs(h.variance_time - h.rescaled_range) <= 0.1;
            checks.push_back({"data traffic hurst band", ok ? CheckStatus::Pass : CheckStatus::Fail,
                              fmt("variance-time %.3f, R/S %.3f, band [0.8, 0.95]", h.variance_time,
                                  h.rescaled_range)});
        } catch (const InvalidInput& e) {
            checks.push_back({"data traffic hurst band", CheckStatus::Fail, e.what()});
        }
    }

    {
        const double duty = voice_duty_cycle(config.traffic.voice, std::max(config.traffic.voice_bearers, 1), 600.0,
                                             config.cell.epoch_ms, derive_seed(seed, 0x766f6963));
        const double target = config.traffic.voice.activity_factor;
        checks.push_back({"voice duty cycle", std::abs(duty - target) <= 0.05 ? CheckStatus::Pass : CheckStatus::Fail,
                          fmt("%.4f over 600 s, target %.2f +- 0.05", duty, target)});
    }

    {
        ExperimentConfig short_run = config;
        short_run.sim.duration_s = std::min(config.sim.duration_s, 60.0);
        try {
            Simulation sim(short_run, config.sim.schedulers.front(), seed);
            sim.run();
            checks.push_back({"capacity and conservation", CheckStatus::Pass,
                              std::to_string(sim.epochs_run()) + " epochs without violation"});
        } catch (const InvariantViolation& e) {
            checks.push_back({"capacity and conservation", CheckStatus::Fail, e.what()});
        }
    }

    {
        const double rate = calibrated_data_rate_bps(config);
        const double demand = expected_rb_demand(config, rate, LoadState::Overload);
        const double capacity = config.cell.capacity_rbs();
        checks.push_back({"overload exceeds capacity", demand > capacity ? CheckStatus::Pass : CheckStatus::Fail,
                          fmt("overload demand %.1f RBs per epoch against capacity %.0f", demand, capacity)});
    }
    return checks;
}

}  // namespace ltesched
