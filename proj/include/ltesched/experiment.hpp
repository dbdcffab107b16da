#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ltesched/config.hpp"
#include "ltesched/metrics.hpp"
#include "ltesched/scheduler.hpp"

namespace ltesched {

struct Replication {
    SchedulerKind scheduler;
    std::uint64_t seed;
    MetricsReport report;
};

/// Runs every (scheduler, seed) pair of the config on up to `threads` worker
/// threads (0: hardware concurrency). Results come back in (scheduler, seed)
/// order regardless of completion order. When `out_dir` is non-empty each
/// replication writes its files to `<out_dir>/<scheduler>/seed_<n>/`.
/// The first engine failure is rethrown after all workers stop.
std::vector<Replication> run_replications(const ExperimentConfig& config,
                                          const std::filesystem::path& out_dir = {});

/// Runs the replications, writes per-run files and, with more than one
/// scheduler, `<out_dir>/comparison.csv` (first scheduler against the others).
/// Prints a per-QCI summary to `log`.
std::vector<Replication> run_experiment(const ExperimentConfig& config, const std::filesystem::path& out_dir,
                                        std::ostream& log);

enum class CheckStatus { Pass, Fail, Skip };

struct CheckResult {
    std::string name;
    CheckStatus status;
    std::string detail;
};

std::string check_status_name(CheckStatus s);

/// Built-in self checks: greedy against the exact oracle (and baseline
/// dominance), data-traffic Hurst band, voice duty cycle, engine invariants,
/// and the overload premise.
std::vector<CheckResult> validate(const ExperimentConfig& config);

}  // namespace ltesched
