#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ltesched/scheduler.hpp"

namespace ltesched {

/// (sum x)^2 / (n * sum x^2). An all-zero vector counts as perfectly fair (1).
/// Throws InvalidInput for an empty or negative input.
double jain_index(std::span<const double> values);

struct CdfPoint {
    double value;
    double fraction;
};

/// Empirical CDF: sorted ascending, fraction (j + 1) / n. Throws InvalidInput when empty.
std::vector<CdfPoint> cdf(std::span<const double> values);

struct HurstEstimate {
    double variance_time;
    double rescaled_range;
};

inline constexpr std::size_t kMinHurstSamples = 1024;

/// Variance-time estimate: slope of log Var(X^(m)) against log m over
/// dyadic aggregation levels, H = 1 + slope / 2.
double hurst_variance_time(std::span<const double> series);

/// Rescaled-range estimate: slope of log E[R/S](n) against log n.
double hurst_rescaled_range(std::span<const double> series);

/// Both estimators. Throws InvalidInput for fewer than 1024 samples or a constant series.
HurstEstimate hurst_estimate(std::span<const double> series);

/// Totals accumulated for one bearer over a run.
struct BearerTotals {
    BearerId bearer_id = 0;
    int qci = 0;
    std::int64_t offered_bits = 0;
    std::int64_t served_bits = 0;
    std::int64_t dropped_bits = 0;
    std::int64_t queued_bits = 0;
    std::int64_t delivered_packets = 0;
    double delay_sum_ms = 0.0;
    std::int64_t delivered_over_budget = 0;  // delivered later than the delay budget
    double mean_cqi = 0.0;
};

struct QciStats {
    int qci = 0;
    int bearers = 0;
    double throughput_mbps = 0.0;
    double loss_mbps = 0.0;
    double loss_rate = 0.0;      // dropped / offered
    double latency_ms = 0.0;     // mean over delivered packets; NaN if none
    std::int64_t offered_bits = 0;
    std::int64_t served_bits = 0;
    std::int64_t dropped_bits = 0;
    std::int64_t queued_bits = 0;
    std::int64_t delivered_packets = 0;
    std::int64_t delivered_over_budget = 0;
};

struct BearerStats {
    BearerId bearer_id = 0;
    int qci = 0;
    double throughput_mbps = 0.0;
    double loss_mbps = 0.0;
    double latency_ms = 0.0;  // NaN if nothing was delivered
    double mean_cqi = 0.0;
};

struct RunMetadata {
    std::uint64_t seed = 0;
    std::string scheduler;
    std::string config_hash;
    double duration_s = 0.0;
    std::int64_t epochs = 0;
};

struct MetricsReport {
    RunMetadata meta;
    std::vector<QciStats> per_qci;  // present classes only, ascending label
    std::vector<BearerStats> bearers;
    std::vector<double> fairness_series;  // QCI-1 sliding-window Jain index, one sample per epoch
    std::map<int, std::vector<CdfPoint>> loss_cdf;     // per-bearer loss (Mbps)
    std::map<int, std::vector<CdfPoint>> latency_cdf;  // per-bearer mean latency (ms)

    /// nullptr when the class had no bearers.
    const QciStats* qci(int label) const;
};

/// Per-QCI averages over a run of `duration_s` seconds. Classes without bearers are omitted.
std::vector<QciStats> per_qci_report(std::span<const BearerTotals> totals, double duration_s);

/// Assembles the full report (per-QCI tables, per-bearer stats, CDFs).
MetricsReport build_report(std::span<const BearerTotals> totals, double duration_s,
                           std::vector<double> fairness_series, RunMetadata meta);

/// Sliding-window Jain index over a bearer population. Each bearer contributes
/// served/offered bits over the window, counted only if it offered traffic.
class FairnessTracker {
public:
    FairnessTracker(std::size_t bearer_count, std::size_t window_epochs);

    /// Records one epoch; returns a sample once the window is full and some bearer was active.
    std::optional<double> record(std::span<const std::int64_t> offered_bits,
                                 std::span<const std::int64_t> served_bits);

private:
    std::size_t window_;
    std::deque<std::vector<std::int64_t>> offered_;
    std::deque<std::vector<std::int64_t>> served_;
    std::vector<std::int64_t> offered_sum_;
    std::vector<std::int64_t> served_sum_;
};

}  // namespace ltesched
