#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ltesched/channel.hpp"
#include "ltesched/config.hpp"
#include "ltesched/metrics.hpp"
#include "ltesched/qos.hpp"
#include "ltesched/queue.hpp"
#include "ltesched/scheduler.hpp"
#include "ltesched/traffic.hpp"

namespace ltesched {

/// Per-epoch counters kept in a ring so that loss can be measured over a sliding window.
class WindowCounter {
public:
    explicit WindowCounter(std::size_t epochs);
    void push(std::int64_t value);
    std::int64_t sum() const noexcept { return sum_; }

private:
    std::vector<std::int64_t> ring_;
    std::size_t next_ = 0;
    std::int64_t sum_ = 0;
};

/// Everything the engine tracks for one bearer.
struct BearerRuntime {
    BearerId bearer_id = 0;
    int user_id = 0;
    TrafficType traffic = TrafficType::Voice;
    QciClass qci;
    RatePolicy rate_policy;
    BearerQueue queue{1};
    ChannelState channel;
    std::unique_ptr<VoiceSource> voice;
    std::unique_ptr<DataSource> data;

    double past_avg_throughput_bps = 0.0;  // PF denominator, floored
    double scheduled_avg_bps = 0.0;        // unfloored EWMA the MBR bound applies to
    WindowCounter window_offered{1};
    WindowCounter window_dropped{1};

    std::int64_t delivered_packets = 0;
    double delay_sum_ms = 0.0;
    std::int64_t delivered_over_budget = 0;
    double cqi_sum = 0.0;

    /// dropped / offered over the loss window; 0 when nothing was offered.
    double measured_loss_rate() const noexcept;
};

enum class DropCause { BufferOverflow };

struct LedgerEntry {
    BearerId bearer_id = 0;
    int cqi = 0;
    double rank = 0.0;
    std::int64_t eligible_bits = 0;
    int size_rbs = 0;       // 0 when the bearer was not a candidate
    double fraction = 0.0;  // knapsack x_i
    int granted_rbs = 0;    // after integral rounding and leftover redistribution
    std::int64_t served_bits = 0;
    std::int64_t dropped_bits = 0;
    int dropped_packets = 0;
    DropCause drop_cause = DropCause::BufferOverflow;
};

struct EpochLedger {
    std::int64_t epoch = 0;
    int capacity_rbs = 0;
    LoadState load = LoadState::Normal;
    std::vector<LedgerEntry> entries;  // one per bearer, in bearer-id order

    int total_granted_rbs() const noexcept;
};

/// Normal-state mean rate per data bearer at which the expected RB demand of
/// the whole population equals `normal_load` times the capacity. Throws
/// ConfigError when voice alone already exceeds that target.
double calibrated_data_rate_bps(const ExperimentConfig& config);

/// Expected RB demand per epoch under the stationary CQI distribution: whole
/// RBs per voice frame, fluid data.
double expected_rb_demand(const ExperimentConfig& config, double data_rate_bps, LoadState load);

/// One replication: a single scheduler and seed. Not thread-safe; distinct
/// instances share nothing.
class Simulation {
public:
    using Observer = std::function<void(const EpochLedger&)>;

    Simulation(const ExperimentConfig& config, SchedulerKind scheduler, std::uint64_t seed);

    /// Runs one epoch. Throws InvariantViolation on any broken invariant.
    const EpochLedger& step();

    /// Runs until the configured duration and returns the report.
    MetricsReport run(const Observer& observer = {});

    /// Report for the epochs run so far.
    MetricsReport report() const;

    const std::vector<BearerRuntime>& bearers() const noexcept { return bearers_; }
    std::vector<BearerRuntime>& mutable_bearers() noexcept { return bearers_; }
    const EpochLedger& last_ledger() const noexcept { return ledger_; }
    std::int64_t epochs_run() const noexcept { return epoch_; }
    std::int64_t total_epochs() const noexcept { return total_epochs_; }
    double data_rate_bps() const noexcept { return data_rate_bps_; }
    const std::vector<double>& fairness_series() const noexcept { return fairness_; }

private:
    void check_invariants(std::span<const double> user_cap_bits) const;

    ExperimentConfig config_;
    SchedulerKind scheduler_;
    std::uint64_t seed_;
    LoadSchedule schedule_;
    double data_rate_bps_ = 0.0;
    double ambr_limit_bps_ = 0.0;
    std::vector<BearerRuntime> bearers_;
    std::vector<double> user_aggregate_bps_;  // NonGBR EWMA per user
    std::vector<std::size_t> voice_index_;    // QCI-1 bearers tracked for fairness
    FairnessTracker fairness_tracker_;
    std::vector<double> fairness_;
    std::int64_t epoch_ = 0;
    std::int64_t total_epochs_ = 0;
    EpochLedger ledger_;

    std::vector<Packet> arrivals_;
    std::vector<Delivery> deliveries_;
};

}  // namespace ltesched
