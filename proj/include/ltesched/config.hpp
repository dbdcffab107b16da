#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ltesched/channel.hpp"
#include "ltesched/qos.hpp"
#include "ltesched/ranking.hpp"
#include "ltesched/scheduler.hpp"
#include "ltesched/traffic.hpp"

namespace ltesched {

struct CellConfig {
    int num_rbs = 25;
    int subframes_per_epoch = 10;
    double epoch_ms = 10.0;
    std::string mcs_table_path;  // empty: built-in table
    McsTable mcs = McsTable::standard();

    int capacity_rbs() const noexcept { return num_rbs * subframes_per_epoch; }
    double epoch_s() const noexcept { return epoch_ms / 1000.0; }
};

struct SimConfig {
    double duration_s = 1920.0;
    std::vector<std::uint64_t> seeds{1};
    std::vector<SchedulerKind> schedulers{SchedulerKind::GreedyKnapsack};
    std::string output_dir = "results";
    bool trace_ledger = false;
    int threads = 0;  // 0: hardware concurrency
};

struct TrafficConfig {
    int voice_bearers = 300;
    int data_bearers = 100;
    int data_bearers_per_user = 1;
    VoiceParams voice;
    DataParams data{.mean_rate_bps = 0.0};  // 0: calibrated from normal_load
    double normal_load = 0.75;              // Normal-state RB demand / capacity
    TrafficMix mix;
    std::vector<double> schedule_s{1, 5, 3, 2, 1, 2, 1, 10, 3, 5, 3};
    LoadState schedule_start = LoadState::Normal;

    LoadSchedule schedule() const { return LoadSchedule::alternating(schedule_s, schedule_start); }
};

struct ChannelConfig {
    double center_mean_cqi = 11.0;
    double edge_mean_cqi = 6.0;
    double edge_fraction = 0.2;
    double move_probability = 0.2;
    double reversion = 1.0;
};

struct RankingConfig {
    QosWeights weights;
    double alpha = 0.01;
    double min_past_throughput_bps = 1e3;
    double loss_window_s = 1.0;
};

struct PolicyConfig {
    double voice_gbr_bps = 0.0;  // 0: codec rate from frame size and period
    double voice_mbr_factor = 4.0;
    double stream_gbr_bps = 0.0;  // 0: the data bearers' Normal-state mean rate
    double stream_mbr_factor = 8.0;
    double ambr_user_bps = 2e6;
    double ambr_apn_bps = 4e6;
};

struct BufferConfig {
    int voice_bytes = 8 * 1024;
    int data_bytes = 128 * 1024;
};

struct MetricsConfig {
    double fairness_window_s = 1.0;
};

/// Everything a run needs. Defaults reproduce the reference scenario.
struct ExperimentConfig {
    CellConfig cell;
    SimConfig sim;
    TrafficConfig traffic;
    ChannelConfig channel;
    RankingConfig ranking;
    PolicyConfig policy;
    BufferConfig buffers;
    MetricsConfig metrics;
    QciTable qci;

    /// Cross-field checks; throws ConfigError.
    void validate() const;

    /// One `section.key = value` line per key, in a fixed order.
    std::string canonical_string() const;
    /// FNV-1a of canonical_string(), as 16 hex digits.
    std::string hash() const;
};

/// Reads a `[section]` / `key = value` file. Absent keys keep their defaults;
/// unknown keys, malformed lines and out-of-range values throw ConfigError
/// carrying the line number. Relative MCS table paths resolve against the file's directory.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(std::string_view text,
                                   const std::filesystem::path& base_dir = {});

/// Sets one `section.key` as if it appeared in the file (used for CLI overrides).
void apply_override(ExperimentConfig& config, std::string_view dotted_key, std::string_view value);

/// All recognised `section.key` names (qci.N keys listed for N = 1..9).
std::vector<std::string> config_keys();

}  // namespace ltesched
