#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltesched/rng.hpp"
#include "ltesched/scheduler.hpp"

namespace ltesched {

struct Packet {
    double arrival_ms = 0.0;
    int size_bytes = 0;
    BearerId bearer_id = 0;
};

enum class LoadState { Normal, Overload };

std::string load_state_name(LoadState s);

struct LoadSchedule {
    struct Interval {
        double duration_s;
        LoadState state;
    };
    std::vector<Interval> intervals;

    /// Durations with states alternating from `first`.
    static LoadSchedule alternating(const std::vector<double>& durations_s, LoadState first);
    /// (1, 5, 3, 2, 1, 2, 1, 10, 3, 5, 3) s starting in Normal.
    static LoadSchedule standard();
    /// A single Normal interval; never overloads.
    static LoadSchedule always_normal();

    double total_s() const noexcept;
    /// Throws ConfigError on an empty list or nonpositive durations.
    void check() const;
};

/// Piecewise-constant state; the schedule repeats past its end.
LoadState load_state(const LoadSchedule& schedule, double now_ms);

struct VoiceParams {
    double frame_period_ms = 20.0;
    int frame_bytes = 40;
    double mean_talkspurt_s = 5.0;
    double activity_factor = 0.5;

    double mean_silence_s() const noexcept {
        return mean_talkspurt_s * (1.0 - activity_factor) / activity_factor;
    }
    /// Average offered rate including silences.
    double mean_rate_bps() const noexcept {
        return activity_factor * frame_bytes * 8.0 / (frame_period_ms / 1000.0);
    }
};

enum class VoicePhase { Talk, Silence };

/// Exponential on/off voice source: one frame per period while talking.
class VoiceSource {
public:
    VoiceSource(const VoiceParams& params, Rng rng, double start_ms = 0.0);

    /// Emits the frames whose timestamps fall in [now, now + tick) into `out`.
    void step(double now_ms, double tick_ms, BearerId id, std::vector<Packet>& out);

    VoicePhase phase() const noexcept { return phase_; }
    double phase_end_ms() const noexcept { return phase_end_ms_; }
    double talk_time_ms() const noexcept { return talk_ms_; }

    /// Forces the current phase; used to build deterministic test states.
    void force_phase(VoicePhase phase, double start_ms, double end_ms);

private:
    double draw_duration_ms(VoicePhase phase);

    VoiceParams params_;
    Rng rng_;
    VoicePhase phase_;
    double phase_end_ms_ = 0.0;
    double next_frame_ms_ = 0.0;
    double talk_ms_ = 0.0;
};

struct DataParams {
    double hurst = 0.9;
    int subsources = 16;
    double min_period_ms = 50.0;    // Pareto scale of on/off periods
    double max_period_s = 600.0;    // truncation of the Pareto tail
    int packet_bytes = 1000;        // maximum packet size
    double mean_rate_bps = 50e3;    // long-run rate in the Normal state
    double overload_multiplier = 3.0;

    /// Pareto shape giving the target Hurst exponent: alpha = 3 - 2H.
    double pareto_shape() const noexcept { return 3.0 - 2.0 * hurst; }
};

/// Superposition of Pareto on/off sub-sources. Each tick the accrued volume is
/// emitted as packets of packet_bytes plus one shorter tail packet.
class DataSource {
public:
    DataSource(const DataParams& params, Rng rng, double start_ms = 0.0);

    void step(double now_ms, double tick_ms, LoadState load, BearerId id, std::vector<Packet>& out);

    int active_subsources() const noexcept;
    /// Switches every sub-source off until at least `until_ms`.
    void force_all_off(double until_ms);

private:
    struct Sub {
        bool on;
        double period_end_ms;
    };
    double draw_period_ms();

    DataParams params_;
    Rng rng_;
    std::vector<Sub> subs_;
    double credit_bits_ = 0.0;
};

enum class TrafficType { Voice, BestEffort, Interactive, Streaming, Gaming };

std::string traffic_type_name(TrafficType t);

/// Percentages of users per traffic type; must sum to 100.
struct TrafficMix {
    double best_effort = 10.0;
    double interactive = 20.0;
    double streaming = 20.0;
    double voip = 30.0;
    double gaming = 20.0;

    void check() const;
};

struct BearerProfile {
    TrafficType type;
    int qci;
};

/// Voice bearers come first (all QCI 1), then data bearers. Data row counts are
/// the mix's non-VoIP shares apportioned by largest remainder; inside a row the
/// QCIs cycle through a random permutation of the permitted labels.
std::vector<BearerProfile> assign_traffic_mix(int n_voice, int n_data, const TrafficMix& mix,
                                              Rng& rng);

/// Bytes offered per tick by `n_sources` independent data sources held in the Normal state.
std::vector<double> data_arrival_bytes(const DataParams& params, int n_sources, double seconds,
                                        double tick_ms, std::uint64_t seed);

/// Fraction of time in Talk over `seconds` of source time, averaged over `n_sources`.
double voice_duty_cycle(const VoiceParams& params, int n_sources, double seconds, double tick_ms,
                        std::uint64_t seed);

}  // namespace ltesched
