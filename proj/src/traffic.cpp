#include "ltesched/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ltesched/error.hpp"

namespace ltesched {

namespace {

double exponential(Rng& rng, double mean) { return -mean * std::log1p(-uniform01(rng)); }

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace

std::string load_state_name(LoadState s) { return s == LoadState::Normal ? "normal" : "overload"; }

LoadSchedule LoadSchedule::alternating(const std::vector<double>& durations_s, LoadState first) {
    LoadSchedule schedule;
    LoadState state = first;
    for (double d : durations_s) {
        schedule.intervals.push_back({d, state});
        state = state == LoadState::Normal ? LoadState::Overload : LoadState::Normal;
    }
    return schedule;
}

LoadSchedule LoadSchedule::standard() {
    return alternating({1, 5, 3, 2, 1, 2, 1, 10, 3, 5, 3}, LoadState::Normal);
}

LoadSchedule LoadSchedule::always_normal() { return {{{1.0, LoadState::Normal}}}; }

double LoadSchedule::total_s() const noexcept {
    double total = 0.0;
    for (const auto& i : intervals) total += i.duration_s;
    return total;
}

void LoadSchedule::check() const {
    if (intervals.empty()) throw ConfigError("load schedule needs at least one interval");
    for (const auto& i : intervals) {
        if (!(i.duration_s > 0.0)) throw ConfigError("load schedule durations must be positive");
    }
}

LoadState load_state(const LoadSchedule& schedule, double now_ms) {
    const double total_ms = schedule.total_s() * 1000.0;
    double t = std::fmod(std::max(now_ms, 0.0), total_ms);
    for (const auto& interval : schedule.intervals) {
        const double d = interval.duration_s * 1000.0;
        if (t < d) return interval.state;
        t -= d;
    }
    return schedule.intervals.back().state;
}

// ---- voice ------------------------------------------------------------------

VoiceSource::VoiceSource(const VoiceParams& params, Rng rng, double start_ms)
    : params_(params), rng_(rng) {
    phase_ = uniform01(rng_) < params_.activity_factor ? VoicePhase::Talk : VoicePhase::Silence;
    // Exponential phases are memoryless, so a fresh draw is the stationary residual.
    phase_end_ms_ = start_ms + draw_duration_ms(phase_);
    next_frame_ms_ = start_ms;
}

double VoiceSource::draw_duration_ms(VoicePhase phase) {
    const double mean_s =
        phase == VoicePhase::Talk ? params_.mean_talkspurt_s : params_.mean_silence_s();
    return exponential(rng_, mean_s * 1000.0);
}

void VoiceSource::force_phase(VoicePhase phase, double start_ms, double end_ms) {
    phase_ = phase;
    phase_end_ms_ = end_ms;
    next_frame_ms_ = start_ms;
}

void VoiceSource::step(double now_ms, double tick_ms, BearerId id, std::vector<Packet>& out) {
    const double end = now_ms + tick_ms;
    double t = now_ms;
    for (;;) {
        const double segment_end = std::min(phase_end_ms_, end);
        if (phase_ == VoicePhase::Talk) {
            while (next_frame_ms_ < segment_end) {
                out.push_back({next_frame_ms_, params_.frame_bytes, id});
                next_frame_ms_ += params_.frame_period_ms;
            }
            talk_ms_ += std::max(0.0, segment_end - t);
        }
        if (phase_end_ms_ >= end) break;
        t = phase_end_ms_;
        phase_ = phase_ == VoicePhase::Talk ? VoicePhase::Silence : VoicePhase::Talk;
        phase_end_ms_ = t + draw_duration_ms(phase_);
        if (phase_ == VoicePhase::Talk) next_frame_ms_ = t;
    }
}

// ---- data -------------------------------------------------------------------

DataSource::DataSource(const DataParams& params, Rng rng, double start_ms)
    : params_(params), rng_(rng) {
    subs_.reserve(static_cast<std::size_t>(params_.subsources));
    for (int i = 0; i < params_.subsources; ++i) {
        const bool on = uniform01(rng_) < 0.5;
        subs_.push_back({on, start_ms + uniform01(rng_) * draw_period_ms()});
    }
}

double DataSource::draw_period_ms() {
    const double shape = params_.pareto_shape();
    const double period = params_.min_period_ms / std::pow(1.0 - uniform01(rng_), 1.0 / shape);
    return std::min(period, params_.max_period_s * 1000.0);
}

int DataSource::active_subsources() const noexcept {
    return static_cast<int>(std::count_if(subs_.begin(), subs_.end(), [](const Sub& s) { return s.on; }));
}

void DataSource::force_all_off(double until_ms) {
    for (auto& s : subs_) {
        s.on = false;
        s.period_end_ms = std::max(s.period_end_ms, until_ms);
    }
}

void DataSource::step(double now_ms, double tick_ms, LoadState load, BearerId id,
                      std::vector<Packet>& out) {
    const double end = now_ms + tick_ms;
    // On and off periods share one distribution, so each sub-source is on half the time.
    const double peak_bps = 2.0 * params_.mean_rate_bps / params_.subsources;
    const double multiplier = load == LoadState::Overload ? params_.overload_multiplier : 1.0;

    double on_ms = 0.0;
    for (auto& s : subs_) {
        double t = now_ms;
        for (;;) {
            const double segment_end = std::min(s.period_end_ms, end);
            if (s.on) on_ms += std::max(0.0, segment_end - t);
            if (s.period_end_ms >= end) break;
            t = s.period_end_ms;
            s.on = !s.on;
            s.period_end_ms = t + draw_period_ms();
        }
    }

    // The accrued volume leaves as whole bytes, cut into packets of at most
    // packet_bytes; only the sub-byte remainder carries over.
    credit_bits_ += on_ms / 1000.0 * peak_bps * multiplier;
    const auto bytes = static_cast<std::int64_t>(std::floor(credit_bits_ / 8.0));
    credit_bits_ -= static_cast<double>(bytes) * 8.0;
    if (bytes == 0) return;
    const std::int64_t full = bytes / params_.packet_bytes;
    const auto tail = static_cast<int>(bytes % params_.packet_bytes);
    const auto count = static_cast<int>(full) + (tail > 0 ? 1 : 0);
    for (int j = 0; j < count; ++j) {
        const int size = j < full ? params_.packet_bytes : tail;
        out.push_back({now_ms + (j + 0.5) * tick_ms / count, size, id});
    }
}

// ---- mix --------------------------------------------------------------------

std::string traffic_type_name(TrafficType t) {
    switch (t) {
        case TrafficType::Voice: return "voice";
        case TrafficType::BestEffort: return "best-effort";
        case TrafficType::Interactive: return "interactive";
        case TrafficType::Streaming: return "streaming";
        case TrafficType::Gaming: return "gaming";
    }
    return "?";
}

void TrafficMix::check() const {
    for (double p : {best_effort, interactive, streaming, voip, gaming}) {
        if (!(p >= 0.0)) throw ConfigError("traffic mix percentages must be nonnegative");
    }
    const double sum = best_effort + interactive + streaming + voip + gaming;
    if (std::abs(sum - 100.0) > 1e-9) {
        throw ConfigError("traffic mix percentages must sum to 100, got " + std::to_string(sum));
    }
}

std::vector<BearerProfile> assign_traffic_mix(int n_voice, int n_data, const TrafficMix& mix,
                                              Rng& rng) {
    mix.check();
    if (n_voice < 0 || n_data < 0) throw InvalidInput("bearer counts must be nonnegative");

    struct Row {
        TrafficType type;
        double share;
        std::vector<int> qcis;
    };
    std::vector<Row> rows{
        {TrafficType::BestEffort, mix.best_effort, {6, 8, 9}},
        {TrafficType::Interactive, mix.interactive, {6, 7, 8, 9}},
        {TrafficType::Streaming, mix.streaming, {2, 4}},
        {TrafficType::Gaming, mix.gaming, {3}},
    };
    const double data_share = 100.0 - mix.voip;
    if (n_data > 0 && !(data_share > 0.0)) {
        throw ConfigError("traffic mix leaves no share for data bearers");
    }

    std::vector<BearerProfile> profiles(static_cast<std::size_t>(n_voice),
                                        BearerProfile{TrafficType::Voice, 1});
    if (n_data == 0) return profiles;

    // Largest-remainder apportionment of the data population.
    std::vector<int> counts(rows.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double exact = n_data * rows[r].share / data_share;
        counts[r] = static_cast<int>(std::floor(exact));
        assigned += counts[r];
        remainders.emplace_back(exact - counts[r], r);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < n_data; ++k, ++assigned) {
        ++counts[remainders[k % remainders.size()].second];
    }

    std::vector<BearerProfile> data;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto order = rows[r].qcis;
        shuffle(order, rng);
        for (int i = 0; i < counts[r]; ++i) {
            data.push_back({rows[r].type, order[static_cast<std::size_t>(i) % order.size()]});
        }
    }
    shuffle(data, rng);
    profiles.insert(profiles.end(), data.begin(), data.end());
    return profiles;
}

std::vector<double> data_arrival_bytes(const DataParams& params, int n_sources, double seconds,
                                        double tick_ms, std::uint64_t seed) {
    std::vector<DataSource> sources;
    for (int i = 0; i < n_sources; ++i) {
        sources.emplace_back(params, Rng(derive_seed(seed, static_cast<std::uint64_t>(i))));
    }
    const auto ticks = static_cast<std::size_t>(std::llround(seconds * 1000.0 / tick_ms));
    std::vector<double> counts(ticks, 0.0);
    std::vector<Packet> scratch;
    for (std::size_t k = 0; k < ticks; ++k) {
        scratch.clear();
        const double now = static_cast<double>(k) * tick_ms;
        for (auto& s : sources) s.step(now, tick_ms, LoadState::Normal, 0, scratch);
        double bytes = 0.0;
        for (const auto& p : scratch) bytes += p.size_bytes;
        counts[k] = bytes;
    }
    return counts;
}

double voice_duty_cycle(const VoiceParams& params, int n_sources, double seconds, double tick_ms,
                        std::uint64_t seed) {
    double talk = 0.0;
    std::vector<Packet> scratch;
    const auto ticks = static_cast<std::size_t>(std::llround(seconds * 1000.0 / tick_ms));
    for (int i = 0; i < n_sources; ++i) {
        VoiceSource source(params, Rng(derive_seed(seed, static_cast<std::uint64_t>(i))));
        for (std::size_t k = 0; k < ticks; ++k) {
            scratch.clear();
            source.step(static_cast<double>(k) * tick_ms, tick_ms, 0, scratch);
        }
        talk += source.talk_time_ms();
    }
    return talk / (n_sources * seconds * 1000.0);
}

}  // namespace ltesched
