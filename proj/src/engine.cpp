#include "ltesched/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ltesched/error.hpp"
#include "ltesched/ranking.hpp"

namespace ltesched {

namespace {

// RNG stream tags; per-bearer streams are offset by the bearer id.
constexpr std::uint64_t kMixStream = 1;
constexpr std::uint64_t kEdgeStream = 2;
constexpr std::uint64_t kTrafficStreamBase = 1'000'000;
constexpr std::uint64_t kChannelStreamBase = 2'000'000;

struct PopulationCost {
    double inverse_rb_bits = 0.0;  // E[1 / bits per RB]
    double rbs_per_voice_frame = 0.0;
};

// Expectations over the stationary CQI of both populations, weighted by the edge fraction.
PopulationCost population_cost(const ExperimentConfig& c) {
    const double frame_bits = c.traffic.voice.frame_bytes * 8.0;
    const auto cost = [&](double mean_cqi) {
        const auto p = stationary_cqi_distribution(mean_cqi, c.channel.move_probability, c.channel.reversion);
        PopulationCost out;
        for (int cqi = kMinCqi; cqi <= kMaxCqi; ++cqi) {
            const double w = p[static_cast<std::size_t>(cqi - kMinCqi)];
            const double bits = rb_capacity_bits(cqi, c.cell.mcs);
            out.inverse_rb_bits += w / bits;
            out.rbs_per_voice_frame += w * std::ceil(frame_bits / bits);
        }
        return out;
    };
    const auto edge = cost(c.channel.edge_mean_cqi);
    const auto center = cost(c.channel.center_mean_cqi);
    const double f = c.channel.edge_fraction;
    return {f * edge.inverse_rb_bits + (1.0 - f) * center.inverse_rb_bits,
            f * edge.rbs_per_voice_frame + (1.0 - f) * center.rbs_per_voice_frame};
}

double voice_gbr(const ExperimentConfig& c) {
    if (c.policy.voice_gbr_bps > 0.0) return c.policy.voice_gbr_bps;
    return c.traffic.voice.frame_bytes * 8.0 / (c.traffic.voice.frame_period_ms / 1000.0);
}

std::string invariant_message(std::int64_t epoch, const std::string& what) {
    return "epoch " + std::to_string(epoch) + ": " + what;
}

}  // namespace

WindowCounter::WindowCounter(std::size_t epochs) : ring_(std::max<std::size_t>(epochs, 1), 0) {}

void WindowCounter::push(std::int64_t value) {
    sum_ += value - ring_[next_];
    ring_[next_] = value;
    next_ = (next_ + 1) % ring_.size();
}

double BearerRuntime::measured_loss_rate() const noexcept {
    const auto offered = window_offered.sum();
    if (offered <= 0) return 0.0;
    return static_cast<double>(window_dropped.sum()) / static_cast<double>(offered);
}

int EpochLedger::total_granted_rbs() const noexcept {
    int total = 0;
    for (const auto& e : entries) total += e.granted_rbs;
    return total;
}

double expected_rb_demand(const ExperimentConfig& config, double data_rate_bps, LoadState load) {
    const auto cost = population_cost(config);
    const double epoch_s = config.cell.epoch_s();
    const double multiplier = load == LoadState::Overload ? config.traffic.data.overload_multiplier : 1.0;
    // Voice frames are small, so each one costs whole RBs; data is treated as a fluid.
    const auto& v = config.traffic.voice;
    const double frames_per_epoch = v.activity_factor * config.cell.epoch_ms / v.frame_period_ms;
    const double voice = config.traffic.voice_bearers * frames_per_epoch * cost.rbs_per_voice_frame;
    const double data = config.traffic.data_bearers * data_rate_bps * multiplier * epoch_s * cost.inverse_rb_bits;
    return voice + data;
}

double calibrated_data_rate_bps(const ExperimentConfig& config) {
    if (config.traffic.data.mean_rate_bps > 0.0) return config.traffic.data.mean_rate_bps;
    if (config.traffic.data_bearers == 0) return 0.0;
    const double target = config.traffic.normal_load * config.cell.capacity_rbs();
    const double voice = expected_rb_demand(config, 0.0, LoadState::Normal);
    if (voice >= target) {
        throw ConfigError("voice demand alone (" + std::to_string(voice) +
                          " RBs per epoch) reaches the normal_load target");
    }
    const double per_bearer =
        config.cell.epoch_s() * population_cost(config).inverse_rb_bits * config.traffic.data_bearers;
    return (target - voice) / per_bearer;
}

Simulation::Simulation(const ExperimentConfig& config, SchedulerKind scheduler, std::uint64_t seed)
    : config_(config),
      scheduler_(scheduler),
      seed_(seed),
      schedule_(config.traffic.schedule()),
      fairness_tracker_(1, 1) {
    config_.validate();
    data_rate_bps_ = calibrated_data_rate_bps(config_);
    ambr_limit_bps_ = std::min(config_.policy.ambr_user_bps, config_.policy.ambr_apn_bps);

    const double epoch_s = config_.cell.epoch_s();
    total_epochs_ = static_cast<std::int64_t>(std::llround(config_.sim.duration_s / epoch_s));
    const auto loss_window =
        static_cast<std::size_t>(std::max<long long>(1, std::llround(config_.ranking.loss_window_s / epoch_s)));
    const auto fairness_window = static_cast<std::size_t>(
        std::max<long long>(1, std::llround(config_.metrics.fairness_window_s / epoch_s)));

    Rng mix_rng(derive_seed(seed, kMixStream));
    const auto profiles = assign_traffic_mix(config_.traffic.voice_bearers, config_.traffic.data_bearers,
                                             config_.traffic.mix, mix_rng);
    const std::size_t n = profiles.size();

    // Cell-edge bearers: a seeded random subset of the whole population.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    Rng edge_rng(derive_seed(seed, kEdgeStream));
    for (std::size_t i = n; i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform01(edge_rng) * static_cast<double>(i));
        std::swap(order[i - 1], order[j]);
    }
    const auto n_edge = static_cast<std::size_t>(std::llround(config_.channel.edge_fraction * static_cast<double>(n)));
    std::vector<bool> edge(n, false);
    for (std::size_t i = 0; i < n_edge; ++i) edge[order[i]] = true;

    DataParams data_params = config_.traffic.data;
    data_params.mean_rate_bps = data_rate_bps_;
    const double stream_gbr = config_.policy.stream_gbr_bps > 0.0 ? config_.policy.stream_gbr_bps : data_rate_bps_;

    bearers_.resize(n);
    int next_user = 0;
    int data_in_user = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto& b = bearers_[i];
        const auto id = static_cast<BearerId>(i);
        b.bearer_id = id;
        b.traffic = profiles[i].type;
        b.qci = config_.qci.lookup(profiles[i].qci);

        b.rate_policy.bearer_type = b.qci.bearer_type;
        b.rate_policy.ambr_per_user_bps = config_.policy.ambr_user_bps;
        b.rate_policy.ambr_per_apn_bps = config_.policy.ambr_apn_bps;
        if (b.traffic == TrafficType::Voice) {
            b.rate_policy.gbr_bps = voice_gbr(config_);
            b.rate_policy.mbr_bps = b.rate_policy.gbr_bps * config_.policy.voice_mbr_factor;
        } else if (b.qci.is_gbr()) {
            b.rate_policy.gbr_bps = stream_gbr;
            b.rate_policy.mbr_bps = stream_gbr * config_.policy.stream_mbr_factor;
        }
        b.rate_policy.check();

        if (b.traffic == TrafficType::Voice) {
            b.user_id = next_user++;
        } else {
            if (data_in_user == 0) ++next_user;
            b.user_id = next_user - 1;
            data_in_user = (data_in_user + 1) % config_.traffic.data_bearers_per_user;
        }

        const int buffer = b.traffic == TrafficType::Voice ? config_.buffers.voice_bytes : config_.buffers.data_bytes;
        b.queue = BearerQueue(buffer);

        const double mean_cqi = edge[i] ? config_.channel.edge_mean_cqi : config_.channel.center_mean_cqi;
        b.channel.mean_cqi = mean_cqi;
        b.channel.cqi = std::clamp(static_cast<int>(std::lround(mean_cqi)), kMinCqi, kMaxCqi);
        b.channel.move_probability = config_.channel.move_probability;
        b.channel.reversion = config_.channel.reversion;
        b.channel.rng = Rng(derive_seed(seed, kChannelStreamBase + i));

        Rng traffic_rng(derive_seed(seed, kTrafficStreamBase + i));
        if (b.traffic == TrafficType::Voice) {
            b.voice = std::make_unique<VoiceSource>(config_.traffic.voice, traffic_rng);
        } else {
            b.data = std::make_unique<DataSource>(data_params, traffic_rng);
        }

        b.past_avg_throughput_bps = config_.ranking.min_past_throughput_bps;
        b.window_offered = WindowCounter(loss_window);
        b.window_dropped = WindowCounter(loss_window);
        if (b.qci.label == 1) voice_index_.push_back(i);
    }
    user_aggregate_bps_.assign(static_cast<std::size_t>(next_user), 0.0);
    fairness_tracker_ = FairnessTracker(voice_index_.size(), fairness_window);

    ledger_.capacity_rbs = config_.cell.capacity_rbs();
    ledger_.entries.resize(n);
}

const EpochLedger& Simulation::step() {
    const double epoch_ms = config_.cell.epoch_ms;
    const double epoch_s = config_.cell.epoch_s();
    const double now = static_cast<double>(epoch_) * epoch_ms;
    const double completion = now + epoch_ms;
    const int capacity = config_.cell.capacity_rbs();
    const LoadState load = load_state(schedule_, now);
    const auto& mcs = config_.cell.mcs;

    ledger_.epoch = epoch_;
    ledger_.load = load;
    for (std::size_t i = 0; i < bearers_.size(); ++i) {
        ledger_.entries[i] = LedgerEntry{};
        ledger_.entries[i].bearer_id = bearers_[i].bearer_id;
    }

    // (1)-(2) traffic in; overflow drops feed the windowed loss.
    std::vector<std::int64_t> offered_now(bearers_.size(), 0);
    for (std::size_t i = 0; i < bearers_.size(); ++i) {
        auto& b = bearers_[i];
        auto& entry = ledger_.entries[i];
        arrivals_.clear();
        if (b.voice) {
            b.voice->step(now, epoch_ms, b.bearer_id, arrivals_);
        } else {
            b.data->step(now, epoch_ms, load, b.bearer_id, arrivals_);
        }
        for (const auto& p : arrivals_) {
            offered_now[i] += p.size_bytes * 8LL;
            if (b.queue.enqueue(p) == EnqueueResult::Dropped) {
                entry.dropped_bits += p.size_bytes * 8LL;
                ++entry.dropped_packets;
            }
        }
        b.window_offered.push(offered_now[i]);
        b.window_dropped.push(entry.dropped_bits);
    }

    // (3) channels.
    for (auto& b : bearers_) {
        cqi_step(b.channel);
        b.cqi_sum += b.channel.cqi;
    }

    // (4) candidates. NonGBR bearers of one user share the AMBR headroom in id order.
    std::vector<double> user_cap(user_aggregate_bps_.size());
    for (std::size_t u = 0; u < user_cap.size(); ++u) {
        user_cap[u] = std::max(0.0, ambr_limit_bps_ - user_aggregate_bps_[u]) * epoch_s;
    }
    std::vector<double> user_left = user_cap;
    std::vector<std::int64_t> eligible(bearers_.size(), 0);
    std::vector<CandidateItem> items;
    std::vector<PriorityCandidate> prio_items;
    std::vector<std::size_t> index_of(bearers_.size());
    for (std::size_t i = 0; i < bearers_.size(); ++i) {
        auto& b = bearers_[i];
        auto& entry = ledger_.entries[i];
        entry.cqi = b.channel.cqi;
        if (b.queue.empty()) continue;

        double cap;
        if (b.qci.is_gbr()) {
            cap = gbr_cap_bits(b.rate_policy, epoch_s, b.scheduled_avg_bps);
        } else {
            cap = user_left[static_cast<std::size_t>(b.user_id)];
        }
        const auto bits = std::min<std::int64_t>(b.queue.queued_bits(), static_cast<std::int64_t>(std::floor(cap)));
        if (bits <= 0) continue;
        if (!b.qci.is_gbr()) user_left[static_cast<std::size_t>(b.user_id)] -= static_cast<double>(bits);
        eligible[i] = bits;

        BearerSnapshot snap;
        snap.hol_delay_ms = completion - b.queue.hol_arrival_ms();
        snap.measured_loss_rate = b.measured_loss_rate();
        snap.queue_depth_bytes = static_cast<double>(b.queue.queued_bits()) / 8.0;
        snap.qci_priority = b.qci.priority;
        snap.wideband_estimated_throughput_bps = wideband_estimated_throughput(
            b.channel.cqi, config_.cell.num_rbs, config_.cell.subframes_per_epoch, epoch_s, mcs);
        snap.past_average_throughput_bps = b.past_avg_throughput_bps;
        snap.delay_budget_ms = b.qci.delay_budget_ms;
        snap.loss_threshold = b.qci.loss_rate_threshold;
        snap.buffer_capacity_bytes = static_cast<double>(b.queue.capacity_bits()) / 8.0;

        CandidateItem item{b.bearer_id, overall_rank(snap, config_.ranking.weights),
                           required_rbs(static_cast<double>(bits), b.channel.cqi, mcs)};
        entry.rank = item.rank;
        entry.eligible_bits = bits;
        entry.size_rbs = item.size_rbs;
        index_of[i] = items.size();
        items.push_back(item);
        prio_items.push_back({item, b.qci.priority});
    }

    // (5) knapsack.
    AllocationDecision decision;
    switch (scheduler_) {
        case SchedulerKind::GreedyKnapsack: decision = greedy_knapsack(items, capacity); break;
        case SchedulerKind::KnapsackRankOnly: decision = knapsack_rank_only(items, capacity); break;
        case SchedulerKind::PriorityOnly: decision = priority_only(prio_items, capacity); break;
    }

    // (6) integral RBs, leftovers to the next candidates in service order, then FIFO service.
    int used = 0;
    for (const auto& g : decision.grants) {
        auto& entry = ledger_.entries[g.bearer_id];
        entry.fraction = g.fraction;
        entry.granted_rbs = static_cast<int>(std::floor(g.granted_rbs + 1e-9));
        used += entry.granted_rbs;
    }
    int leftover = capacity - used;
    for (const auto& g : decision.grants) {
        if (leftover <= 0) break;
        auto& entry = ledger_.entries[g.bearer_id];
        const int extra = std::min(leftover, g.size_rbs - entry.granted_rbs);
        entry.granted_rbs += extra;
        leftover -= extra;
    }
    for (const auto& g : decision.grants) {
        auto& b = bearers_[g.bearer_id];
        auto& entry = ledger_.entries[g.bearer_id];
        if (entry.granted_rbs == 0) continue;
        const std::int64_t budget = std::min<std::int64_t>(
            static_cast<std::int64_t>(entry.granted_rbs) * rb_capacity_bits(b.channel.cqi, mcs),
            eligible[g.bearer_id]);
        deliveries_.clear();
        entry.served_bits = b.queue.serve(budget, completion, deliveries_);
        for (const auto& d : deliveries_) {
            ++b.delivered_packets;
            b.delay_sum_ms += d.delay_ms;
            if (d.delay_ms > b.qci.delay_budget_ms) ++b.delivered_over_budget;
        }
    }

    // (7) averages.
    const double alpha = config_.ranking.alpha;
    std::vector<double> user_served(user_aggregate_bps_.size(), 0.0);
    for (std::size_t i = 0; i < bearers_.size(); ++i) {
        auto& b = bearers_[i];
        const auto served = static_cast<double>(ledger_.entries[i].served_bits);
        b.past_avg_throughput_bps = update_past_average_throughput(
            b.past_avg_throughput_bps, served, epoch_s, alpha, config_.ranking.min_past_throughput_bps);
        b.scheduled_avg_bps = (1.0 - alpha) * b.scheduled_avg_bps + alpha * served / epoch_s;
        if (!b.qci.is_gbr()) user_served[static_cast<std::size_t>(b.user_id)] += served;
    }
    for (std::size_t u = 0; u < user_aggregate_bps_.size(); ++u) {
        user_aggregate_bps_[u] = (1.0 - alpha) * user_aggregate_bps_[u] + alpha * user_served[u] / epoch_s;
    }

    check_invariants(user_cap);

    // (8) metrics.
    if (!voice_index_.empty()) {
        std::vector<std::int64_t> offered(voice_index_.size());
        std::vector<std::int64_t> served(voice_index_.size());
        for (std::size_t k = 0; k < voice_index_.size(); ++k) {
            offered[k] = offered_now[voice_index_[k]];
            served[k] = ledger_.entries[voice_index_[k]].served_bits;
        }
        if (auto j = fairness_tracker_.record(offered, served)) fairness_.push_back(*j);
    }

    ++epoch_;
    return ledger_;
}

void Simulation::check_invariants(std::span<const double> user_cap_bits) const {
    const int capacity = ledger_.capacity_rbs;
    const int granted = ledger_.total_granted_rbs();
    if (granted > capacity) {
        throw InvariantViolation(invariant_message(epoch_, "granted " + std::to_string(granted) +
                                                               " RBs exceeds capacity " + std::to_string(capacity)));
    }
    bool unserved = false;
    for (std::size_t i = 0; i < bearers_.size(); ++i) {
        const auto& b = bearers_[i];
        const auto& e = ledger_.entries[i];
        const std::string who = "bearer " + std::to_string(b.bearer_id) + ": ";
        if (e.size_rbs > 0 && e.granted_rbs < e.size_rbs) unserved = true;
        if (e.granted_rbs > e.size_rbs) throw InvariantViolation(invariant_message(epoch_, who + "granted beyond its request"));
        if (e.served_bits > static_cast<std::int64_t>(e.granted_rbs) * rb_capacity_bits(e.cqi, config_.cell.mcs)) {
            throw InvariantViolation(invariant_message(epoch_, who + "served more than its grant carries"));
        }
        if (b.queue.offered_bits() != b.queue.served_bits() + b.queue.dropped_bits() + b.queue.queued_bits()) {
            throw InvariantViolation(invariant_message(epoch_, who + "offered != served + dropped + queued"));
        }
        if (b.queue.queued_bits() > b.queue.capacity_bits()) {
            throw InvariantViolation(invariant_message(epoch_, who + "queue above buffer capacity"));
        }
        if (b.qci.is_gbr() && b.scheduled_avg_bps > b.rate_policy.mbr_bps * (1.0 + 1e-12)) {
            throw InvariantViolation(invariant_message(epoch_, who + "average scheduled rate above MBR"));
        }
    }
    if (unserved && granted != capacity) {
        throw InvariantViolation(invariant_message(
            epoch_, "capacity left idle (" + std::to_string(capacity - granted) + " RBs) with backlog pending"));
    }
    std::vector<double> served(user_aggregate_bps_.size(), 0.0);
    for (std::size_t i = 0; i < bearers_.size(); ++i) {
        if (!bearers_[i].qci.is_gbr()) {
            served[static_cast<std::size_t>(bearers_[i].user_id)] += static_cast<double>(ledger_.entries[i].served_bits);
        }
    }
    for (std::size_t u = 0; u < user_aggregate_bps_.size(); ++u) {
        if (served[u] > user_cap_bits[u] || !(user_aggregate_bps_[u] < ambr_limit_bps_)) {
            throw InvariantViolation(invariant_message(epoch_, "user " + std::to_string(u) + " above AMBR"));
        }
    }
}

MetricsReport Simulation::run(const Observer& observer) {
    while (epoch_ < total_epochs_) {
        const auto& ledger = step();
        if (observer) observer(ledger);
    }
    return report();
}

MetricsReport Simulation::report() const {
    std::vector<BearerTotals> totals;
    totals.reserve(bearers_.size());
    for (const auto& b : bearers_) {
        BearerTotals t;
        t.bearer_id = b.bearer_id;
        t.qci = b.qci.label;
        t.offered_bits = b.queue.offered_bits();
        t.served_bits = b.queue.served_bits();
        t.dropped_bits = b.queue.dropped_bits();
        t.queued_bits = b.queue.queued_bits();
        t.delivered_packets = b.delivered_packets;
        t.delay_sum_ms = b.delay_sum_ms;
        t.delivered_over_budget = b.delivered_over_budget;
        t.mean_cqi = epoch_ > 0 ? b.cqi_sum / static_cast<double>(epoch_) : static_cast<double>(b.channel.cqi);
        totals.push_back(t);
    }
    RunMetadata meta;
    meta.seed = seed_;
    meta.scheduler = std::string(scheduler_name(scheduler_));
    meta.config_hash = config_.hash();
    meta.epochs = epoch_;
    meta.duration_s = static_cast<double>(epoch_) * config_.cell.epoch_s();
    const double duration = meta.duration_s > 0.0 ? meta.duration_s : config_.cell.epoch_s();
    return build_report(totals, duration, fairness_, std::move(meta));
}

}  // namespace ltesched
