#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <map>
#include <set>

#include "ltesched/error.hpp"
#include "ltesched/metrics.hpp"
#include "ltesched/traffic.hpp"

namespace ltesched {
namespace {

TEST(LoadSchedule, StandardSequence) {
    const auto s = LoadSchedule::standard();
    ASSERT_EQ(s.intervals.size(), 11u);
    EXPECT_DOUBLE_EQ(s.total_s(), 36.0);
    EXPECT_EQ(s.intervals.front().state, LoadState::Normal);
    EXPECT_EQ(s.intervals[1].state, LoadState::Overload);
    EXPECT_EQ(s.intervals.back().state, LoadState::Normal);
}

TEST(LoadSchedule, Lookup) {
    const auto s = LoadSchedule::standard();
    EXPECT_EQ(load_state(s, 500.0), LoadState::Normal);
    EXPECT_EQ(load_state(s, 3000.0), LoadState::Overload);
    EXPECT_EQ(load_state(s, 36000.0 + 500.0), LoadState::Normal);
    EXPECT_EQ(load_state(s, 999.999), LoadState::Normal);
    EXPECT_EQ(load_state(s, 1000.0), LoadState::Overload);
    EXPECT_EQ(load_state(s, 6000.0), LoadState::Normal);  // third interval: 6..9 s
    EXPECT_EQ(load_state(LoadSchedule::always_normal(), 1e7), LoadState::Normal);
}

TEST(LoadSchedule, Check) {
    EXPECT_THROW(LoadSchedule{}.check(), ConfigError);
    EXPECT_THROW(LoadSchedule::alternating({1, 0}, LoadState::Normal).check(), ConfigError);
    EXPECT_NO_THROW(LoadSchedule::standard().check());
}

TEST(Voice, SilenceEmitsNothing) {
    VoiceSource v(VoiceParams{}, Rng(1));
    v.force_phase(VoicePhase::Silence, 0.0, 400.0);
    std::vector<Packet> out;
    for (int k = 0; k < 40; ++k) v.step(k * 10.0, 10.0, 7, out);
    EXPECT_TRUE(out.empty());
}

TEST(Voice, TalkEmitsOneFrameEvery20ms) {
    VoiceSource v(VoiceParams{}, Rng(1));
    v.force_phase(VoicePhase::Talk, 0.0, 1000.0);
    std::vector<Packet> out;
    for (int k = 0; k < 100; ++k) v.step(k * 10.0, 10.0, 7, out);
    ASSERT_EQ(out.size(), 50u);
    for (std::size_t i = 0; i < out.size(); ++i) {
        EXPECT_DOUBLE_EQ(out[i].arrival_ms, 20.0 * static_cast<double>(i));
        EXPECT_EQ(out[i].size_bytes, 40);
        EXPECT_EQ(out[i].bearer_id, 7u);
    }
}

TEST(Voice, GapsInsideTalkspurtsAreExactly20ms) {
    VoiceSource v(VoiceParams{}, Rng(5));
    std::vector<Packet> out;
    for (int k = 0; k < 30000; ++k) v.step(k * 10.0, 10.0, 0, out);
    ASSERT_GT(out.size(), 100u);
    std::size_t gaps_20 = 0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double gap = out[i].arrival_ms - out[i - 1].arrival_ms;
        ASSERT_GE(gap, 0.0);
        if (std::abs(gap - 20.0) < 1e-9) ++gaps_20;
    }
    EXPECT_GT(gaps_20, out.size() * 9 / 10);
}

TEST(Voice, DutyCycleConvergesToActivityFactor) {
    EXPECT_NEAR(voice_duty_cycle(VoiceParams{}, 300, 600.0, 10.0, 11), 0.5, 0.05);
    VoiceParams p;
    p.activity_factor = 0.3;
    EXPECT_NEAR(voice_duty_cycle(p, 300, 600.0, 10.0, 11), 0.3, 0.05);
}

TEST(Data, AllOffEmitsNothing) {
    DataSource d(DataParams{}, Rng(2));
    d.force_all_off(1000.0);
    EXPECT_EQ(d.active_subsources(), 0);
    std::vector<Packet> out;
    for (int k = 0; k < 90; ++k) d.step(k * 10.0, 10.0, LoadState::Overload, 0, out);
    EXPECT_TRUE(out.empty());
}

TEST(Data, PacketsAreBoundedAndTimestampsOrdered) {
    DataSource d(DataParams{}, Rng(3));
    std::vector<Packet> out;
    for (int k = 0; k < 5000; ++k) d.step(k * 10.0, 10.0, LoadState::Normal, 4, out);
    ASSERT_FALSE(out.empty());
    for (std::size_t i = 0; i < out.size(); ++i) {
        EXPECT_GT(out[i].size_bytes, 0);
        EXPECT_LE(out[i].size_bytes, 1000);
        if (i > 0) {
            EXPECT_GE(out[i].arrival_ms, out[i - 1].arrival_ms);
        }
    }
}

double offered_bytes(LoadState state, std::uint64_t seed) {
    DataSource d(DataParams{}, Rng(seed));
    std::vector<Packet> out;
    for (int k = 0; k < 60000; ++k) d.step(k * 10.0, 10.0, state, 0, out);
    double total = 0.0;
    for (const auto& p : out) total += p.size_bytes;
    return total;
}

TEST(Data, OverloadOffersMoreOnMatchedSeeds) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        EXPECT_GT(offered_bytes(LoadState::Overload, seed), offered_bytes(LoadState::Normal, seed));
    }
}

TEST(Data, LongRunRateNearTarget) {
    const auto series = data_arrival_bytes(DataParams{}, 50, 600.0, 10.0, 9);
    const double mean_bps = std::accumulate(series.begin(), series.end(), 0.0) * 8.0 / 600.0 / 50.0;
    EXPECT_NEAR(mean_bps, 50e3, 0.2 * 50e3);
}

TEST(Data, TraceIsSelfSimilar) {
    DataParams p;
    p.mean_rate_bps = 13e3;
    const auto series = data_arrival_bytes(p, 100, 120.0, 10.0, 1);
    const auto h = hurst_estimate(series);
    EXPECT_GE(h.variance_time, 0.8);
    EXPECT_LE(h.variance_time, 0.95);
    EXPECT_NEAR(h.variance_time, h.rescaled_range, 0.1);
}

TEST(Data, ParetoShape) { EXPECT_DOUBLE_EQ(DataParams{}.pareto_shape(), 1.2); }

TEST(Mix, DefaultCountsCoverEveryClass) {
    Rng rng(42);
    const auto profiles = assign_traffic_mix(300, 100, TrafficMix{}, rng);
    ASSERT_EQ(profiles.size(), 400u);
    std::set<int> qcis;
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (i < 300) EXPECT_EQ(profiles[i].qci, 1);
        else EXPECT_NE(profiles[i].type, TrafficType::Voice);
        qcis.insert(profiles[i].qci);
    }
    EXPECT_EQ(qcis, (std::set<int>{1, 2, 3, 4, 6, 7, 8, 9}));
}

TEST(Mix, RowSharesAndPermittedQcis) {
    Rng rng(8);
    const auto profiles = assign_traffic_mix(0, 70, TrafficMix{}, rng);
    std::map<TrafficType, int> rows;
    for (const auto& p : profiles) {
        ++rows[p.type];
        switch (p.type) {
            case TrafficType::BestEffort: EXPECT_TRUE(p.qci == 6 || p.qci == 8 || p.qci == 9); break;
            case TrafficType::Interactive: EXPECT_TRUE(p.qci >= 6 && p.qci <= 9); break;
            case TrafficType::Streaming: EXPECT_TRUE(p.qci == 2 || p.qci == 4); break;
            case TrafficType::Gaming: EXPECT_EQ(p.qci, 3); break;
            case TrafficType::Voice: ADD_FAILURE(); break;
        }
    }
    // 10:20:20:20 of 70 data bearers.
    EXPECT_EQ(rows[TrafficType::BestEffort], 10);
    EXPECT_EQ(rows[TrafficType::Interactive], 20);
    EXPECT_EQ(rows[TrafficType::Streaming], 20);
    EXPECT_EQ(rows[TrafficType::Gaming], 20);
}

TEST(Mix, AllStreaming) {
    TrafficMix mix{0, 0, 100, 0, 0};
    Rng rng(1);
    for (const auto& p : assign_traffic_mix(0, 25, mix, rng)) {
        EXPECT_TRUE(p.qci == 2 || p.qci == 4);
    }
}

TEST(Mix, BadPercentages) {
    Rng rng(1);
    EXPECT_THROW(assign_traffic_mix(1, 1, TrafficMix{10, 20, 20, 30, 10}, rng), ConfigError);
    EXPECT_THROW(assign_traffic_mix(1, 1, TrafficMix{0, 0, 0, 100, 0}, rng), ConfigError);
    EXPECT_THROW(assign_traffic_mix(1, 1, TrafficMix{-10, 40, 20, 30, 20}, rng), ConfigError);
}

TEST(Mix, Deterministic) {
    Rng a(77), b(77);
    const auto x = assign_traffic_mix(3, 40, TrafficMix{}, a);
    const auto y = assign_traffic_mix(3, 40, TrafficMix{}, b);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        EXPECT_EQ(x[i].qci, y[i].qci);
        EXPECT_EQ(x[i].type, y[i].type);
    }
}

TEST(Determinism, IdenticalSeedsGiveIdenticalTraces) {
    auto trace = [](std::uint64_t seed) {
        VoiceSource v(VoiceParams{}, Rng(seed));
        DataSource d(DataParams{}, Rng(seed + 1));
        std::vector<Packet> out;
        for (int k = 0; k < 3000; ++k) {
            v.step(k * 10.0, 10.0, 1, out);
            d.step(k * 10.0, 10.0, k % 300 < 100 ? LoadState::Overload : LoadState::Normal, 2, out);
        }
        return out;
    };
    const auto a = trace(5), b = trace(5);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].arrival_ms, b[i].arrival_ms);
        EXPECT_EQ(a[i].size_bytes, b[i].size_bytes);
        EXPECT_EQ(a[i].bearer_id, b[i].bearer_id);
    }
    EXPECT_NE(trace(6).size(), a.size());
}

}  // namespace
}  // namespace ltesched
