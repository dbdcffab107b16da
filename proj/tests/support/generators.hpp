#pragma once

// Seeded random inputs for property tests.

#include <cstdint>
#include <vector>

#include "ltesched/ranking.hpp"
#include "ltesched/rng.hpp"
#include "ltesched/scheduler.hpp"

namespace ltesched::testing {

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) {
    return lo + static_cast<int>(uniform01(rng) * (hi - lo + 1));
}

struct KnapsackInstance {
    std::vector<CandidateItem> items;
    std::vector<int> priorities;
    double capacity = 0.0;

    std::vector<PriorityCandidate> with_priorities() const {
        std::vector<PriorityCandidate> out;
        for (std::size_t i = 0; i < items.size(); ++i) out.push_back({items[i], priorities[i]});
        return out;
    }
};

/// n in [1, max_n], s in [1, 10], rank in [0, 30], B in [1, sum s].
/// Every fifth instance reuses a few ranks and sizes so that ties occur.
inline KnapsackInstance random_instance(Rng& rng, int max_n = 12) {
    KnapsackInstance inst;
    const int n = uniform_int(rng, 1, max_n);
    const bool ties = uniform01(rng) < 0.2;
    int total = 0;
    for (int i = 0; i < n; ++i) {
        CandidateItem c;
        c.bearer_id = static_cast<BearerId>(100 + 7 * i);
        c.size_rbs = ties ? uniform_int(rng, 1, 3) : uniform_int(rng, 1, 10);
        c.rank = ties ? 5.0 * uniform_int(rng, 0, 3) : uniform(rng, 0.0, 30.0);
        total += c.size_rbs;
        inst.items.push_back(c);
        inst.priorities.push_back(uniform_int(rng, 1, 9));
    }
    inst.capacity = uniform_int(rng, 1, total);
    return inst;
}

/// Snapshot with every field drawn across (and beyond) its usual range.
inline BearerSnapshot random_snapshot(Rng& rng) {
    BearerSnapshot s;
    s.hol_delay_ms = uniform(rng, 0.0, 2000.0);
    s.measured_loss_rate = uniform01(rng) < 0.3 ? 0.0 : uniform(rng, 0.0, 1.0);
    s.buffer_capacity_bytes = uniform(rng, 1000.0, 200000.0);
    s.queue_depth_bytes = uniform(rng, 0.0, s.buffer_capacity_bytes);
    s.qci_priority = uniform_int(rng, 1, 9);
    s.wideband_estimated_throughput_bps = uniform(rng, 0.0, 2e7);
    s.past_average_throughput_bps = uniform(rng, 1e3, 5e6);
    s.delay_budget_ms = uniform_int(rng, 50, 300);
    s.loss_threshold = uniform01(rng) < 0.5 ? 1e-6 : 1e-2;
    return s;
}

inline QosWeights random_weights(Rng& rng) {
    QosWeights w{uniform(rng, 0, 20), uniform(rng, 0, 20), uniform(rng, 0, 20), uniform(rng, 0, 20),
                 uniform(rng, 0, 20)};
    return w;
}

}  // namespace ltesched::testing
