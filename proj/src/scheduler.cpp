#include "ltesched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ltesched/error.hpp"

namespace ltesched {

double AllocationDecision::total_granted_rbs() const noexcept {
    double sum = 0.0;
    for (const auto& g : grants) sum += g.granted_rbs;
    return sum;
}

int AllocationDecision::fractional_count() const noexcept {
    return static_cast<int>(std::count_if(grants.begin(), grants.end(), [](const Grant& g) {
        return g.fraction > 0.0 && g.fraction < 1.0;
    }));
}

std::optional<Grant> AllocationDecision::find(BearerId id) const {
    for (const auto& g : grants) {
        if (g.bearer_id == id) return g;
    }
    return std::nullopt;
}

SchedulerKind parse_scheduler_kind(std::string_view name) {
    if (name == "greedy-knapsack") return SchedulerKind::GreedyKnapsack;
    if (name == "knapsack") return SchedulerKind::KnapsackRankOnly;
    if (name == "priority") return SchedulerKind::PriorityOnly;
    throw InvalidInput("unknown scheduler '" + std::string(name) +
                       "' (expected greedy-knapsack, knapsack or priority)");
}

std::string_view scheduler_name(SchedulerKind kind) {
    switch (kind) {
        case SchedulerKind::GreedyKnapsack: return "greedy-knapsack";
        case SchedulerKind::KnapsackRankOnly: return "knapsack";
        case SchedulerKind::PriorityOnly: return "priority";
    }
    return "?";
}

namespace {

void validate(std::span<const CandidateItem> candidates, double capacity_rbs) {
    if (!(capacity_rbs > 0.0) || !std::isfinite(capacity_rbs)) {
        throw InvalidInput("capacity must be a positive finite number");
    }
    std::unordered_set<BearerId> seen;
    for (const auto& c : candidates) {
        if (c.size_rbs < 1) throw InvalidInput("candidate size must be >= 1 RB");
        if (!(c.rank >= 0.0) || !std::isfinite(c.rank)) {
            throw InvalidInput("candidate rank must be finite and >= 0");
        }
        if (!seen.insert(c.bearer_id).second) throw InvalidInput("duplicate bearer id");
    }
}

// Value summed in bearer-id order so that identical fractions always give
// bit-identical totals regardless of service order.
double canonical_value(std::vector<Grant> grants, std::span<const CandidateItem> items) {
    std::vector<std::pair<BearerId, double>> terms;
    terms.reserve(grants.size());
    for (std::size_t i = 0; i < grants.size(); ++i) {
        terms.emplace_back(grants[i].bearer_id, grants[i].fraction * items[i].rank);
    }
    std::sort(terms.begin(), terms.end());
    double total = 0.0;
    for (const auto& [id, v] : terms) total += v;
    return total;
}

/// Fills `ordered` front to back, the core loop shared by all three schedulers.
AllocationDecision fill(std::vector<CandidateItem> ordered, double capacity_rbs) {
    AllocationDecision decision;
    decision.grants.reserve(ordered.size());
    double remaining = capacity_rbs;
    for (const auto& c : ordered) {
        Grant g{c.bearer_id, 0.0, 0.0, c.size_rbs};
        if (remaining > 0.0) {
            if (remaining - c.size_rbs >= 0.0) {
                g.fraction = 1.0;
                g.granted_rbs = c.size_rbs;
                remaining -= c.size_rbs;
            } else {
                g.fraction = remaining / c.size_rbs;
                g.granted_rbs = remaining;
                remaining = 0.0;
            }
        }
        decision.grants.push_back(g);
    }
    decision.total_value = canonical_value(decision.grants, ordered);
    return decision;
}

bool tie_break(const CandidateItem& a, const CandidateItem& b) {
    if (a.size_rbs != b.size_rbs) return a.size_rbs < b.size_rbs;
    return a.bearer_id < b.bearer_id;
}

}  // namespace

AllocationDecision greedy_knapsack(std::span<const CandidateItem> candidates, double capacity_rbs) {
    validate(candidates, capacity_rbs);
    std::vector<CandidateItem> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end(), [](const CandidateItem& a, const CandidateItem& b) {
        const double ra = a.ratio();
        const double rb = b.ratio();
        if (ra != rb) return ra > rb;
        return tie_break(a, b);
    });
    return fill(std::move(ordered), capacity_rbs);
}

AllocationDecision knapsack_rank_only(std::span<const CandidateItem> candidates,
                                      double capacity_rbs) {
    validate(candidates, capacity_rbs);
    std::vector<CandidateItem> ordered(candidates.begin(), candidates.end());
    std::sort(ordered.begin(), ordered.end(), [](const CandidateItem& a, const CandidateItem& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return tie_break(a, b);
    });
    return fill(std::move(ordered), capacity_rbs);
}

AllocationDecision priority_only(std::span<const PriorityCandidate> candidates,
                                 double capacity_rbs) {
    std::vector<PriorityCandidate> sorted(candidates.begin(), candidates.end());
    std::vector<CandidateItem> items;
    items.reserve(sorted.size());
    for (const auto& pc : sorted) items.push_back(pc.item);
    validate(items, capacity_rbs);

    std::sort(sorted.begin(), sorted.end(),
              [](const PriorityCandidate& a, const PriorityCandidate& b) {
                  if (a.qci_priority != b.qci_priority) return a.qci_priority < b.qci_priority;
                  return tie_break(a.item, b.item);
              });
    items.clear();
    for (const auto& pc : sorted) items.push_back(pc.item);
    return fill(std::move(items), capacity_rbs);
}

double oracle_optimal_value(std::span<const CandidateItem> candidates, double capacity_rbs) {
    if (candidates.size() > kOracleMaxItems) {
        throw InvalidInput("oracle supports at most 20 candidates");
    }
    validate(candidates, capacity_rbs);

    const std::size_t n = candidates.size();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        double used = 0.0;
        double value = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                used += candidates[i].size_rbs;
                value += candidates[i].rank;
            }
        }
        if (used > capacity_rbs) continue;
        best = std::max(best, value);
        const double residual = capacity_rbs - used;
        for (std::size_t j = 0; j < n; ++j) {
            if ((mask & (1u << j)) || candidates[j].size_rbs <= residual) continue;
            best = std::max(best, value + candidates[j].rank * (residual / candidates[j].size_rbs));
        }
    }
    return best;
}

}  // namespace ltesched
