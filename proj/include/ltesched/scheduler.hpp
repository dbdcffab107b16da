#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ltesched {

using BearerId = std::uint32_t;

/// Scheduler-facing view of a backlogged bearer.
struct CandidateItem {
    BearerId bearer_id = 0;
    double rank = 0.0;  // >= 0
    int size_rbs = 1;   // >= 1

    double ratio() const noexcept { return rank / size_rbs; }
};

/// Candidate for the priority-only baseline.
struct PriorityCandidate {
    CandidateItem item;
    int qci_priority = 9;
};

struct Grant {
    BearerId bearer_id = 0;
    double fraction = 0.0;     // x_i in [0, 1]
    double granted_rbs = 0.0;  // x_i * s_i
    int size_rbs = 0;
};

/// Result of one knapsack pass. `grants` lists every candidate in service
/// order (the scheduler's sort order), including zero grants.
struct AllocationDecision {
    std::vector<Grant> grants;
    double total_value = 0.0;

    double total_granted_rbs() const noexcept;
    /// Number of grants with fraction strictly inside (0, 1).
    int fractional_count() const noexcept;
    std::optional<Grant> find(BearerId id) const;
};

enum class SchedulerKind { GreedyKnapsack, KnapsackRankOnly, PriorityOnly };

/// "greedy-knapsack" | "knapsack" | "priority"; throws InvalidInput otherwise.
SchedulerKind parse_scheduler_kind(std::string_view name);
std::string_view scheduler_name(SchedulerKind kind);

// Ties on the ordering key go to the smaller size, then the lower bearer id.
// The last candidate that does not fit receives the remaining capacity as a
// fraction; everything after it receives nothing. Candidates are validated
// (size >= 1, rank >= 0, unique ids); violations throw InvalidInput.

/// Fractional knapsack by descending rank/size ratio. Returns the LP optimum.
AllocationDecision greedy_knapsack(std::span<const CandidateItem> candidates, double capacity_rbs);

/// Baseline: same fill, ordered by descending rank only.
AllocationDecision knapsack_rank_only(std::span<const CandidateItem> candidates, double capacity_rbs);

/// Baseline: same fill, ordered by ascending QCI priority (1 first).
AllocationDecision priority_only(std::span<const PriorityCandidate> candidates, double capacity_rbs);

inline constexpr std::size_t kOracleMaxItems = 20;

/// Exact optimum of the fractional knapsack LP by enumerating every vertex
/// (items taken whole plus at most one fractional item). No sorting involved.
/// Throws InvalidInput for more than kOracleMaxItems candidates.
double oracle_optimal_value(std::span<const CandidateItem> candidates, double capacity_rbs);

}  // namespace ltesched
