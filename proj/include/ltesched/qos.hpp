#pragma once

#include <array>
#include <string>

namespace ltesched {

enum class BearerType { GBR, NonGBR };

/// Standardized per-class QoS contract.
struct QciClass {
    int label = 0;
    BearerType bearer_type = BearerType::NonGBR;
    int priority = 9;  // 1 = highest
    int delay_budget_ms = 0;
    double loss_rate_threshold = 0.0;
    std::string example_service;

    bool is_gbr() const noexcept { return bearer_type == BearerType::GBR; }
    bool operator==(const QciClass&) const = default;
};

inline constexpr int kQciCount = 9;

/// The nine QCI records. Defaults are the standardized values; priority,
/// delay budget and loss threshold may be overridden from the config file.
class QciTable {
public:
    QciTable();

    /// Throws InvalidInput for labels outside 1..9.
    const QciClass& lookup(int label) const;

    void set_priority(int label, int priority);
    void set_delay_budget_ms(int label, int delay_budget_ms);
    void set_loss_rate_threshold(int label, double threshold);

    const std::array<QciClass, kQciCount>& classes() const noexcept { return classes_; }

    bool operator==(const QciTable&) const = default;

private:
    QciClass& mutable_entry(int label);

    std::array<QciClass, kQciCount> classes_;
};

/// Lookup in the compiled-in standard table.
const QciClass& qci_lookup(int label);

/// Rate bounds applied on top of scheduling decisions.
/// gbr/mbr only apply to GBR bearers; AMBR only to a user's NonGBR aggregate.
struct RatePolicy {
    BearerType bearer_type = BearerType::NonGBR;
    double gbr_bps = 0.0;
    double mbr_bps = 0.0;
    double ambr_per_user_bps = 2e6;
    double ambr_per_apn_bps = 4e6;

    /// Throws ContractViolation when the invariants (mbr >= gbr >= 0, AMBRs > 0) fail.
    void check() const;
};

// Both caps keep the EWMA of the scheduled rate inside its ceiling: granting
// (ceiling - avg) * epoch bits moves the average at most to the ceiling.

/// Extra bits a GBR bearer may receive this epoch without its average scheduled rate exceeding MBR.
double gbr_cap_bits(const RatePolicy& policy, double epoch_s, double already_scheduled_bps);

/// Extra bits a user's NonGBR bearers may receive this epoch under min(AMBR_user, AMBR_apn).
double ambr_cap_bits(double user_aggregate_bps, const RatePolicy& policy, double epoch_s);

}  // namespace ltesched
