#include "ltesched/qos.hpp"

#include <algorithm>
#include <string>

#include "ltesched/error.hpp"

namespace ltesched {

namespace {

std::array<QciClass, kQciCount> standard_classes() {
    using enum BearerType;
    return {{
        {1, GBR, 2, 100, 1e-2, "Conversational Voice"},
        {2, GBR, 4, 150, 1e-3, "Conversational Video (Live Streaming)"},
        {3, GBR, 3, 50, 1e-3, "Real Time Gaming"},
        {4, GBR, 5, 300, 1e-6, "Non-Conversational Video (Buffered Streaming)"},
        {5, NonGBR, 1, 100, 1e-6, "IMS Signalling"},
        {6, NonGBR, 6, 300, 1e-6, "Video (buffered streaming) TCP-based"},
        {7, NonGBR, 7, 100, 1e-3, "Voice, Video (Live Streaming) Interactive Gaming"},
        {8, NonGBR, 8, 300, 1e-6, "Video (buffered streaming) TCP-based"},
        {9, NonGBR, 9, 300, 1e-6, "Video (buffered streaming) TCP-based"},
    }};
}

void check_label(int label) {
    if (label < 1 || label > kQciCount) {
        throw InvalidInput("QCI label must be in 1..9, got " + std::to_string(label));
    }
}

}  // namespace

QciTable::QciTable() : classes_(standard_classes()) {}

const QciClass& QciTable::lookup(int label) const {
    check_label(label);
    return classes_[static_cast<std::size_t>(label - 1)];
}

QciClass& QciTable::mutable_entry(int label) {
    check_label(label);
    return classes_[static_cast<std::size_t>(label - 1)];
}

void QciTable::set_priority(int label, int priority) {
    if (priority < 1 || priority > 9) {
        throw InvalidInput("QCI priority must be in 1..9, got " + std::to_string(priority));
    }
    mutable_entry(label).priority = priority;
}

void QciTable::set_delay_budget_ms(int label, int delay_budget_ms) {
    if (delay_budget_ms <= 0) {
        throw InvalidInput("delay budget must be positive");
    }
    mutable_entry(label).delay_budget_ms = delay_budget_ms;
}

void QciTable::set_loss_rate_threshold(int label, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw InvalidInput("loss rate threshold must be in (0, 1)");
    }
    mutable_entry(label).loss_rate_threshold = threshold;
}

const QciClass& qci_lookup(int label) {
    static const QciTable table;
    return table.lookup(label);
}

void RatePolicy::check() const {
    if (bearer_type == BearerType::GBR && !(gbr_bps >= 0.0 && mbr_bps >= gbr_bps)) {
        throw ContractViolation("rate policy requires mbr >= gbr >= 0");
    }
    if (!(ambr_per_user_bps > 0.0 && ambr_per_apn_bps > 0.0)) {
        throw ContractViolation("AMBR values must be positive");
    }
}

double gbr_cap_bits(const RatePolicy& policy, double epoch_s, double already_scheduled_bps) {
    if (policy.bearer_type != BearerType::GBR) {
        throw ContractViolation("gbr_cap_bits called on a NonGBR bearer");
    }
    return std::max(0.0, policy.mbr_bps - already_scheduled_bps) * epoch_s;
}

double ambr_cap_bits(double user_aggregate_bps, const RatePolicy& policy, double epoch_s) {
    const double ceiling = std::min(policy.ambr_per_user_bps, policy.ambr_per_apn_bps);
    return std::max(0.0, ceiling - user_aggregate_bps) * epoch_s;
}

}  // namespace ltesched
