#include "ltesched/ranking.hpp"

#include <algorithm>
#include <cmath>

#include "ltesched/error.hpp"

namespace ltesched {

void QosWeights::check() const {
    for (double w : {throughput, loss, delay, queue_depth, priority}) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw ContractViolation("ranking weights must be finite and nonnegative");
        }
    }
    if (!(sum() > 0.0)) {
        throw ContractViolation("at least one ranking weight must be positive");
    }
}

double rank_component(double v, double p) {
    if (!(v >= 0.0) || !(p >= 0.0)) {
        throw ContractViolation("rank_component requires v >= 0 and p >= 0");
    }
    return p * std::tanh(v);
}

double normalize_metric(double measured, double constraint) {
    if (!(constraint > 0.0)) {
        throw ContractViolation("QoS constraint must be positive");
    }
    if (!(measured >= 0.0)) {
        throw ContractViolation("measured metric must be nonnegative");
    }
    return measured / constraint;
}

double throughput_metric(double wideband_estimated_bps, double past_average_bps) {
    if (!(past_average_bps > 0.0) || !(wideband_estimated_bps >= 0.0)) {
        throw ContractViolation("throughput_metric requires estimate >= 0 and past average > 0");
    }
    return wideband_estimated_bps / past_average_bps;
}

double priority_metric(int qci_priority) {
    if (qci_priority < 1 || qci_priority > 9) {
        throw ContractViolation("QCI priority must be in 1..9");
    }
    return (10.0 - qci_priority) / 9.0;
}

NormalizedMetrics normalize(const BearerSnapshot& s) {
    return {
        .delay = normalize_metric(s.hol_delay_ms, s.delay_budget_ms),
        .loss = normalize_metric(s.measured_loss_rate, s.loss_threshold),
        .queue_depth = normalize_metric(s.queue_depth_bytes, s.buffer_capacity_bytes),
        .priority = priority_metric(s.qci_priority),
        .throughput = throughput_metric(s.wideband_estimated_throughput_bps,
                                        s.past_average_throughput_bps),
    };
}

double overall_rank(const NormalizedMetrics& m, const QosWeights& w) {
    return rank_component(m.delay, w.delay) + rank_component(m.loss, w.loss) +
           rank_component(m.queue_depth, w.queue_depth) +
           rank_component(m.priority, w.priority) +
           rank_component(m.throughput, w.throughput);
}

double overall_rank(const BearerSnapshot& snapshot, const QosWeights& weights) {
    return overall_rank(normalize(snapshot), weights);
}

double update_past_average_throughput(double previous_bps, double served_bits, double epoch_s,
                                      double alpha, double floor_bps) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("EWMA alpha must be in (0, 1)");
    }
    if (!(epoch_s > 0.0) || !(served_bits >= 0.0)) {
        throw ContractViolation("EWMA update requires epoch > 0 and served_bits >= 0");
    }
    const double updated = (1.0 - alpha) * previous_bps + alpha * (served_bits / epoch_s);
    return std::max(updated, floor_bps);
}

}  // namespace ltesched
