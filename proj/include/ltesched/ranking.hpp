#pragma once

namespace ltesched {

/// Operator weights of the five rank components.
struct QosWeights {
    double throughput = 4.0;
    double loss = 4.0;
    double delay = 16.0;
    double queue_depth = 4.0;
    double priority = 2.0;

    double sum() const noexcept { return throughput + loss + delay + queue_depth + priority; }

    /// Throws ContractViolation unless all weights are >= 0 and at least one is > 0.
    void check() const;
};

/// Per-bearer measurements a rank is computed from.
struct BearerSnapshot {
    double hol_delay_ms = 0.0;
    double measured_loss_rate = 0.0;
    double queue_depth_bytes = 0.0;
    int qci_priority = 9;
    double wideband_estimated_throughput_bps = 0.0;
    double past_average_throughput_bps = 1e3;
    double delay_budget_ms = 100.0;
    double loss_threshold = 1e-2;
    double buffer_capacity_bytes = 1.0;
};

/// Normalized values fed to the tanh components.
struct NormalizedMetrics {
    double delay = 0.0;
    double loss = 0.0;
    double queue_depth = 0.0;
    double priority = 0.0;
    double throughput = 0.0;
};

/// p * tanh(v); in [0, p).
double rank_component(double v, double p);

/// measured / constraint. Throws ContractViolation for constraint <= 0 or measured < 0.
double normalize_metric(double measured, double constraint);

/// Proportional-fair ratio: wideband estimate over past average throughput.
double throughput_metric(double wideband_estimated_bps, double past_average_bps);

/// (10 - priority) / 9: priority 1 -> 1.0, priority 9 -> 1/9.
double priority_metric(int qci_priority);

NormalizedMetrics normalize(const BearerSnapshot& snapshot);

/// Sum of the weighted components; 0 <= rank <= weights.sum().
double overall_rank(const NormalizedMetrics& metrics, const QosWeights& weights);
double overall_rank(const BearerSnapshot& snapshot, const QosWeights& weights);

/// EWMA step of the past-average throughput, clamped below at `floor_bps`.
/// Throws ConfigError if alpha is outside (0, 1).
double update_past_average_throughput(double previous_bps, double served_bits, double epoch_s,
                                      double alpha, double floor_bps = 1e3);

}  // namespace ltesched
