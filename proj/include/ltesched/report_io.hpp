#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltesched/engine.hpp"
#include "ltesched/metrics.hpp"

namespace ltesched {

/// Fixed-point decimal with at least 10 significant digits and no exponent.
/// Trailing zeros are trimmed; NaN prints as "nan".
std::string format_number(double v);

nlohmann::json report_to_json(const MetricsReport& report);

/// Writes the per-run files into `dir` (created if needed):
/// throughput_per_qci.csv, loss_per_qci.csv, latency_per_qci.csv,
/// cdf_loss_qci<k>.csv, cdf_latency_qci<k>.csv, fairness_qci1.csv, bearers.csv, report.json.
void write_report(const MetricsReport& report, const std::filesystem::path& dir);

/// Streams per-epoch ledger rows (bearers that were candidates or dropped traffic).
class LedgerWriter {
public:
    explicit LedgerWriter(const std::filesystem::path& file);
    ~LedgerWriter();
    LedgerWriter(const LedgerWriter&) = delete;
    LedgerWriter& operator=(const LedgerWriter&) = delete;

    void write(const EpochLedger& ledger);

private:
    std::unique_ptr<std::ofstream> out_;
};

/// Per-QCI mean over several runs of the same scheduler (classes averaged over
/// the runs in which they are present).
struct SchedulerSummary {
    std::string scheduler;
    std::vector<QciStats> per_qci;  // throughput, loss and latency are the means
};

SchedulerSummary summarize(const std::string& scheduler, const std::vector<MetricsReport>& runs);

/// Improvement of A over B in percent. Lower is better for loss and latency,
/// higher for throughput. NaN when B's value is zero or missing.
enum class MetricKind { Throughput, Loss, Latency };
double improvement_percent(MetricKind kind, double a, double b);

/// One row per (baseline, qci, metric): reference value, baseline value, improvement%.
void write_comparison(const SchedulerSummary& reference, const std::vector<SchedulerSummary>& baselines,
                      const std::filesystem::path& file);

}  // namespace ltesched
