#include "ltesched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

#include "ltesched/error.hpp"

namespace ltesched {

double jain_index(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("jain_index needs at least one value");
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double x : values) {
        if (!(x >= 0.0)) throw InvalidInput("jain_index values must be nonnegative");
        sum += x;
        sum_sq += x * x;
    }
    if (sum_sq == 0.0) return 1.0;
    return (sum * sum) / (static_cast<double>(values.size()) * sum_sq);
}

std::vector<CdfPoint> cdf(std::span<const double> values) {
    if (values.empty()) throw InvalidInput("cdf of an empty list");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    std::vector<CdfPoint> out;
    out.reserve(sorted.size());
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        out.push_back({sorted[j], static_cast<double>(j + 1) / n});
    }
    return out;
}

namespace {

double slope(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

void check_series(std::span<const double> series) {
    if (series.size() < kMinHurstSamples) {
        throw InvalidInput("Hurst estimation needs at least 1024 samples, got " +
                           std::to_string(series.size()));
    }
    const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
    if (*lo == *hi) throw InvalidInput("Hurst estimation of a constant series is undefined");
}

// Aggregation levels 2^k keeping at least this many blocks.
constexpr std::size_t kMinBlocks = 16;

}  // namespace

double hurst_variance_time(std::span<const double> series) {
    check_series(series);
    std::vector<double> log_m;
    std::vector<double> log_var;
    for (std::size_t m = 1; series.size() / m >= kMinBlocks; m *= 2) {
        const std::size_t blocks = series.size() / m;
        std::vector<double> means(blocks);
        for (std::size_t b = 0; b < blocks; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += series[b * m + i];
            means[b] = s / static_cast<double>(m);
        }
        const double mu = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(blocks);
        double var = 0.0;
        for (double v : means) var += (v - mu) * (v - mu);
        var /= static_cast<double>(blocks - 1);
        if (var <= 0.0) continue;
        log_m.push_back(std::log10(static_cast<double>(m)));
        log_var.push_back(std::log10(var));
    }
    if (log_m.size() < 3) throw InvalidInput("series too degenerate for a variance-time fit");
    return 1.0 + slope(log_m, log_var) / 2.0;
}

double hurst_rescaled_range(std::span<const double> series) {
    check_series(series);
    std::vector<double> log_n;
    std::vector<double> log_rs;
    for (std::size_t n = 8; series.size() / n >= 4; n *= 2) {
        const std::size_t blocks = series.size() / n;
        double rs_sum = 0.0;
        std::size_t used = 0;
        for (std::size_t b = 0; b < blocks; ++b) {
            const auto block = series.subspan(b * n, n);
            const double mean = std::accumulate(block.begin(), block.end(), 0.0) / static_cast<double>(n);
            double cum = 0.0;
            double lo = 0.0;
            double hi = 0.0;
            double ss = 0.0;
            for (double v : block) {
                cum += v - mean;
                lo = std::min(lo, cum);
                hi = std::max(hi, cum);
                ss += (v - mean) * (v - mean);
            }
            const double sd = std::sqrt(ss / static_cast<double>(n));
            if (sd > 0.0) {
                rs_sum += (hi - lo) / sd;
                ++used;
            }
        }
        if (used == 0) continue;
        log_n.push_back(std::log10(static_cast<double>(n)));
        log_rs.push_back(std::log10(rs_sum / static_cast<double>(used)));
    }
    if (log_n.size() < 3) throw InvalidInput("series too degenerate for an R/S fit");
    return slope(log_n, log_rs);
}

HurstEstimate hurst_estimate(std::span<const double> series) {
    return {hurst_variance_time(series), hurst_rescaled_range(series)};
}

const QciStats* MetricsReport::qci(int label) const {
    for (const auto& q : per_qci) {
        if (q.qci == label) return &q;
    }
    return nullptr;
}

std::vector<QciStats> per_qci_report(std::span<const BearerTotals> totals, double duration_s) {
    if (!(duration_s > 0.0)) throw InvalidInput("report duration must be positive");
    std::map<int, QciStats> by_qci;
    std::map<int, double> delay_sum;
    for (const auto& t : totals) {
        auto& q = by_qci[t.qci];
        q.qci = t.qci;
        ++q.bearers;
        q.offered_bits += t.offered_bits;
        q.served_bits += t.served_bits;
        q.dropped_bits += t.dropped_bits;
        q.queued_bits += t.queued_bits;
        q.delivered_packets += t.delivered_packets;
        q.delivered_over_budget += t.delivered_over_budget;
        delay_sum[t.qci] += t.delay_sum_ms;
    }
    std::vector<QciStats> out;
    for (auto& [label, q] : by_qci) {
        q.throughput_mbps = static_cast<double>(q.served_bits) / duration_s / 1e6;
        q.loss_mbps = static_cast<double>(q.dropped_bits) / duration_s / 1e6;
        q.loss_rate = q.offered_bits > 0
                          ? static_cast<double>(q.dropped_bits) / static_cast<double>(q.offered_bits)
                          : 0.0;
        q.latency_ms = q.delivered_packets > 0
                           ? delay_sum[label] / static_cast<double>(q.delivered_packets)
                           : std::numeric_limits<double>::quiet_NaN();
        out.push_back(q);
    }
    return out;
}

MetricsReport build_report(std::span<const BearerTotals> totals, double duration_s,
                           std::vector<double> fairness_series, RunMetadata meta) {
    MetricsReport report;
    report.meta = std::move(meta);
    report.per_qci = per_qci_report(totals, duration_s);
    report.fairness_series = std::move(fairness_series);

    std::map<int, std::vector<double>> loss_values;
    std::map<int, std::vector<double>> latency_values;
    for (const auto& t : totals) {
        BearerStats b;
        b.bearer_id = t.bearer_id;
        b.qci = t.qci;
        b.throughput_mbps = static_cast<double>(t.served_bits) / duration_s / 1e6;
        b.loss_mbps = static_cast<double>(t.dropped_bits) / duration_s / 1e6;
        b.latency_ms = t.delivered_packets > 0
                           ? t.delay_sum_ms / static_cast<double>(t.delivered_packets)
                           : std::numeric_limits<double>::quiet_NaN();
        b.mean_cqi = t.mean_cqi;
        report.bearers.push_back(b);
        loss_values[t.qci].push_back(b.loss_mbps);
        if (t.delivered_packets > 0) latency_values[t.qci].push_back(b.latency_ms);
    }
    for (const auto& [label, values] : loss_values) report.loss_cdf[label] = cdf(values);
    for (const auto& [label, values] : latency_values) report.latency_cdf[label] = cdf(values);
    return report;
}

FairnessTracker::FairnessTracker(std::size_t bearer_count, std::size_t window_epochs)
    : window_(window_epochs), offered_sum_(bearer_count, 0), served_sum_(bearer_count, 0) {
    if (window_epochs == 0) throw InvalidInput("fairness window must be at least one epoch");
}

std::optional<double> FairnessTracker::record(std::span<const std::int64_t> offered_bits,
                                              std::span<const std::int64_t> served_bits) {
    if (offered_bits.size() != offered_sum_.size() || served_bits.size() != served_sum_.size()) {
        throw InvalidInput("fairness tracker population size mismatch");
    }
    offered_.emplace_back(offered_bits.begin(), offered_bits.end());
    served_.emplace_back(served_bits.begin(), served_bits.end());
    for (std::size_t i = 0; i < offered_sum_.size(); ++i) {
        offered_sum_[i] += offered_bits[i];
        served_sum_[i] += served_bits[i];
    }
    if (offered_.size() > window_) {
        for (std::size_t i = 0; i < offered_sum_.size(); ++i) {
            offered_sum_[i] -= offered_.front()[i];
            served_sum_[i] -= served_.front()[i];
        }
        offered_.pop_front();
        served_.pop_front();
    }
    if (offered_.size() < window_) return std::nullopt;

    std::vector<double> ratios;
    for (std::size_t i = 0; i < offered_sum_.size(); ++i) {
        if (offered_sum_[i] > 0) {
            ratios.push_back(static_cast<double>(served_sum_[i]) /
                             static_cast<double>(offered_sum_[i]));
        }
    }
    if (ratios.empty()) return std::nullopt;
    return jain_index(ratios);
}

}  // namespace ltesched
