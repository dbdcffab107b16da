#include "ltesched/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "ltesched/error.hpp"

namespace ltesched {

namespace {

std::ofstream open_file(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + file.string() + "'");
    return out;
}

nlohmann::json number_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

void write_qci_table(const MetricsReport& report, const std::filesystem::path& file,
                     const char* header, double (*value)(const QciStats&), bool with_rate) {
    auto out = open_file(file);
    out << "qci,bearers," << header << (with_rate ? ",loss_rate" : "") << '\n';
    for (const auto& q : report.per_qci) {
        out << q.qci << ',' << q.bearers << ',' << format_number(value(q));
        if (with_rate) out << ',' << format_number(q.loss_rate);
        out << '\n';
    }
}

void write_cdf(const std::vector<CdfPoint>& points, const std::filesystem::path& file,
               const char* value_name) {
    auto out = open_file(file);
    out << value_name << ",fraction\n";
    for (const auto& p : points) out << format_number(p.value) << ',' << format_number(p.fraction) << '\n';
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(v))));
    const int decimals = std::clamp(9 - magnitude, 0, 24);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s = buf;
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

nlohmann::json report_to_json(const MetricsReport& report) {
    nlohmann::json j;
    j["meta"] = {{"seed", report.meta.seed},
                 {"scheduler", report.meta.scheduler},
                 {"config_hash", report.meta.config_hash},
                 {"duration_s", report.meta.duration_s},
                 {"epochs", report.meta.epochs}};
    auto& qcis = j["per_qci"] = nlohmann::json::array();
    for (const auto& q : report.per_qci) {
        qcis.push_back({{"qci", q.qci},
                        {"bearers", q.bearers},
                        {"throughput_mbps", q.throughput_mbps},
                        {"loss_mbps", q.loss_mbps},
                        {"loss_rate", q.loss_rate},
                        {"latency_ms", number_or_null(q.latency_ms)},
                        {"offered_bits", q.offered_bits},
                        {"served_bits", q.served_bits},
                        {"dropped_bits", q.dropped_bits},
                        {"queued_bits", q.queued_bits},
                        {"delivered_packets", q.delivered_packets},
                        {"delivered_over_budget", q.delivered_over_budget}});
    }
    const auto& f = report.fairness_series;
    nlohmann::json fairness = {{"samples", f.size()}};
    if (!f.empty()) {
        const auto points = cdf(f);
        const auto quantile = [&](double p) {
            const auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(points.size()))) - 1;
            return points[std::min(k, points.size() - 1)].value;
        };
        fairness["min"] = points.front().value;
        fairness["p10"] = quantile(0.1);
        fairness["median"] = quantile(0.5);
    }
    j["fairness_qci1"] = fairness;
    return j;
}

void write_report(const MetricsReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_qci_table(report, dir / "throughput_per_qci.csv", "throughput_mbps",
                    [](const QciStats& q) { return q.throughput_mbps; }, false);
    write_qci_table(report, dir / "loss_per_qci.csv", "loss_mbps",
                    [](const QciStats& q) { return q.loss_mbps; }, true);
    write_qci_table(report, dir / "latency_per_qci.csv", "latency_ms",
                    [](const QciStats& q) { return q.latency_ms; }, false);
    for (const auto& [label, points] : report.loss_cdf) {
        write_cdf(points, dir / ("cdf_loss_qci" + std::to_string(label) + ".csv"), "loss_mbps");
    }
    for (const auto& [label, points] : report.latency_cdf) {
        write_cdf(points, dir / ("cdf_latency_qci" + std::to_string(label) + ".csv"), "latency_ms");
    }
    {
        auto out = open_file(dir / "fairness_qci1.csv");
        out << "sample,jain_index\n";
        for (std::size_t k = 0; k < report.fairness_series.size(); ++k) {
            out << k << ',' << format_number(report.fairness_series[k]) << '\n';
        }
    }
    {
        auto out = open_file(dir / "bearers.csv");
        out << "bearer_id,qci,throughput_mbps,loss_mbps,latency_ms,mean_cqi\n";
        for (const auto& b : report.bearers) {
            out << b.bearer_id << ',' << b.qci << ',' << format_number(b.throughput_mbps) << ','
                << format_number(b.loss_mbps) << ',' << format_number(b.latency_ms) << ','
                << format_number(b.mean_cqi) << '\n';
        }
    }
    auto out = open_file(dir / "report.json");
    out << report_to_json(report).dump(2) << '\n';
}

LedgerWriter::LedgerWriter(const std::filesystem::path& file)
    : out_(std::make_unique<std::ofstream>(open_file(file))) {
    *out_ << "epoch,load,bearer_id,cqi,rank,eligible_bits,size_rbs,fraction,granted_rbs,served_bits,"
             "dropped_bits,dropped_packets,drop_cause\n";
}

LedgerWriter::~LedgerWriter() = default;

void LedgerWriter::write(const EpochLedger& ledger) {
    const auto load = load_state_name(ledger.load);
    for (const auto& e : ledger.entries) {
        if (e.size_rbs == 0 && e.dropped_packets == 0) continue;
        *out_ << ledger.epoch << ',' << load << ',' << e.bearer_id << ',' << e.cqi << ','
              << format_number(e.rank) << ',' << e.eligible_bits << ',' << e.size_rbs << ','
              << format_number(e.fraction) << ',' << e.granted_rbs << ',' << e.served_bits << ','
              << e.dropped_bits << ',' << e.dropped_packets << ','
              << (e.dropped_packets > 0 ? "buffer_overflow" : "") << '\n';
    }
}

SchedulerSummary summarize(const std::string& scheduler, const std::vector<MetricsReport>& runs) {
    SchedulerSummary summary{scheduler, {}};
    for (int label = 1; label <= kQciCount; ++label) {
        QciStats mean;
        mean.qci = label;
        int present = 0;
        int with_latency = 0;
        double latency = 0.0;
        for (const auto& r : runs) {
            const auto* q = r.qci(label);
            if (!q) continue;
            ++present;
            mean.bearers += q->bearers;
            mean.throughput_mbps += q->throughput_mbps;
            mean.loss_mbps += q->loss_mbps;
            mean.loss_rate += q->loss_rate;
            mean.offered_bits += q->offered_bits;
            mean.served_bits += q->served_bits;
            mean.dropped_bits += q->dropped_bits;
            mean.queued_bits += q->queued_bits;
            mean.delivered_packets += q->delivered_packets;
            mean.delivered_over_budget += q->delivered_over_budget;
            if (!std::isnan(q->latency_ms)) {
                latency += q->latency_ms;
                ++with_latency;
            }
        }
        if (present == 0) continue;
        mean.throughput_mbps /= present;
        mean.loss_mbps /= present;
        mean.loss_rate /= present;
        mean.latency_ms = with_latency > 0 ? latency / with_latency : std::numeric_limits<double>::quiet_NaN();
        summary.per_qci.push_back(mean);
    }
    return summary;
}

double improvement_percent(MetricKind kind, double a, double b) {
    if (std::isnan(a) || std::isnan(b) || b == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (kind == MetricKind::Throughput) return (a - b) / b * 100.0;
    return (b - a) / b * 100.0;
}

void write_comparison(const SchedulerSummary& reference, const std::vector<SchedulerSummary>& baselines,
                      const std::filesystem::path& file) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    auto out = open_file(file);
    out << "scheduler,baseline,qci,metric,scheduler_value,baseline_value,improvement_pct\n";
    const struct {
        MetricKind kind;
        const char* name;
        double (*get)(const QciStats&);
    } metrics[] = {
        {MetricKind::Throughput, "throughput_mbps", [](const QciStats& q) { return q.throughput_mbps; }},
        {MetricKind::Loss, "loss_mbps", [](const QciStats& q) { return q.loss_mbps; }},
        {MetricKind::Latency, "latency_ms", [](const QciStats& q) { return q.latency_ms; }},
    };
    for (const auto& base : baselines) {
        for (const auto& m : metrics) {
            for (const auto& a : reference.per_qci) {
                const auto it = std::find_if(base.per_qci.begin(), base.per_qci.end(),
                                             [&](const QciStats& q) { return q.qci == a.qci; });
                if (it == base.per_qci.end()) continue;
                const double va = m.get(a);
                const double vb = m.get(*it);
                out << reference.scheduler << ',' << base.scheduler << ',' << a.qci << ',' << m.name << ','
                    << format_number(va) << ',' << format_number(vb) << ','
                    << format_number(improvement_percent(m.kind, va, vb)) << '\n';
            }
        }
    }
}

}  // namespace ltesched
