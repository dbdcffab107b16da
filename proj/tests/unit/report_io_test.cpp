#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "ltesched/report_io.hpp"

namespace ltesched {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("ltesched_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    fs::path dir_;
};

TEST(FormatNumber, Examples) {
    EXPECT_EQ(format_number(0.0), "0");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.0), "1");
    EXPECT_EQ(format_number(2.5), "2.5");
    EXPECT_EQ(format_number(-12.125), "-12.125");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.3333333333");
    EXPECT_EQ(format_number(123456.7890123), "123456.789");
    EXPECT_EQ(format_number(0.000123456789012), "0.000123456789");
    EXPECT_EQ(format_number(4.875e6), "4875000");
    EXPECT_EQ(format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
}

TEST(FormatNumber, KeepsTenSignificantDigits) {
    for (double v : {3.14159265358979, 271828.182845904, 0.00602214076, 9.99999999949}) {
        EXPECT_NEAR(std::stod(format_number(v)), v, std::abs(v) * 1e-9) << v;
        EXPECT_EQ(format_number(v).find('e'), std::string::npos);
    }
}

TEST(Improvement, SignConvention) {
    // Lower is better for loss and latency.
    EXPECT_DOUBLE_EQ(improvement_percent(MetricKind::Loss, 0.8, 1.0), 20.0);
    EXPECT_DOUBLE_EQ(improvement_percent(MetricKind::Latency, 2630.5, 10771.0),
                     (10771.0 - 2630.5) / 10771.0 * 100.0);
    EXPECT_DOUBLE_EQ(improvement_percent(MetricKind::Latency, 12.0, 10.0), -20.0);
    // Higher is better for throughput.
    EXPECT_DOUBLE_EQ(improvement_percent(MetricKind::Throughput, 1.2, 1.0), 20.0);
    EXPECT_TRUE(std::isnan(improvement_percent(MetricKind::Loss, 0.0, 0.0)));
    EXPECT_TRUE(std::isnan(improvement_percent(MetricKind::Latency, 1.0, std::nan(""))));
}

MetricsReport sample_report() {
    std::vector<BearerTotals> totals(3);
    totals[0] = {0, 1, 8000, 8000, 0, 0, 10, 45.0, 0, 10.0};
    totals[1] = {1, 1, 8000, 4000, 0, 4000, 5, 60.0, 0, 9.0};
    totals[2] = {2, 9, 100000, 20000, 80000, 0, 2, 900.0, 2, 4.5};
    RunMetadata meta{3, "greedy-knapsack", "0123456789abcdef", 2.0, 200};
    return build_report(totals, 2.0, {1.0, 0.9, 0.95}, meta);
}

TEST_F(TempDir, WriteReportFileSet) {
    write_report(sample_report(), dir_);
    for (const char* f : {"throughput_per_qci.csv", "loss_per_qci.csv", "latency_per_qci.csv", "cdf_loss_qci1.csv",
                          "cdf_loss_qci9.csv", "cdf_latency_qci1.csv", "cdf_latency_qci9.csv", "fairness_qci1.csv",
                          "bearers.csv", "report.json"}) {
        EXPECT_TRUE(fs::exists(dir_ / f)) << f;
    }
    EXPECT_EQ(slurp(dir_ / "throughput_per_qci.csv"), "qci,bearers,throughput_mbps\n1,2,0.006\n9,1,0.01\n");
    EXPECT_EQ(slurp(dir_ / "loss_per_qci.csv"), "qci,bearers,loss_mbps,loss_rate\n1,2,0,0\n9,1,0.04,0.8\n");
    EXPECT_EQ(slurp(dir_ / "latency_per_qci.csv"), "qci,bearers,latency_ms\n1,2,7\n9,1,450\n");
    EXPECT_EQ(slurp(dir_ / "fairness_qci1.csv"), "sample,jain_index\n0,1\n1,0.9\n2,0.95\n");
    EXPECT_EQ(slurp(dir_ / "cdf_latency_qci1.csv"), "latency_ms,fraction\n4.5,0.5\n12,1\n");

    const auto j = nlohmann::json::parse(slurp(dir_ / "report.json"));
    EXPECT_EQ(j["meta"]["scheduler"], "greedy-knapsack");
    EXPECT_EQ(j["meta"]["seed"], 3);
    EXPECT_EQ(j["per_qci"].size(), 2u);
    EXPECT_EQ(j["per_qci"][1]["dropped_bits"], 80000);
    EXPECT_EQ(j["fairness_qci1"]["samples"], 3);
    EXPECT_EQ(j["fairness_qci1"]["min"], 0.9);
    EXPECT_EQ(j["fairness_qci1"]["median"], 0.95);
}

TEST_F(TempDir, WritingTwiceIsByteIdentical) {
    write_report(sample_report(), dir_ / "a");
    write_report(sample_report(), dir_ / "b");
    for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
        EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / entry.path().filename())) << entry.path();
    }
}

TEST_F(TempDir, LedgerRowsOnlyForActiveBearers) {
    fs::create_directories(dir_);
    {
        LedgerWriter w(dir_ / "ledger.csv");
        EpochLedger l;
        l.epoch = 4;
        l.capacity_rbs = 250;
        l.load = LoadState::Overload;
        l.entries.resize(3);
        l.entries[0] = {0, 7, 12.5, 800, 4, 0.5, 2, 390, 0, 0, DropCause::BufferOverflow};
        l.entries[1].bearer_id = 1;  // idle
        l.entries[2] = {2, 3, 0, 0, 0, 0, 0, 0, 8000, 1, DropCause::BufferOverflow};
        w.write(l);
    }
    EXPECT_EQ(slurp(dir_ / "ledger.csv"),
              "epoch,load,bearer_id,cqi,rank,eligible_bits,size_rbs,fraction,granted_rbs,served_bits,"
              "dropped_bits,dropped_packets,drop_cause\n"
              "4,overload,0,7,12.5,800,4,0.5,2,390,0,0,\n"
              "4,overload,2,3,0,0,0,0,0,0,8000,1,buffer_overflow\n");
}

TEST_F(TempDir, SummaryAndComparison) {
    auto a = sample_report();
    auto b = sample_report();
    for (auto& q : b.per_qci) {
        q.loss_mbps *= 2;
        q.latency_ms *= 4;
        q.throughput_mbps /= 2;
    }
    const auto sa = summarize("greedy-knapsack", {a, a});
    const auto sb = summarize("priority", {b});
    ASSERT_EQ(sa.per_qci.size(), 2u);
    EXPECT_DOUBLE_EQ(sa.per_qci[0].throughput_mbps, 0.006);
    write_comparison(sa, {sb}, dir_ / "comparison.csv");
    EXPECT_EQ(slurp(dir_ / "comparison.csv"),
              "scheduler,baseline,qci,metric,scheduler_value,baseline_value,improvement_pct\n"
              "greedy-knapsack,priority,1,throughput_mbps,0.006,0.003,100\n"
              "greedy-knapsack,priority,9,throughput_mbps,0.01,0.005,100\n"
              "greedy-knapsack,priority,1,loss_mbps,0,0,nan\n"
              "greedy-knapsack,priority,9,loss_mbps,0.04,0.08,50\n"
              "greedy-knapsack,priority,1,latency_ms,7,28,75\n"
              "greedy-knapsack,priority,9,latency_ms,450,1800,75\n");
}

}  // namespace
}  // namespace ltesched
