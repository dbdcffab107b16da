#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltesched/config.hpp"
#include "ltesched/error.hpp"

namespace ltesched {
namespace {

int error_line(std::string_view text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

std::string error_message(std::string_view text) {
    try {
        parse_config_text(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

TEST(Config, EmptyTextGivesReferenceDefaults) {
    const auto c = parse_config_text("");
    EXPECT_EQ(c.cell.num_rbs, 25);
    EXPECT_EQ(c.cell.epoch_ms, 10.0);
    EXPECT_EQ(c.cell.capacity_rbs(), 250);
    EXPECT_EQ(c.ranking.weights.throughput, 4.0);
    EXPECT_EQ(c.ranking.weights.loss, 4.0);
    EXPECT_EQ(c.ranking.weights.delay, 16.0);
    EXPECT_EQ(c.ranking.weights.queue_depth, 4.0);
    EXPECT_EQ(c.ranking.weights.priority, 2.0);
    EXPECT_EQ(c.traffic.voice_bearers, 300);
    EXPECT_EQ(c.traffic.data_bearers, 100);
    EXPECT_EQ(c.traffic.data.hurst, 0.9);
    EXPECT_EQ(c.traffic.voice.activity_factor, 0.5);
    EXPECT_EQ(c.traffic.voice.mean_talkspurt_s, 5.0);
    EXPECT_EQ(c.traffic.voice.frame_period_ms, 20.0);
    EXPECT_EQ(c.traffic.schedule().intervals.size(), 11u);
    EXPECT_EQ(c.sim.duration_s, 1920.0);
    EXPECT_EQ(c.cell.mcs, McsTable::standard());
}

TEST(Config, CommentsSectionsAndWhitespace) {
    const auto c = parse_config_text(
        "# reference cell\n"
        "[cell]\n"
        "  num_rbs = 50   ; wider band\n"
        "\n"
        "[sim]\n"
        "seeds = 3, 4,5\n"
        "schedulers = priority,greedy-knapsack\n"
        "[traffic]\n"
        "schedule = 2, 1.5\n"
        "schedule_start = overload\n"
        "[qci]\n"
        "9.priority = 8\n");
    EXPECT_EQ(c.cell.num_rbs, 50);
    EXPECT_EQ(c.sim.seeds, (std::vector<std::uint64_t>{3, 4, 5}));
    EXPECT_EQ(c.sim.schedulers,
              (std::vector<SchedulerKind>{SchedulerKind::PriorityOnly, SchedulerKind::GreedyKnapsack}));
    EXPECT_EQ(c.traffic.schedule_s, (std::vector<double>{2, 1.5}));
    EXPECT_EQ(load_state(c.traffic.schedule(), 100), LoadState::Overload);
    EXPECT_EQ(c.qci.lookup(9).priority, 8);
}

TEST(Config, RangeErrors) {
    EXPECT_EQ(error_line("[cell]\nnum_rbs = 0\n"), 2);
    EXPECT_NE(error_message("[cell]\nnum_rbs = 0\n").find("cell.num_rbs"), std::string::npos);
    EXPECT_NE(error_message("[cell]\nnum_rbs = 0\n").find("out of range"), std::string::npos);
    EXPECT_EQ(error_line("[traffic]\nhurst = 1.0\n"), 2);
    EXPECT_EQ(error_line("[ranking]\nalpha = 0\n"), 2);
    EXPECT_EQ(error_line("[qci]\n3.priority = 0\n"), 2);
    EXPECT_EQ(error_line("[sim]\nseeds = -1\n"), 2);
}

TEST(Config, UnknownKeyIsNamed) {
    const auto msg = error_message("[traffic]\nvoice_bearers = 3\nspeling_mistake = 1\n");
    EXPECT_NE(msg.find("unknown key 'traffic.speling_mistake'"), std::string::npos) << msg;
    EXPECT_EQ(error_line("[traffic]\nvoice_bearers = 3\nspeling_mistake = 1\n"), 3);
    EXPECT_NE(error_message("speling_mistake = 1\n").find("'speling_mistake'"), std::string::npos);
}

TEST(Config, MalformedSyntax) {
    EXPECT_NE(error_message("[cell\n").find("section header"), std::string::npos);
    EXPECT_NE(error_message("[cell]\nnum_rbs 25\n").find("key = value"), std::string::npos);
    EXPECT_EQ(error_line("[cell]\n\n= 25\n"), 3);
    EXPECT_NE(error_message("[cell]\nnum_rbs = twenty\n").find("expected an integer"), std::string::npos);
    EXPECT_NE(error_message("[cell]\nepoch_ms = 1x\n").find("expected a number"), std::string::npos);
    EXPECT_NE(error_message("[sim]\nschedulers = fifo\n").find("fifo"), std::string::npos);
    EXPECT_NE(error_message("[sim]\ntrace_ledger = maybe\n").find("true or false"), std::string::npos);
}

TEST(Config, CrossFieldChecks) {
    EXPECT_THROW(parse_config_text("[mix]\nvoip = 50\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[weights]\nthroughput = 0\nloss = 0\ndelay = 0\nqueue_depth = 0\npriority = 0\n"),
                 ConfigError);
    EXPECT_THROW(parse_config_text("[buffers]\ndata_bytes = 100\n"), ConfigError);
    EXPECT_THROW(parse_config_text("[buffers]\nvoice_bytes = 39\n"), ConfigError);
    EXPECT_NO_THROW(parse_config_text("[buffers]\nvoice_bytes = 40\n"));
    EXPECT_THROW(parse_config_text("[metrics]\nfairness_window_s = 0.001\n"), ConfigError);
}

TEST(Config, MissingFile) {
    EXPECT_THROW(parse_config("/nonexistent/dir/x.ini"), ConfigError);
}

TEST(Config, ShippedConfigsParse) {
    const auto d = parse_config(LTESCHED_SOURCE_DIR "/configs/default.ini");
    EXPECT_EQ(d.sim.seeds.size(), 5u);
    EXPECT_EQ(d.sim.schedulers.size(), 3u);
    EXPECT_EQ(d.cell.mcs, McsTable::standard());
    const auto s = parse_config(LTESCHED_SOURCE_DIR "/configs/scaled_overload.ini");
    EXPECT_EQ(s.traffic.voice_bearers, 30);
    EXPECT_EQ(s.traffic.data_bearers, 10);
    EXPECT_EQ(s.sim.duration_s, 60.0);
}

TEST(Config, RelativeMcsTableResolvesAgainstTheFile) {
    const auto dir = std::filesystem::temp_directory_path() / "ltesched_config_test";
    std::filesystem::create_directories(dir);
    std::filesystem::copy_file(LTESCHED_SOURCE_DIR "/data/mcs_table.csv", dir / "table.csv",
                               std::filesystem::copy_options::overwrite_existing);
    std::ofstream(dir / "c.ini") << "[cell]\nmcs_table = table.csv\n";
    const auto c = parse_config(dir / "c.ini");
    EXPECT_EQ(c.cell.mcs, McsTable::standard());

    std::ofstream(dir / "bad.ini") << "[cell]\n\nmcs_table = missing.csv\n";
    try {
        parse_config(dir / "bad.ini");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    std::filesystem::remove_all(dir);
}

TEST(Config, Overrides) {
    auto c = parse_config_text("");
    apply_override(c, "traffic.voice_bearers", "30");
    EXPECT_EQ(c.traffic.voice_bearers, 30);
    EXPECT_THROW(apply_override(c, "traffic.nope", "1"), ConfigError);
    EXPECT_THROW(apply_override(c, "mix.voip", "10"), ConfigError);  // breaks the 100% sum
}

TEST(Config, HashTracksSemanticKeysOnly) {
    const auto a = parse_config_text("");
    EXPECT_EQ(a.hash(), parse_config_text("").hash());
    EXPECT_EQ(a.hash().size(), 16u);
    EXPECT_EQ(a.hash(), parse_config_text("[sim]\noutput_dir = elsewhere\nthreads = 3\n").hash());
    EXPECT_NE(a.hash(), parse_config_text("[cell]\nnum_rbs = 24\n").hash());
    EXPECT_NE(a.hash(), parse_config_text("[weights]\ndelay = 15.5\n").hash());
}

TEST(Config, KeysAreListedAndAccepted) {
    const auto keys = config_keys();
    EXPECT_NE(std::find(keys.begin(), keys.end(), "cell.num_rbs"), keys.end());
    EXPECT_NE(std::find(keys.begin(), keys.end(), "qci.9.loss_rate_threshold"), keys.end());
    // Every key round-trips its own canonical value.
    const auto c = parse_config_text("");
    std::istringstream canon(c.canonical_string());
    std::string line;
    int n = 0;
    while (std::getline(canon, line)) {
        const auto eq = line.find(" = ");
        auto copy = c;
        EXPECT_NO_THROW(apply_override(copy, line.substr(0, eq), line.substr(eq + 3))) << line;
        EXPECT_EQ(copy.hash(), c.hash()) << line;
        ++n;
    }
    EXPECT_GT(n, 50);
}

}  // namespace
}  // namespace ltesched
