#include "ltesched/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "ltesched/error.hpp"

namespace ltesched {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(std::string_view text, std::string_view key) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError("'" + std::string(key) + "': expected a number, got '" +
                          std::string(text) + "'");
    }
    return v;
}

long long parse_integer(std::string_view text, std::string_view key) {
    long long v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("'" + std::string(key) + "': expected an integer, got '" +
                          std::string(text) + "'");
    }
    return v;
}

void require(bool ok, std::string_view key, std::string_view range) {
    if (!ok) throw ConfigError("'" + std::string(key) + "' out of range (" + std::string(range) + ")");
}

struct Key {
    std::function<void(ExperimentConfig&, std::string_view value, std::string_view key)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

// Helpers producing setters with range checks.
template <typename Field>
Key real(Field field, double lo, double hi, bool lo_open, std::string range) {
    return {[=](ExperimentConfig& c, std::string_view v, std::string_view key) {
                const double x = parse_double(v, key);
                require((lo_open ? x > lo : x >= lo) && x <= hi, key, range);
                field(c) = x;
            },
            [=](const ExperimentConfig& c) { return format_number(field(const_cast<ExperimentConfig&>(c))); }};
}

template <typename Field>
Key integer(Field field, long long lo, long long hi) {
    const std::string range = std::to_string(lo) + ".." + std::to_string(hi);
    return {[=](ExperimentConfig& c, std::string_view v, std::string_view key) {
                const long long x = parse_integer(v, key);
                require(x >= lo && x <= hi, key, range);
                field(c) = static_cast<std::remove_reference_t<decltype(field(c))>>(x);
            },
            [=](const ExperimentConfig& c) {
                return std::to_string(field(const_cast<ExperimentConfig&>(c)));
            }};
}

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kBelowOne = std::nextafter(1.0, 0.0);  // upper bound of open (.., 1) ranges

std::map<std::string, Key> build_registry() {
    std::map<std::string, Key> r;
    using C = ExperimentConfig;

    r["cell.num_rbs"] = integer([](C& c) -> int& { return c.cell.num_rbs; }, 1, 1000);
    r["cell.subframes_per_epoch"] =
        integer([](C& c) -> int& { return c.cell.subframes_per_epoch; }, 1, 1000);
    r["cell.epoch_ms"] = real([](C& c) -> double& { return c.cell.epoch_ms; }, 0, 1000, true, "(0, 1000] ms");
    r["cell.mcs_table"] = {
        [](C& c, std::string_view v, std::string_view) {
            c.cell.mcs_table_path = std::string(v);
            if (v.empty()) {
                c.cell.mcs = McsTable::standard();
                return;
            }
            // Re-raise without the CSV line so the config line gets attached instead.
            try {
                c.cell.mcs = McsTable::load(std::string(v));
            } catch (const ConfigError& e) {
                throw ConfigError(std::string(v) + ": " + e.what());
            }
        },
        [](const C& c) { return c.cell.mcs_table_path; }};

    r["sim.duration_s"] = real([](C& c) -> double& { return c.sim.duration_s; }, 0, 1e6, true, "(0, 1e6] s");
    r["sim.seeds"] = {
        [](C& c, std::string_view v, std::string_view key) {
            std::vector<std::uint64_t> seeds;
            for (auto item : split_list(v)) {
                const long long s = parse_integer(item, key);
                require(s >= 0, key, "seeds must be nonnegative");
                seeds.push_back(static_cast<std::uint64_t>(s));
            }
            c.sim.seeds = std::move(seeds);
        },
        [](const C& c) {
            std::string out;
            for (auto s : c.sim.seeds) out += (out.empty() ? "" : ",") + std::to_string(s);
            return out;
        }};
    r["sim.schedulers"] = {
        [](C& c, std::string_view v, std::string_view key) {
            std::vector<SchedulerKind> kinds;
            for (auto item : split_list(v)) {
                try {
                    kinds.push_back(parse_scheduler_kind(item));
                } catch (const InvalidInput& e) {
                    throw ConfigError("'" + std::string(key) + "': " + e.what());
                }
            }
            c.sim.schedulers = std::move(kinds);
        },
        [](const C& c) {
            std::string out;
            for (auto k : c.sim.schedulers) out += (out.empty() ? "" : ",") + std::string(scheduler_name(k));
            return out;
        }};
    r["sim.output_dir"] = {[](C& c, std::string_view v, std::string_view) { c.sim.output_dir = std::string(v); },
                           [](const C& c) { return c.sim.output_dir; }};
    r["sim.trace_ledger"] = {
        [](C& c, std::string_view v, std::string_view key) {
            if (v == "true" || v == "1") {
                c.sim.trace_ledger = true;
            } else if (v == "false" || v == "0") {
                c.sim.trace_ledger = false;
            } else {
                throw ConfigError("'" + std::string(key) + "': expected true or false");
            }
        },
        [](const C& c) { return std::string(c.sim.trace_ledger ? "true" : "false"); }};
    r["sim.threads"] = integer([](C& c) -> int& { return c.sim.threads; }, 0, 1024);

    r["traffic.voice_bearers"] = integer([](C& c) -> int& { return c.traffic.voice_bearers; }, 0, 100000);
    r["traffic.data_bearers"] = integer([](C& c) -> int& { return c.traffic.data_bearers; }, 0, 100000);
    r["traffic.data_bearers_per_user"] =
        integer([](C& c) -> int& { return c.traffic.data_bearers_per_user; }, 1, 1000);
    r["traffic.voice_frame_bytes"] = integer([](C& c) -> int& { return c.traffic.voice.frame_bytes; }, 1, 65535);
    r["traffic.voice_frame_ms"] =
        real([](C& c) -> double& { return c.traffic.voice.frame_period_ms; }, 0, 1000, true, "(0, 1000] ms");
    r["traffic.voice_activity"] =
        real([](C& c) -> double& { return c.traffic.voice.activity_factor; }, 0, 1, true, "(0, 1)");
    r["traffic.mean_talkspurt_s"] =
        real([](C& c) -> double& { return c.traffic.voice.mean_talkspurt_s; }, 0, 3600, true, "(0, 3600] s");
    r["traffic.hurst"] = real([](C& c) -> double& { return c.traffic.data.hurst; }, 0.5, kBelowOne, true, "(0.5, 1)");
    r["traffic.data_subsources"] = integer([](C& c) -> int& { return c.traffic.data.subsources; }, 1, 10000);
    r["traffic.data_min_period_ms"] =
        real([](C& c) -> double& { return c.traffic.data.min_period_ms; }, 0, 1e6, true, "(0, 1e6] ms");
    r["traffic.data_max_period_s"] =
        real([](C& c) -> double& { return c.traffic.data.max_period_s; }, 0, 1e7, true, "(0, 1e7] s");
    r["traffic.data_packet_bytes"] = integer([](C& c) -> int& { return c.traffic.data.packet_bytes; }, 1, 65535);
    r["traffic.data_mean_rate_bps"] =
        real([](C& c) -> double& { return c.traffic.data.mean_rate_bps; }, 0, 1e10, false, "[0, 1e10], 0 = auto");
    r["traffic.normal_load"] = real([](C& c) -> double& { return c.traffic.normal_load; }, 0, 10, true, "(0, 10]");
    r["traffic.overload_multiplier"] =
        real([](C& c) -> double& { return c.traffic.data.overload_multiplier; }, 0, 1000, true, "(0, 1000]");
    r["traffic.schedule"] = {
        [](C& c, std::string_view v, std::string_view key) {
            std::vector<double> durations;
            for (auto item : split_list(v)) {
                const double d = parse_double(item, key);
                require(d > 0.0, key, "durations must be positive");
                durations.push_back(d);
            }
            c.traffic.schedule_s = std::move(durations);
        },
        [](const C& c) {
            std::string out;
            for (double d : c.traffic.schedule_s) out += (out.empty() ? "" : ",") + format_number(d);
            return out;
        }};
    r["traffic.schedule_start"] = {
        [](C& c, std::string_view v, std::string_view key) {
            if (v == "normal") {
                c.traffic.schedule_start = LoadState::Normal;
            } else if (v == "overload") {
                c.traffic.schedule_start = LoadState::Overload;
            } else {
                throw ConfigError("'" + std::string(key) + "': expected normal or overload");
            }
        },
        [](const C& c) { return load_state_name(c.traffic.schedule_start); }};

    r["mix.best_effort"] = real([](C& c) -> double& { return c.traffic.mix.best_effort; }, 0, 100, false, "[0, 100]");
    r["mix.interactive"] = real([](C& c) -> double& { return c.traffic.mix.interactive; }, 0, 100, false, "[0, 100]");
    r["mix.streaming"] = real([](C& c) -> double& { return c.traffic.mix.streaming; }, 0, 100, false, "[0, 100]");
    r["mix.voip"] = real([](C& c) -> double& { return c.traffic.mix.voip; }, 0, 100, false, "[0, 100]");
    r["mix.gaming"] = real([](C& c) -> double& { return c.traffic.mix.gaming; }, 0, 100, false, "[0, 100]");

    r["channel.center_mean_cqi"] =
        real([](C& c) -> double& { return c.channel.center_mean_cqi; }, 1, 15, false, "[1, 15]");
    r["channel.edge_mean_cqi"] = real([](C& c) -> double& { return c.channel.edge_mean_cqi; }, 1, 15, false, "[1, 15]");
    r["channel.edge_fraction"] = real([](C& c) -> double& { return c.channel.edge_fraction; }, 0, 1, false, "[0, 1]");
    r["channel.move_probability"] =
        real([](C& c) -> double& { return c.channel.move_probability; }, 0, 1, false, "[0, 1]");
    r["channel.reversion"] = real([](C& c) -> double& { return c.channel.reversion; }, 0, 1, false, "[0, 1]");

    r["weights.throughput"] = real([](C& c) -> double& { return c.ranking.weights.throughput; }, 0, 1e6, false, "[0, 1e6]");
    r["weights.loss"] = real([](C& c) -> double& { return c.ranking.weights.loss; }, 0, 1e6, false, "[0, 1e6]");
    r["weights.delay"] = real([](C& c) -> double& { return c.ranking.weights.delay; }, 0, 1e6, false, "[0, 1e6]");
    r["weights.queue_depth"] = real([](C& c) -> double& { return c.ranking.weights.queue_depth; }, 0, 1e6, false, "[0, 1e6]");
    r["weights.priority"] = real([](C& c) -> double& { return c.ranking.weights.priority; }, 0, 1e6, false, "[0, 1e6]");

    r["ranking.alpha"] = real([](C& c) -> double& { return c.ranking.alpha; }, 0, kBelowOne, true, "(0, 1)");
    r["ranking.min_past_throughput_bps"] =
        real([](C& c) -> double& { return c.ranking.min_past_throughput_bps; }, 0, 1e9, true, "(0, 1e9]");
    r["ranking.loss_window_s"] = real([](C& c) -> double& { return c.ranking.loss_window_s; }, 0, 3600, true, "(0, 3600] s");

    r["policy.voice_gbr_bps"] = real([](C& c) -> double& { return c.policy.voice_gbr_bps; }, 0, 1e10, false, "[0, 1e10], 0 = codec rate");
    r["policy.voice_mbr_factor"] = real([](C& c) -> double& { return c.policy.voice_mbr_factor; }, 1, 1e6, false, "[1, 1e6]");
    r["policy.stream_gbr_bps"] = real([](C& c) -> double& { return c.policy.stream_gbr_bps; }, 0, 1e10, false, "[0, 1e10], 0 = data rate");
    r["policy.stream_mbr_factor"] = real([](C& c) -> double& { return c.policy.stream_mbr_factor; }, 1, 1e6, false, "[1, 1e6]");
    r["policy.ambr_user_bps"] = real([](C& c) -> double& { return c.policy.ambr_user_bps; }, 0, 1e12, true, "(0, 1e12]");
    r["policy.ambr_apn_bps"] = real([](C& c) -> double& { return c.policy.ambr_apn_bps; }, 0, 1e12, true, "(0, 1e12]");

    r["buffers.voice_bytes"] = integer([](C& c) -> int& { return c.buffers.voice_bytes; }, 1, 1 << 30);
    r["buffers.data_bytes"] = integer([](C& c) -> int& { return c.buffers.data_bytes; }, 1, 1 << 30);

    r["metrics.fairness_window_s"] =
        real([](C& c) -> double& { return c.metrics.fairness_window_s; }, 0, 3600, true, "(0, 3600] s");

    for (int label = 1; label <= kQciCount; ++label) {
        const std::string prefix = "qci." + std::to_string(label) + ".";
        r[prefix + "priority"] = {
            [label](C& c, std::string_view v, std::string_view key) {
                const long long p = parse_integer(v, key);
                require(p >= 1 && p <= 9, key, "1..9");
                c.qci.set_priority(label, static_cast<int>(p));
            },
            [label](const C& c) { return std::to_string(c.qci.lookup(label).priority); }};
        r[prefix + "delay_budget_ms"] = {
            [label](C& c, std::string_view v, std::string_view key) {
                const long long d = parse_integer(v, key);
                require(d >= 1 && d <= 100000, key, "1..100000 ms");
                c.qci.set_delay_budget_ms(label, static_cast<int>(d));
            },
            [label](const C& c) { return std::to_string(c.qci.lookup(label).delay_budget_ms); }};
        r[prefix + "loss_rate_threshold"] = {
            [label](C& c, std::string_view v, std::string_view key) {
                const double l = parse_double(v, key);
                require(l > 0.0 && l < 1.0, key, "(0, 1)");
                c.qci.set_loss_rate_threshold(label, l);
            },
            [label](const C& c) { return format_number(c.qci.lookup(label).loss_rate_threshold); }};
    }
    return r;
}

const std::map<std::string, Key>& registry() {
    static const auto r = build_registry();
    return r;
}

void set_key(ExperimentConfig& config, std::string_view dotted_key, std::string_view value,
             const std::filesystem::path& base_dir) {
    const auto& reg = registry();
    const auto it = reg.find(std::string(dotted_key));
    if (it == reg.end()) throw ConfigError("unknown key '" + std::string(dotted_key) + "'");
    if (dotted_key == "cell.mcs_table" && !value.empty()) {
        std::filesystem::path p{std::string(value)};
        if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
        it->second.set(config, p.string(), dotted_key);
        return;
    }
    it->second.set(config, value, dotted_key);
}

}  // namespace

void ExperimentConfig::validate() const {
    try {
        ranking.weights.check();
        traffic.mix.check();
    } catch (const ContractViolation& e) {
        throw ConfigError(e.what());
    }
    traffic.schedule().check();
    if (sim.seeds.empty()) throw ConfigError("at least one seed is required");
    if (sim.schedulers.empty()) throw ConfigError("at least one scheduler is required");
    if (ranking.min_past_throughput_bps <= 0.0) throw ConfigError("past-throughput floor must be positive");
    if (metrics.fairness_window_s < cell.epoch_ms / 1000.0) {
        throw ConfigError("fairness window shorter than one epoch");
    }
    if (ranking.loss_window_s < cell.epoch_ms / 1000.0) {
        throw ConfigError("loss window shorter than one epoch");
    }
    if (traffic.voice.frame_bytes > buffers.voice_bytes) {
        throw ConfigError("voice buffer smaller than one voice frame");
    }
    if (traffic.data.packet_bytes > buffers.data_bytes) {
        throw ConfigError("data buffer smaller than one data packet");
    }
}

std::string ExperimentConfig::canonical_string() const {
    std::string out;
    for (const auto& [name, key] : registry()) {
        if (name == "sim.output_dir" || name == "sim.threads" || name == "sim.trace_ledger") continue;
        out += name + " = " + key.get(*this) + "\n";
    }
    return out;
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical_string()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ExperimentConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentConfig config;
    std::string section;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        try {
            if (line.front() == '[') {
                if (line.back() != ']') throw ConfigError("malformed section header");
                section = std::string(trim(line.substr(1, line.size() - 2)));
                if (section.empty()) throw ConfigError("empty section name");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty()) throw ConfigError("missing key before '='");
            const std::string dotted = section.empty() ? std::string(key) : section + "." + std::string(key);
            set_key(config, dotted, value, base_dir);
        } catch (const ConfigError& e) {
            if (e.line() > 0) throw;
            throw ConfigError(e.what(), line_no);
        } catch (const std::exception& e) {
            throw ConfigError(e.what(), line_no);
        }
    }
    config.validate();
    return config;
}

ExperimentConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str(), path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_override(ExperimentConfig& config, std::string_view dotted_key, std::string_view value) {
    set_key(config, dotted_key, value, {});
    config.validate();
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [name, key] : registry()) keys.push_back(name);
    return keys;
}

}  // namespace ltesched
