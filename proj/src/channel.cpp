#include "ltesched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ltesched/error.hpp"

namespace ltesched {

namespace {

constexpr int kDataResourceElementsPerRb = 12 * 11;

constexpr std::array<std::pair<Modulation, double>, kMaxCqi> kCqiLadder{{
    {Modulation::QPSK, 0.1523},  {Modulation::QPSK, 0.2344},  {Modulation::QPSK, 0.3770},
    {Modulation::QPSK, 0.6016},  {Modulation::QPSK, 0.8770},  {Modulation::QPSK, 1.1758},
    {Modulation::QAM16, 1.4766}, {Modulation::QAM16, 1.9141}, {Modulation::QAM16, 2.4063},
    {Modulation::QAM64, 2.7305}, {Modulation::QAM64, 3.3223}, {Modulation::QAM64, 3.9023},
    {Modulation::QAM64, 4.5234}, {Modulation::QAM64, 5.1152}, {Modulation::QAM64, 5.5547},
}};

}  // namespace

McsTable::McsTable(std::array<Entry, kMaxCqi> entries) : entries_(entries) { check_monotone(); }

McsTable McsTable::standard() {
    std::array<Entry, kMaxCqi> entries{};
    for (std::size_t i = 0; i < kCqiLadder.size(); ++i) {
        const auto [mod, eff] = kCqiLadder[i];
        entries[i] = {mod, eff, static_cast<int>(std::lround(eff * kDataResourceElementsPerRb))};
    }
    return McsTable(entries);
}

McsTable McsTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open MCS table '" + path.string() + "'");

    std::array<Entry, kMaxCqi> entries{};
    std::array<bool, kMaxCqi> seen{};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        int cqi = 0;
        int bits = 0;
        if (!(fields >> cqi >> bits)) {
            if (line.find("cqi") != std::string::npos) continue;  // header row
            throw ConfigError("MCS table: expected 'cqi,bits_per_rb'", line_no);
        }
        if (cqi < kMinCqi || cqi > kMaxCqi) throw ConfigError("MCS table: CQI out of range", line_no);
        if (bits <= 0) throw ConfigError("MCS table: bits per RB must be positive", line_no);
        const auto idx = static_cast<std::size_t>(cqi - 1);
        if (seen[idx]) throw ConfigError("MCS table: duplicate CQI", line_no);
        seen[idx] = true;
        entries[idx] = {kCqiLadder[idx].first,
                        static_cast<double>(bits) / kDataResourceElementsPerRb, bits};
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
        throw ConfigError("MCS table must define all 15 CQI values");
    }
    try {
        return McsTable(entries);
    } catch (const ContractViolation& e) {
        throw ConfigError(std::string("MCS table: ") + e.what());
    }
}

void McsTable::check_monotone() const {
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].bits_per_rb <= entries_[i - 1].bits_per_rb) {
            throw ContractViolation("bits per RB must strictly increase with CQI");
        }
    }
}

const McsTable::Entry& McsTable::entry(int cqi) const {
    if (cqi < kMinCqi || cqi > kMaxCqi) {
        throw ContractViolation("CQI must be in 1..15, got " + std::to_string(cqi));
    }
    return entries_[static_cast<std::size_t>(cqi - 1)];
}

bool McsTable::operator==(const McsTable& other) const noexcept {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].bits_per_rb != other.entries_[i].bits_per_rb) return false;
    }
    return true;
}

int apply_cqi_delta(int cqi, int delta) { return std::clamp(cqi + delta, kMinCqi, kMaxCqi); }

void cqi_step(ChannelState& state) {
    if (state.move_probability <= 0.0) return;
    if (uniform01(state.rng) >= state.move_probability) return;
    const double pull = state.reversion * (state.mean_cqi - state.cqi) / (kMaxCqi - kMinCqi);
    const double up = std::clamp(0.5 + pull, 0.0, 1.0);
    state.cqi = apply_cqi_delta(state.cqi, uniform01(state.rng) < up ? +1 : -1);
}

std::array<double, kMaxCqi> stationary_cqi_distribution(double mean_cqi, double move_probability,
                                                        double reversion) {
    std::array<double, kMaxCqi> p{};
    const int start = std::clamp(static_cast<int>(std::lround(mean_cqi)), kMinCqi, kMaxCqi);
    p[static_cast<std::size_t>(start - kMinCqi)] = 1.0;
    if (move_probability <= 0.0) return p;

    // Power iteration of the 15-state chain; cheap enough to run to full convergence.
    std::array<double, kMaxCqi> next{};
    for (int iter = 0; iter < 1'000'000; ++iter) {
        next.fill(0.0);
        for (int c = kMinCqi; c <= kMaxCqi; ++c) {
            const double mass = p[static_cast<std::size_t>(c - kMinCqi)];
            const double pull = reversion * (mean_cqi - c) / (kMaxCqi - kMinCqi);
            const double up = std::clamp(0.5 + pull, 0.0, 1.0);
            next[static_cast<std::size_t>(c - kMinCqi)] += mass * (1.0 - move_probability);
            next[static_cast<std::size_t>(apply_cqi_delta(c, +1) - kMinCqi)] += mass * move_probability * up;
            next[static_cast<std::size_t>(apply_cqi_delta(c, -1) - kMinCqi)] += mass * move_probability * (1.0 - up);
        }
        double change = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) change += std::abs(next[i] - p[i]);
        p = next;
        if (change < 1e-15) break;
    }
    return p;
}

int rb_capacity_bits(int cqi, const McsTable& mcs) { return mcs.entry(cqi).bits_per_rb; }

double wideband_estimated_throughput(int cqi, int total_rbs, int subframes_per_epoch,
                                     double epoch_s, const McsTable& mcs) {
    return static_cast<double>(rb_capacity_bits(cqi, mcs)) * total_rbs * subframes_per_epoch /
           epoch_s;
}

int required_rbs(double eligible_backlog_bits, int cqi, const McsTable& mcs) {
    if (eligible_backlog_bits <= 0.0) return 0;
    return static_cast<int>(std::ceil(eligible_backlog_bits / rb_capacity_bits(cqi, mcs)));
}

std::string modulation_name(Modulation m) {
    switch (m) {
        case Modulation::QPSK: return "QPSK";
        case Modulation::QAM16: return "16QAM";
        case Modulation::QAM64: return "64QAM";
    }
    return "?";
}

}  // namespace ltesched
