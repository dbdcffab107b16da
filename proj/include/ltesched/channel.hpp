#pragma once

#include <array>
#include <filesystem>
#include <string>

#include "ltesched/rng.hpp"

namespace ltesched {

inline constexpr int kMinCqi = 1;
inline constexpr int kMaxCqi = 15;

enum class Modulation { QPSK, QAM16, QAM64 };

/// CQI -> bits carried by one RB during one 1 ms subframe.
class McsTable {
public:
    struct Entry {
        Modulation modulation;
        double efficiency;  // bits per resource element
        int bits_per_rb;
    };

    /// 4-bit CQI efficiency ladder (QPSK/16QAM/64QAM) over 132 data resource
    /// elements per RB-subframe (12 subcarriers x 11 data symbols).
    static McsTable standard();

    /// CSV with `cqi,bits_per_rb` rows (header optional, `#` comments allowed).
    /// Modulation is inferred from the standard ladder. Throws ConfigError.
    static McsTable load(const std::filesystem::path& path);

    /// Throws ContractViolation for cqi outside 1..15.
    const Entry& entry(int cqi) const;

    const std::array<Entry, kMaxCqi>& entries() const noexcept { return entries_; }

    bool operator==(const McsTable& other) const noexcept;

private:
    explicit McsTable(std::array<Entry, kMaxCqi> entries);
    void check_monotone() const;

    std::array<Entry, kMaxCqi> entries_;
};

/// Bounded CQI random walk with reversion toward a per-bearer mean.
struct ChannelState {
    int cqi = 10;
    double mean_cqi = 10.0;
    double move_probability = 0.2;  // 0 freezes the channel
    double reversion = 1.0;         // pull toward mean_cqi, in [0, 1]
    Rng rng{0};
};

/// One +-1/0 step: moves with `move_probability`; when moving, goes up with
/// probability 0.5 + reversion * (mean - cqi) / 14, then clamps to [1, 15].
void cqi_step(ChannelState& state);

/// Long-run distribution of the walk started at round(mean); index c - 1 holds P(cqi = c).
std::array<double, kMaxCqi> stationary_cqi_distribution(double mean_cqi, double move_probability,
                                                        double reversion);

/// Same as cqi_step but with an explicit increment, exposed for clamp tests.
int apply_cqi_delta(int cqi, int delta);

int rb_capacity_bits(int cqi, const McsTable& mcs);

/// Rate the bearer would see if granted the whole band for the epoch.
double wideband_estimated_throughput(int cqi, int total_rbs, int subframes_per_epoch,
                                     double epoch_s, const McsTable& mcs);

/// ceil(backlog / per-RB capacity); 0 for an empty backlog.
int required_rbs(double eligible_backlog_bits, int cqi, const McsTable& mcs);

std::string modulation_name(Modulation m);

}  // namespace ltesched
