#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "ltesched/traffic.hpp"

namespace ltesched {

enum class EnqueueResult { Accepted, Dropped };

struct Delivery {
    double delay_ms;
    int size_bytes;
};

/// Tail-drop FIFO with byte-level continuation of the head packet.
/// All counters are in bits; offered == served + dropped + queued at all times.
class BearerQueue {
public:
    explicit BearerQueue(std::int64_t capacity_bytes);

    /// Accepts iff the packet fits entirely (boundary inclusive); otherwise drops it whole.
    EnqueueResult enqueue(const Packet& packet);

    /// Sends up to `budget_bits` in FIFO order. Every packet whose last bit is
    /// sent is delivered at `completion_ms`. Returns the bits sent.
    std::int64_t serve(std::int64_t budget_bits, double completion_ms, std::vector<Delivery>& out);

    bool empty() const noexcept { return packets_.empty(); }
    std::size_t packet_count() const noexcept { return packets_.size(); }
    std::int64_t capacity_bits() const noexcept { return capacity_bits_; }
    std::int64_t queued_bits() const noexcept { return queued_bits_; }
    double hol_arrival_ms() const;  // requires !empty()

    std::int64_t offered_bits() const noexcept { return offered_bits_; }
    std::int64_t served_bits() const noexcept { return served_bits_; }
    std::int64_t dropped_bits() const noexcept { return dropped_bits_; }
    std::int64_t dropped_packets() const noexcept { return dropped_packets_; }

private:
    std::deque<Packet> packets_;
    std::int64_t capacity_bits_;
    std::int64_t head_sent_bits_ = 0;
    std::int64_t queued_bits_ = 0;
    std::int64_t offered_bits_ = 0;
    std::int64_t served_bits_ = 0;
    std::int64_t dropped_bits_ = 0;
    std::int64_t dropped_packets_ = 0;
};

}  // namespace ltesched
