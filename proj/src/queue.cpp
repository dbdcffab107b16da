#include "ltesched/queue.hpp"

#include <algorithm>

#include "ltesched/error.hpp"

namespace ltesched {

BearerQueue::BearerQueue(std::int64_t capacity_bytes) : capacity_bits_(capacity_bytes * 8) {
    if (capacity_bytes <= 0) throw ContractViolation("buffer capacity must be positive");
}

EnqueueResult BearerQueue::enqueue(const Packet& packet) {
    if (packet.size_bytes <= 0) throw ContractViolation("packet size must be positive");
    const std::int64_t bits = std::int64_t{packet.size_bytes} * 8;
    offered_bits_ += bits;
    if (queued_bits_ + bits > capacity_bits_) {
        dropped_bits_ += bits;
        ++dropped_packets_;
        return EnqueueResult::Dropped;
    }
    packets_.push_back(packet);
    queued_bits_ += bits;
    return EnqueueResult::Accepted;
}

std::int64_t BearerQueue::serve(std::int64_t budget_bits, double completion_ms,
                                std::vector<Delivery>& out) {
    std::int64_t sent = 0;
    while (budget_bits > 0 && !packets_.empty()) {
        const Packet& head = packets_.front();
        const std::int64_t left = std::int64_t{head.size_bytes} * 8 - head_sent_bits_;
        const std::int64_t chunk = std::min(left, budget_bits);
        budget_bits -= chunk;
        sent += chunk;
        if (chunk == left) {
            out.push_back({completion_ms - head.arrival_ms, head.size_bytes});
            packets_.pop_front();
            head_sent_bits_ = 0;
        } else {
            head_sent_bits_ += chunk;
        }
    }
    queued_bits_ -= sent;
    served_bits_ += sent;
    return sent;
}

double BearerQueue::hol_arrival_ms() const {
    if (packets_.empty()) throw ContractViolation("empty queue has no head-of-line packet");
    return packets_.front().arrival_ms;
}

}  // namespace ltesched
