#include <gtest/gtest.h>

#include "ltesched/error.hpp"
#include "ltesched/queue.hpp"
#include "support/generators.hpp"

namespace ltesched {
namespace {

Packet pkt(double t, int bytes) { return {t, bytes, 0}; }

TEST(Queue, EnqueueBoundaries) {
    BearerQueue q(1000);
    EXPECT_EQ(q.enqueue(pkt(0, 100)), EnqueueResult::Accepted);
    EXPECT_EQ(q.enqueue(pkt(1, 900)), EnqueueResult::Accepted);  // exactly fills
    EXPECT_EQ(q.queued_bits(), 8000);
    EXPECT_EQ(q.enqueue(pkt(2, 1)), EnqueueResult::Dropped);
    EXPECT_EQ(q.dropped_bits(), 8);
    EXPECT_EQ(q.dropped_packets(), 1);
    EXPECT_EQ(q.packet_count(), 2u);
}

TEST(Queue, ServeZero) {
    BearerQueue q(1000);
    q.enqueue(pkt(0, 100));
    std::vector<Delivery> out;
    EXPECT_EQ(q.serve(0, 10, out), 0);
    EXPECT_TRUE(out.empty());
}

TEST(Queue, DrainRecordsAllDelays) {
    BearerQueue q(10000);
    q.enqueue(pkt(0, 100));
    q.enqueue(pkt(4, 200));
    std::vector<Delivery> out;
    EXPECT_EQ(q.serve(1'000'000, 10, out), 2400);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_DOUBLE_EQ(out[0].delay_ms, 10.0);
    EXPECT_DOUBLE_EQ(out[1].delay_ms, 6.0);
    EXPECT_TRUE(q.empty());
}

TEST(Queue, PartialPacketContinues) {
    BearerQueue q(10000);
    q.enqueue(pkt(0, 100));
    q.enqueue(pkt(1, 100));
    std::vector<Delivery> out;
    EXPECT_EQ(q.serve(1200, 10, out), 1200);  // 1.5 packets
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(q.packet_count(), 1u);
    EXPECT_EQ(q.queued_bits(), 400);
    EXPECT_DOUBLE_EQ(q.hol_arrival_ms(), 1.0);
    out.clear();
    EXPECT_EQ(q.serve(1200, 20, out), 400);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_DOUBLE_EQ(out[0].delay_ms, 19.0);
}

TEST(Queue, PartialHeadStillOccupiesOnlyItsRemainder) {
    BearerQueue q(200);
    q.enqueue(pkt(0, 200));
    std::vector<Delivery> out;
    q.serve(800, 10, out);
    EXPECT_EQ(q.enqueue(pkt(1, 100)), EnqueueResult::Accepted);
    EXPECT_EQ(q.enqueue(pkt(1, 1)), EnqueueResult::Dropped);
}

TEST(Queue, HolOfEmptyQueueIsAContractViolation) {
    BearerQueue q(10);
    EXPECT_THROW(q.hol_arrival_ms(), ContractViolation);
}

TEST(QueueProperty, ConservationAndCapacity) {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const auto cap = testing::uniform_int(rng, 1, 5000);
        BearerQueue q(cap);
        std::vector<Delivery> out;
        double t = 0.0;
        std::int64_t served = 0;
        for (int step = 0; step < 200; ++step) {
            t += 1.0;
            if (testing::uniform(rng, 0, 1) < 0.6) {
                q.enqueue(pkt(t, static_cast<int>(testing::uniform_int(rng, 1, 1500))));
            } else {
                served += q.serve(testing::uniform_int(rng, 0, 20000), t, out);
            }
            ASSERT_LE(q.queued_bits(), q.capacity_bits());
            ASSERT_EQ(q.offered_bits(), q.served_bits() + q.dropped_bits() + q.queued_bits());
            ASSERT_EQ(served, q.served_bits());
        }
        for (const auto& d : out) ASSERT_GE(d.delay_ms, 0.0);
    }
}

}  // namespace
}  // namespace ltesched
