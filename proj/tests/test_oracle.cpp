#include <gtest/gtest.h>

#include "episodes/oracle.hpp"
#include "test_util.hpp"

using namespace episodes;
using testutil::mixed_sample;

TEST(Oracle, SerialWithoutConstraints) {
    auto s = mixed_sample();
    auto A = s.alphabet().id("A"), B = s.alphabet().id("B");
    EXPECT_EQ(oracle_count(Episode::serial({A, B}), s), 2u);
}

TEST(Oracle, SingleNodeIsHistogram) {
    auto s = mixed_sample();
    EXPECT_EQ(oracle_count(Episode::serial({s.alphabet().id("A")}), s), 2u);
    EXPECT_EQ(oracle_count(Episode::parallel({s.alphabet().id("E")}), s), 1u);
}

TEST(Oracle, IntervalRemovesOccurrences) {
    auto s = mixed_sample();
    auto A = s.alphabet().id("A"), B = s.alphabet().id("B");
    EXPECT_EQ(oracle_count(Episode::serial({A, B}, {{0, 1}}), s), 0u);
    EXPECT_EQ(oracle_count(Episode::serial({A, B}), s, std::nullopt, std::vector<IntervalConstraint>{{0, 1}}), 0u);
}

TEST(Oracle, ParallelExpiry) {
    auto s = mixed_sample();
    auto ep = Episode::parallel({s.alphabet().id("A"), s.alphabet().id("B")});
    EXPECT_EQ(oracle_count(ep, s, 2.0), 1u);
    EXPECT_EQ(oracle_count(ep, s, 3.0), 2u);
    EXPECT_EQ(oracle_count(ep, s), 2u);
}

TEST(Oracle, CapacityBound) {
    std::string text;
    for (int i = 0; i < 41; ++i) text += "A," + std::to_string(i) + "\n";
    auto s = parse_event_sequence(text);
    EXPECT_THROW(oracle_count(Episode::serial({0}), s), CapacityError);
}

TEST(Oracle, IntervalsOnParallelRejected) {
    auto s = mixed_sample();
    EXPECT_THROW(oracle_count(Episode::parallel({0, 1}), s, std::nullopt, std::vector<IntervalConstraint>{{0, 1}}),
                 DomainError);
}

TEST(Oracle, MaxNonOverlappedPicksBestSubset) {
    // Occurrences [0,5], [1,2], [3,4]: the two short ones beat the long one.
    std::vector<OccurrenceRecord> occ{{{0, 5}}, {{1, 2}}, {{3, 4}}};
    EXPECT_EQ(max_non_overlapped(occ, 6), 2u);
    EXPECT_EQ(max_non_overlapped({}, 6), 0u);
}

TEST(Oracle, ConstraintsOnlyRemove) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        auto s = testutil::random_sequence(rng, 20, 3);
        auto ep = testutil::random_episode(rng, EpisodeKind::Serial, 3, 3);
        auto free = oracle_count(ep, s);
        if (ep.size() > 1) { EXPECT_LE(oracle_count(ep, s, std::nullopt, testutil::random_intervals(rng, ep.size() - 1)), free); }
        EXPECT_LE(oracle_count(ep, s, 2.0), free);
    }
}

TEST(Oracle, EnumeratedOccurrencesRespectConstraints) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto s = testutil::random_sequence(rng, 15, 3);
        auto ep = testutil::random_episode(rng, EpisodeKind::Serial, 3, 3);
        std::vector<IntervalConstraint> ivs = ep.size() > 1 ? testutil::random_intervals(rng, ep.size() - 1)
                                                           : std::vector<IntervalConstraint>{};
        for (const auto& o : enumerate_occurrences(ep, s, std::nullopt, ivs)) {
            for (std::size_t k = 0; k < o.event_indices.size(); ++k) {
                EXPECT_EQ(s[o.event_indices[k]].type, ep.nodes[k]);
                if (k > 0) {
                    EXPECT_LT(o.event_indices[k - 1], o.event_indices[k]);
                    EXPECT_TRUE(ivs[k - 1].contains(s[o.event_indices[k]].time - s[o.event_indices[k - 1]].time));
                }
            }
        }
    }
}
