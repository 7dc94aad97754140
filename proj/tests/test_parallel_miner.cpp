#include <gtest/gtest.h>

#include <set>

#include "episodes/oracle.hpp"
#include "episodes/parallel_miner.hpp"
#include "test_util.hpp"

using namespace episodes;
using testutil::mixed_sample;

namespace {

std::size_t count_one(const Episode& ep, const EventSequence& s, double tx, bool record = false) {
    return count_parallel_all({ep}, s, tx, record).front().count;
}

}  // namespace

TEST(CountParallel, MixedExpiry) {
    auto s = mixed_sample();
    auto ab = Episode::parallel({s.alphabet().id("A"), s.alphabet().id("B")});
    EXPECT_EQ(count_one(ab, s, 2.0), 1u);
    EXPECT_EQ(count_one(ab, s, 3.0), 2u);
}

TEST(CountParallel, EmptySequence) {
    EventSequence s(Alphabet({"A", "B"}), {});
    EXPECT_EQ(count_one(Episode::parallel({0, 1}), s, 1.0), 0u);
}

TEST(CountParallel, Errors) {
    auto s = mixed_sample();
    EXPECT_THROW(count_parallel_all({Episode::parallel({0, 1})}, s, 0.0), DomainError);
    EXPECT_THROW(count_parallel_all({Episode::parallel({0, 1})}, s, -1.0), DomainError);
    Episode repeated{EpisodeKind::Parallel, {0, 0}, {}};
    EXPECT_THROW(count_parallel_all({repeated}, s, 1.0), DomainError);
    EXPECT_THROW(count_parallel_all({Episode::serial({0, 1})}, s, 1.0), DomainError);
    EXPECT_THROW(count_parallel_all({Episode::parallel({0}), Episode::parallel({0, 1})}, s, 1.0), DomainError);
}

TEST(CountParallel, ThresholdFilters) {
    auto s = mixed_sample();
    auto A = s.alphabet().id("A"), B = s.alphabet().id("B"), C = s.alphabet().id("C");
    auto out = count_parallel({Episode::parallel({A, B}), Episode::parallel({A, C})}, s, 3.0, std::size_t{2});
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].episode, Episode::parallel({A, B}));
    auto frac = count_parallel({Episode::parallel({A, B})}, s, 3.0, 0.5);
    EXPECT_TRUE(frac.empty());  // ceil(7 * 0.5) = 4 > 2
}

TEST(CountParallel, RecordedOccurrencesAreValid) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        auto s = testutil::random_sequence(rng, 30, 4);
        auto ep = testutil::random_episode(rng, EpisodeKind::Parallel, 4, 3);
        const double tx = 1.0 + static_cast<double>(rng() % 4);
        auto r = count_parallel_all({ep}, s, tx, true).front();
        ASSERT_EQ(r.occurrences.size(), r.count);
        for (std::size_t i = 0; i < r.occurrences.size(); ++i) {
            const auto& o = r.occurrences[i];
            std::set<EventTypeId> types;
            for (std::size_t k = 0; k < o.event_indices.size(); ++k) {
                EXPECT_EQ(s[o.event_indices[k]].type, ep.nodes[k]);
                types.insert(s[o.event_indices[k]].type);
            }
            EXPECT_EQ(types.size(), ep.size());
            EXPECT_LE(s[o.last()].time - s[o.first()].time, tx + kTimeTolerance);
            if (i > 0) { EXPECT_TRUE(non_overlapped(r.occurrences[i - 1], o)); }
        }
    }
}

TEST(CountParallel, MatchesOracle) {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 1000; ++trial) {
        auto s = testutil::random_sequence(rng, 30, 5);
        auto ep = testutil::random_episode(rng, EpisodeKind::Parallel, 5, 3);
        const double tx = 0.5 + static_cast<double>(rng() % 8);
        ASSERT_EQ(count_one(ep, s, tx), oracle_count(ep, s, tx)) << "trial " << trial;
    }
}

TEST(CountParallel, SharedPassEqualsSeparatePasses) {
    std::mt19937_64 rng(8);
    auto s = testutil::random_sequence(rng, 40, 4);
    std::vector<Episode> all;
    for (EventTypeId a = 0; a < 4; ++a)
        for (EventTypeId b = a + 1; b < 4; ++b) all.push_back(Episode::parallel({a, b}));
    auto together = count_parallel_all(all, s, 2.0);
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(together[i].count, count_one(all[i], s, 2.0));
}

TEST(GenerateParallel, Join) {
    using V = std::vector<Episode>;
    auto P = [](std::vector<EventTypeId> n) { return Episode::parallel(std::move(n)); };
    EXPECT_EQ(generate_parallel_candidates(V{P({0, 1}), P({0, 2}), P({1, 2})}), V{P({0, 1, 2})});
    EXPECT_TRUE(generate_parallel_candidates(V{P({0, 1}), P({0, 2})}).empty());
    EXPECT_TRUE(generate_parallel_candidates(V{}).empty());
    auto from_singletons = generate_parallel_candidates(V{P({0}), P({1}), P({2})});
    EXPECT_EQ(from_singletons.size(), 3u);
}

TEST(GenerateParallel, AllSubsetsFrequent) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
        std::set<std::vector<EventTypeId>> freq;
        for (int i = 0; i < 15; ++i) {
            std::vector<EventTypeId> n{static_cast<EventTypeId>(rng() % 6), static_cast<EventTypeId>(rng() % 6),
                                       static_cast<EventTypeId>(rng() % 6)};
            std::sort(n.begin(), n.end());
            if (std::adjacent_find(n.begin(), n.end()) == n.end()) freq.insert(n);
        }
        std::vector<Episode> in;
        for (const auto& n : freq) in.push_back(Episode::parallel(n));
        auto out = generate_parallel_candidates(in);
        std::set<std::vector<EventTypeId>> seen;
        for (const auto& c : out) {
            ASSERT_EQ(c.size(), 4u);
            EXPECT_TRUE(std::is_sorted(c.nodes.begin(), c.nodes.end()));
            EXPECT_TRUE(seen.insert(c.nodes).second);
            for (std::size_t d = 0; d < 4; ++d) {
                auto sub = c.nodes;
                sub.erase(sub.begin() + static_cast<long>(d));
                EXPECT_TRUE(freq.count(sub));
            }
        }
    }
}

TEST(MineParallel, MixedLevels) {
    auto s = mixed_sample();
    MiningConfig cfg;
    cfg.expiry = 3.0;
    cfg.min_count = 2;
    auto m = mine_parallel(s, cfg);
    ASSERT_EQ(m.at(1).size(), 2u);
    EXPECT_EQ(m.at(1)[0].count, 2u);
    ASSERT_EQ(m.at(2).size(), 1u);
    EXPECT_EQ(m.at(2)[0].episode, Episode::parallel({s.alphabet().id("A"), s.alphabet().id("B")}));
    EXPECT_EQ(m.at(2)[0].count, 2u);
    EXPECT_TRUE(m.at(3).empty());
}

TEST(MineParallel, EmptySequenceAndMissingExpiry) {
    EventSequence s(Alphabet({"A"}), {});
    MiningConfig cfg;
    cfg.expiry = 1.0;
    EXPECT_EQ(mine_parallel(s, cfg).largest_size(), 0u);
    cfg.expiry.reset();
    EXPECT_THROW(mine_parallel(s, cfg), DomainError);
}

TEST(MineParallel, AntiMonotoneAndDeterministic) {
    std::mt19937_64 rng(99);
    auto s = testutil::random_sequence(rng, 200, 5);
    MiningConfig cfg;
    cfg.expiry = 3.0;
    cfg.min_count = 2;
    cfg.record_occurrences = true;
    auto m = mine_parallel(s, cfg);
    auto again = mine_parallel(s, cfg);
    for (const auto& [k, level] : m.levels) {
        ASSERT_EQ(level.size(), again.at(k).size());
        for (std::size_t i = 0; i < level.size(); ++i) {
            EXPECT_EQ(level[i].count, again.at(k)[i].count);
            EXPECT_EQ(level[i].occurrences, again.at(k)[i].occurrences);
        }
        if (k < 2) continue;
        for (const auto& r : level) {
            for (std::size_t d = 0; d < r.episode.size(); ++d) {
                auto sub = r.episode.nodes;
                sub.erase(sub.begin() + static_cast<long>(d));
                EXPECT_GE(count_one(Episode::parallel(sub), s, 3.0), r.count);
            }
        }
    }
}

TEST(MineParallel, BudgetTruncates) {
    std::mt19937_64 rng(2);
    auto s = testutil::random_sequence(rng, 100, 5);
    MiningConfig cfg;
    cfg.expiry = 3.0;
    cfg.min_count = 1;
    cfg.level_candidate_budget = 3;
    EXPECT_TRUE(mine_parallel(s, cfg).truncated);
}
