#pragma once

// Exhaustive reference counter. Enumerates every constraint-satisfying
// occurrence and finds the largest pairwise non-overlapped subset by
// exploring, for each start position, both "skip" and "take" choices.
// Exponential-free but slow; meant for validating the streaming miners on
// small inputs.

#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "episodes/core.hpp"

namespace episodes {

inline constexpr std::size_t kOracleMaxEvents = 40;

namespace detail {

struct OracleSearch {
    const Episode& episode;
    const EventSequence& seq;
    std::optional<double> expiry;
    const std::vector<IntervalConstraint>& intervals;
    std::vector<OccurrenceRecord> found;

    bool span_ok(const std::vector<std::size_t>& idx) const {
        if (!expiry) return true;
        double lo = seq[idx.front()].time, hi = lo;
        for (auto i : idx) {
            lo = std::min(lo, seq[i].time);
            hi = std::max(hi, seq[i].time);
        }
        return hi - lo <= *expiry + kTimeTolerance;
    }

    void serial(std::vector<std::size_t>& chosen) {
        std::size_t k = chosen.size();
        if (k == episode.size()) {
            if (span_ok(chosen)) found.push_back({chosen});
            return;
        }
        std::size_t from = k == 0 ? 0 : chosen.back() + 1;
        for (std::size_t p = from; p < seq.size(); ++p) {
            if (seq[p].type != episode.nodes[k]) continue;
            if (k > 0 && !intervals.empty() && !intervals[k - 1].contains(seq[p].time - seq[chosen.back()].time))
                continue;
            chosen.push_back(p);
            serial(chosen);
            chosen.pop_back();
        }
    }

    // Positions are picked in increasing order; `used` marks which nodes are already matched.
    void parallel(std::vector<std::size_t>& positions, std::vector<std::size_t>& node_of, std::vector<bool>& used) {
        if (positions.size() == episode.size()) {
            std::vector<std::size_t> by_node(episode.size());
            for (std::size_t i = 0; i < positions.size(); ++i) by_node[node_of[i]] = positions[i];
            if (span_ok(positions)) found.push_back({by_node});
            return;
        }
        std::size_t from = positions.empty() ? 0 : positions.back() + 1;
        for (std::size_t p = from; p < seq.size(); ++p) {
            for (std::size_t n = 0; n < episode.size(); ++n) {
                if (used[n] || episode.nodes[n] != seq[p].type) continue;
                used[n] = true;
                positions.push_back(p);
                node_of.push_back(n);
                parallel(positions, node_of, used);
                node_of.pop_back();
                positions.pop_back();
                used[n] = false;
                break;  // parallel nodes have distinct types
            }
        }
    }
};

}  // namespace detail

/// Every occurrence of `episode` satisfying the optional expiry and per-edge intervals.
/// `intervals`, when given, replaces the episode's own annotations.
inline std::vector<OccurrenceRecord> enumerate_occurrences(const Episode& episode, const EventSequence& seq,
                                                           std::optional<double> expiry = std::nullopt,
                                                           std::optional<std::vector<IntervalConstraint>> intervals =
                                                               std::nullopt) {
    if (seq.size() > kOracleMaxEvents)
        throw CapacityError("exhaustive counting is limited to " + std::to_string(kOracleMaxEvents) + " events");
    const auto& ivs = intervals ? *intervals : episode.intervals;
    if (episode.kind == EpisodeKind::Parallel && !ivs.empty())
        throw DomainError("interval constraints apply to serial episodes only");
    if (episode.kind == EpisodeKind::Serial && !ivs.empty() && ivs.size() + 1 != episode.size())
        throw DomainError("serial episode needs exactly |nodes|-1 intervals");
    detail::OracleSearch search{episode, seq, expiry, ivs, {}};
    std::vector<std::size_t> chosen;
    if (episode.kind == EpisodeKind::Serial) {
        search.serial(chosen);
    } else {
        std::vector<std::size_t> node_of;
        std::vector<bool> used(episode.size(), false);
        search.parallel(chosen, node_of, used);
    }
    return std::move(search.found);
}

/// Size of the largest pairwise non-overlapped set of occurrences.
inline std::size_t max_non_overlapped(const std::vector<OccurrenceRecord>& occurrences, std::size_t n_events) {
    // Only the [first, last] extent of an occurrence matters for overlap.
    std::vector<std::set<std::size_t>> ends_by_start(n_events);
    for (const auto& o : occurrences) ends_by_start[o.first()].insert(o.last());
    // best[p]: optimum using only occurrences that start at or after p.
    std::vector<std::size_t> best(n_events + 1, 0);
    for (std::size_t p = n_events; p-- > 0;) {
        std::size_t skip = best[p + 1];
        std::size_t take = 0;
        for (auto end : ends_by_start[p]) take = std::max(take, 1 + best[end + 1]);
        best[p] = std::max(skip, take);
    }
    return best[0];
}

inline std::size_t oracle_count(const Episode& episode, const EventSequence& seq,
                                std::optional<double> expiry = std::nullopt,
                                std::optional<std::vector<IntervalConstraint>> intervals = std::nullopt) {
    auto occ = enumerate_occurrences(episode, seq, expiry, std::move(intervals));
    return max_non_overlapped(occ, seq.size());
}

}  // namespace episodes
