#pragma once

// Frequent serial episodes with per-edge inter-event interval constraints.
// An episode without intervals accepts any gap >= 0 between consecutive nodes.
//
// Each candidate owns a chain of node trackers. Tracker j keeps the
// sightings of its event type that close a constraint-satisfying chain back
// to node 1 (its tlist). A sighting of node N completes an occurrence; the
// count is incremented and every tlist of that candidate is cleared so the
// next occurrence starts strictly after this one.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "episodes/core.hpp"

namespace episodes {

struct SerialCountOptions {
    bool record_occurrences = false;
    /// Drop tlist entries that can no longer license a successor. Never changes counts.
    bool prune = true;
    /// Optional bound on the span (last minus first event time) of an occurrence.
    std::optional<double> expiry;
};

namespace detail {

struct TrackerEntry {
    double time;
    double start;  // time of the node-1 event of the best chain ending here
    std::size_t pos;
    std::vector<std::size_t> chain;  // positions of nodes 1..j (only when recording)
};

struct SerialCandidateState {
    std::vector<std::vector<TrackerEntry>> tlists;  // one per node
    std::size_t freq = 0;
    std::size_t completed_at = static_cast<std::size_t>(-1);
};

}  // namespace detail

/// Counts every candidate and returns one result per candidate, in input order.
inline std::vector<FrequentEpisodeResult> count_serial_all(const std::vector<Episode>& candidates,
                                                           const EventSequence& seq,
                                                           const SerialCountOptions& opts = {}) {
    struct NodeRef {
        std::size_t candidate;
        std::size_t node;
    };
    std::vector<std::vector<NodeRef>> waits(seq.alphabet().size());
    std::vector<detail::SerialCandidateState> state(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& ep = candidates[c];
        if (ep.kind != EpisodeKind::Serial) throw DomainError("count_serial needs serial episodes");
        ep.validate();
        state[c].tlists.resize(ep.size());
        // Highest index first, so a sighting is offered to later nodes before it
        // becomes available as an earlier node within the same event.
        for (std::size_t n = ep.size(); n-- > 0;) {
            if (ep.nodes[n] >= waits.size()) throw DomainError("candidate uses a type outside the alphabet");
            waits[ep.nodes[n]].push_back({c, n});
        }
    }

    if (opts.expiry && !(*opts.expiry > 0.0)) throw DomainError("expiry time must be positive");

    std::vector<FrequentEpisodeResult> out(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) out[c].episode = candidates[c];

    auto fits = [](const Episode& ep, std::size_t edge, double gap) {
        return ep.has_intervals() ? ep.intervals[edge].contains(gap) : gap >= -kTimeTolerance;
    };
    auto stale = [&](const Episode& ep, std::size_t edge, const detail::TrackerEntry& e, double t) {
        if (opts.expiry && t - e.start > *opts.expiry + kTimeTolerance) return true;
        return ep.has_intervals() && ep.intervals[edge].expired(t - e.time);
    };

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const double t = seq[i].time;
        for (const auto& ref : waits[seq[i].type]) {
            auto& st = state[ref.candidate];
            if (st.completed_at == i) continue;
            const auto& ep = candidates[ref.candidate];
            const std::size_t j = ref.node;
            const std::size_t last = ep.size() - 1;
            auto& own = st.tlists[j];

            if (opts.prune && j < last)
                std::erase_if(own, [&](const detail::TrackerEntry& e) { return stale(ep, j, e, t); });

            const detail::TrackerEntry* licensor = nullptr;
            if (j > 0) {
                auto& prev = st.tlists[j - 1];
                if (prev.empty()) continue;
                // Earliest-inserted licensor wins; under an expiry the latest start wins first.
                for (const auto& e : prev) {
                    if (!fits(ep, j - 1, t - e.time)) continue;
                    if (opts.expiry && t - e.start > *opts.expiry + kTimeTolerance) continue;
                    if (licensor == nullptr || (opts.expiry && e.start > licensor->start)) licensor = &e;
                    if (!opts.expiry) break;
                }
                if (licensor == nullptr) {
                    if (opts.prune) std::erase_if(prev, [&](const detail::TrackerEntry& e) { return stale(ep, j - 1, e, t); });
                    continue;
                }
            }

            detail::TrackerEntry entry{t, licensor ? licensor->start : t, i, {}};
            if (opts.record_occurrences) {
                if (licensor) entry.chain = licensor->chain;
                entry.chain.push_back(i);
            }
            if (opts.prune && j > 0) {
                // Entries past their window are dead for every future sighting too.
                auto& prev = st.tlists[j - 1];
                std::erase_if(prev, [&](const detail::TrackerEntry& e) { return stale(ep, j - 1, e, t); });
            }

            if (j == last) {
                ++st.freq;
                st.completed_at = i;
                if (opts.record_occurrences) out[ref.candidate].occurrences.push_back({std::move(entry.chain)});
                for (auto& tl : st.tlists) tl.clear();
            } else {
                own.push_back(std::move(entry));
            }
        }
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) out[c].count = state[c].freq;
    return out;
}

inline std::vector<FrequentEpisodeResult> count_serial(const std::vector<Episode>& candidates,
                                                       const EventSequence& seq, std::size_t min_count,
                                                       const SerialCountOptions& opts = {}) {
    auto all = count_serial_all(candidates, seq, opts);
    std::vector<FrequentEpisodeResult> out;
    for (auto& r : all)
        if (r.count >= min_count) out.push_back(std::move(r));
    return out;
}

inline std::vector<FrequentEpisodeResult> count_serial(const std::vector<Episode>& candidates,
                                                       const EventSequence& seq, double threshold_fraction,
                                                       const SerialCountOptions& opts = {}) {
    MiningConfig cfg;
    cfg.threshold_fraction = threshold_fraction;
    cfg.validate();
    return count_serial(candidates, seq, cfg.threshold_count(seq.size()), opts);
}

/// All 2-node candidates X -(iv]-> Y over the given types and candidate intervals.
inline std::vector<Episode> seed_serial_candidates(const std::vector<EventTypeId>& frequent_types,
                                                   const std::vector<IntervalConstraint>& interval_set) {
    if (interval_set.empty()) throw DomainError("candidate interval set is empty");
    validate_interval_set(interval_set);
    std::vector<Episode> out;
    out.reserve(frequent_types.size() * frequent_types.size() * interval_set.size());
    for (auto x : frequent_types)
        for (auto y : frequent_types)
            for (const auto& iv : interval_set) out.push_back(Episode{EpisodeKind::Serial, {x, y}, {iv}});
    return out;
}

/// Joins alpha and beta when alpha minus its first node equals beta minus its
/// last node (types and intervals). Only prefix/suffix subepisodes are
/// required to be frequent.
inline std::vector<Episode> generate_serial_candidates(const std::vector<Episode>& frequent_k) {
    if (frequent_k.empty()) return {};
    const std::size_t k = frequent_k.front().size();
    if (k < 2) throw DomainError("serial join needs episodes of at least two nodes; seed level 2 instead");
    using Key = std::pair<std::vector<EventTypeId>, std::vector<IntervalConstraint>>;
    std::map<Key, std::vector<std::size_t>> by_prefix;
    for (std::size_t b = 0; b < frequent_k.size(); ++b) {
        const auto& ep = frequent_k[b];
        if (ep.kind != EpisodeKind::Serial || ep.size() != k || ep.intervals.size() + 1 != k)
            throw DomainError("candidate generation needs interval-annotated serial episodes of one size");
        Key prefix{{ep.nodes.begin(), ep.nodes.end() - 1}, {ep.intervals.begin(), ep.intervals.end() - 1}};
        by_prefix[std::move(prefix)].push_back(b);
    }
    std::set<Episode> out;
    for (const auto& alpha : frequent_k) {
        Key suffix{{alpha.nodes.begin() + 1, alpha.nodes.end()}, {alpha.intervals.begin() + 1, alpha.intervals.end()}};
        auto it = by_prefix.find(suffix);
        if (it == by_prefix.end()) continue;
        for (auto b : it->second) {
            const auto& beta = frequent_k[b];
            Episode gamma = alpha;
            gamma.nodes.push_back(beta.nodes.back());
            gamma.intervals.push_back(beta.intervals.back());
            out.insert(std::move(gamma));
        }
    }
    return {out.begin(), out.end()};
}

/// Level-wise serial mining. Each (episode, interval vector) pair is a
/// separate candidate, so the reported intervals are the ones that made the
/// episode frequent.
inline MiningResult mine_serial(const EventSequence& seq, const MiningConfig& config) {
    config.validate();
    if (config.candidate_intervals.empty()) throw DomainError("serial mining needs candidate intervals");
    const std::size_t threshold = config.threshold_count(seq.size());
    SerialCountOptions opts;
    opts.record_occurrences = config.record_occurrences;
    opts.expiry = config.expiry;
    MiningResult result;

    // Level 1 is the type histogram.
    auto hist = seq.histogram();
    std::vector<EventTypeId> frequent_types;
    auto& level1 = result.levels[1];
    for (EventTypeId t = 0; t < hist.size(); ++t) {
        if (hist[t] < threshold) continue;
        frequent_types.push_back(t);
        FrequentEpisodeResult r{Episode::serial({t}), hist[t], {}};
        if (config.record_occurrences)
            for (std::size_t i = 0; i < seq.size(); ++i)
                if (seq[i].type == t) r.occurrences.push_back({{i}});
        level1.push_back(std::move(r));
    }
    if (config.max_size < 2) return result;

    auto candidates = seed_serial_candidates(frequent_types, config.candidate_intervals);
    for (std::size_t k = 2; k <= config.max_size && !candidates.empty(); ++k) {
        if (candidates.size() > config.level_candidate_budget) {
            candidates.resize(config.level_candidate_budget);
            result.truncated = true;
        }
        auto frequent = count_serial(candidates, seq, threshold, opts);
        std::vector<Episode> seed;
        seed.reserve(frequent.size());
        for (const auto& r : frequent) seed.push_back(r.episode);
        result.levels[k] = std::move(frequent);
        if (k == config.max_size) break;
        candidates = generate_serial_candidates(seed);
    }
    return result;
}

}  // namespace episodes
