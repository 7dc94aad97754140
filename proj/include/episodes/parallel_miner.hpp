#pragma once

// Frequent parallel episodes under an expiry-time constraint. One pass of
// the waits-list automaton counts non-overlapped innermost occurrences of a
// whole candidate set; candidates grow level-wise with the itemset join.

#include <algorithm>
#include <cstddef>
#include <set>
#include <vector>

#include "episodes/core.hpp"

namespace episodes {

namespace detail {

struct ParallelEntry {
    std::size_t candidate;
    std::size_t node;          // position within the candidate's node list
    bool waiting = true;       // type not seen since the last reset
    double init = 0.0;         // latest sighting time
    std::size_t init_pos = 0;  // latest sighting position
};

struct ParallelCandidateState {
    std::size_t counter = 0;  // entries with waiting == false
    std::size_t freq = 0;
    std::size_t first_entry = 0;
};

}  // namespace detail

/// Counts every candidate (no threshold) and returns one result per candidate, in input order.
inline std::vector<FrequentEpisodeResult> count_parallel_all(const std::vector<Episode>& candidates,
                                                             const EventSequence& seq, double expiry,
                                                             bool record_occurrences = false) {
    if (!(expiry > 0.0)) throw DomainError("expiry time must be positive");
    std::vector<detail::ParallelEntry> entries;
    std::vector<detail::ParallelCandidateState> state(candidates.size());
    std::vector<std::vector<std::size_t>> waits(seq.alphabet().size());
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& ep = candidates[c];
        if (ep.kind != EpisodeKind::Parallel) throw DomainError("count_parallel needs parallel episodes");
        ep.validate();
        if (ep.size() != candidates.front().size()) throw DomainError("candidates must share one size");
        state[c].first_entry = entries.size();
        for (std::size_t n = 0; n < ep.size(); ++n) {
            if (ep.nodes[n] >= waits.size()) throw DomainError("candidate uses a type outside the alphabet");
            waits[ep.nodes[n]].push_back(entries.size());
            entries.push_back({c, n});
        }
    }

    std::vector<FrequentEpisodeResult> out(candidates.size());
    for (std::size_t c = 0; c < candidates.size(); ++c) out[c].episode = candidates[c];

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const auto& ev = seq[i];
        for (auto e : waits[ev.type]) {
            auto& s = entries[e];
            auto& st = state[s.candidate];
            const std::size_t n_nodes = candidates[s.candidate].size();
            if (s.waiting) {
                s.waiting = false;
                ++st.counter;
            }
            s.init = ev.time;
            s.init_pos = i;
            if (st.counter == n_nodes) {
                for (std::size_t q = st.first_entry; q < st.first_entry + n_nodes; ++q) {
                    if (ev.time - entries[q].init > expiry + kTimeTolerance) {
                        --st.counter;
                        entries[q].waiting = true;
                    }
                }
            }
            if (st.counter == n_nodes) {
                ++st.freq;
                st.counter = 0;
                if (record_occurrences) {
                    OccurrenceRecord rec;
                    rec.event_indices.reserve(n_nodes);
                    for (std::size_t q = st.first_entry; q < st.first_entry + n_nodes; ++q)
                        rec.event_indices.push_back(entries[q].init_pos);
                    out[s.candidate].occurrences.push_back(std::move(rec));
                }
                for (std::size_t q = st.first_entry; q < st.first_entry + n_nodes; ++q) entries[q].waiting = true;
            }
        }
    }
    for (std::size_t c = 0; c < candidates.size(); ++c) out[c].count = state[c].freq;
    return out;
}

inline std::vector<FrequentEpisodeResult> count_parallel(const std::vector<Episode>& candidates,
                                                         const EventSequence& seq, double expiry,
                                                         std::size_t min_count, bool record_occurrences = false) {
    auto all = count_parallel_all(candidates, seq, expiry, record_occurrences);
    std::vector<FrequentEpisodeResult> out;
    for (auto& r : all)
        if (r.count >= min_count) out.push_back(std::move(r));
    return out;
}

/// Threshold given as a fraction of the sequence length.
inline std::vector<FrequentEpisodeResult> count_parallel(const std::vector<Episode>& candidates,
                                                         const EventSequence& seq, double expiry,
                                                         double threshold_fraction, bool record_occurrences = false) {
    MiningConfig cfg;
    cfg.threshold_fraction = threshold_fraction;
    cfg.validate();
    return count_parallel(candidates, seq, expiry, cfg.threshold_count(seq.size()), record_occurrences);
}

/// Joins frequent k-node episodes sharing their first k-1 nodes; keeps a
/// (k+1)-node candidate only if all of its k-node subsets are frequent.
inline std::vector<Episode> generate_parallel_candidates(const std::vector<Episode>& frequent_k) {
    if (frequent_k.empty()) return {};
    const std::size_t k = frequent_k.front().size();
    std::set<std::vector<EventTypeId>> known;
    for (const auto& ep : frequent_k) {
        if (ep.kind != EpisodeKind::Parallel || ep.size() != k)
            throw DomainError("candidate generation needs parallel episodes of one size");
        auto nodes = ep.nodes;
        std::sort(nodes.begin(), nodes.end());
        known.insert(std::move(nodes));
    }
    std::vector<std::vector<EventTypeId>> sorted(known.begin(), known.end());
    std::vector<Episode> out;
    std::vector<EventTypeId> probe;
    for (std::size_t a = 0; a < sorted.size(); ++a) {
        for (std::size_t b = a + 1; b < sorted.size(); ++b) {
            if (!std::equal(sorted[a].begin(), sorted[a].end() - 1, sorted[b].begin())) break;
            auto cand = sorted[a];
            cand.push_back(sorted[b].back());
            bool all_frequent = true;
            for (std::size_t drop = 0; drop + 2 < cand.size() && all_frequent; ++drop) {
                probe.clear();
                for (std::size_t i = 0; i < cand.size(); ++i)
                    if (i != drop) probe.push_back(cand[i]);
                all_frequent = known.count(probe) > 0;
            }
            if (all_frequent) out.push_back(Episode{EpisodeKind::Parallel, std::move(cand), {}});
        }
    }
    return out;
}

/// Level-1 candidates are all alphabet types; stops at config.max_size or when no candidates remain.
inline MiningResult mine_parallel(const EventSequence& seq, const MiningConfig& config) {
    config.validate();
    if (!config.expiry) throw DomainError("parallel mining needs an expiry time");
    const std::size_t threshold = config.threshold_count(seq.size());
    MiningResult result;
    std::vector<Episode> candidates;
    for (EventTypeId t = 0; t < seq.alphabet().size(); ++t) candidates.push_back(Episode::parallel({t}));
    for (std::size_t k = 1; k <= config.max_size && !candidates.empty(); ++k) {
        if (candidates.size() > config.level_candidate_budget) {
            candidates.resize(config.level_candidate_budget);
            result.truncated = true;
        }
        auto frequent = count_parallel(candidates, seq, *config.expiry, threshold, config.record_occurrences);
        std::vector<Episode> next_seed;
        next_seed.reserve(frequent.size());
        for (const auto& r : frequent) next_seed.push_back(r.episode);
        result.levels[k] = std::move(frequent);
        if (k == config.max_size) break;
        candidates = generate_parallel_candidates(next_seed);
    }
    return result;
}

}  // namespace episodes
