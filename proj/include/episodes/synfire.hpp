#pragma once

// Synfire chain discovery: synchronous groups found by parallel mining are
// collapsed into composite events, then serial mining strings them together.

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "episodes/core.hpp"
#include "episodes/parallel_miner.hpp"
#include "episodes/serial_miner.hpp"

namespace episodes {

/// Two substituted occurrences claim the same source event.
class ConflictError : public std::runtime_error {
  public:
    ConflictError(std::vector<std::size_t> indices, const std::string& what)
        : std::runtime_error(what), indices_(std::move(indices)) {}
    const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  private:
    std::vector<std::size_t> indices_;
};

struct CompositeEventMap {
    struct Replacement {
        std::string label;             // fresh type label
        double time = 0.0;             // synthesized timestamp
        std::vector<std::size_t> consumed;  // positions in the source sequence
        std::vector<Event> consumed_events; // source events, source alphabet ids
    };

    /// Fresh label -> source parallel episode (source alphabet ids).
    std::map<std::string, Episode> bindings;
    std::vector<Replacement> replacements;

    bool empty() const noexcept { return bindings.empty(); }
    bool is_composite(const std::string& label) const { return bindings.count(label) > 0; }

    /// Source events a replacement stands for.
    const std::vector<Event>& expand(std::size_t replacement) const {
        return replacements.at(replacement).consumed_events;
    }
};

namespace detail {

inline std::string composite_label(const Episode& ep, const Alphabet& alphabet) {
    std::string s = "[";
    for (std::size_t i = 0; i < ep.nodes.size(); ++i) {
        if (i) s += ' ';
        s += alphabet.label(ep.nodes[i]);
    }
    return s + "]";
}

}  // namespace detail

/// Replaces every recorded occurrence by one event of a fresh type at the
/// occurrence's span midpoint.
inline std::pair<EventSequence, CompositeEventMap> substitute_occurrences(
    const EventSequence& seq, const std::vector<FrequentEpisodeResult>& parallel_results) {
    CompositeEventMap map;
    const auto& src = seq.alphabet();

    std::vector<long> owner(seq.size(), -1);  // replacement claiming each position
    std::vector<std::string> fresh_labels;
    std::set<std::string> taken(src.labels().begin(), src.labels().end());

    for (const auto& r : parallel_results) {
        if (r.occurrences.empty()) continue;
        std::string label = detail::composite_label(r.episode, src);
        for (int n = 2; taken.count(label); ++n) label = detail::composite_label(r.episode, src) + "#" + std::to_string(n);
        taken.insert(label);
        fresh_labels.push_back(label);
        map.bindings.emplace(label, r.episode);

        for (const auto& occ : r.occurrences) {
            CompositeEventMap::Replacement rep;
            rep.label = label;
            rep.consumed = occ.event_indices;
            std::sort(rep.consumed.begin(), rep.consumed.end());
            std::vector<std::size_t> clashes;
            for (auto p : rep.consumed) {
                if (p >= seq.size()) throw DomainError("occurrence index outside the sequence");
                if (owner[p] >= 0) clashes.push_back(p);
            }
            if (!clashes.empty()) {
                std::string msg = "occurrences of different episodes share events at indices";
                for (auto p : clashes) msg += " " + std::to_string(p);
                throw ConflictError(std::move(clashes), msg);
            }
            double lo = seq[rep.consumed.front()].time, hi = lo;
            for (auto p : rep.consumed) {
                owner[p] = static_cast<long>(map.replacements.size());
                rep.consumed_events.push_back(seq[p]);
                lo = std::min(lo, seq[p].time);
                hi = std::max(hi, seq[p].time);
            }
            rep.time = (lo + hi) / 2.0;
            map.replacements.push_back(std::move(rep));
        }
    }
    if (map.replacements.empty()) return {seq, std::move(map)};

    // Types whose every event was consumed disappear from the output alphabet.
    auto before = seq.histogram();
    std::vector<std::size_t> after(src.size(), 0);
    for (std::size_t i = 0; i < seq.size(); ++i)
        if (owner[i] < 0) ++after[seq[i].type];
    Alphabet out_alphabet;
    std::vector<EventTypeId> remap(src.size(), 0);
    for (EventTypeId t = 0; t < src.size(); ++t)
        if (after[t] > 0 || before[t] == 0) remap[t] = out_alphabet.intern(src.label(t));
    for (const auto& l : fresh_labels) out_alphabet.intern(l);

    std::vector<Event> events;
    events.reserve(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (owner[i] < 0) {
            events.push_back({remap[seq[i].type], seq[i].time});
        } else {
            const auto& rep = map.replacements[static_cast<std::size_t>(owner[i])];
            if (rep.consumed.front() == i) events.push_back({out_alphabet.id(rep.label), rep.time});
        }
    }
    return {EventSequence(std::move(out_alphabet), std::move(events)), std::move(map)};
}

/// Frequent parallel episodes of size >= 2 with no frequent one-larger superset.
inline std::vector<FrequentEpisodeResult> maximal_parallel_episodes(const MiningResult& mined) {
    std::vector<FrequentEpisodeResult> out;
    for (const auto& [k, level] : mined.levels) {
        if (k < 2) continue;
        const auto& bigger = mined.at(k + 1);
        for (const auto& r : level) {
            bool covered = std::any_of(bigger.begin(), bigger.end(),
                                       [&](const FrequentEpisodeResult& b) { return is_subepisode(r.episode, b.episode); });
            if (!covered) out.push_back(r);
        }
    }
    return out;
}

struct SynfireResult {
    MiningResult parallel;
    std::vector<FrequentEpisodeResult> groups;  // maximal groups that were substituted
    EventSequence substituted;
    CompositeEventMap composites;
    MiningResult serial;  // over substituted.alphabet()
};

inline SynfireResult mine_synfire(const EventSequence& seq, MiningConfig parallel_cfg, const MiningConfig& serial_cfg) {
    if (!parallel_cfg.record_occurrences) throw DomainError("synfire mining needs recorded parallel occurrences");
    SynfireResult res;
    res.parallel = mine_parallel(seq, parallel_cfg);
    res.groups = maximal_parallel_episodes(res.parallel);
    auto [sub, map] = substitute_occurrences(seq, res.groups);
    res.substituted = std::move(sub);
    res.composites = std::move(map);
    res.serial = mine_serial(res.substituted, serial_cfg);
    return res;
}

/// Space-separated labels, composites already bracketed: "A [B C D] E".
/// With `with_intervals`, edges read "A -(0.004,0.006]-> [B C D]".
inline std::string format_chain(const Episode& ep, const Alphabet& alphabet, bool with_intervals = false) {
    if (with_intervals) return format_episode(ep, alphabet);
    std::string s;
    for (std::size_t i = 0; i < ep.nodes.size(); ++i) {
        if (i) s += ' ';
        s += alphabet.label(ep.nodes[i]);
    }
    return s;
}

/// Largest frequent serial episodes of a synfire run.
inline std::vector<FrequentEpisodeResult> longest_chains(const SynfireResult& r) {
    auto k = r.serial.largest_size();
    if (k == 0) return {};
    return r.serial.at(k);
}

}  // namespace episodes
