#pragma once

// Similarity of two sets of N-node serial episodes: count common episodes,
// drop them, decompose the rest into their (N-1)-node prefix and suffix, and
// repeat down to single nodes. Sim = sum over levels of 2^i * n_i.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "episodes/core.hpp"

namespace episodes {

/// Serial episodes as label paths; interval annotations are not part of the identity.
struct EpisodeSet {
    using Path = std::vector<std::string>;

    std::string label;
    std::set<Path> episodes;
    std::size_t n = 0;

    EpisodeSet() = default;
    EpisodeSet(std::string label_, std::set<Path> eps) : label(std::move(label_)), episodes(std::move(eps)) {
        for (const auto& e : episodes) {
            if (e.empty()) throw DomainError("episode paths must be nonempty");
            if (n == 0) n = e.size();
            if (e.size() != n) throw DomainError("episode set '" + label + "' mixes episode sizes");
        }
    }

    /// The `top` highest-count serial episodes of size `size` (ties broken by episode order).
    static EpisodeSet from_results(std::string label, const std::vector<FrequentEpisodeResult>& results,
                                   const Alphabet& alphabet, std::size_t size, std::size_t top) {
        std::vector<const FrequentEpisodeResult*> pick;
        for (const auto& r : results)
            if (r.episode.kind == EpisodeKind::Serial && r.episode.size() == size) pick.push_back(&r);
        std::stable_sort(pick.begin(), pick.end(), [](auto* a, auto* b) { return a->count > b->count; });
        std::set<Path> eps;
        for (auto* r : pick) {
            if (eps.size() >= top) break;
            Path p;
            for (auto t : r->episode.nodes) p.push_back(alphabet.label(t));
            eps.insert(std::move(p));
        }
        EpisodeSet out(std::move(label), std::move(eps));
        if (out.n == 0) out.n = size;
        return out;
    }
};

namespace detail {

inline std::set<EpisodeSet::Path> decompose(const std::set<EpisodeSet::Path>& level) {
    std::set<EpisodeSet::Path> out;
    for (const auto& p : level) {
        if (p.size() < 2) continue;
        out.emplace(p.begin() + 1, p.end());
        out.emplace(p.begin(), p.end() - 1);
    }
    return out;
}

}  // namespace detail

inline std::uint64_t sim_score(const EpisodeSet& a, const EpisodeSet& b) {
    if (a.n != b.n && !a.episodes.empty() && !b.episodes.empty())
        throw DomainError("similarity needs episode sets of equal episode size");
    const std::size_t n = std::max(a.n, b.n);
    if (n >= 63) throw CapacityError("episode size too large for the similarity score");
    auto left = a.episodes, right = b.episodes;
    std::uint64_t score = 0;
    for (std::size_t i = n; i >= 1; --i) {
        std::set<EpisodeSet::Path> common;
        std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                              std::inserter(common, common.end()));
        score += (std::uint64_t{1} << i) * common.size();
        for (const auto& c : common) {
            left.erase(c);
            right.erase(c);
        }
        left = detail::decompose(left);
        right = detail::decompose(right);
    }
    return score;
}

/// M[i][j] = sim_score(sets[i], sets[j]).
inline std::vector<std::vector<std::uint64_t>> cross_similarity(const std::vector<EpisodeSet>& sets) {
    const std::size_t m = sets.size();
    std::vector<std::vector<std::uint64_t>> out(m, std::vector<std::uint64_t>(m, 0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) out[i][j] = out[j][i] = sim_score(sets[i], sets[j]);
    return out;
}

}  // namespace episodes
