#pragma once

// Surrogate-data significance: mine ensembles of null datasets and of
// datasets with an embedded pattern, tabulate per-size frequency extremes,
// and derive p-values and count thresholds from them.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "episodes/core.hpp"
#include "episodes/parallel_miner.hpp"
#include "episodes/serial_miner.hpp"
#include "episodes/simulator.hpp"

namespace episodes {

struct FrequencyRow {
    std::size_t size = 0;
    double avg = 0.0;
    double max = 0.0;
    double min = 0.0;
};

/// Per-size statistic of each dataset (max over episodes for nulls, min over
/// embedded subepisodes for patterns), aggregated across the ensemble.
struct FrequencyStats {
    std::map<std::size_t, std::vector<std::size_t>> samples;  // size -> one value per dataset
    std::size_t sample_size = 0;
    bool truncated = false;

    std::vector<FrequencyRow> rows() const {
        std::vector<FrequencyRow> out;
        for (const auto& [k, v] : samples) {
            if (v.empty()) continue;
            FrequencyRow r{k, 0.0, static_cast<double>(v.front()), static_cast<double>(v.front())};
            double sum = 0.0;
            for (auto x : v) {
                sum += static_cast<double>(x);
                r.max = std::max(r.max, static_cast<double>(x));
                r.min = std::min(r.min, static_cast<double>(x));
            }
            r.avg = sum / static_cast<double>(v.size());
            out.push_back(r);
        }
        return out;
    }

    FrequencyRow row(std::size_t size) const {
        for (const auto& r : rows())
            if (r.size == size) return r;
        throw DomainError("no statistics for episode size " + std::to_string(size));
    }
};

/// How each dataset is mined.
struct EnsembleMining {
    EpisodeKind kind = EpisodeKind::Parallel;
    MiningConfig config;  // expiry for parallel, candidate_intervals for serial; max_size bounds the table
};

namespace detail {

/// Runs job(i) for i in [0, n) on up to `jobs` threads; rethrows the first failure.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& job) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

inline std::uint64_t dataset_seed(std::uint64_t seed, std::size_t index) {
    auto rng = make_stream(seed, 0x5eed0000ULL + index);
    return rng();
}

inline MiningResult mine_everything(const EventSequence& seq, const EnsembleMining& how) {
    MiningConfig cfg = how.config;
    cfg.min_count = 1;  // every episode that occurs at all
    cfg.record_occurrences = false;
    return how.kind == EpisodeKind::Parallel ? mine_parallel(seq, cfg) : mine_serial(seq, cfg);
}

}  // namespace detail

struct NullEnsembleSpec {
    std::vector<NullKind> kinds{NullKind::RandomNetwork, NullKind::FixedRates,   NullKind::RandomNetwork,
                                NullKind::GroupedFixedRates, NullKind::RandomNetwork, NullKind::VaryingRates,
                                NullKind::RandomNetwork, NullKind::GroupedVaryingRates};
    /// Weight bounds cycled over successive random-network datasets.
    std::vector<double> c_values{0.5, 0.75};
    std::size_t n_datasets = 20;
};

/// Kind and parameters of null dataset `index`.
inline std::pair<NullKind, SimParams> null_dataset_setup(const NullEnsembleSpec& spec, const SimParams& base,
                                                         std::uint64_t seed, std::size_t index) {
    if (spec.kinds.empty()) throw DomainError("null ensemble needs at least one kind");
    SimParams p = base;
    p.rng_seed = detail::dataset_seed(seed, index);
    const NullKind kind = spec.kinds[index % spec.kinds.size()];
    if (kind == NullKind::RandomNetwork && !spec.c_values.empty()) {
        std::size_t nth = 0;
        for (std::size_t i = 0; i < index; ++i)
            if (spec.kinds[i % spec.kinds.size()] == NullKind::RandomNetwork) ++nth;
        p.c = spec.c_values[nth % spec.c_values.size()];
    }
    return {kind, p};
}

inline FrequencyStats null_ensemble_stats(const NullEnsembleSpec& spec, const EnsembleMining& how,
                                          const SimParams& base, std::uint64_t seed, std::size_t jobs = 1) {
    if (spec.n_datasets == 0) throw DomainError("ensemble needs at least one dataset");
    how.config.validate();
    const std::size_t max_size = how.config.max_size;
    std::vector<std::vector<std::size_t>> per_dataset(spec.n_datasets);
    std::vector<char> truncated(spec.n_datasets, 0);
    detail::parallel_for(spec.n_datasets, jobs, [&](std::size_t d) {
        auto [kind, p] = null_dataset_setup(spec, base, seed, d);
        auto seq = generate_null_dataset(kind, p);
        auto mined = detail::mine_everything(seq, how);
        std::vector<std::size_t> row(max_size + 1, 0);
        for (std::size_t k = 1; k <= max_size; ++k)
            for (const auto& r : mined.at(k)) row[k] = std::max(row[k], r.count);
        per_dataset[d] = std::move(row);
        truncated[d] = mined.truncated;
    });
    FrequencyStats stats;
    stats.sample_size = spec.n_datasets;
    for (std::size_t d = 0; d < spec.n_datasets; ++d) {
        for (std::size_t k = 1; k <= max_size; ++k) stats.samples[k].push_back(per_dataset[d][k]);
        stats.truncated = stats.truncated || truncated[d];
    }
    return stats;
}

/// Every size-k subepisode of `pattern`: k-subsets for parallel, contiguous
/// runs (with their intervals) for serial.
inline std::vector<Episode> embedded_subepisodes(const Episode& pattern, std::size_t k) {
    std::vector<Episode> out;
    const std::size_t n = pattern.size();
    if (k == 0 || k > n) return out;
    if (pattern.kind == EpisodeKind::Serial) {
        for (std::size_t s = 0; s + k <= n; ++s) {
            Episode e{EpisodeKind::Serial, {pattern.nodes.begin() + s, pattern.nodes.begin() + s + k}, {}};
            if (pattern.has_intervals())
                e.intervals.assign(pattern.intervals.begin() + s, pattern.intervals.begin() + s + k - 1);
            out.push_back(std::move(e));
        }
        return out;
    }
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + k, true);
    do {
        std::vector<EventTypeId> nodes;
        for (std::size_t i = 0; i < n; ++i)
            if (pick[i]) nodes.push_back(pattern.nodes[i]);
        out.push_back(Episode::parallel(std::move(nodes)));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return out;
}

/// Minimum count over the size-k subepisodes of `pattern`, for k = 1..max_size.
inline std::vector<std::size_t> pattern_minima(const EventSequence& seq, const Episode& pattern, const EnsembleMining& how) {
    const std::size_t max_size = std::min(how.config.max_size, pattern.size());
    std::vector<std::size_t> row(how.config.max_size + 1, 0);
    const auto hist = seq.histogram();
    for (std::size_t k = 1; k <= max_size; ++k) {
        auto subs = embedded_subepisodes(pattern, k);
        std::vector<FrequentEpisodeResult> counted;
        if (k == 1) {
            for (const auto& e : subs) counted.push_back({e, hist.at(e.nodes[0]), {}});
        } else if (pattern.kind == EpisodeKind::Parallel) {
            counted = count_parallel_all(subs, seq, *how.config.expiry);
        } else {
            counted = count_serial_all(subs, seq);
        }
        std::size_t m = counted.empty() ? 0 : counted.front().count;
        for (const auto& r : counted) m = std::min(m, r.count);
        row[k] = m;
    }
    return row;
}

struct PatternEnsembleSpec {
    std::vector<PatternSpec> patterns;
    Episode embedded;  // the episode whose subepisodes are scored, over neuron ids
    std::size_t n_datasets = 5;
};

inline FrequencyStats pattern_ensemble_stats(const PatternEnsembleSpec& spec, const EnsembleMining& how,
                                             const SimParams& base, std::uint64_t seed, std::size_t jobs = 1) {
    if (spec.n_datasets == 0) throw DomainError("ensemble needs at least one dataset");
    how.config.validate();
    if (spec.embedded.kind != how.kind) throw DomainError("embedded episode kind must match the mining kind");
    if (how.kind == EpisodeKind::Parallel && !how.config.expiry) throw DomainError("parallel counting needs an expiry");
    if (how.kind == EpisodeKind::Serial && spec.embedded.size() > 1 && !spec.embedded.has_intervals())
        throw DomainError("embedded serial episode needs intervals");
    const std::size_t max_size = how.config.max_size;
    std::vector<std::vector<std::size_t>> per_dataset(spec.n_datasets);
    detail::parallel_for(spec.n_datasets, jobs, [&](std::size_t d) {
        SimParams p = base;
        p.rng_seed = detail::dataset_seed(seed ^ 0xa5a5a5a5ULL, d);
        auto seq = simulate(build_pattern_network(p, spec.patterns), p);
        per_dataset[d] = pattern_minima(seq, spec.embedded, how);
    });
    FrequencyStats stats;
    stats.sample_size = spec.n_datasets;
    for (std::size_t d = 0; d < spec.n_datasets; ++d)
        for (std::size_t k = 1; k <= std::min(max_size, spec.embedded.size()); ++k)
            stats.samples[k].push_back(per_dataset[d][k]);
    return stats;
}

struct PValue {
    double p = 1.0;
    std::size_t exceedances = 0;
};

/// Add-one surrogate p-value: (#datasets with statistic >= observed + 1) / (n + 1).
inline PValue p_value(std::size_t observed_freq, std::size_t size, const FrequencyStats& null_stats) {
    auto it = null_stats.samples.find(size);
    if (it == null_stats.samples.end() || it->second.empty())
        throw DomainError("null statistics do not cover episode size " + std::to_string(size));
    PValue out;
    for (auto x : it->second)
        if (x >= observed_freq) ++out.exceedances;
    out.p = static_cast<double>(out.exceedances + 1) / static_cast<double>(it->second.size() + 1);
    return out;
}

/// threshold_k = max(1, ceil(safety_factor * ensemble max at size k)).
inline std::map<std::size_t, std::size_t> calibrate_threshold(const FrequencyStats& null_stats, double safety_factor) {
    if (!(safety_factor >= 1.0)) throw DomainError("safety factor must be at least 1");
    std::map<std::size_t, std::size_t> out;
    for (const auto& r : null_stats.rows()) {
        auto t = static_cast<std::size_t>(std::ceil(safety_factor * r.max - kTimeTolerance));
        out[r.size] = std::max<std::size_t>(1, t);
    }
    return out;
}

/// freq(X -> Y) / freq(X) for each adjacent pair; nullopt when freq(X) = 0.
/// Edge constraints come from the episode's own intervals, else the hull of
/// cfg.candidate_intervals, else (0, expiry].
inline std::vector<std::optional<double>> confidence_ratio(const EventSequence& seq, const Episode& episode,
                                                           const MiningConfig& cfg) {
    if (episode.kind != EpisodeKind::Serial) throw DomainError("confidence needs a serial episode");
    episode.validate();
    std::vector<std::optional<double>> out;
    if (episode.size() < 2) return out;
    auto edge = [&](std::size_t i) {
        if (episode.has_intervals()) return episode.intervals[i];
        if (!cfg.candidate_intervals.empty())
            return IntervalConstraint::make(cfg.candidate_intervals.front().low, cfg.candidate_intervals.back().high);
        if (cfg.expiry) return IntervalConstraint::make(0.0, *cfg.expiry);
        throw DomainError("confidence needs episode intervals, candidate intervals or an expiry");
    };
    const auto hist = seq.histogram();
    std::vector<Episode> pairs;
    for (std::size_t i = 0; i + 1 < episode.size(); ++i)
        pairs.push_back(Episode{EpisodeKind::Serial, {episode.nodes[i], episode.nodes[i + 1]}, {edge(i)}});
    auto counted = count_serial_all(pairs, seq);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto x = hist.at(episode.nodes[i]);
        if (x == 0) out.push_back(std::nullopt);
        else out.push_back(static_cast<double>(counted[i].count) / static_cast<double>(x));
    }
    return out;
}

/// Serial interval-discovery check over three 2 ms bins.
inline EnsembleMining interval_discovery_preset(std::size_t max_size = 4) {
    EnsembleMining how;
    how.kind = EpisodeKind::Serial;
    how.config.candidate_intervals = {{0.002, 0.004}, {0.004, 0.006}, {0.006, 0.008}};
    how.config.max_size = max_size;
    return how;
}

/// Parallel synchrony check with a 1 ms expiry.
inline EnsembleMining synchrony_preset(std::size_t max_size = 6) {
    EnsembleMining how;
    how.kind = EpisodeKind::Parallel;
    how.config.expiry = 0.001;
    how.config.max_size = max_size;
    return how;
}

}  // namespace episodes
