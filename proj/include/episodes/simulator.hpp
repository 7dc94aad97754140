#pragma once

// Spike-train simulator: a network of inhomogeneous Poisson neurons whose
// per-interval rate is a sigmoid of delayed weighted input spikes, with
// refractory filtering, strong-connection pattern embedding and the null
// data generators used for significance testing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "episodes/core.hpp"

namespace episodes {

enum class ConnectionScheme { RandomFanout, BernoulliPairs, Full };

inline const char* to_string(ConnectionScheme s) {
    switch (s) {
        case ConnectionScheme::RandomFanout: return "random-fanout";
        case ConnectionScheme::BernoulliPairs: return "bernoulli-pairs";
        case ConnectionScheme::Full: return "full";
    }
    return "?";
}

inline ConnectionScheme parse_connection_scheme(const std::string& s) {
    if (s == "random-fanout") return ConnectionScheme::RandomFanout;
    if (s == "bernoulli-pairs") return ConnectionScheme::BernoulliPairs;
    if (s == "full") return ConnectionScheme::Full;
    throw DomainError("unknown connection scheme '" + s + "'");
}

struct SimParams {
    std::size_t n_neurons = 26;
    double dt = 0.001;
    double duration = 50.0;
    double lambda_normal = 20.0;
    double e_strong = 0.95;
    double beta = 0.9;
    double delta_lambda = 1.0;
    double t_refractory = 0.001;
    double alpha_adjust = 1.5;
    double c = 0.5;
    std::size_t synaptic_delay_steps = 5;
    ConnectionScheme scheme = ConnectionScheme::BernoulliPairs;
    std::uint64_t rng_seed = 0;

    // Null-model knobs.
    double null_rate_low = 10.0;
    double null_rate_high = 30.0;
    std::size_t null_groups = 5;
    std::size_t rate_block_steps = 50;

    std::size_t n_steps() const { return static_cast<std::size_t>(std::llround(duration / dt)); }

    void validate() const {
        if (n_neurons == 0) throw DomainError("n_neurons must be positive");
        if (!(dt > 0.0)) throw DomainError("dt must be positive");
        if (!(duration > 0.0)) throw DomainError("duration must be positive");
        if (!(lambda_normal >= 0.0)) throw DomainError("lambda_normal must be non-negative");
        if (!(e_strong > 0.0 && e_strong < 1.0)) throw DomainError("e_strong must lie in (0,1)");
        if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
        if (!(delta_lambda > 0.0)) throw DomainError("delta_lambda must be positive");
        if (!(t_refractory >= 0.0)) throw DomainError("t_refractory must be non-negative");
        if (!(alpha_adjust > 0.0)) throw DomainError("alpha_adjust must be positive");
        if (!(c >= 0.0)) throw DomainError("c must be non-negative");
        if (synaptic_delay_steps == 0) throw DomainError("synaptic delay must be at least one step");
        if (!(null_rate_low >= 0.0 && null_rate_high >= null_rate_low)) throw DomainError("bad null rate range");
        if (null_groups == 0) throw DomainError("null_groups must be positive");
        if (rate_block_steps == 0) throw DomainError("rate_block_steps must be positive");
    }
};

// Rate-law constants.

inline double lambda_m(double e_strong, double dt) {
    if (!(e_strong > 0.0 && e_strong < 1.0)) throw DomainError("e_strong must lie in (0,1)");
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    return -std::log(1.0 - e_strong) / dt;
}

inline double displacement_d(double lambda_m_val, double lambda_normal) {
    if (!(lambda_normal > 0.0) || !(lambda_m_val / lambda_normal > 1.0))
        throw DomainError("need lambda_m > lambda_normal > 0");
    return std::log(lambda_m_val / lambda_normal - 1.0);
}

inline double w_strong(double beta, double lambda_m_val, double lambda_normal, double delta_lambda) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
    if (!(delta_lambda > 0.0)) throw DomainError("delta_lambda must be positive");
    if (!(lambda_normal > 0.0) || !(lambda_m_val / lambda_normal > 1.0))
        throw DomainError("need lambda_m > lambda_normal > 0");
    return std::log(beta / (1.0 - beta) * (lambda_m_val / lambda_normal - 1.0)) / delta_lambda;
}

inline double sigmoid_rate(double lambda_m_val, double delta_lambda, double input, double d) {
    return lambda_m_val / (1.0 + std::exp(-delta_lambda * input + d));
}

inline double adjusted_rate(const SimParams& p) { return p.alpha_adjust * p.lambda_normal * (1.0 - p.e_strong); }

/// "A".."Z", then "AA", "AB", ...
inline std::string neuron_label(std::size_t j) {
    std::string s;
    ++j;
    while (j > 0) {
        --j;
        s.insert(s.begin(), static_cast<char>('A' + j % 26));
        j /= 26;
    }
    return s;
}

inline std::vector<std::string> neuron_labels(std::size_t n) {
    std::vector<std::string> out;
    for (std::size_t j = 0; j < n; ++j) out.push_back(neuron_label(j));
    return out;
}

/// Independent generator for (seed, stream); stream 0 builds networks, 1+j drives neuron j.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

struct Synapse {
    std::size_t pre = 0;
    std::size_t post = 0;
    double weight = 0.0;
    std::size_t delay_steps = 1;
    /// Strong edges: fraction of the target's w_strong carried by this edge (0 for random edges).
    double share = 0.0;
};

struct NetworkModel {
    std::vector<std::string> labels;
    std::vector<Synapse> synapses;
    std::vector<double> base_rate;  // zero-input rate per neuron, Hz
    std::vector<double> base_d;     // sigmoid displacement per neuron
    std::vector<bool> adjusted;

    std::size_t size() const noexcept { return labels.size(); }

    std::optional<std::size_t> find_synapse(std::size_t pre, std::size_t post) const {
        for (std::size_t s = 0; s < synapses.size(); ++s)
            if (synapses[s].pre == pre && synapses[s].post == post) return s;
        return std::nullopt;
    }

    std::size_t neuron(const std::string& label) const {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) throw DomainError("unknown neuron '" + label + "'");
        return static_cast<std::size_t>(it - labels.begin());
    }
};

inline NetworkModel empty_network(const SimParams& p) {
    p.validate();
    NetworkModel net;
    net.labels = neuron_labels(p.n_neurons);
    net.base_rate.assign(p.n_neurons, p.lambda_normal);
    net.adjusted.assign(p.n_neurons, false);
    const double lm = lambda_m(p.e_strong, p.dt);
    net.base_d.assign(p.n_neurons, p.lambda_normal > 0.0 ? displacement_d(lm, p.lambda_normal)
                                                          : std::numeric_limits<double>::infinity());
    return net;
}

/// Rate of `neuron` given its summed weighted delayed input.
inline double firing_rate(const NetworkModel& net, std::size_t neuron, double input, const SimParams& p) {
    return sigmoid_rate(lambda_m(p.e_strong, p.dt), p.delta_lambda, input, net.base_d.at(neuron));
}

inline NetworkModel build_network(const SimParams& p, std::mt19937_64& rng) {
    NetworkModel net = empty_network(p);
    const std::size_t n = p.n_neurons;
    auto weight = [&] {
        if (p.c == 0.0) return 0.0;
        return std::uniform_real_distribution<double>(-p.c, p.c)(rng);
    };
    auto add = [&](std::size_t pre, std::size_t post) {
        net.synapses.push_back({pre, post, weight(), p.synaptic_delay_steps, 0.0});
    };
    switch (p.scheme) {
        case ConnectionScheme::RandomFanout:
            for (std::size_t pre = 0; pre < n; ++pre) {
                std::vector<std::size_t> others;
                for (std::size_t q = 0; q < n; ++q)
                    if (q != pre) others.push_back(q);
                auto k = std::uniform_int_distribution<std::size_t>(0, others.size())(rng);
                std::shuffle(others.begin(), others.end(), rng);
                others.resize(k);
                std::sort(others.begin(), others.end());
                for (auto post : others) add(pre, post);
            }
            break;
        case ConnectionScheme::BernoulliPairs: {
            std::bernoulli_distribution coin(0.5);
            for (std::size_t pre = 0; pre < n; ++pre)
                for (std::size_t post = 0; post < n; ++post)
                    if (pre != post && coin(rng)) add(pre, post);
            break;
        }
        case ConnectionScheme::Full:
            for (std::size_t pre = 0; pre < n; ++pre)
                for (std::size_t post = 0; post < n; ++post)
                    if (pre != post) add(pre, post);
            break;
    }
    return net;
}

enum class PatternKind { Synchrony, Order, Synfire };

inline const char* to_string(PatternKind k) {
    switch (k) {
        case PatternKind::Synchrony: return "synchrony";
        case PatternKind::Order: return "order";
        case PatternKind::Synfire: return "synfire";
    }
    return "?";
}

inline PatternKind parse_pattern_kind(const std::string& s) {
    if (s == "synchrony") return PatternKind::Synchrony;
    if (s == "order") return PatternKind::Order;
    if (s == "synfire") return PatternKind::Synfire;
    throw DomainError("unknown pattern kind '" + s + "'");
}

/// Consecutive groups are fully connected with strong edges.
struct PatternSpec {
    PatternKind kind = PatternKind::Order;
    std::vector<std::vector<std::size_t>> groups;
    /// Per consecutive-group edge, in steps; empty means the network default.
    std::vector<std::size_t> delays;

    void validate(std::size_t n_neurons) const {
        for (const auto& g : groups) {
            if (g.empty()) throw DomainError("pattern groups must be nonempty");
            std::set<std::size_t> seen;
            for (auto j : g) {
                if (j >= n_neurons) throw DomainError("pattern references unknown neuron " + std::to_string(j));
                if (!seen.insert(j).second) throw DomainError("neuron repeated within a pattern group");
            }
        }
        if (kind == PatternKind::Order)
            for (const auto& g : groups)
                if (g.size() != 1) throw DomainError("order patterns use single-neuron groups");
        if (!delays.empty() && delays.size() + 1 != groups.size())
            throw DomainError("pattern needs one delay per consecutive group pair");
        for (auto d : delays)
            if (d == 0) throw DomainError("pattern delays must be at least one step");
    }
};

/// Re-derives every strong edge weight from its target's current base rate.
inline void refresh_strong_weights(NetworkModel& net, const SimParams& p) {
    const double lm = lambda_m(p.e_strong, p.dt);
    for (auto& s : net.synapses)
        if (s.share > 0.0) s.weight = s.share * w_strong(p.beta, lm, net.base_rate[s.post], p.delta_lambda);
}

/// Embeds several patterns at once. Members outside every pattern's head group
/// get the adjusted base rate; each strong edge carries 1/|source group| of
/// its target's w_strong so convergent input saturates only under synchrony.
inline NetworkModel embed_patterns(NetworkModel net, const std::vector<PatternSpec>& specs, const SimParams& p) {
    const double lm = lambda_m(p.e_strong, p.dt);
    for (const auto& spec : specs) {
        spec.validate(net.size());
        for (std::size_t g = 1; g < spec.groups.size(); ++g) {
            for (auto j : spec.groups[g]) {
                if (net.adjusted[j]) continue;
                net.adjusted[j] = true;
                net.base_rate[j] = adjusted_rate(p);
                net.base_d[j] = displacement_d(lm, net.base_rate[j]);
            }
        }
    }
    for (const auto& spec : specs) {
        for (std::size_t g = 0; g + 1 < spec.groups.size(); ++g) {
            const auto& src = spec.groups[g];
            const std::size_t delay = spec.delays.empty() ? p.synaptic_delay_steps : spec.delays[g];
            const double share = 1.0 / static_cast<double>(src.size());
            for (auto pre : src) {
                for (auto post : spec.groups[g + 1]) {
                    if (pre == post) throw DomainError("pattern edge would be a self-synapse");
                    if (auto s = net.find_synapse(pre, post)) {
                        net.synapses[*s].share = share;
                        net.synapses[*s].delay_steps = delay;
                    } else {
                        net.synapses.push_back({pre, post, 0.0, delay, share});
                    }
                }
            }
        }
    }
    refresh_strong_weights(net, p);
    return net;
}

inline NetworkModel embed_pattern(NetworkModel net, const PatternSpec& spec, const SimParams& p) {
    return embed_patterns(std::move(net), {spec}, p);
}

namespace detail {

/// Draws the arrivals of one neuron in [step*dt, (step+1)*dt) and applies the
/// refractory filter on the nanosecond grid. Returns the number of survivors.
inline std::size_t draw_interval(std::mt19937_64& rng, double rate, std::size_t step, const SimParams& p,
                                 std::int64_t refractory_ns, std::int64_t& last_ns, EventTypeId type,
                                 std::vector<Event>& out) {
    if (!(rate > 0.0)) return 0;
    std::exponential_distribution<double> gap(rate);
    const double start = static_cast<double>(step) * p.dt;
    const double end = static_cast<double>(step + 1) * p.dt;
    std::size_t kept = 0;
    for (double t = start + gap(rng); t < end; t += gap(rng)) {
        const std::int64_t ns = std::llround(t * 1e9);
        if (ns - last_ns < refractory_ns) continue;
        last_ns = ns;
        out.push_back({type, static_cast<double>(ns) / 1e9});
        ++kept;
    }
    return kept;
}

inline std::vector<std::mt19937_64> neuron_streams(std::uint64_t seed, std::size_t n) {
    std::vector<std::mt19937_64> rngs;
    rngs.reserve(n);
    for (std::size_t j = 0; j < n; ++j) rngs.push_back(make_stream(seed, 1 + j));
    return rngs;
}

inline EventSequence finish(std::vector<std::string> labels, std::vector<Event> events) {
    return EventSequence(Alphabet(labels), std::move(events));
}

}  // namespace detail

/// Runs the network for params.duration; neuron j uses stream 1+j of params.rng_seed.
inline EventSequence simulate(const NetworkModel& net, const SimParams& p) {
    p.validate();
    const std::size_t n = net.size();
    const std::size_t steps = p.n_steps();
    const double lm = lambda_m(p.e_strong, p.dt);
    const std::int64_t refractory_ns = std::llround(p.t_refractory * 1e9);

    std::vector<std::vector<const Synapse*>> incoming(n);
    std::size_t max_delay = 1;
    for (const auto& s : net.synapses) {
        if (s.pre >= n || s.post >= n) throw DomainError("synapse references unknown neuron");
        if (s.delay_steps == 0) throw DomainError("synaptic delay must be at least one step");
        incoming[s.post].push_back(&s);
        max_delay = std::max(max_delay, s.delay_steps);
    }
    const std::size_t ring = max_delay + 1;
    std::vector<std::vector<std::uint32_t>> counts(ring, std::vector<std::uint32_t>(n, 0));

    auto rngs = detail::neuron_streams(p.rng_seed, n);
    std::vector<std::int64_t> last_ns(n, std::numeric_limits<std::int64_t>::min() / 2);
    std::vector<Event> events;
    std::vector<Event> interval;

    for (std::size_t i = 0; i < steps; ++i) {
        auto& now = counts[i % ring];
        interval.clear();
        for (std::size_t j = 0; j < n; ++j) {
            double input = 0.0;
            for (const Synapse* s : incoming[j])
                if (i >= s->delay_steps) input += s->weight * counts[(i - s->delay_steps) % ring][s->pre];
            const double rate = sigmoid_rate(lm, p.delta_lambda, input, net.base_d[j]);
            now[j] = static_cast<std::uint32_t>(detail::draw_interval(rngs[j], rate, i, p, refractory_ns, last_ns[j],
                                                                      static_cast<EventTypeId>(j), interval));
        }
        std::stable_sort(interval.begin(), interval.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
        events.insert(events.end(), interval.begin(), interval.end());
    }
    return detail::finish(net.labels, std::move(events));
}

/// Piecewise-constant rates: rates[b][j] holds for steps [b*block_steps, (b+1)*block_steps).
struct RateSchedule {
    std::size_t block_steps = 1;
    std::vector<std::vector<double>> rates;

    double rate(std::size_t step, std::size_t neuron) const {
        auto b = std::min(step / block_steps, rates.size() - 1);
        return rates[b][neuron];
    }
};

/// Independent Poisson neurons following `schedule`, with the same refractory filter as simulate().
inline EventSequence simulate_rates(const RateSchedule& schedule, const SimParams& p) {
    p.validate();
    if (schedule.rates.empty() || schedule.block_steps == 0) throw DomainError("empty rate schedule");
    const std::size_t n = p.n_neurons;
    for (const auto& row : schedule.rates)
        if (row.size() != n) throw DomainError("rate schedule width must equal n_neurons");
    const std::int64_t refractory_ns = std::llround(p.t_refractory * 1e9);
    auto rngs = detail::neuron_streams(p.rng_seed, n);
    std::vector<std::int64_t> last_ns(n, std::numeric_limits<std::int64_t>::min() / 2);
    std::vector<Event> events, interval;
    for (std::size_t i = 0; i < p.n_steps(); ++i) {
        interval.clear();
        for (std::size_t j = 0; j < n; ++j)
            detail::draw_interval(rngs[j], schedule.rate(i, j), i, p, refractory_ns, last_ns[j],
                                  static_cast<EventTypeId>(j), interval);
        std::stable_sort(interval.begin(), interval.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
        events.insert(events.end(), interval.begin(), interval.end());
    }
    return detail::finish(neuron_labels(n), std::move(events));
}

enum class NullKind { RandomNetwork, FixedRates, GroupedFixedRates, VaryingRates, GroupedVaryingRates };

inline const char* to_string(NullKind k) {
    switch (k) {
        case NullKind::RandomNetwork: return "random-network";
        case NullKind::FixedRates: return "fixed-rates";
        case NullKind::GroupedFixedRates: return "grouped-fixed-rates";
        case NullKind::VaryingRates: return "varying-rates";
        case NullKind::GroupedVaryingRates: return "grouped-varying-rates";
    }
    return "?";
}

inline NullKind parse_null_kind(const std::string& s) {
    for (auto k : {NullKind::RandomNetwork, NullKind::FixedRates, NullKind::GroupedFixedRates, NullKind::VaryingRates,
                   NullKind::GroupedVaryingRates})
        if (s == to_string(k)) return k;
    throw DomainError("unknown null kind '" + s + "'");
}

/// Rate law of a rate-based null kind; neuron j belongs to group j % null_groups.
inline RateSchedule null_rate_schedule(NullKind kind, const SimParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> draw(p.null_rate_low, p.null_rate_high);
    const std::size_t n = p.n_neurons;
    const bool varying = kind == NullKind::VaryingRates || kind == NullKind::GroupedVaryingRates;
    const bool grouped = kind == NullKind::GroupedFixedRates || kind == NullKind::GroupedVaryingRates;
    if (kind == NullKind::RandomNetwork) throw DomainError("random-network nulls have no rate schedule");
    RateSchedule s;
    s.block_steps = varying ? p.rate_block_steps : std::max<std::size_t>(p.n_steps(), 1);
    const std::size_t blocks = varying ? (p.n_steps() + p.rate_block_steps - 1) / p.rate_block_steps : 1;
    for (std::size_t b = 0; b < std::max<std::size_t>(blocks, 1); ++b) {
        std::vector<double> row(n);
        if (grouped) {
            std::vector<double> group_rate(p.null_groups);
            for (auto& r : group_rate) r = draw(rng);
            for (std::size_t j = 0; j < n; ++j) row[j] = group_rate[j % p.null_groups];
        } else {
            for (auto& r : row) r = draw(rng);
        }
        s.rates.push_back(std::move(row));
    }
    return s;
}

/// One null dataset; stream 0 of params.rng_seed draws the network or rate law.
inline EventSequence generate_null_dataset(NullKind kind, const SimParams& p) {
    p.validate();
    auto rng = make_stream(p.rng_seed, 0);
    if (kind == NullKind::RandomNetwork) return simulate(build_network(p, rng), p);
    return simulate_rates(null_rate_schedule(kind, p, rng), p);
}

/// Network for a pattern run: random background plus the embedded patterns.
inline NetworkModel build_pattern_network(const SimParams& p, const std::vector<PatternSpec>& specs) {
    auto rng = make_stream(p.rng_seed, 0);
    return embed_patterns(build_network(p, rng), specs, p);
}

}  // namespace episodes
