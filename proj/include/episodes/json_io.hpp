#pragma once

// JSON forms of episodes, mining results, networks and pattern files.

#include <cstddef>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "episodes/core.hpp"
#include "episodes/simulator.hpp"

namespace episodes {

using json = nlohmann::ordered_json;

inline constexpr const char* kResultsSchema = "episodes-results v1";
inline constexpr const char* kNetworkSchema = "episodes-network v1";

inline json to_json(const Episode& ep, const Alphabet& alphabet) {
    json j;
    j["kind"] = to_string(ep.kind);
    j["nodes"] = json::array();
    for (auto t : ep.nodes) j["nodes"].push_back(alphabet.label(t));
    j["intervals"] = json::array();
    for (const auto& iv : ep.intervals) j["intervals"].push_back({iv.low, iv.high});
    return j;
}

/// Labels missing from `alphabet` are interned.
inline Episode episode_from_json(const json& j, Alphabet& alphabet) {
    const auto kind_s = j.at("kind").get<std::string>();
    EpisodeKind kind;
    if (kind_s == "serial") kind = EpisodeKind::Serial;
    else if (kind_s == "parallel") kind = EpisodeKind::Parallel;
    else throw DomainError("unknown episode kind '" + kind_s + "'");
    std::vector<EventTypeId> nodes;
    for (const auto& n : j.at("nodes")) nodes.push_back(alphabet.intern(n.get<std::string>()));
    std::vector<IntervalConstraint> ivs;
    if (j.contains("intervals"))
        for (const auto& iv : j.at("intervals")) ivs.push_back(IntervalConstraint::make(iv.at(0).get<double>(), iv.at(1).get<double>()));
    if (kind == EpisodeKind::Parallel) {
        if (!ivs.empty()) throw DomainError("parallel episodes carry no intervals");
        return Episode::parallel(std::move(nodes));
    }
    return Episode::serial(std::move(nodes), std::move(ivs));
}

inline json to_json(const FrequentEpisodeResult& r, const Alphabet& alphabet, bool with_occurrences = true) {
    json j;
    j["episode"] = to_json(r.episode, alphabet);
    j["count"] = r.count;
    if (with_occurrences) {
        j["occurrences"] = json::array();
        for (const auto& o : r.occurrences) j["occurrences"].push_back(o.event_indices);
    }
    return j;
}

inline FrequentEpisodeResult result_from_json(const json& j, Alphabet& alphabet) {
    FrequentEpisodeResult r;
    r.episode = episode_from_json(j.at("episode"), alphabet);
    r.count = j.at("count").get<std::size_t>();
    if (j.contains("occurrences"))
        for (const auto& o : j.at("occurrences")) r.occurrences.push_back({o.get<std::vector<std::size_t>>()});
    return r;
}

/// {"schema", "truncated", "levels": [{"size", "episodes": [...]}]}
inline json to_json(const MiningResult& m, const Alphabet& alphabet, bool with_occurrences = true) {
    json j;
    j["schema"] = kResultsSchema;
    j["truncated"] = m.truncated;
    j["levels"] = json::array();
    for (const auto& [k, level] : m.levels) {
        json l;
        l["size"] = k;
        l["episodes"] = json::array();
        for (const auto& r : level) l["episodes"].push_back(to_json(r, alphabet, with_occurrences));
        j["levels"].push_back(std::move(l));
    }
    return j;
}

inline MiningResult mining_result_from_json(const json& j, Alphabet& alphabet) {
    if (j.value("schema", "") != kResultsSchema) throw DomainError("not an episodes results file");
    MiningResult m;
    m.truncated = j.value("truncated", false);
    for (const auto& l : j.at("levels")) {
        auto& level = m.levels[l.at("size").get<std::size_t>()];
        for (const auto& e : l.at("episodes")) level.push_back(result_from_json(e, alphabet));
    }
    return m;
}

inline json to_json(const NetworkModel& net) {
    json j;
    j["schema"] = kNetworkSchema;
    j["neurons"] = json::array();
    for (std::size_t i = 0; i < net.size(); ++i)
        j["neurons"].push_back({{"label", net.labels[i]}, {"base_rate", net.base_rate[i]}, {"d", net.base_d[i]},
                                {"adjusted", static_cast<bool>(net.adjusted[i])}});
    j["synapses"] = json::array();
    for (const auto& s : net.synapses)
        j["synapses"].push_back({{"pre", net.labels[s.pre]}, {"post", net.labels[s.post]}, {"weight", s.weight},
                                 {"delay_steps", s.delay_steps}, {"strong", s.share > 0.0}});
    return j;
}

/// Pattern file: {"patterns": [{"kind", "groups": [["A"], ["B","C"]], "delays": [5]}],
/// "embedded": episode (optional)}. Neuron labels resolve against `labels`.
struct PatternFile {
    std::vector<PatternSpec> patterns;
    std::optional<Episode> embedded;  // over neuron ids
};

inline PatternFile pattern_file_from_json(const json& j, const std::vector<std::string>& labels) {
    Alphabet neurons(labels);
    PatternFile out;
    for (const auto& pj : j.at("patterns")) {
        PatternSpec spec;
        spec.kind = parse_pattern_kind(pj.value("kind", "order"));
        for (const auto& g : pj.at("groups")) {
            std::vector<std::size_t> group;
            for (const auto& n : g) group.push_back(neurons.id(n.get<std::string>()));
            spec.groups.push_back(std::move(group));
        }
        if (pj.contains("delays")) spec.delays = pj.at("delays").get<std::vector<std::size_t>>();
        spec.validate(labels.size());
        out.patterns.push_back(std::move(spec));
    }
    if (j.contains("embedded")) {
        Alphabet probe = neurons;
        out.embedded = episode_from_json(j.at("embedded"), probe);
        if (probe.size() != neurons.size()) throw DomainError("embedded episode references unknown neurons");
    }
    return out;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(0, path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace episodes
