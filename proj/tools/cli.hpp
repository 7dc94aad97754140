#pragma once

// Command-line front end. run() is the whole program so tests can drive it
// in-process.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "episodes/episodes.hpp"

namespace episodes::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Bad flag values discovered after parsing; reported like a parse error.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// JSON config files: nested objects become subcommand sections, arrays become repeated values.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        throw CLI::ConfigError("writing configs goes through resolved_config.json");
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& in) const override {
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw CLI::ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::ConfigError("config must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        collect(j, {}, items);
        return items;
    }

  private:
    static std::string scalar(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

    static void collect(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& out) {
        for (const auto& [key, v] : obj.items()) {
            if (v.is_object()) {
                auto p = parents;
                p.push_back(key);
                collect(v, p, out);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (v.is_array())
                for (const auto& e : v) item.inputs.push_back(scalar(e));
            else
                item.inputs.push_back(scalar(v));
            out.push_back(std::move(item));
        }
    }
};

namespace detail {

inline IntervalConstraint parse_interval(const std::string& s) {
    auto parts = episodes::detail::split(s, ':');
    if (parts.size() != 2) throw UsageError("interval '" + s + "' is not low:high");
    auto lo = episodes::detail::parse_double(parts[0]);
    auto hi = episodes::detail::parse_double(parts[1]);
    if (!lo || !hi) throw UsageError("interval '" + s + "' is not low:high");
    try {
        return IntervalConstraint::make(*lo, *hi);
    } catch (const DomainError& e) {
        throw UsageError("interval '" + s + "': " + e.what());
    }
}

inline std::vector<IntervalConstraint> parse_intervals(const std::vector<std::string>& raw) {
    std::vector<IntervalConstraint> out;
    for (const auto& s : raw) out.push_back(parse_interval(s));
    std::sort(out.begin(), out.end());
    try {
        validate_interval_set(out);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return out;
}

/// Every option of `sub` with its effective value, in declaration order.
inline json resolved_options(const CLI::App& sub) {
    json j = json::object();
    for (const CLI::Option* op : sub.get_options()) {
        const std::string name = op->get_single_name();
        if (name == "help" || name == "config" || name.empty()) continue;
        const bool is_flag = op->get_type_size() == 0;
        const bool multi = op->get_items_expected_max() > 1;
        if (is_flag) {
            if (op->count() > 0) j[name] = true;
            continue;
        }
        const auto& ex = op->get_excludes();
        if (op->count() == 0 && std::any_of(ex.begin(), ex.end(), [](const CLI::Option* o) { return o->count() > 0; }))
            continue;
        std::vector<std::string> vals;
        if (op->count() > 0) vals = op->results();
        else if (!op->get_default_str().empty() && op->get_default_str() != "[]") vals = {op->get_default_str()};
        if (vals.empty()) continue;
        if (multi) j[name] = vals;
        else j[name] = vals.back();
    }
    return j;
}

inline void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

inline std::ofstream open_out(const std::string& dir, const std::string& name) {
    std::ofstream f(fs::path(dir) / name);
    if (!f) throw std::runtime_error("cannot write '" + (fs::path(dir) / name).string() + "'");
    return f;
}

inline std::string fmt(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

template <class F>
auto usage_guard(F&& f) {
    try {
        return f();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
}

}  // namespace detail

struct ThresholdOpts {
    double threshold = 0.01;
    std::optional<std::size_t> min_count;
};

struct SimOpts {
    SimParams p;
    std::string scheme = "bernoulli-pairs";
    std::string pattern;
    std::string null_kind;
};

inline void add_sim_options(CLI::App* sub, SimOpts& o) {
    sub->add_option("--neurons", o.p.n_neurons, "Number of neurons")->check(CLI::PositiveNumber);
    sub->add_option("--duration", o.p.duration, "Simulated time (s)")->check(CLI::PositiveNumber);
    sub->add_option("--dt", o.p.dt, "Time step (s)")->check(CLI::PositiveNumber);
    sub->add_option("--lambda-normal", o.p.lambda_normal, "Zero-input rate (Hz)")->check(CLI::NonNegativeNumber);
    sub->add_option("--e-strong", o.p.e_strong, "Spike probability per step at saturation");
    sub->add_option("--beta", o.p.beta, "Fraction of saturation reached by one strong input");
    sub->add_option("--delta-lambda", o.p.delta_lambda, "Sigmoid slope")->check(CLI::PositiveNumber);
    sub->add_option("--refractory", o.p.t_refractory, "Refractory period (s)")->check(CLI::NonNegativeNumber);
    sub->add_option("--alpha", o.p.alpha_adjust, "Rate scaling for driven pattern members")->check(CLI::PositiveNumber);
    sub->add_option("--weight-bound", o.p.c, "Random weights drawn from [-c, c]")->check(CLI::NonNegativeNumber);
    sub->add_option("--delay-steps", o.p.synaptic_delay_steps, "Default synaptic delay (steps)")->check(CLI::PositiveNumber);
    sub->add_option("--scheme", o.scheme, "Connection scheme")
        ->check(CLI::IsMember({"random-fanout", "bernoulli-pairs", "full"}));
}

inline void finish_sim_options(SimOpts& o, std::uint64_t seed) {
    o.p.scheme = parse_connection_scheme(o.scheme);
    o.p.rng_seed = seed;
    detail::usage_guard([&] {
        o.p.validate();
        return 0;
    });
}

inline MiningConfig mining_config(const ThresholdOpts& t, std::size_t max_size) {
    MiningConfig cfg;
    cfg.threshold_fraction = t.threshold;
    cfg.min_count = t.min_count;
    cfg.max_size = max_size;
    return cfg;
}

/// Episode ids follow the level/episode order of the results file.
inline void write_raster(std::ostream& out, const EventSequence& seq, const MiningResult& m) {
    out << "# episodes-raster v1\ntime,neuron_id,episode_id,occurrence_id\n";
    std::size_t id = 0;
    for (const auto& [k, level] : m.levels) {
        for (const auto& r : level) {
            if (k >= 2) {
                for (std::size_t o = 0; o < r.occurrences.size(); ++o)
                    for (auto idx : r.occurrences[o].event_indices)
                        out << episodes::detail::format_time(seq[idx].time) << ',' << seq.alphabet().label(seq[idx].type)
                            << ',' << id << ',' << o << '\n';
            }
            ++id;
        }
    }
}

inline json results_json(const MiningResult& m, const EventSequence& seq, std::size_t threshold, bool occurrences) {
    json j = to_json(m, seq.alphabet(), occurrences);
    std::size_t id = 0;
    for (auto& l : j["levels"])
        for (auto& e : l["episodes"]) e["id"] = id++;
    j["events"] = seq.size();
    j["threshold_count"] = threshold;
    return j;
}

inline void print_summary(std::ostream& out, const MiningResult& m, const Alphabet& a) {
    for (const auto& [k, level] : m.levels) out << "size " << k << ": " << level.size() << " frequent\n";
    auto top = m.largest_size();
    if (top >= 2)
        for (const auto& r : m.at(top)) out << "  " << format_episode(r.episode, a) << " : " << r.count << '\n';
    if (m.truncated) out << "warning: candidate budget reached, some levels are truncated\n";
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Frequent episode discovery in event sequences", "episodes"};
    app.option_defaults()->always_capture_default();
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    std::string output = ".";
    std::uint64_t seed = 0;
    ThresholdOpts thr;
    std::size_t max_size = 10;
    double expiry = 0.0;
    std::vector<std::string> interval_strs;
    std::string events_path;
    bool record = false, raster = false;

    auto add_common = [&](CLI::App* sub) { sub->add_option("-o,--output", output, "Output directory"); };
    auto add_threshold = [&](CLI::App* sub) {
        auto* t = sub->add_option("--threshold", thr.threshold, "Frequency threshold as a fraction of events")
                      ->check(CLI::Range(0.0, 1.0));
        auto* c = sub->add_option("--min-count", thr.min_count, "Absolute count threshold");
        t->excludes(c);
        c->excludes(t);
    };
    auto add_events = [&](CLI::App* sub) {
        sub->add_option("events", events_path, "Events CSV (label,time)")->required()->check(CLI::ExistingFile);
    };

    // simulate
    SimOpts sim;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a spike train (events.csv + network.json)");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--seed", seed, "RNG seed");
    add_sim_options(simulate_cmd, sim);
    simulate_cmd->add_option("--pattern", sim.pattern, "Pattern JSON to embed")->check(CLI::ExistingFile);
    simulate_cmd->add_option("--null-kind", sim.null_kind, "Generate a null dataset instead")
        ->check(CLI::IsMember({"random-network", "fixed-rates", "grouped-fixed-rates", "varying-rates",
                               "grouped-varying-rates"}));

    // mine-parallel
    auto* par_cmd = app.add_subcommand("mine-parallel", "Frequent parallel episodes under an expiry time");
    add_events(par_cmd);
    add_common(par_cmd);
    par_cmd->add_option("--expiry", expiry, "Expiry time (s)")->required()->check(CLI::PositiveNumber);
    add_threshold(par_cmd);
    par_cmd->add_option("--max-size", max_size, "Largest episode size")->check(CLI::PositiveNumber);
    par_cmd->add_flag("--record", record, "Store occurrences in the results");
    par_cmd->add_flag("--raster", raster, "Write raster.csv with occurrence overlays");

    // mine-serial
    auto* ser_cmd = app.add_subcommand("mine-serial", "Frequent serial episodes with inter-event intervals");
    add_events(ser_cmd);
    add_common(ser_cmd);
    ser_cmd->add_option("--intervals", interval_strs, "Candidate interval low:high (repeatable)")->required();
    add_threshold(ser_cmd);
    ser_cmd->add_option("--max-size", max_size, "Largest episode size")->check(CLI::PositiveNumber);
    ser_cmd->add_flag("--record", record, "Store occurrences in the results");
    ser_cmd->add_flag("--raster", raster, "Write raster.csv with occurrence overlays");

    // mine-synfire
    auto* syn_cmd = app.add_subcommand("mine-synfire", "Synchronous groups chained in time");
    add_events(syn_cmd);
    add_common(syn_cmd);
    syn_cmd->add_option("--expiry", expiry, "Expiry time of the parallel phase (s)")->required()->check(CLI::PositiveNumber);
    syn_cmd->add_option("--intervals", interval_strs, "Candidate interval low:high (repeatable)")->required();
    add_threshold(syn_cmd);
    syn_cmd->add_option("--max-size", max_size, "Largest episode size")->check(CLI::PositiveNumber);

    // significance
    SimOpts sig_sim;
    std::string sig_kind = "parallel";
    std::size_t n_null = 20, n_pattern = 5, jobs = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::string> null_kinds;
    std::string sig_pattern;
    double safety = 2.0;
    std::size_t sig_max = 6;
    auto* sig_cmd = app.add_subcommand("significance", "Null vs pattern frequency statistics");
    add_common(sig_cmd);
    sig_cmd->add_option("--seed", seed, "RNG seed");
    add_sim_options(sig_cmd, sig_sim);
    sig_cmd->add_option("--pattern", sig_pattern, "Pattern JSON with an 'embedded' episode")->required()->check(CLI::ExistingFile);
    sig_cmd->add_option("--kind", sig_kind, "Episode kind")->check(CLI::IsMember({"parallel", "serial"}));
    sig_cmd->add_option("--expiry", expiry, "Expiry time for parallel mining (s)")->check(CLI::PositiveNumber);
    sig_cmd->add_option("--intervals", interval_strs, "Candidate interval low:high for serial mining (repeatable)");
    sig_cmd->add_option("--max-size", sig_max, "Largest episode size tabulated")->check(CLI::PositiveNumber);
    sig_cmd->add_option("--nulls", n_null, "Null datasets")->check(CLI::PositiveNumber);
    sig_cmd->add_option("--pattern-datasets", n_pattern, "Pattern datasets")->check(CLI::PositiveNumber);
    sig_cmd->add_option("--null-kinds", null_kinds, "Null kinds cycled over datasets (repeatable)")
        ->check(CLI::IsMember({"random-network", "fixed-rates", "grouped-fixed-rates", "varying-rates",
                               "grouped-varying-rates"}));
    sig_cmd->add_option("--safety", safety, "Threshold safety factor (>= 1)");
    sig_cmd->add_option("--jobs", jobs, "Concurrent datasets")->check(CLI::PositiveNumber);

    // similarity
    std::string manifest;
    std::size_t sim_size = 0, top = 20;
    auto* simil_cmd = app.add_subcommand("similarity", "Cross-similarity of serial episode sets");
    add_common(simil_cmd);
    simil_cmd->add_option("--manifest", manifest, "JSON list of {label, path} to mine-serial results")
        ->required()
        ->check(CLI::ExistingFile);
    simil_cmd->add_option("--size", sim_size, "Episode size compared")->required()->check(CLI::PositiveNumber);
    simil_cmd->add_option("--top", top, "Most frequent episodes kept per set")->check(CLI::PositiveNumber);

    // confidence
    std::string episode_str;
    auto* conf_cmd = app.add_subcommand("confidence", "freq(X->Y)/freq(X) along a serial episode");
    add_events(conf_cmd);
    add_common(conf_cmd);
    conf_cmd->add_option("--episode", episode_str, "Comma-separated labels, e.g. f8,g8")->required();
    conf_cmd->add_option("--intervals", interval_strs, "Edge interval low:high (one per edge, or one for all)");
    conf_cmd->add_option("--expiry", expiry, "Fallback edge window (0, expiry]")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        app.exit(e, out, err);
        return kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    auto write_resolved = [&] {
        json j;
        j[active->get_name()] = detail::resolved_options(*active);
        auto f = detail::open_out(output, "resolved_config.json");
        f << j.dump(2) << '\n';
    };

    try {
        const std::string verb = active->get_name();
        if (verb == "simulate") {
            finish_sim_options(sim, seed);
            std::optional<PatternFile> pf;
            if (!sim.pattern.empty())
                pf = detail::usage_guard([&] { return pattern_file_from_json(read_json_file(sim.pattern), neuron_labels(sim.p.n_neurons)); });
            if (!sim.null_kind.empty() && pf) throw UsageError("--pattern and --null-kind are exclusive");
            detail::ensure_dir(output);
            EventSequence seq;
            json net_json;
            if (!sim.null_kind.empty()) {
                const auto kind = parse_null_kind(sim.null_kind);
                seq = generate_null_dataset(kind, sim.p);
                if (kind == NullKind::RandomNetwork) {
                    auto rng = make_stream(sim.p.rng_seed, 0);
                    net_json = to_json(build_network(sim.p, rng));
                } else {
                    net_json = {{"schema", kNetworkSchema}, {"synapses", json::array()}};
                }
                net_json["null_kind"] = sim.null_kind;
            } else {
                auto net = build_pattern_network(sim.p, pf ? pf->patterns : std::vector<PatternSpec>{});
                seq = simulate(net, sim.p);
                net_json = to_json(net);
            }
            auto ev = detail::open_out(output, "events.csv");
            write_event_sequence(ev, seq);
            auto nj = detail::open_out(output, "network.json");
            nj << net_json.dump(2) << '\n';
            write_resolved();
            out << "simulated " << seq.size() << " spikes from " << sim.p.n_neurons << " neurons over "
                << sim.p.duration << " s\n";
            return kExitOk;
        }

        if (verb == "mine-parallel" || verb == "mine-serial") {
            auto seq = read_event_file(events_path);
            auto cfg = detail::usage_guard([&] {
                auto c = mining_config(thr, max_size);
                c.record_occurrences = record || raster;
                if (verb == "mine-parallel") c.expiry = expiry;
                else c.candidate_intervals = detail::parse_intervals(interval_strs);
                c.validate();
                return c;
            });
            auto result = verb == "mine-parallel" ? mine_parallel(seq, cfg) : mine_serial(seq, cfg);
            detail::ensure_dir(output);
            auto f = detail::open_out(output, "episodes.json");
            f << results_json(result, seq, cfg.threshold_count(seq.size()), cfg.record_occurrences).dump(2) << '\n';
            if (raster) {
                auto r = detail::open_out(output, "raster.csv");
                write_raster(r, seq, result);
            }
            write_resolved();
            print_summary(out, result, seq.alphabet());
            return kExitOk;
        }

        if (verb == "mine-synfire") {
            auto seq = read_event_file(events_path);
            MiningConfig pc, sc;
            detail::usage_guard([&] {
                pc = mining_config(thr, max_size);
                pc.expiry = expiry;
                pc.record_occurrences = true;
                sc = mining_config(thr, max_size);
                sc.candidate_intervals = detail::parse_intervals(interval_strs);
                pc.validate();
                sc.validate();
                return 0;
            });
            auto res = mine_synfire(seq, pc, sc);
            const auto& mixed = res.substituted.alphabet();
            json j;
            j["schema"] = "episodes-synfire v1";
            j["groups"] = json::array();
            for (const auto& g : res.groups) j["groups"].push_back(to_json(g, seq.alphabet(), false));
            j["chains"] = json::array();
            for (const auto& c : longest_chains(res))
                j["chains"].push_back({{"chain", format_chain(c.episode, mixed)}, {"episode", to_json(c.episode, mixed)}, {"count", c.count}});
            j["serial"] = to_json(res.serial, mixed, false);
            detail::ensure_dir(output);
            auto f = detail::open_out(output, "synfire.json");
            f << j.dump(2) << '\n';
            auto s = detail::open_out(output, "substituted.csv");
            write_event_sequence(s, res.substituted);
            write_resolved();
            for (const auto& g : res.groups) out << "group " << format_episode(g.episode, seq.alphabet()) << " : " << g.count << '\n';
            for (const auto& c : longest_chains(res)) out << "chain " << format_chain(c.episode, mixed, true) << " : " << c.count << '\n';
            return kExitOk;
        }

        if (verb == "significance") {
            finish_sim_options(sig_sim, seed);
            auto pf = detail::usage_guard([&] { return pattern_file_from_json(read_json_file(sig_pattern), neuron_labels(sig_sim.p.n_neurons)); });
            if (!pf.embedded) throw UsageError("pattern file needs an 'embedded' episode");
            EnsembleMining how;
            detail::usage_guard([&] {
                how.kind = sig_kind == "parallel" ? EpisodeKind::Parallel : EpisodeKind::Serial;
                how.config.max_size = sig_max;
                if (how.kind == EpisodeKind::Parallel) {
                    how.config.expiry = expiry > 0.0 ? expiry : 0.001;
                } else {
                    if (interval_strs.empty()) throw UsageError("serial significance needs --intervals");
                    how.config.candidate_intervals = detail::parse_intervals(interval_strs);
                }
                how.config.validate();
                if (!(safety >= 1.0)) throw UsageError("--safety must be at least 1");
                return 0;
            });
            NullEnsembleSpec ns;
            ns.n_datasets = n_null;
            if (!null_kinds.empty()) {
                ns.kinds.clear();
                for (const auto& k : null_kinds) ns.kinds.push_back(parse_null_kind(k));
            }
            PatternEnsembleSpec ps{pf.patterns, *pf.embedded, n_pattern};
            auto null_stats = null_ensemble_stats(ns, how, sig_sim.p, seed, jobs);
            auto pat_stats = pattern_ensemble_stats(ps, how, sig_sim.p, seed, jobs);
            auto thresholds = calibrate_threshold(null_stats, safety);

            detail::ensure_dir(output);
            auto csv = detail::open_out(output, "stats.csv");
            csv << "# episodes-stats v1\nensemble,size,avg,max,min,sample_size\n";
            auto rows_out = [&](const char* name, const FrequencyStats& s) {
                for (const auto& r : s.rows())
                    csv << name << ',' << r.size << ',' << detail::fmt(r.avg) << ',' << detail::fmt(r.max) << ','
                        << detail::fmt(r.min) << ',' << s.sample_size << '\n';
            };
            rows_out("null", null_stats);
            rows_out("pattern", pat_stats);
            auto stats_json = [](const FrequencyStats& s) {
                json a = json::array();
                for (const auto& r : s.rows())
                    a.push_back({{"size", r.size}, {"avg", r.avg}, {"max", r.max}, {"min", r.min}, {"samples", s.samples.at(r.size)}});
                return a;
            };
            json j;
            j["schema"] = "episodes-significance v1";
            j["null"] = stats_json(null_stats);
            j["pattern"] = stats_json(pat_stats);
            j["null_truncated"] = null_stats.truncated;
            j["thresholds"] = json::array();
            for (const auto& [k, t] : thresholds) j["thresholds"].push_back({{"size", k}, {"count", t}});
            j["p_values"] = json::array();
            for (const auto& r : pat_stats.rows()) {
                if (!null_stats.samples.count(r.size)) continue;
                auto pv = p_value(static_cast<std::size_t>(r.min), r.size, null_stats);
                j["p_values"].push_back({{"size", r.size}, {"observed_min", r.min}, {"p", pv.p}, {"exceedances", pv.exceedances}});
            }
            auto f = detail::open_out(output, "stats.json");
            f << j.dump(2) << '\n';
            write_resolved();
            out << "size  null_max  pattern_min\n";
            for (const auto& r : pat_stats.rows()) {
                if (!null_stats.samples.count(r.size)) continue;
                out << r.size << "  " << null_stats.row(r.size).max << "  " << r.min << '\n';
            }
            return kExitOk;
        }

        if (verb == "similarity") {
            auto m = read_json_file(manifest);
            if (!m.is_array()) throw UsageError("manifest must be a JSON array of {label, path}");
            const auto base = fs::path(manifest).parent_path();
            std::vector<EpisodeSet> sets;
            for (const auto& entry : m) {
                const auto label = entry.at("label").get<std::string>();
                fs::path p = entry.at("path").get<std::string>();
                if (p.is_relative()) p = base / p;
                Alphabet a;
                auto mined = mining_result_from_json(read_json_file(p.string()), a);
                sets.push_back(EpisodeSet::from_results(label, mined.at(sim_size), a, sim_size, top));
            }
            auto mat = cross_similarity(sets);
            detail::ensure_dir(output);
            auto f = detail::open_out(output, "matrix.csv");
            f << "# episodes-similarity v1\nlabel";
            for (const auto& s : sets) f << ',' << s.label;
            f << '\n';
            for (std::size_t i = 0; i < sets.size(); ++i) {
                f << sets[i].label;
                for (auto v : mat[i]) f << ',' << v;
                f << '\n';
            }
            auto o = detail::open_out(output, "ordering.csv");
            o << "# episodes-ordering v1\nposition,row_label,column_label\n";
            for (std::size_t i = 0; i < sets.size(); ++i)
                o << i << ',' << sets[i].label << ',' << sets[sets.size() - 1 - i].label << '\n';
            write_resolved();
            out << "compared " << sets.size() << " episode sets of size " << sim_size << '\n';
            return kExitOk;
        }

        if (verb == "confidence") {
            auto seq = read_event_file(events_path);
            Episode ep;
            MiningConfig cfg;
            detail::usage_guard([&] {
                std::vector<EventTypeId> nodes;
                for (auto l : episodes::detail::split(episode_str, ','))
                    nodes.push_back(seq.alphabet().id(episodes::detail::trim(l)));
                if (!interval_strs.empty() && interval_strs.size() + 1 == nodes.size()) {
                    std::vector<IntervalConstraint> ivs;
                    for (const auto& s : interval_strs) ivs.push_back(detail::parse_interval(s));
                    ep = Episode::serial(nodes, ivs);
                } else if (interval_strs.size() <= 1) {
                    ep = Episode::serial(nodes);
                    cfg.candidate_intervals = detail::parse_intervals(interval_strs);
                } else {
                    throw UsageError("give one interval per edge, or a single interval for all edges");
                }
                if (expiry > 0.0) cfg.expiry = expiry;
                return 0;
            });
            auto ratios = confidence_ratio(seq, ep, cfg);
            detail::ensure_dir(output);
            auto f = detail::open_out(output, "confidence.csv");
            f << "# episodes-confidence v1\nfrom,to,ratio\n";
            for (std::size_t i = 0; i < ratios.size(); ++i) {
                f << seq.alphabet().label(ep.nodes[i]) << ',' << seq.alphabet().label(ep.nodes[i + 1]) << ','
                  << (ratios[i] ? detail::fmt(*ratios[i]) : std::string("undefined")) << '\n';
                out << seq.alphabet().label(ep.nodes[i]) << " -> " << seq.alphabet().label(ep.nodes[i + 1]) << " : "
                    << (ratios[i] ? detail::fmt(*ratios[i]) : std::string("undefined")) << '\n';
            }
            write_resolved();
            return kExitOk;
        }
        throw UsageError("unknown verb");
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace episodes::cli
