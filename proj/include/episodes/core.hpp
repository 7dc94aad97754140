#pragma once

// Event and episode data model shared by every miner: alphabets, event
// sequences, interval constraints, episodes, occurrence records and the
// CSV event format.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace episodes {

/// Absolute tolerance (seconds) used by every time comparison.
inline constexpr double kTimeTolerance = 1e-9;

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::length_error {
  public:
    using std::length_error::length_error;
};

using EventTypeId = std::uint32_t;

/// Bijective label <-> dense id mapping.
class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(const std::vector<std::string>& labels) {
        for (const auto& l : labels) {
            if (find(l)) throw DomainError("duplicate event type label '" + l + "'");
            intern(l);
        }
    }

    EventTypeId intern(std::string_view label) {
        if (auto it = ids_.find(std::string(label)); it != ids_.end()) return it->second;
        auto id = static_cast<EventTypeId>(labels_.size());
        labels_.emplace_back(label);
        ids_.emplace(labels_.back(), id);
        return id;
    }

    std::optional<EventTypeId> find(std::string_view label) const {
        auto it = ids_.find(std::string(label));
        if (it == ids_.end()) return std::nullopt;
        return it->second;
    }

    EventTypeId id(std::string_view label) const {
        if (auto f = find(label)) return *f;
        throw DomainError("unknown event type '" + std::string(label) + "'");
    }

    const std::string& label(EventTypeId id) const {
        if (id >= labels_.size()) throw DomainError("event type id out of range");
        return labels_[id];
    }

    std::size_t size() const noexcept { return labels_.size(); }
    bool empty() const noexcept { return labels_.empty(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.labels_ == b.labels_; }

  private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, EventTypeId> ids_;
};

struct Event {
    EventTypeId type = 0;
    double time = 0.0;

    friend bool operator==(const Event&, const Event&) = default;
};

/// Time-ordered event list over a fixed alphabet. Immutable once built.
class EventSequence {
  public:
    EventSequence() = default;

    /// Sorts events by time (stable, so ties keep their input order).
    EventSequence(Alphabet alphabet, std::vector<Event> events)
        : alphabet_(std::move(alphabet)), events_(std::move(events)) {
        for (const auto& e : events_) {
            if (e.type >= alphabet_.size()) throw DomainError("event type outside the alphabet");
            if (!(e.time >= 0.0) || !std::isfinite(e.time))
                throw DomainError("event times must be finite and non-negative");
        }
        std::stable_sort(events_.begin(), events_.end(),
                         [](const Event& a, const Event& b) { return a.time < b.time; });
    }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<Event>& events() const noexcept { return events_; }
    std::size_t size() const noexcept { return events_.size(); }
    bool empty() const noexcept { return events_.empty(); }
    const Event& operator[](std::size_t i) const { return events_[i]; }

    /// Number of events of each type, indexed by id.
    std::vector<std::size_t> histogram() const {
        std::vector<std::size_t> h(alphabet_.size(), 0);
        for (const auto& e : events_) ++h[e.type];
        return h;
    }

  private:
    Alphabet alphabet_;
    std::vector<Event> events_;
};

/// Half-open gap constraint (low, high] in seconds.
struct IntervalConstraint {
    double low = 0.0;
    double high = 0.0;

    static IntervalConstraint make(double low, double high) {
        if (!(low >= 0.0) || !(high > low) || !std::isfinite(high))
            throw DomainError("interval requires 0 <= low < high");
        return {low, high};
    }

    bool contains(double gap) const noexcept {
        return gap > low + kTimeTolerance && gap <= high + kTimeTolerance;
    }

    /// True when no gap at or beyond `gap` can satisfy the constraint.
    bool expired(double gap) const noexcept { return gap > high + kTimeTolerance; }

    friend auto operator<=>(const IntervalConstraint&, const IntervalConstraint&) = default;
};

/// Checks the "sorted and pairwise disjoint" invariant of a candidate interval set.
inline void validate_interval_set(const std::vector<IntervalConstraint>& set) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        IntervalConstraint::make(set[i].low, set[i].high);
        if (i > 0 && set[i].low < set[i - 1].high - kTimeTolerance)
            throw DomainError("candidate intervals must be sorted and disjoint");
    }
}

enum class EpisodeKind { Serial, Parallel };

inline const char* to_string(EpisodeKind k) { return k == EpisodeKind::Serial ? "serial" : "parallel"; }

struct Episode {
    EpisodeKind kind = EpisodeKind::Serial;
    std::vector<EventTypeId> nodes;
    /// Serial only: empty, or one constraint per consecutive node pair.
    std::vector<IntervalConstraint> intervals;

    static Episode serial(std::vector<EventTypeId> nodes, std::vector<IntervalConstraint> intervals = {}) {
        Episode e{EpisodeKind::Serial, std::move(nodes), std::move(intervals)};
        e.validate();
        return e;
    }

    /// Node list is stored in canonical (ascending id) order.
    static Episode parallel(std::vector<EventTypeId> nodes) {
        std::sort(nodes.begin(), nodes.end());
        Episode e{EpisodeKind::Parallel, std::move(nodes), {}};
        e.validate();
        return e;
    }

    void validate() const {
        if (nodes.empty()) throw DomainError("episode needs at least one node");
        if (kind == EpisodeKind::Parallel) {
            if (!intervals.empty()) throw DomainError("parallel episodes carry no intervals");
            auto sorted = nodes;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw DomainError("parallel episodes cannot repeat event types");
        } else if (!intervals.empty() && intervals.size() != nodes.size() - 1) {
            throw DomainError("serial episode needs exactly |nodes|-1 intervals");
        }
        for (const auto& iv : intervals) IntervalConstraint::make(iv.low, iv.high);
    }

    std::size_t size() const noexcept { return nodes.size(); }
    bool has_intervals() const noexcept { return !intervals.empty(); }

    friend auto operator<=>(const Episode&, const Episode&) = default;
    friend bool operator==(const Episode&, const Episode&) = default;
};

struct OccurrenceRecord {
    /// One sequence position per episode node, in node order.
    std::vector<std::size_t> event_indices;

    std::size_t first() const { return *std::min_element(event_indices.begin(), event_indices.end()); }
    std::size_t last() const { return *std::max_element(event_indices.begin(), event_indices.end()); }

    friend bool operator==(const OccurrenceRecord&, const OccurrenceRecord&) = default;
};

/// Occurrences are non-overlapped when neither has an event between the other's first and last.
inline bool non_overlapped(const OccurrenceRecord& a, const OccurrenceRecord& b) {
    return a.last() < b.first() || b.last() < a.first();
}

struct FrequentEpisodeResult {
    Episode episode;
    std::size_t count = 0;
    std::vector<OccurrenceRecord> occurrences;  // empty unless recording was requested
};

struct MiningConfig {
    double threshold_fraction = 0.0;
    /// Absolute count threshold; overrides threshold_fraction when set.
    std::optional<std::size_t> min_count;
    std::optional<double> expiry;
    std::vector<IntervalConstraint> candidate_intervals;
    std::size_t max_size = 10;
    bool record_occurrences = false;
    /// Per-level cap on counted candidates; exceeding it truncates the level.
    std::size_t level_candidate_budget = 1'000'000;

    std::size_t threshold_count(std::size_t n_events) const {
        if (min_count) return std::max<std::size_t>(1, *min_count);
        double raw = static_cast<double>(n_events) * threshold_fraction;
        return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(raw - kTimeTolerance)));
    }

    void validate() const {
        if (!(threshold_fraction >= 0.0 && threshold_fraction <= 1.0))
            throw DomainError("threshold fraction must lie in [0,1]");
        if (expiry && !(*expiry > 0.0)) throw DomainError("expiry time must be positive");
        if (max_size == 0) throw DomainError("max_size must be positive");
        validate_interval_set(candidate_intervals);
    }
};

/// Frequent episodes per size, plus whether any level hit the candidate budget.
struct MiningResult {
    std::map<std::size_t, std::vector<FrequentEpisodeResult>> levels;
    bool truncated = false;

    std::size_t largest_size() const {
        std::size_t best = 0;
        for (const auto& [k, v] : levels)
            if (!v.empty()) best = std::max(best, k);
        return best;
    }

    const std::vector<FrequentEpisodeResult>& at(std::size_t k) const {
        static const std::vector<FrequentEpisodeResult> none;
        auto it = levels.find(k);
        return it == levels.end() ? none : it->second;
    }
};

/// True iff beta embeds in alpha: order-preserving for serial, as a subset for parallel.
/// Interval annotations are ignored.
inline bool is_subepisode(const Episode& beta, const Episode& alpha) {
    if (beta.kind != alpha.kind) throw DomainError("subepisode relation needs episodes of the same kind");
    if (beta.kind == EpisodeKind::Serial) {
        std::size_t j = 0;
        for (std::size_t i = 0; i < alpha.nodes.size() && j < beta.nodes.size(); ++i)
            if (alpha.nodes[i] == beta.nodes[j]) ++j;
        return j == beta.nodes.size();
    }
    auto a = alpha.nodes, b = beta.nodes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return std::includes(a.begin(), a.end(), b.begin(), b.end());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

inline std::string format_time(double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", t);
    return buf;
}

}  // namespace detail

inline constexpr std::string_view kEventsSchemaLine = "# episodes-events v1";
inline constexpr std::string_view kAlphabetDirective = "#alphabet:";

/// Reads "label,time" lines. '#' starts a comment; a "#alphabet:" line
/// pre-declares labels (so types without events survive a round trip).
inline EventSequence parse_event_sequence(std::istream& in) {
    Alphabet alphabet;
    std::vector<Event> events;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (line.substr(0, kAlphabetDirective.size()) == kAlphabetDirective) {
                for (auto label : detail::split(line.substr(kAlphabetDirective.size()), ',')) {
                    label = detail::trim(label);
                    if (!label.empty()) alphabet.intern(label);
                }
            }
            continue;
        }
        auto fields = detail::split(line, ',');
        if (fields.size() != 2) throw ParseError(line_no, "expected 'label,time'");
        auto label = detail::trim(fields[0]);
        if (label.empty()) throw ParseError(line_no, "empty event label");
        auto time = detail::parse_double(fields[1]);
        if (!time || !std::isfinite(*time)) throw ParseError(line_no, "malformed time '" + std::string(fields[1]) + "'");
        if (*time < 0.0)
            throw DomainError("line " + std::to_string(line_no) + ": negative event time");
        events.push_back({alphabet.intern(label), *time});
    }
    return EventSequence(std::move(alphabet), std::move(events));
}

inline EventSequence parse_event_sequence(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_event_sequence(in);
}

inline void write_event_sequence(std::ostream& out, const EventSequence& seq) {
    out << kEventsSchemaLine << '\n' << kAlphabetDirective;
    for (std::size_t i = 0; i < seq.alphabet().size(); ++i)
        out << (i ? "," : "") << seq.alphabet().label(static_cast<EventTypeId>(i));
    out << '\n';
    for (const auto& e : seq.events())
        out << seq.alphabet().label(e.type) << ',' << detail::format_time(e.time) << '\n';
}

inline EventSequence read_event_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event file '" + path + "'");
    return parse_event_sequence(in);
}

inline void write_event_file(const std::string& path, const EventSequence& seq) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write event file '" + path + "'");
    write_event_sequence(out, seq);
}

/// "A B C" for parallel, "A -> B -> C" (with "(l,h]" annotations when present) for serial.
inline std::string format_episode(const Episode& ep, const Alphabet& alphabet) {
    std::string s;
    for (std::size_t i = 0; i < ep.nodes.size(); ++i) {
        if (i > 0) {
            if (ep.kind == EpisodeKind::Parallel) {
                s += ' ';
            } else if (ep.has_intervals()) {
                char buf[80];
                std::snprintf(buf, sizeof buf, " -(%g,%g]-> ", ep.intervals[i - 1].low, ep.intervals[i - 1].high);
                s += buf;
            } else {
                s += " -> ";
            }
        }
        s += alphabet.label(ep.nodes[i]);
    }
    return s;
}

}  // namespace episodes
