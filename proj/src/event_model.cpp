#include "gar/event_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <tuple>

#include "gar/error.hpp"

namespace gar {

std::string_view to_string(SmartObjectKind kind) {
    return kind == SmartObjectKind::Actuator ? "Actuator" : "PervasiveSensor";
}

SmartObjectKind parse_smart_object_kind(std::string_view text) {
    if (text == "Actuator" || text == "actuator") return SmartObjectKind::Actuator;
    if (text == "PervasiveSensor" || text == "sensor" || text == "pervasive_sensor") {
        return SmartObjectKind::PervasiveSensor;
    }
    throw Error(ErrorCode::Parse, "unknown smart object kind '" + std::string(text) + "'");
}

bool event_order(const Event& a, const Event& b) {
    return std::tie(a.start_time, a.end_time, a.label) < std::tie(b.start_time, b.end_time, b.label);
}

std::string SourceSpec::label_for_state(std::string_view state) const {
    return label_prefix + std::string(state);
}

std::string SourceSpec::label_for_level(std::size_t level) const {
    return label_prefix + "_Level" + std::to_string(level);
}

std::vector<std::string> SourceSpec::labels() const {
    std::vector<std::string> out;
    if (numeric()) {
        for (std::size_t level = 1; level <= thresholds.size() + 1; ++level) {
            out.push_back(label_for_level(level));
        }
    } else {
        for (const auto& s : states) out.push_back(label_for_state(s));
    }
    return out;
}

SourceRegistry::SourceRegistry(std::vector<SourceSpec> specs) {
    for (auto& s : specs) add(std::move(s));
}

void SourceRegistry::add(SourceSpec spec) {
    if (spec.id.empty()) throw Error(ErrorCode::InvalidArgument, "source id must not be empty");
    if (sources_.contains(spec.id)) {
        throw Error(ErrorCode::InvalidArgument, "duplicate source '" + spec.id + "'");
    }
    if (spec.context.empty()) {
        throw Error(ErrorCode::InvalidArgument, "source '" + spec.id + "' has no context");
    }
    if (spec.kind == SmartObjectKind::Actuator && spec.states.empty()) {
        throw Error(ErrorCode::InvalidArgument, "actuator '" + spec.id + "' declares no states");
    }
    if (spec.window == 0) {
        throw Error(ErrorCode::InvalidArgument, "source '" + spec.id + "' has window 0");
    }
    for (std::size_t i = 1; i < spec.thresholds.size(); ++i) {
        if (!(spec.thresholds[i - 1] < spec.thresholds[i])) {
            throw Error(ErrorCode::InvalidArgument,
                        "thresholds of '" + spec.id + "' are not strictly increasing");
        }
    }
    for (const auto& label : spec.labels()) {
        if (label.find_first_of("(), \t\n") != std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "event label '" + label + "' contains a reserved character");
        }
        auto [it, inserted] = label_owner_.emplace(label, spec.id);
        if (!inserted) {
            throw Error(ErrorCode::InvalidArgument,
                        "label '" + label + "' published by both '" + it->second + "' and '" + spec.id + "'");
        }
    }
    auto id = spec.id;
    sources_.emplace(std::move(id), std::move(spec));
}

const SourceSpec& SourceRegistry::at(std::string_view source_id) const {
    if (const auto* s = find(source_id)) return *s;
    throw Error(ErrorCode::UnknownSource, "source '" + std::string(source_id) + "' is not registered");
}

const SourceSpec* SourceRegistry::find(std::string_view source_id) const {
    auto it = sources_.find(source_id);
    return it == sources_.end() ? nullptr : &it->second;
}

const SourceSpec* SourceRegistry::publisher_of(std::string_view label) const {
    auto it = label_owner_.find(label);
    return it == label_owner_.end() ? nullptr : find(it->second);
}

namespace {

const SourceSpec& single_source(std::span<const RawRecord> records, const SourceRegistry& registry) {
    const auto& id = records.front().source_id;
    for (const auto& r : records) {
        if (r.source_id != id) {
            throw Error(ErrorCode::InvalidArgument,
                        "stream mixes sources '" + id + "' and '" + r.source_id + "'");
        }
    }
    return registry.at(id);
}

std::vector<RawRecord> sorted_copy(std::span<const RawRecord> records) {
    std::vector<RawRecord> out(records.begin(), records.end());
    for (const auto& r : out) {
        if (r.timestamp < 0) {
            throw Error(ErrorCode::InvalidArgument, "negative timestamp in source '" + r.source_id + "'");
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.timestamp < b.timestamp; });
    return out;
}

// Run-length encoding over per-record labels. A run ends where the next run
// starts; the final run ends at the last timestamp.
std::vector<Event> merge_runs(const std::vector<RawRecord>& records, const std::vector<std::string>& labels,
                              SmartObjectKind kind) {
    std::vector<Event> events;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!events.empty() && events.back().label == labels[i]) continue;
        if (!events.empty()) events.back().end_time = records[i].timestamp;
        events.push_back(Event{labels[i], records[i].timestamp, records[i].timestamp, kind});
    }
    if (!events.empty()) events.back().end_time = records.back().timestamp;
    return events;
}

std::vector<Event> convert_discrete(std::span<const RawRecord> records, const SourceSpec& spec) {
    auto sorted = sorted_copy(records);
    std::vector<std::string> labels;
    labels.reserve(sorted.size());
    for (const auto& r : sorted) {
        if (std::find(spec.states.begin(), spec.states.end(), r.value) == spec.states.end()) {
            throw Error(ErrorCode::UnknownValue,
                        "state '" + r.value + "' is not registered for source '" + spec.id + "'");
        }
        labels.push_back(spec.label_for_state(r.value));
    }
    return merge_runs(sorted, labels, spec.kind);
}

double parse_reading(const RawRecord& r) {
    double v = 0.0;
    const char* first = r.value.data();
    const char* last = first + r.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteValue,
                    "reading '" + r.value + "' of source '" + r.source_id + "' is not a finite number");
    }
    return v;
}

}  // namespace

std::vector<Event> convert_actuator_stream(std::span<const RawRecord> records, const SourceRegistry& registry) {
    if (records.empty()) return {};
    const auto& spec = single_source(records, registry);
    if (spec.kind != SmartObjectKind::Actuator) {
        throw Error(ErrorCode::InvalidArgument, "source '" + spec.id + "' is not an actuator");
    }
    return convert_discrete(records, spec);
}

std::vector<double> smooth_readings(std::span<const double> values, std::size_t window) {
    if (window == 0) throw Error(ErrorCode::InvalidArgument, "averaging window must be >= 1");
    const std::size_t n = values.size();
    std::vector<double> out(n);
    if (n == 0) return out;
    const std::size_t w = std::min(window, n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t hi = std::max(i, w - 1);
        const std::size_t lo = hi + 1 - w;
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += values[k];
        out[i] = sum / static_cast<double>(w);
    }
    return out;
}

std::vector<Event> convert_sensor_stream(std::span<const RawRecord> records, const SourceRegistry& registry,
                                         std::span<const double> thresholds, std::size_t window) {
    if (window == 0) throw Error(ErrorCode::InvalidArgument, "averaging window must be >= 1");
    for (std::size_t i = 1; i < thresholds.size(); ++i) {
        if (!(thresholds[i - 1] < thresholds[i])) {
            throw Error(ErrorCode::InvalidArgument, "level thresholds must be strictly increasing");
        }
    }
    if (records.empty()) return {};
    const auto& spec = single_source(records, registry);
    if (spec.kind != SmartObjectKind::PervasiveSensor) {
        throw Error(ErrorCode::InvalidArgument, "source '" + spec.id + "' is not a pervasive sensor");
    }
    auto sorted = sorted_copy(records);
    std::vector<double> values;
    values.reserve(sorted.size());
    for (const auto& r : sorted) values.push_back(parse_reading(r));
    const auto smoothed = smooth_readings(values, window);

    std::vector<std::string> labels;
    labels.reserve(sorted.size());
    for (double v : smoothed) {
        // Level k covers [threshold[k-2], threshold[k-1]).
        auto above = std::upper_bound(thresholds.begin(), thresholds.end(), v) - thresholds.begin();
        labels.push_back(spec.label_for_level(static_cast<std::size_t>(above) + 1));
    }
    return merge_runs(sorted, labels, SmartObjectKind::PervasiveSensor);
}

std::vector<Event> convert_sensor_stream(std::span<const RawRecord> records, const SourceRegistry& registry) {
    if (records.empty()) return {};
    const auto& spec = registry.at(records.front().source_id);
    return convert_sensor_stream(records, registry, spec.thresholds, spec.window);
}

std::vector<Event> convert_records(std::span<const RawRecord> records, const SourceRegistry& registry) {
    std::map<std::string, std::vector<RawRecord>> by_source;
    for (const auto& r : records) {
        registry.at(r.source_id);
        by_source[r.source_id].push_back(r);
    }
    std::vector<Event> events;
    for (const auto& [id, stream] : by_source) {
        const auto& spec = registry.at(id);
        std::vector<Event> converted;
        if (spec.numeric()) {
            converted = convert_sensor_stream(stream, registry);
        } else {
            converted = convert_discrete(stream, spec);
        }
        events.insert(events.end(), converted.begin(), converted.end());
    }
    return events;
}

Episode build_episode(std::vector<Event> events, std::optional<std::string> ga_label, std::string id) {
    std::stable_sort(events.begin(), events.end(), event_order);
    return Episode{std::move(id), std::move(ga_label), std::move(events)};
}

}  // namespace gar
