#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gar {

/// Milliseconds since epoch.
using TimeMs = std::int64_t;

enum class SmartObjectKind { Actuator, PervasiveSensor };

std::string_view to_string(SmartObjectKind kind);
SmartObjectKind parse_smart_object_kind(std::string_view text);

struct RawRecord {
    std::string source_id;
    std::string value;
    TimeMs timestamp = 0;

    friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

struct Event {
    std::string label;
    TimeMs start_time = 0;
    TimeMs end_time = 0;
    SmartObjectKind source_kind = SmartObjectKind::PervasiveSensor;

    [[nodiscard]] TimeMs length() const { return end_time - start_time; }

    friend bool operator==(const Event&, const Event&) = default;
};

/// Episode ordering: (start_time, end_time, label) ascending.
bool event_order(const Event& a, const Event& b);

struct Episode {
    std::string id;
    std::optional<std::string> ga_label;
    std::vector<Event> events;

    friend bool operator==(const Episode&, const Episode&) = default;
};

/// Registry entry for one smart object.
///
/// Actuators and discrete pervasive sensors publish `prefix + state`.
/// Numeric pervasive sensors publish `prefix + "_Level" + k`, where k is
/// one plus the number of thresholds at or below the smoothed reading.
struct SourceSpec {
    std::string id;
    SmartObjectKind kind = SmartObjectKind::Actuator;
    std::string label_prefix;
    std::string context;
    std::vector<std::string> states;
    std::vector<double> thresholds;
    std::size_t window = 5;

    [[nodiscard]] bool numeric() const {
        return kind == SmartObjectKind::PervasiveSensor && states.empty();
    }
    [[nodiscard]] std::string label_for_state(std::string_view state) const;
    [[nodiscard]] std::string label_for_level(std::size_t level) const;
    /// Full event vocabulary of this source, in declaration order.
    [[nodiscard]] std::vector<std::string> labels() const;

    friend bool operator==(const SourceSpec&, const SourceSpec&) = default;
};

class SourceRegistry {
public:
    SourceRegistry() = default;
    explicit SourceRegistry(std::vector<SourceSpec> specs);

    /// Throws InvalidArgument on duplicate ids or labels published by two sources.
    void add(SourceSpec spec);

    [[nodiscard]] const SourceSpec& at(std::string_view source_id) const;
    [[nodiscard]] const SourceSpec* find(std::string_view source_id) const;
    [[nodiscard]] const SourceSpec* publisher_of(std::string_view label) const;
    [[nodiscard]] const std::map<std::string, SourceSpec, std::less<>>& sources() const { return sources_; }
    [[nodiscard]] bool empty() const { return sources_.empty(); }

private:
    std::map<std::string, SourceSpec, std::less<>> sources_;
    std::map<std::string, std::string, std::less<>> label_owner_;
};

/// One event per maximal run of a constant state value.
std::vector<Event> convert_actuator_stream(std::span<const RawRecord> records,
                                           const SourceRegistry& registry);

/// Moving-average smoothing, level mapping and merge of identical levels.
std::vector<Event> convert_sensor_stream(std::span<const RawRecord> records,
                                         const SourceRegistry& registry,
                                         std::span<const double> thresholds,
                                         std::size_t window);

/// Same, using the thresholds and window registered for the source.
std::vector<Event> convert_sensor_stream(std::span<const RawRecord> records,
                                         const SourceRegistry& registry);

/// Smoothed readings used by convert_sensor_stream. For the first
/// `window - 1` records the first full window is used, so window equal to
/// the stream length yields one value for every record.
std::vector<double> smooth_readings(std::span<const double> values, std::size_t window);

/// Converts a mixed multi-source stream: records are grouped by source,
/// stably sorted by timestamp and converted with the source's rule.
std::vector<Event> convert_records(std::span<const RawRecord> records, const SourceRegistry& registry);

Episode build_episode(std::vector<Event> events, std::optional<std::string> ga_label,
                      std::string id = {});

}  // namespace gar
