#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gar/error.hpp"
#include "gar/event_model.hpp"

using gar::Event;
using gar::RawRecord;
using gar::SmartObjectKind;

namespace {

gar::SourceRegistry sensor_x() {
    gar::SourceRegistry r;
    r.add(fixture::sensor("x", "X", "XLevel", {50}));
    return r;
}

}  // namespace

TEST_CASE("actuator stream: one event per run") {
    auto reg = fixture::meeting_registry();
    std::vector<RawRecord> recs{{"proj", "On", 100}, {"proj", "On", 200}, {"proj", "Off", 300}};
    auto events = gar::convert_actuator_stream(recs, reg);
    REQUIRE(events.size() == 2);
    CHECK(events[0] == Event{"ProjectorOn", 100, 300, SmartObjectKind::Actuator});
    CHECK(events[1] == Event{"ProjectorOff", 300, 300, SmartObjectKind::Actuator});
}

TEST_CASE("actuator stream: single record and empty input") {
    auto reg = fixture::meeting_registry();
    std::vector<RawRecord> one{{"proj", "On", 100}};
    auto events = gar::convert_actuator_stream(one, reg);
    REQUIRE(events.size() == 1);
    CHECK(events[0] == Event{"ProjectorOn", 100, 100, SmartObjectKind::Actuator});
    CHECK(gar::convert_actuator_stream({}, reg).empty());
}

TEST_CASE("actuator stream errors") {
    auto reg = fixture::meeting_registry();
    std::vector<RawRecord> unknown{{"fan", "On", 1}};
    CHECK(fixture::error_code([&] { gar::convert_actuator_stream(unknown, reg); }) == gar::ErrorCode::UnknownSource);
    std::vector<RawRecord> bad_state{{"proj", "Dim", 1}};
    CHECK(fixture::error_code([&] { gar::convert_actuator_stream(bad_state, reg); }) == gar::ErrorCode::UnknownValue);
}

TEST_CASE("actuator stream: out-of-order records are sorted") {
    auto reg = fixture::meeting_registry();
    std::vector<RawRecord> recs{{"proj", "Off", 300}, {"proj", "On", 100}};
    auto events = gar::convert_actuator_stream(recs, reg);
    REQUIRE(events.size() == 2);
    CHECK(events[0].label == "ProjectorOn");
    CHECK(events[0].end_time == 300);
}

TEST_CASE("actuator run-length property on random streams") {
    auto reg = fixture::meeting_registry();
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RawRecord> recs;
        const int n = static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) recs.push_back({"proj", rng() % 2 ? "On" : "Off", i * 10});
        std::size_t runs = 0;
        for (int i = 0; i < n; ++i) runs += (i == 0 || recs[i].value != recs[i - 1].value) ? 1 : 0;
        auto events = gar::convert_actuator_stream(recs, reg);
        CHECK(events.size() == runs);
        for (std::size_t i = 1; i < events.size(); ++i) CHECK(events[i - 1].end_time == events[i].start_time);
    }
}

TEST_CASE("sensor stream thresholding and merge") {
    auto reg = sensor_x();
    std::vector<RawRecord> recs{{"x", "10", 0}, {"x", "12", 1}, {"x", "55", 2}, {"x", "58", 3}};
    const std::vector<double> thresholds{50};
    auto events = gar::convert_sensor_stream(recs, reg, thresholds, 1);
    REQUIRE(events.size() == 2);
    CHECK(events[0] == Event{"X_Level1", 0, 2, SmartObjectKind::PervasiveSensor});
    CHECK(events[1] == Event{"X_Level2", 2, 3, SmartObjectKind::PervasiveSensor});
}

TEST_CASE("sensor stream: constant level gives one event") {
    auto reg = sensor_x();
    std::vector<RawRecord> recs{{"x", "1", 5}, {"x", "2", 6}, {"x", "3", 9}};
    auto events = gar::convert_sensor_stream(recs, reg);
    REQUIRE(events.size() == 1);
    CHECK(events[0] == Event{"X_Level1", 5, 9, SmartObjectKind::PervasiveSensor});
}

TEST_CASE("sensor stream: window equal to length averages everything") {
    auto reg = sensor_x();
    std::vector<RawRecord> recs{{"x", "0", 0}, {"x", "100", 1}, {"x", "20", 2}, {"x", "90", 3}};
    const std::vector<double> thresholds{50};
    auto events = gar::convert_sensor_stream(recs, reg, thresholds, recs.size());
    // mean 52.5
    REQUIRE(events.size() == 1);
    CHECK(events[0].label == "X_Level2");

    std::vector<double> values{0, 100, 20, 90};
    for (double v : gar::smooth_readings(values, values.size())) CHECK(v == doctest::Approx(52.5));
}

TEST_CASE("sensor stream: moving average brute force") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> values(1 + rng() % 10);
        for (auto& v : values) v = static_cast<double>(rng() % 100);
        const std::size_t w = 1 + rng() % 6;
        auto out = gar::smooth_readings(values, w);
        const std::size_t ww = std::min(w, values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::size_t end = std::max(i + 1, ww);
            double sum = 0;
            for (std::size_t k = end - ww; k < end; ++k) sum += values[k];
            CHECK(out[i] == doctest::Approx(sum / static_cast<double>(ww)));
        }
    }
}

TEST_CASE("sensor stream coverage property") {
    auto reg = fixture::meeting_registry();
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<RawRecord> recs;
        const int n = 1 + static_cast<int>(rng() % 15);
        gar::TimeMs t = static_cast<gar::TimeMs>(rng() % 5);
        for (int i = 0; i < n; ++i) {
            recs.push_back({"sound", std::to_string(rng() % 100), t});
            t += static_cast<gar::TimeMs>(rng() % 4);
        }
        auto events = gar::convert_sensor_stream(recs, reg);
        REQUIRE_FALSE(events.empty());
        CHECK(events.front().start_time == recs.front().timestamp);
        CHECK(events.back().end_time == recs.back().timestamp);
        for (std::size_t i = 1; i < events.size(); ++i) {
            CHECK(events[i - 1].end_time == events[i].start_time);
            CHECK(events[i - 1].label != events[i].label);
        }
    }
}

TEST_CASE("sensor stream errors") {
    auto reg = sensor_x();
    std::vector<RawRecord> nan{{"x", "nan", 0}};
    CHECK(fixture::error_code([&] { gar::convert_sensor_stream(nan, reg); }) == gar::ErrorCode::NonFiniteValue);
    std::vector<RawRecord> text{{"x", "loud", 0}};
    CHECK(fixture::error_code([&] { gar::convert_sensor_stream(text, reg); }) == gar::ErrorCode::NonFiniteValue);
    std::vector<RawRecord> unknown{{"y", "1", 0}};
    CHECK(fixture::error_code([&] { gar::convert_sensor_stream(unknown, reg); }) == gar::ErrorCode::UnknownSource);
}

TEST_CASE("converted constant stream is idempotent") {
    auto reg = sensor_x();
    std::vector<RawRecord> recs{{"x", "70", 0}, {"x", "70", 4}};
    auto first = gar::convert_sensor_stream(recs, reg);
    REQUIRE(first.size() == 1);
    std::vector<RawRecord> again{{"x", "70", first[0].start_time}, {"x", "70", first[0].end_time}};
    CHECK(gar::convert_sensor_stream(again, reg) == first);
}

TEST_CASE("convert_records groups by source") {
    auto reg = fixture::meeting_registry();
    std::vector<RawRecord> recs{
        {"sound", "60", 0}, {"proj", "On", 1}, {"sound", "10", 5}, {"proj", "Off", 9},
    };
    auto ep = gar::build_episode(gar::convert_records(recs, reg), "Talk");
    REQUIRE(ep.events.size() == 4);
    CHECK(ep.events[0] == Event{"Sound_Level2", 0, 5, SmartObjectKind::PervasiveSensor});
    CHECK(ep.events[1] == Event{"ProjectorOn", 1, 9, SmartObjectKind::Actuator});
    CHECK(ep.events[2] == Event{"Sound_Level1", 5, 5, SmartObjectKind::PervasiveSensor});
    CHECK(ep.events[3] == Event{"ProjectorOff", 9, 9, SmartObjectKind::Actuator});
}

TEST_CASE("build_episode ordering") {
    auto ep = gar::build_episode({fixture::ev("b", 5, 6), fixture::ev("z", 0, 3), fixture::ev("a", 0, 3),
                                  fixture::ev("c", 0, 1), fixture::ev("a", 0, 3)},
                                 "GA");
    REQUIRE(ep.events.size() == 5);
    CHECK(ep.events[0].label == "c");
    CHECK(ep.events[1].label == "a");
    CHECK(ep.events[2].label == "a");
    CHECK(ep.events[3].label == "z");
    CHECK(ep.events[4].label == "b");
    CHECK(ep.ga_label == "GA");
    CHECK(gar::build_episode({}, std::nullopt).events.empty());
}

TEST_CASE("registry rejects inconsistent sources") {
    gar::SourceRegistry r;
    r.add(fixture::actuator("proj", "Projector", "ProjectorStatus", {"On"}));
    CHECK(fixture::error_code([&] { r.add(fixture::actuator("proj", "P", "C", {"On"})); }) == gar::ErrorCode::InvalidArgument);
    CHECK(fixture::error_code([&] { r.add(fixture::actuator("p2", "Projector", "C", {"On"})); }) ==
          gar::ErrorCode::InvalidArgument);
    CHECK(fixture::error_code([&] { r.add(fixture::actuator("p3", "P3", "C", {})); }) == gar::ErrorCode::InvalidArgument);
    CHECK(fixture::error_code([&] { r.add(fixture::sensor("s", "S", "C", {5, 5})); }) == gar::ErrorCode::InvalidArgument);
    CHECK(r.publisher_of("ProjectorOn")->id == "proj");
    CHECK(r.publisher_of("Nope") == nullptr);
}
