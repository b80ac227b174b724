#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gar/preprocessing.hpp"
#include "oracles.hpp"

using fixture::ev;
using gar::AllenRelation;
using gar::SmartObjectKind;

namespace {

AllenRelation allen(gar::TimeMs s1, gar::TimeMs e1, gar::TimeMs s2, gar::TimeMs e2) {
    return gar::classify_allen(ev("a", s1, e1), ev("b", s2, e2));
}

gar::KnowledgeBase seminar_kb() {
    auto kb = fixture::meeting_vocabulary();
    kb.affects["Seminar"] = {"ProjectorStatus"};
    kb.ga_specific_events["Seminar"] = gar::ga_specific_events(kb, "Seminar");
    return kb;
}

}  // namespace

TEST_CASE("classify_allen examples") {
    CHECK(allen(0, 10, 0, 10) == AllenRelation::Equals);
    CHECK(allen(0, 10, 10, 20) == AllenRelation::Meets);
    CHECK(allen(0, 5, 7, 9) == AllenRelation::After);
    CHECK(allen(0, 5, 0, 9) == AllenRelation::Starts);
    CHECK(allen(0, 10, 2, 5) == AllenRelation::During);
    CHECK(allen(0, 10, 5, 10) == AllenRelation::Finishes);
    CHECK(allen(0, 10, 5, 15) == AllenRelation::Overlaps);
    // zero-length event at the start of another
    CHECK(allen(3, 3, 3, 8) == AllenRelation::Starts);
    CHECK(allen(0, 3, 3, 3) == AllenRelation::Meets);
}

TEST_CASE("classify_allen agrees with the 13-relation oracle") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<gar::TimeMs> t(0, 30);
    for (int i = 0; i < 5000; ++i) {
        auto a = t(rng), b = t(rng), c = t(rng), d = t(rng);
        if (a == b || c == d) continue;
        gar::Event x = ev("x", std::min(a, b), std::max(a, b));
        gar::Event y = ev("y", std::min(c, d), std::max(c, d));
        if (!gar::event_order(x, y)) std::swap(x, y);
        auto expected = oracle::collapse(oracle::allen13(x.start_time, x.end_time, y.start_time, y.end_time));
        CHECK(gar::classify_allen(x, y) == expected);
    }
}

TEST_CASE("relation names round-trip") {
    for (auto r : gar::kAllAllenRelations) CHECK(gar::parse_allen_relation(gar::to_string(r)) == r);
    CHECK(fixture::error_code([] { gar::parse_allen_relation("Before"); }) == gar::ErrorCode::Parse);
    gar::CausalRelation cr{AllenRelation::After, "ProjectorOn", "Sound_Level2", 0, 9};
    CHECK(cr.symbol() == "After(ProjectorOn, Sound_Level2)");
}

TEST_CASE("emphasis splits GA-specific events") {
    auto kb = seminar_kb();
    auto ep = gar::build_episode(
        {ev("ProjectorOn", 0, 100, SmartObjectKind::Actuator), ev("Sound_Level1", 20, 40)}, "Seminar");
    CHECK(gar::emphasize_ga_specific(ep, kb, 1) == ep);

    auto split = gar::emphasize_ga_specific(ep, kb, 10);
    REQUIRE(split.events.size() == 11);
    gar::TimeMs covered = 0;
    std::size_t parts = 0;
    for (const auto& e : split.events) {
        if (e.label != "ProjectorOn") continue;
        CHECK(e.length() == 10);
        CHECK(e.start_time == static_cast<gar::TimeMs>(parts) * 10);
        covered += e.length();
        ++parts;
    }
    CHECK(parts == 10);
    CHECK(covered == 100);
    CHECK(std::is_sorted(split.events.begin(), split.events.end(), gar::event_order));
}

TEST_CASE("emphasis leaves other episodes alone") {
    auto kb = seminar_kb();
    auto other = gar::build_episode({ev("ProjectorOn", 0, 100, SmartObjectKind::Actuator)}, "Chat");
    CHECK(gar::emphasize_ga_specific(other, kb, 10) == other);
    auto plain = gar::build_episode({ev("Sound_Level1", 0, 10)}, "Seminar");
    CHECK(gar::emphasize_ga_specific(plain, kb, 10) == plain);
    auto unlabelled = gar::build_episode({}, std::nullopt);
    CHECK(fixture::error_code([&] { gar::emphasize_ga_specific(unlabelled, kb, 2); }) ==
          gar::ErrorCode::MissingLabel);
}

TEST_CASE("emphasis conserves covered time for uneven splits") {
    auto kb = seminar_kb();
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const gar::TimeMs s = static_cast<gar::TimeMs>(rng() % 50);
        const gar::TimeMs len = static_cast<gar::TimeMs>(rng() % 37);
        const std::size_t n = 1 + rng() % 12;
        auto ep = gar::build_episode({ev("ProjectorOff", s, s + len, SmartObjectKind::Actuator)}, "Seminar");
        auto out = gar::emphasize_ga_specific(ep, kb, n);
        REQUIRE(out.events.size() == n);
        CHECK(out.events.front().start_time == s);
        CHECK(out.events.back().end_time == s + len);
        for (std::size_t i = 1; i < n; ++i) CHECK(out.events[i - 1].end_time == out.events[i].start_time);
    }
}

TEST_CASE("auto split factor") {
    auto kb = seminar_kb();
    std::vector<gar::Episode> eps{
        gar::build_episode({ev("ProjectorOn", 0, 10, SmartObjectKind::Actuator), ev("Sound_Level1", 0, 1),
                            ev("Sound_Level2", 1, 2), ev("Sound_Level1", 2, 3)},
                           "Seminar"),
        gar::build_episode({ev("ProjectorOn", 0, 10, SmartObjectKind::Actuator), ev("Light_Level1", 0, 1),
                            ev("SeatSit", 1, 2, SmartObjectKind::Actuator)},
                           "Seminar"),
    };
    // 4 sensor events over 2 specific events
    CHECK(gar::auto_split_factor(eps, kb, "Seminar") == 2);
    CHECK(gar::auto_split_factor(eps, kb, "Chat") == 1);
}

TEST_CASE("extraction: non-causal After pairs are dropped") {
    auto kb = fixture::meeting_vocabulary();
    auto ep = gar::build_episode({ev("Sound_Level1", 0, 2), ev("Sound_Level1", 5, 7)}, "GA");
    CHECK(gar::extract_causal_relations(ep, kb).relations.empty());

    gar::ExtractionOptions keep;
    keep.filter_non_causal = false;
    auto all = gar::extract_causal_relations(ep, kb, keep);
    REQUIRE(all.relations.size() == 1);
    CHECK(all.relations[0].symbol() == "After(Sound_Level1, Sound_Level1)");
}

TEST_CASE("extraction: After kept when contexts are related") {
    auto kb = fixture::meeting_vocabulary();
    kb.related_to.insert({"ProjectorStatus", "SoundLevel"});
    auto ep = gar::build_episode(
        {ev("ProjectorOn", 0, 2, SmartObjectKind::Actuator), ev("Sound_Level2", 5, 7), ev("Light_Level1", 6, 9)},
        "GA");
    auto out = gar::extract_causal_relations(ep, kb);
    REQUIRE(out.relations.size() == 2);
    CHECK(out.relations[0] == gar::CausalRelation{AllenRelation::After, "ProjectorOn", "Sound_Level2", 0, 7});
    CHECK(out.relations[1] == gar::CausalRelation{AllenRelation::Overlaps, "Sound_Level2", "Light_Level1", 5, 9});
    CHECK(out.ga_label == "GA");

    gar::ExtractionOptions assoc;
    assoc.drop_after = true;
    CHECK(gar::extract_causal_relations(ep, kb, assoc).relations.size() == 1);
}

TEST_CASE("extraction against a brute-force pair enumeration") {
    auto vocab = fixture::meeting_vocabulary();
    std::vector<std::string> labels;
    for (const auto& [l, c] : vocab.is_about) labels.push_back(l);
    auto contexts = vocab.contexts();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 150; ++trial) {
        auto kb = vocab;
        for (const auto& x : contexts) {
            for (const auto& y : contexts) {
                if (rng() % 3 == 0) kb.related_to.insert({x, y});
            }
        }
        std::vector<gar::Event> events;
        const std::size_t n = rng() % 9;
        for (std::size_t i = 0; i < n; ++i) {
            const auto s = static_cast<gar::TimeMs>(rng() % 20);
            const auto& l = labels[rng() % labels.size()];
            events.push_back(ev(l, s, s + static_cast<gar::TimeMs>(rng() % 6), kb.kind_of_label(l)));
        }
        auto ep = gar::build_episode(events, "GA");
        gar::ExtractionOptions options;
        if (rng() % 2) options.horizon = static_cast<gar::TimeMs>(rng() % 6);

        std::vector<gar::CausalRelation> expected;
        for (std::size_t i = 0; i < ep.events.size(); ++i) {
            for (std::size_t j = i + 1; j < ep.events.size(); ++j) {
                const auto& a = ep.events[i];
                const auto& b = ep.events[j];
                if (options.horizon && b.start_time - a.end_time > *options.horizon) continue;
                auto r = oracle::collapse(oracle::allen13(a.start_time, a.end_time, b.start_time, b.end_time));
                // the oracle is only defined for proper intervals
                if (a.length() > 0 && b.length() > 0) CHECK(gar::classify_allen(a, b) == r);
                r = gar::classify_allen(a, b);
                if (r == AllenRelation::After &&
                    !kb.related_to.contains({kb.is_about.at(a.label), kb.is_about.at(b.label)})) {
                    continue;
                }
                expected.push_back({r, a.label, b.label, a.start_time, std::max(a.end_time, b.end_time)});
            }
        }
        std::sort(expected.begin(), expected.end(), gar::relation_order);
        auto got = gar::extract_causal_relations(ep, kb, options);
        CHECK(got.relations == expected);

        // enlarging related_to never removes relations
        auto bigger = kb;
        for (const auto& x : contexts) bigger.related_to.insert({x, *contexts.begin()});
        CHECK(gar::extract_causal_relations(ep, bigger, options).relations.size() >= got.relations.size());
    }
}
