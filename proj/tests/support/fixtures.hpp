#pragma once

// Small builders and random generators shared by the test binaries.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gar/error.hpp"
#include "gar/event_model.hpp"
#include "gar/knowledge_base.hpp"
#include "gar/pattern_tree.hpp"
#include "gar/preprocessing.hpp"

namespace fixture {

// Code of the gar::Error thrown by `fn`, or nullopt when nothing is thrown.
template <typename Fn>
std::optional<gar::ErrorCode> error_code(Fn&& fn) {
    try {
        fn();
    } catch (const gar::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline gar::Event ev(std::string label, gar::TimeMs start, gar::TimeMs end,
                     gar::SmartObjectKind kind = gar::SmartObjectKind::PervasiveSensor) {
    return gar::Event{std::move(label), start, end, kind};
}

inline gar::SourceSpec actuator(std::string id, std::string prefix, std::string context,
                                std::vector<std::string> states) {
    gar::SourceSpec s;
    s.id = std::move(id);
    s.kind = gar::SmartObjectKind::Actuator;
    s.label_prefix = std::move(prefix);
    s.context = std::move(context);
    s.states = std::move(states);
    return s;
}

inline gar::SourceSpec sensor(std::string id, std::string prefix, std::string context,
                              std::vector<double> thresholds, std::size_t window = 1) {
    gar::SourceSpec s;
    s.id = std::move(id);
    s.kind = gar::SmartObjectKind::PervasiveSensor;
    s.label_prefix = std::move(prefix);
    s.context = std::move(context);
    s.thresholds = std::move(thresholds);
    s.window = window;
    return s;
}

// Projector and seat actuators plus sound and light sensors.
inline gar::SourceRegistry meeting_registry() {
    gar::SourceRegistry r;
    r.add(actuator("proj", "Projector", "ProjectorStatus", {"On", "Off"}));
    r.add(actuator("seat", "Seat", "SeatStatus", {"Sit", "Stand"}));
    r.add(sensor("sound", "Sound", "SoundLevel", {50}));
    r.add(sensor("light", "Light", "LightLevel", {100}));
    return r;
}

inline gar::KnowledgeBase meeting_vocabulary() { return gar::KnowledgeBase::from_registry(meeting_registry()); }

// Registry with `contexts` actuator sources "cK" publishing "cKa" and "cKb".
inline gar::SourceRegistry toy_registry(std::size_t contexts) {
    gar::SourceRegistry r;
    for (std::size_t c = 0; c < contexts; ++c) {
        const std::string id = "c" + std::to_string(c);
        auto kind = c % 2 == 0 ? gar::SmartObjectKind::Actuator : gar::SmartObjectKind::PervasiveSensor;
        gar::SourceSpec s;
        s.id = id;
        s.kind = kind;
        s.label_prefix = id;
        s.context = "ctx" + std::to_string(c);
        s.states = {"a", "b"};
        r.add(s);
    }
    return r;
}

// Random labelled corpus over a toy registry: up to 5 GAs, a few short
// episodes each, event labels drawn from a GA-biased subset.
inline gar::TrainingCorpus random_toy_corpus(std::mt19937_64& rng, const gar::KnowledgeBase& kb) {
    std::vector<std::string> labels;
    for (const auto& [label, ctx] : kb.is_about) labels.push_back(label);
    std::uniform_int_distribution<std::size_t> n_ga(1, 5);
    std::uniform_int_distribution<std::size_t> n_ep(1, 3);
    std::uniform_int_distribution<std::size_t> n_ev(0, 6);
    std::uniform_int_distribution<gar::TimeMs> t(0, 20);
    std::uniform_int_distribution<gar::TimeMs> len(0, 5);
    gar::TrainingCorpus corpus;
    const std::size_t gas = n_ga(rng);
    for (std::size_t g = 0; g < gas; ++g) {
        const std::string ga = "GA" + std::to_string(g);
        // Each GA draws from a random half of the vocabulary.
        std::vector<std::string> pool;
        for (const auto& l : labels) {
            if (rng() % 2 == 0) pool.push_back(l);
        }
        if (pool.empty()) pool.push_back(labels[rng() % labels.size()]);
        std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
        const std::size_t eps = n_ep(rng);
        for (std::size_t e = 0; e < eps; ++e) {
            std::vector<gar::Event> events;
            const std::size_t count = n_ev(rng);
            for (std::size_t i = 0; i < count; ++i) {
                const auto& label = pool[pick(rng)];
                const auto s = t(rng);
                events.push_back(ev(label, s, s + len(rng), kb.kind_of_label(label)));
            }
            corpus[ga].push_back(gar::build_episode(std::move(events), ga, ga + "-" + std::to_string(e)));
        }
    }
    return corpus;
}

// Random database within the acceptance bounds: <= 8 sequences, <= 6
// positions, alphabet <= 5, itemsets of 1..3 symbols.
inline gar::SequenceDatabase random_database(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> n_seq(1, 8);
    std::uniform_int_distribution<std::size_t> n_pos(0, 6);
    std::uniform_int_distribution<std::size_t> n_alpha(1, 5);
    std::uniform_int_distribution<std::size_t> n_items(1, 3);
    const std::size_t alpha = n_alpha(rng);
    std::uniform_int_distribution<std::size_t> sym(0, alpha - 1);
    std::vector<gar::SymbolicSequence> rows(n_seq(rng));
    for (auto& row : rows) {
        const std::size_t positions = n_pos(rng);
        for (std::size_t p = 0; p < positions; ++p) {
            std::vector<std::string> itemset;
            const std::size_t k = n_items(rng);
            for (std::size_t i = 0; i < k; ++i) itemset.push_back(std::string(1, static_cast<char>('A' + sym(rng))));
            row.push_back(itemset);
        }
    }
    return gar::make_sequence_database(rows);
}

}  // namespace fixture
