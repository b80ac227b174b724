#include "gar/synthetic.hpp"

#include <algorithm>
#include <random>

#include "gar/error.hpp"

namespace gar {

namespace {

using Rng = std::mt19937_64;

std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) {
    if (hi <= lo) return lo;
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

TimeMs uniform_time(Rng& rng, TimeMs lo, TimeMs hi) {
    if (hi <= lo) return lo;
    return std::uniform_int_distribution<TimeMs>(lo, hi)(rng);
}

Event make_event(const SourceRegistry& registry, const std::string& label, TimeMs start, TimeMs end) {
    const auto* source = registry.publisher_of(label);
    if (source == nullptr) throw Error(ErrorCode::UnknownEvent, "synthetic label '" + label + "' has no source");
    return Event{label, start, end, source->kind};
}

Episode generate_episode(const GaScript& script, const SourceRegistry& registry, Rng& rng, std::string id) {
    std::vector<Event> events;
    std::vector<const ScriptStep*> order;
    for (const auto& s : script.steps) order.push_back(&s);
    if (script.shuffle_steps) std::shuffle(order.begin(), order.end(), rng);

    std::bernoulli_distribution coin;
    TimeMs t = 0;
    TimeMs span_end = 0;
    for (const auto* step : order) {
        if (step->probability < 1.0 && !coin(rng, std::bernoulli_distribution::param_type(step->probability))) {
            continue;
        }
        TimeMs step_end = t;
        for (std::size_t k = 0; k < step->labels.size(); ++k) {
            const TimeMs start = t + step->stagger * static_cast<TimeMs>(k);
            events.push_back(make_event(registry, step->labels[k], start, start + step->duration));
            step_end = std::max(step_end, start + step->duration);
        }
        span_end = std::max(span_end, step_end);
        t = step_end + script.gap + uniform_time(rng, 0, script.jitter);
    }
    span_end = std::max<TimeMs>(span_end, 1);

    for (const auto& stream : script.level_streams) {
        if (stream.labels.empty()) continue;
        const std::size_t segments =
            std::min<std::size_t>(uniform_count(rng, stream.segments_min, stream.segments_max),
                                  static_cast<std::size_t>(span_end));
        if (segments == 0) continue;
        std::vector<TimeMs> cuts;
        std::vector<TimeMs> candidates;
        for (TimeMs c = 1; c < span_end; ++c) candidates.push_back(c);
        std::shuffle(candidates.begin(), candidates.end(), rng);
        cuts.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(segments - 1));
        std::sort(cuts.begin(), cuts.end());
        cuts.insert(cuts.begin(), 0);
        cuts.push_back(span_end);
        std::size_t previous = stream.labels.size();
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            std::size_t level = uniform_count(rng, 0, stream.labels.size() - 1);
            if (stream.labels.size() > 1 && level == previous) {
                level = (level + 1 + uniform_count(rng, 0, stream.labels.size() - 2)) % stream.labels.size();
            }
            previous = level;
            events.push_back(make_event(registry, stream.labels[level], cuts[s], cuts[s + 1]));
        }
    }

    for (const auto& filler : script.fillers) {
        if (filler.labels.empty()) continue;
        const std::size_t count = uniform_count(rng, filler.count_min, filler.count_max);
        for (std::size_t i = 0; i < count; ++i) {
            const auto& label = filler.labels[uniform_count(rng, 0, filler.labels.size() - 1)];
            const TimeMs duration = uniform_time(rng, filler.duration_min, filler.duration_max);
            const TimeMs start = uniform_time(rng, 0, std::max<TimeMs>(0, span_end - duration));
            events.push_back(make_event(registry, label, start, start + duration));
        }
    }
    return build_episode(std::move(events), script.name, std::move(id));
}

}  // namespace

SyntheticCorpus generate_corpus(const SyntheticSpec& spec) {
    SyntheticCorpus corpus{SourceRegistry(spec.sources), {}, spec.declarations};
    Rng rng(spec.seed);
    for (const auto& script : spec.gas) {
        for (std::size_t i = 0; i < spec.episodes_per_ga; ++i) {
            corpus.episodes.push_back(
                generate_episode(script, corpus.registry, rng, script.name + "-" + std::to_string(i + 1)));
        }
    }
    return corpus;
}

namespace {

SourceSpec actuator(std::string id, std::string prefix, std::string context, std::vector<std::string> states) {
    SourceSpec s;
    s.id = std::move(id);
    s.kind = SmartObjectKind::Actuator;
    s.label_prefix = std::move(prefix);
    s.context = std::move(context);
    s.states = std::move(states);
    return s;
}

SourceSpec sensor(std::string id, std::string prefix, std::string context, std::vector<double> thresholds) {
    SourceSpec s;
    s.id = std::move(id);
    s.kind = SmartObjectKind::PervasiveSensor;
    s.label_prefix = std::move(prefix);
    s.context = std::move(context);
    s.thresholds = std::move(thresholds);
    return s;
}

ScriptStep step(std::vector<std::string> labels, TimeMs duration, TimeMs stagger, double probability = 1.0) {
    return ScriptStep{std::move(labels), duration, stagger, probability};
}

}  // namespace

SyntheticSpec separable_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.episodes_per_ga = episodes_per_ga;
    spec.seed = seed;
    const std::vector<std::string> names = {"Alpha", "Beta", "Gamma"};
    for (const auto& n : names) {
        spec.sources.push_back(actuator(n + "_dev", n, n + "Status", {"On", "Off"}));
        spec.sources.push_back(actuator(n + "_aux", n + "Aux", n + "AuxStatus", {"Open", "Close"}));
        GaScript ga;
        ga.name = n;
        ga.gap = 3;
        ga.jitter = 4;
        ga.steps = {step({n + "On", n + "AuxOpen"}, 10, 4), step({n + "Off"}, 6, 0),
                    step({n + "AuxClose", n + "On"}, 8, 2), step({n + "Off"}, 6, 0, 0.8)};
        spec.gas.push_back(std::move(ga));
    }
    return spec;
}

SyntheticSpec order_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.episodes_per_ga = episodes_per_ga;
    spec.seed = seed;
    spec.sources = {actuator("door", "Door", "DoorStatus", {"Enter", "Leave"}),
                    actuator("seat", "Seat", "SeatStatus", {"SitDown", "StandUp"})};
    const auto arrive = step({"DoorEnter", "SeatSitDown"}, 10, 4);
    const auto depart = step({"SeatStandUp", "DoorLeave"}, 10, 4);
    // Same pairs, same counts; only their order differs.
    GaScript meeting{"Meeting", {arrive, arrive, arrive, depart, depart, depart}, 5, 6, false, {}, {}};
    GaScript shift{"ShiftChange", {depart, depart, depart, arrive, arrive, arrive}, 5, 6, false, {}, {}};
    spec.gas = {meeting, shift};
    return spec;
}

SyntheticSpec after_noise_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.episodes_per_ga = episodes_per_ga;
    spec.seed = seed;
    spec.sources = {actuator("light", "Light", "LightStatus", {"On", "Off"}),
                    actuator("mic", "Mic", "MicStatus", {"On", "Off"}),
                    sensor("sound", "Sound", "SoundLevel", {40.0, 60.0})};
    const LevelStream sound{{"Sound_Level1", "Sound_Level2", "Sound_Level3"}, 8, 10};
    GaScript lecture;
    lecture.name = "Lecture";
    lecture.gap = 4;
    lecture.jitter = 6;
    lecture.steps = {step({"LightOn", "MicOn"}, 12, 5, 0.75), step({"MicOff", "LightOff"}, 12, 5, 0.75)};
    lecture.level_streams = {sound};
    GaScript workshop = lecture;
    workshop.name = "Workshop";
    workshop.steps = {step({"MicOn", "LightOn"}, 12, 5, 0.75), step({"LightOff", "MicOff"}, 12, 5, 0.75)};
    spec.gas = {lecture, workshop};
    return spec;
}

SyntheticSpec rare_actuator_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.episodes_per_ga = episodes_per_ga;
    spec.seed = seed;
    spec.sources = {actuator("projector", "Projector", "ProjectorStatus", {"On", "Off"}),
                    actuator("seat", "Seat", "SeatStatus", {"SitDown", "StandUp"})};
    // Twelve three-level sensors whose short blips make up ~50 events per
    // episode, against a single projector event.
    Filler blips;
    blips.count_min = 46;
    blips.count_max = 52;
    blips.duration_min = 2;
    blips.duration_max = 12;
    for (int i = 1; i <= 12; ++i) {
        const std::string id = "env" + std::to_string(i);
        spec.sources.push_back(sensor(id, "Env" + std::to_string(i), "Env" + std::to_string(i) + "Level", {40.0, 60.0}));
        for (int level = 1; level <= 3; ++level) blips.labels.push_back("Env" + std::to_string(i) + "_Level" + std::to_string(level));
    }
    GaScript study;
    study.name = "GroupStudy";
    study.gap = 20;
    study.jitter = 20;
    study.steps = {step({"SeatSitDown"}, 8, 0), step({"SeatStandUp"}, 8, 0)};
    study.fillers = {blips};
    GaScript discussion = study;
    discussion.name = "TechDiscussion";
    discussion.steps.insert(discussion.steps.begin() + 1, step({"ProjectorOn"}, 10, 0));
    spec.gas = {study, discussion};
    return spec;
}

SyntheticSpec meeting_room_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed) {
    SyntheticSpec spec;
    spec.episodes_per_ga = episodes_per_ga;
    spec.seed = seed;
    spec.sources = {actuator("door", "Door", "DoorStatus", {"Enter", "Leave"}),
                    actuator("seat", "Seat", "SeatStatus", {"SitDown", "StandUp"}),
                    actuator("projector", "Projector", "ProjectorStatus", {"On", "Off"}),
                    actuator("light", "Light", "LightStatus", {"On", "Off"}),
                    sensor("sound", "Sound", "SoundLevel", {40.0, 60.0})};
    const LevelStream sound{{"Sound_Level1", "Sound_Level2", "Sound_Level3"}, 3, 5};
    const auto arrive = step({"DoorEnter", "SeatSitDown"}, 10, 4);
    const auto depart = step({"SeatStandUp", "DoorLeave"}, 10, 4);

    GaScript seminar{"Seminar",
                     {arrive, arrive, step({"LightOff", "ProjectorOn"}, 20, 3), depart, depart},
                     5, 6, false, {sound}, {}};
    GaScript discussion{"TechDiscussion",
                        {arrive, step({"ProjectorOn"}, 12, 0), arrive, depart, step({"ProjectorOff"}, 4, 0), depart},
                        5, 6, false, {sound}, {}};
    GaScript chatting{"Chatting", {arrive, depart, arrive, depart, arrive}, 5, 6, false, {sound}, {}};
    GaScript study{"GroupStudy", {arrive, arrive, arrive, step({"LightOn"}, 8, 0, 0.8), depart}, 5, 6, false,
                   {sound}, {}};
    spec.gas = {seminar, discussion, chatting, study};
    spec.declarations.affects = {{"Seminar", {"ProjectorStatus", "LightStatus"}},
                                 {"TechDiscussion", {"ProjectorStatus"}},
                                 {"GroupStudy", {"LightStatus"}}};
    return spec;
}

std::vector<std::string> named_corpora() {
    return {"separable", "order", "after_noise", "rare_actuator", "meeting_room"};
}

SyntheticSpec named_corpus_spec(const std::string& name, std::size_t episodes_per_ga, std::uint64_t seed) {
    if (name == "separable") return separable_corpus_spec(episodes_per_ga, seed);
    if (name == "order") return order_corpus_spec(episodes_per_ga, seed);
    if (name == "after_noise") return after_noise_corpus_spec(episodes_per_ga, seed);
    if (name == "rare_actuator") return rare_actuator_corpus_spec(episodes_per_ga, seed);
    if (name == "meeting_room") return meeting_room_corpus_spec(episodes_per_ga, seed);
    throw Error(ErrorCode::InvalidArgument, "unknown synthetic corpus '" + name + "'");
}

}  // namespace gar
