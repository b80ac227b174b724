#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gar/event_model.hpp"
#include "gar/knowledge_base.hpp"

namespace gar {

/// Events emitted together at one point of a GA script. Member k starts
/// `stagger * k` after the first, so stagger 0 yields Equals relations and
/// a stagger shorter than `duration` yields Overlaps.
struct ScriptStep {
    std::vector<std::string> labels;
    TimeMs duration = 10;
    TimeMs stagger = 0;
    double probability = 1.0;
};

/// Contiguous level stream of one pervasive sensor covering the episode,
/// as produced by signal conversion: consecutive segments Meet, distant
/// ones are After each other.
struct LevelStream {
    std::vector<std::string> labels;
    std::size_t segments_min = 0;
    std::size_t segments_max = 0;
};

/// Randomly placed events drawn from `labels`.
struct Filler {
    std::vector<std::string> labels;
    std::size_t count_min = 0;
    std::size_t count_max = 0;
    TimeMs duration_min = 1;
    TimeMs duration_max = 10;
};

struct GaScript {
    std::string name;
    std::vector<ScriptStep> steps;
    /// Gap between consecutive steps plus a uniform jitter in [0, jitter].
    TimeMs gap = 5;
    TimeMs jitter = 0;
    /// Shuffle the step order per episode instead of following it.
    bool shuffle_steps = false;
    std::vector<LevelStream> level_streams;
    std::vector<Filler> fillers;
};

struct SyntheticSpec {
    std::vector<SourceSpec> sources;
    std::vector<GaScript> gas;
    std::size_t episodes_per_ga = 20;
    std::uint64_t seed = 1;
    /// What an administrator of the simulated space would declare.
    KbDeclarations declarations;
};

struct SyntheticCorpus {
    SourceRegistry registry;
    std::vector<Episode> episodes;
    KbDeclarations declarations;
};

/// Deterministic for a fixed spec and seed.
SyntheticCorpus generate_corpus(const SyntheticSpec& spec);

// Built-in corpora used by the experiments and the acceptance suite.

/// Each GA owns a disjoint alphabet; trivially separable.
SyntheticSpec separable_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed);
/// Two GAs emitting the same event pairs in opposite order.
SyntheticSpec order_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed);
/// Two GAs separated by weak co-occurrence signal buried under a busy
/// sound level stream whose After pairs carry no causality.
SyntheticSpec after_noise_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed);
/// Two GAs identical except for one rare projector event in one of them.
SyntheticSpec rare_actuator_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed);
/// Meeting-room style corpus with several GAs, actuators and sensors,
/// shipped with declared affects statements for its GA-specific objects.
SyntheticSpec meeting_room_corpus_spec(std::size_t episodes_per_ga, std::uint64_t seed);

/// Looks up a built-in corpus by name ("separable", "order", "after_noise",
/// "rare_actuator", "meeting_room"). Throws InvalidArgument.
SyntheticSpec named_corpus_spec(const std::string& name, std::size_t episodes_per_ga, std::uint64_t seed);
std::vector<std::string> named_corpora();

}  // namespace gar
