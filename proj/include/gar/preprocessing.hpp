#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gar/event_model.hpp"
#include "gar/knowledge_base.hpp"

namespace gar {

/// The seven interval relations kept after normalizing inverses away.
enum class AllenRelation { After, Meets, Overlaps, Starts, During, Finishes, Equals };

inline constexpr AllenRelation kAllAllenRelations[] = {
    AllenRelation::After,  AllenRelation::Meets,    AllenRelation::Overlaps, AllenRelation::Starts,
    AllenRelation::During, AllenRelation::Finishes, AllenRelation::Equals,
};

std::string_view to_string(AllenRelation relation);
AllenRelation parse_allen_relation(std::string_view text);

/// Relation of an ordered pair. Requires `first` to precede `second` in
/// event order (start, then end, then label). The result reads with
/// `first` as the subject: Starts means both start together and `first`
/// ends earlier, During means `second` lies strictly inside `first`,
/// After means `second` begins after `first` has ended.
AllenRelation classify_allen(const Event& first, const Event& second);

struct CausalRelation {
    AllenRelation relation = AllenRelation::After;
    std::string first;
    std::string second;
    TimeMs start_time = 0;
    TimeMs end_time = 0;

    /// Canonical "RELATION(first, second)" symbol used as the mining alphabet.
    [[nodiscard]] std::string symbol() const;

    friend bool operator==(const CausalRelation&, const CausalRelation&) = default;
};

/// Total order (start_time, end_time, relation, first, second).
bool relation_order(const CausalRelation& a, const CausalRelation& b);

struct RelationEpisode {
    std::string id;
    std::optional<std::string> ga_label;
    std::vector<CausalRelation> relations;

    friend bool operator==(const RelationEpisode&, const RelationEpisode&) = default;
};

/// Replaces each GA-specific event by `n_split` contiguous equal parts.
/// Uses the episode label as the GA; at inference the recognizer relabels
/// the episode with each hypothesis first. Throws MissingLabel when unlabelled.
Episode emphasize_ga_specific(const Episode& episode, const KnowledgeBase& kb, std::size_t n_split);

/// round(mean pervasive-sensor events / mean GA-specific events) per
/// episode of one GA, clamped to [1, 50]. Returns 1 when the GA has no
/// GA-specific events.
std::size_t auto_split_factor(const std::vector<Episode>& ga_episodes, const KnowledgeBase& kb,
                              const std::string& ga);

struct ExtractionOptions {
    /// Keep After pairs only when the KB relates their contexts.
    bool filter_non_causal = true;
    /// Drop every After pair (association-rule baseline).
    bool drop_after = false;
    /// Maximum gap between first.end and second.start; unbounded if empty.
    std::optional<TimeMs> horizon;
};

RelationEpisode extract_causal_relations(const Episode& episode, const KnowledgeBase& kb,
                                         const ExtractionOptions& options = {});

}  // namespace gar
