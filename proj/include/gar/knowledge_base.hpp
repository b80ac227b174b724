#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gar/event_model.hpp"

namespace gar {

using ContextPair = std::pair<std::string, std::string>;

/// Per-GA training episodes, keyed by GA name.
using TrainingCorpus = std::map<std::string, std::vector<Episode>>;

/// Groups labelled episodes by GA. Throws MissingLabel for unlabelled ones.
TrainingCorpus group_by_ga(const std::vector<Episode>& episodes);

/// TF-IDF style weight: value = f * log10(N / gaf).
struct ImportanceScore {
    double value = 0.0;
    double f = 0.0;
    std::size_t gaf = 0;
    std::size_t n = 0;
};

/// Group-activity knowledge base.
///
/// The vocabulary half (is_about, publishes, kind_of) is declared by the
/// smart-object registry; the GA half (affects, related_to,
/// ga_specific_events) is declared by an administrator or induced from
/// training episodes.
struct KnowledgeBase {
    std::map<std::string, std::string> is_about;
    std::map<std::string, std::set<std::string>> publishes;
    std::map<std::string, SmartObjectKind> kind_of;
    std::map<std::string, std::set<std::string>> affects;
    std::set<ContextPair> related_to;
    std::map<std::string, std::set<std::string>> ga_specific_events;

    static KnowledgeBase from_registry(const SourceRegistry& registry);

    /// Throws UnknownEvent.
    [[nodiscard]] const std::string& context_of(const std::string& label) const;
    /// Kind of the smart object publishing `label`. Throws UnknownEvent.
    [[nodiscard]] SmartObjectKind kind_of_label(const std::string& label) const;
    [[nodiscard]] std::set<std::string> contexts() const;
    [[nodiscard]] bool has_context(const std::string& context) const;

    friend bool operator==(const KnowledgeBase&, const KnowledgeBase&) = default;
};

/// Administrator statements. They always survive induction.
struct KbDeclarations {
    std::map<std::string, std::set<std::string>> affects;
    std::set<ContextPair> related_to;
};

/// How per-GA ordered-set importances are aggregated before filtering.
/// `Min` keeps a pair only if its minimum importance over all GAs is
/// non-zero; `Max` keeps it if any GA gives it non-zero importance.
enum class RelatedToAggregation { Min, Max };

ImportanceScore context_importance(const TrainingCorpus& training, const KnowledgeBase& kb,
                                   const std::string& context, const std::string& ga);

std::map<std::string, std::set<std::string>> induce_affects(const TrainingCorpus& training,
                                                            const KnowledgeBase& kb);

/// Ordered context pairs (x, y) occurring in an episode: some event of x
/// starts strictly before some event of y. Counted once per episode.
std::set<ContextPair> ordered_sets(const Episode& episode, const KnowledgeBase& kb);

ImportanceScore ordered_set_importance(const TrainingCorpus& training, const KnowledgeBase& kb,
                                       const ContextPair& pair, const std::string& ga);

std::set<ContextPair> induce_related_to(const TrainingCorpus& training, const KnowledgeBase& kb,
                                        RelatedToAggregation aggregation = RelatedToAggregation::Min);

/// Actuator events whose context the GA affects.
std::set<std::string> ga_specific_events(const KnowledgeBase& kb, const std::string& ga);

bool causally_related(const KnowledgeBase& kb, const std::string& first_label,
                      const std::string& second_label);

/// Fills affects, related_to and ga_specific_events from `training`,
/// merged with `declared`.
KnowledgeBase induce_knowledge_base(KnowledgeBase vocabulary, const TrainingCorpus& training,
                                    const KbDeclarations& declared = {},
                                    RelatedToAggregation aggregation = RelatedToAggregation::Min);

}  // namespace gar
