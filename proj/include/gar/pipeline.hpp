#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gar/knowledge_base.hpp"
#include "gar/pattern_tree.hpp"
#include "gar/preprocessing.hpp"
#include "gar/recognizer.hpp"

namespace gar {

/// ASSOC_RULE mines unordered co-occurrence itemsets over the six
/// non-After relations; the SEQ_PATTERN variants mine sequences, with FT
/// enabling non-causal After removal and GA enabling GA-specific emphasis.
enum class AblationMode { AssocRule, SeqPattern, SeqPatternFt, SeqPatternGa, SeqPatternFtGa };

inline constexpr AblationMode kAllAblationModes[] = {
    AblationMode::AssocRule, AblationMode::SeqPattern, AblationMode::SeqPatternFt,
    AblationMode::SeqPatternGa, AblationMode::SeqPatternFtGa,
};

std::string_view to_string(AblationMode mode);
AblationMode parse_ablation_mode(std::string_view text);

bool filters_non_causal(AblationMode mode);
bool emphasizes_ga_specific(AblationMode mode);
SequenceLayout layout_for(AblationMode mode);

/// Number of parts a GA-specific event is split into; `automatic` derives
/// it per GA from the training data.
struct SplitFactor {
    bool automatic = false;
    std::size_t value = 10;

    friend bool operator==(const SplitFactor&, const SplitFactor&) = default;
};

struct PipelineConfig {
    AblationMode mode = AblationMode::SeqPatternFtGa;
    SplitFactor n_split;
    std::size_t target_pattern_count = 50;
    std::size_t max_depth = 6;
    std::optional<TimeMs> horizon;
    RelatedToAggregation aggregation = RelatedToAggregation::Min;
    bool truncate_to_target = true;
};

ExtractionOptions extraction_options(AblationMode mode, std::optional<TimeMs> horizon);

struct TrainedModel {
    KnowledgeBase kb;
    PatternStore store;
};

/// Induces the KB from `training`, preprocesses every episode per the
/// mode and trains one pattern set per GA.
TrainedModel train_model(std::span<const Episode> training, const KnowledgeBase& vocabulary,
                         const KbDeclarations& declared, const PipelineConfig& config);

/// Inference-side preprocessing using the settings recorded in the store.
RelationEpisode preprocess_for_store(const Episode& episode, const KnowledgeBase& kb, const PatternStore& store);

/// Split factor a GA was trained with (1 when its events were not split).
std::size_t stored_split_factor(const PatternStore& store, const std::string& ga);

/// Preprocessing under the hypothesis that `episode` belongs to `ga`: its
/// GA-specific events are split exactly as during that GA's training.
RelationEpisode preprocess_for_ga(const Episode& episode, const KnowledgeBase& kb, const PatternStore& store,
                                  const std::string& ga);

/// Scores each GA on the test episode preprocessed under that GA's
/// hypothesis, so split sub-events seen in training can match.
class Classifier {
public:
    explicit Classifier(TrainedModel model);

    [[nodiscard]] std::vector<MatchResult> score(const Episode& episode) const;
    [[nodiscard]] std::string predict(const Episode& episode) const;
    [[nodiscard]] const TrainedModel& model() const { return model_; }

private:
    TrainedModel model_;
    Recognizer recognizer_;
    bool per_ga_ = false;
};

}  // namespace gar
