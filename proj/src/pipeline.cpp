#include "gar/pipeline.hpp"

#include <algorithm>
#include <map>

#include "gar/error.hpp"
#include "gar/formats.hpp"

namespace gar {

std::string_view to_string(AblationMode mode) {
    switch (mode) {
        case AblationMode::AssocRule: return "ASSOC_RULE";
        case AblationMode::SeqPattern: return "SEQ_PATTERN";
        case AblationMode::SeqPatternFt: return "SEQ_PATTERN_FT";
        case AblationMode::SeqPatternGa: return "SEQ_PATTERN_GA";
        case AblationMode::SeqPatternFtGa: return "SEQ_PATTERN_FT_GA";
    }
    return "SEQ_PATTERN_FT_GA";
}

AblationMode parse_ablation_mode(std::string_view text) {
    for (auto m : kAllAblationModes) {
        if (to_string(m) == text) return m;
    }
    throw Error(ErrorCode::Parse, "unknown ablation mode '" + std::string(text) + "'");
}

bool filters_non_causal(AblationMode mode) {
    return mode == AblationMode::SeqPatternFt || mode == AblationMode::SeqPatternFtGa;
}

bool emphasizes_ga_specific(AblationMode mode) {
    return mode == AblationMode::SeqPatternGa || mode == AblationMode::SeqPatternFtGa;
}

SequenceLayout layout_for(AblationMode mode) {
    return mode == AblationMode::AssocRule ? SequenceLayout::Unordered : SequenceLayout::Sequential;
}

ExtractionOptions extraction_options(AblationMode mode, std::optional<TimeMs> horizon) {
    ExtractionOptions o;
    o.filter_non_causal = filters_non_causal(mode);
    o.drop_after = mode == AblationMode::AssocRule;
    o.horizon = horizon;
    return o;
}

namespace {

constexpr std::string_view kModeKey = "mode";
constexpr std::string_view kHorizonKey = "horizon";
constexpr std::string_view kSplitPrefix = "n_split.";

std::string split_key(const std::string& ga) { return std::string(kSplitPrefix) + ga; }

}  // namespace

TrainedModel train_model(std::span<const Episode> training, const KnowledgeBase& vocabulary,
                         const KbDeclarations& declared, const PipelineConfig& config) {
    const auto corpus = group_by_ga({training.begin(), training.end()});
    TrainedModel model;
    model.kb = induce_knowledge_base(vocabulary, corpus, declared, config.aggregation);

    const auto options = extraction_options(config.mode, config.horizon);
    std::map<std::string, std::vector<RelationEpisode>> relations;
    std::map<std::string, std::size_t> splits;
    for (const auto& [ga, episodes] : corpus) {
        std::size_t n_split = 1;
        if (emphasizes_ga_specific(config.mode)) {
            n_split = config.n_split.automatic ? auto_split_factor(episodes, model.kb, ga) : config.n_split.value;
        }
        splits[ga] = n_split;
        auto& out = relations[ga];
        out.reserve(episodes.size());
        for (const auto& e : episodes) {
            const Episode prepared = n_split > 1 ? emphasize_ga_specific(e, model.kb, n_split) : e;
            out.push_back(extract_causal_relations(prepared, model.kb, options));
        }
    }

    TrainOptions train_options;
    train_options.target_pattern_count = config.target_pattern_count;
    train_options.mine.max_depth = config.max_depth;
    train_options.layout = layout_for(config.mode);
    train_options.truncate_to_target = config.truncate_to_target;
    model.store = train(relations, train_options);
    model.store.metadata[std::string(kModeKey)] = std::string(to_string(config.mode));
    model.store.metadata[std::string(kHorizonKey)] = config.horizon ? std::to_string(*config.horizon) : "none";
    if (emphasizes_ga_specific(config.mode)) {
        for (const auto& [ga, n] : splits) model.store.metadata[split_key(ga)] = std::to_string(n);
    }
    return model;
}

namespace {

struct StoreSettings {
    AblationMode mode = AblationMode::SeqPatternFtGa;
    std::optional<TimeMs> horizon;
};

StoreSettings settings_of(const PatternStore& store) {
    StoreSettings s;
    if (auto it = store.metadata.find(std::string(kModeKey)); it != store.metadata.end()) {
        s.mode = parse_ablation_mode(it->second);
    }
    if (auto it = store.metadata.find(std::string(kHorizonKey)); it != store.metadata.end() && it->second != "none") {
        s.horizon = parse_int(it->second, "horizon");
    }
    return s;
}

}  // namespace

std::size_t stored_split_factor(const PatternStore& store, const std::string& ga) {
    auto it = store.metadata.find(split_key(ga));
    if (it == store.metadata.end()) return 1;
    const auto n = parse_int(it->second, "n_split");
    if (n < 1) throw Error(ErrorCode::Parse, "n_split for GA '" + ga + "' must be >= 1");
    return static_cast<std::size_t>(n);
}

RelationEpisode preprocess_for_store(const Episode& episode, const KnowledgeBase& kb, const PatternStore& store) {
    const auto s = settings_of(store);
    return extract_causal_relations(episode, kb, extraction_options(s.mode, s.horizon));
}

RelationEpisode preprocess_for_ga(const Episode& episode, const KnowledgeBase& kb, const PatternStore& store,
                                  const std::string& ga) {
    const auto s = settings_of(store);
    const auto n = stored_split_factor(store, ga);
    if (n <= 1) return extract_causal_relations(episode, kb, extraction_options(s.mode, s.horizon));
    Episode hypothesis = episode;
    hypothesis.ga_label = ga;
    return extract_causal_relations(emphasize_ga_specific(hypothesis, kb, n), kb,
                                    extraction_options(s.mode, s.horizon));
}

Classifier::Classifier(TrainedModel model) : model_(std::move(model)), recognizer_(model_.store) {
    const auto gas = recognizer_.gas();
    per_ga_ = std::any_of(gas.begin(), gas.end(),
                          [&](const std::string& ga) { return stored_split_factor(model_.store, ga) > 1; });
}

std::vector<MatchResult> Classifier::score(const Episode& episode) const {
    if (!per_ga_) return recognizer_.score(preprocess_for_store(episode, model_.kb, model_.store));
    const auto gas = recognizer_.gas();
    std::vector<MatchResult> out;
    out.reserve(gas.size());
    for (std::size_t i = 0; i < gas.size(); ++i) {
        out.push_back(recognizer_.score_ga(i, preprocess_for_ga(episode, model_.kb, model_.store, gas[i])));
    }
    return out;
}

std::string Classifier::predict(const Episode& episode) const { return best_ga(score(episode)); }

}  // namespace gar
