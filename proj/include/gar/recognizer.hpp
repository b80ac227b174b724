#pragma once

#include <string>
#include <vector>

#include "gar/pattern_tree.hpp"

namespace gar {

struct MatchResult {
    std::string ga;
    std::vector<std::size_t> matched_pattern_ids;
    /// Sum of supports of matched patterns.
    double weight_sum = 0.0;
    /// Sum of supports of all the GA's patterns; log of the normalizer.
    double total_weight = 0.0;
    double log_likelihood = 0.0;
    double likelihood = 1.0;
};

/// True iff each pattern itemset is a subset of a distinct test position
/// and those positions strictly increase. The empty pattern always matches.
bool matches(const SymbolicSequence& pattern, const SymbolicSequence& test_row);
bool matches(const Pattern& pattern, const SymbolicSequence& test_row);

/// Scores a test row against every GA: likelihood = exp(matched - total).
/// Throws EmptyStore.
std::vector<MatchResult> score_row(const SymbolicSequence& test_row, const PatternStore& store);

std::vector<MatchResult> score(const RelationEpisode& test, const PatternStore& store);

/// Argmax of likelihood; ties go to the lexicographically smallest GA.
std::string recognize(const RelationEpisode& test, const PatternStore& store);
std::string best_ga(const std::vector<MatchResult>& results);

/// Pre-compiled store for repeated scoring.
class Recognizer {
public:
    explicit Recognizer(const PatternStore& store);

    [[nodiscard]] std::vector<MatchResult> score(const RelationEpisode& test) const;
    [[nodiscard]] std::string recognize(const RelationEpisode& test) const;
    /// Scores only the index-th GA (in name order). Throws UnknownGA.
    [[nodiscard]] MatchResult score_ga(std::size_t index, const RelationEpisode& test) const;
    [[nodiscard]] std::vector<std::string> gas() const;

private:
    struct CompiledPattern {
        std::vector<std::vector<std::uint32_t>> elements;
        double weight = 0.0;
    };
    struct CompiledGa {
        std::string name;
        std::vector<CompiledPattern> patterns;
        double total_weight = 0.0;
    };

    SequenceLayout layout_;
    std::vector<std::string> alphabet_;
    std::vector<CompiledGa> gas_;

    [[nodiscard]] std::vector<std::vector<std::uint32_t>> compile_row(const RelationEpisode& test) const;
    static MatchResult score_compiled(const CompiledGa& ga, const std::vector<std::vector<std::uint32_t>>& row);
    static bool embeds(const std::vector<std::vector<std::uint32_t>>& pattern,
                       const std::vector<std::vector<std::uint32_t>>& row);
};

}  // namespace gar
