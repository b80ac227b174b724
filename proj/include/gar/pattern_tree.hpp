#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gar/preprocessing.hpp"

namespace gar {

using SymbolId = std::uint32_t;
/// Sorted, duplicate-free set of symbols sharing one position.
using Itemset = std::vector<SymbolId>;

/// `Sequential` groups relations with identical (start_time, end_time)
/// into one itemset and orders positions by time. `Unordered` puts every
/// relation of an episode into a single itemset.
enum class SequenceLayout { Sequential, Unordered };

std::string_view to_string(SequenceLayout layout);
SequenceLayout parse_sequence_layout(std::string_view text);

struct SequenceDatabase {
    /// Sorted byte-wise; a SymbolId indexes this vector, so id order is
    /// the lexicographic order of the canonical relation renderings.
    std::vector<std::string> alphabet;
    std::vector<std::vector<Itemset>> sequences;

    [[nodiscard]] std::optional<SymbolId> lookup(std::string_view symbol) const;
    [[nodiscard]] std::size_t size() const { return sequences.size(); }
};

/// Symbolic form of a sequence or pattern: ordered itemsets of symbols.
using SymbolicSequence = std::vector<std::vector<std::string>>;

SequenceDatabase build_sequence_database(std::span<const RelationEpisode> episodes,
                                         SequenceLayout layout = SequenceLayout::Sequential);

/// Row of one episode in symbolic form, using the same grouping rule.
SymbolicSequence build_sequence_row(const RelationEpisode& episode,
                                    SequenceLayout layout = SequenceLayout::Sequential);

/// Builds a database from symbolic rows; itemsets are sorted and de-duplicated.
SequenceDatabase make_sequence_database(const std::vector<SymbolicSequence>& rows);

struct Pattern {
    SymbolicSequence elements;
    double support = 0.0;
    std::size_t depth = 0;

    /// "(a,b),(c)": parentheses group co-occurring relations, commas
    /// between groups express precedence.
    [[nodiscard]] std::string render() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

std::string render_pattern(const SymbolicSequence& elements);
/// Inverse of render_pattern. Throws Parse.
SymbolicSequence parse_pattern(std::string_view text);

enum class ExtensionKind { Root, ItemsetExtension, SequenceExtension };

struct PatternNode {
    SymbolId symbol = 0;
    ExtensionKind extension_kind = ExtensionKind::Root;
    std::size_t support_count = 0;
    double support = 1.0;
    std::size_t depth = 0;
    std::size_t parent = 0;
    std::vector<std::size_t> children;
};

struct MineOptions {
    /// Longest pattern, counted in relations; 0 disables the cap.
    std::size_t max_depth = 6;
    /// Off for association-rule style mining of co-occurrence itemsets.
    bool sequence_extension = true;
    /// Stop growing once this many patterns exist; 0 means no limit.
    std::size_t limit = 0;
};

/// Lexicographic pattern tree grown by itemset extension over right
/// brothers and sequence extension over brothers and the node itself.
/// Every non-root node is a frequent pattern.
class PatternTree {
public:
    static PatternTree build(const SequenceDatabase& db, double min_support, const MineOptions& options = {});

    [[nodiscard]] const std::vector<PatternNode>& nodes() const { return nodes_; }
    [[nodiscard]] std::size_t pattern_count() const { return nodes_.size() - 1; }
    [[nodiscard]] bool hit_limit() const { return hit_limit_; }
    [[nodiscard]] std::vector<Itemset> elements_of(std::size_t node) const;
    [[nodiscard]] std::vector<Pattern> extract_patterns() const;

private:
    const SequenceDatabase* db_ = nullptr;
    std::vector<PatternNode> nodes_;
    bool hit_limit_ = false;

    friend class TreeBuilder;
};

/// Frequent sequential patterns with support >= min_support, in tree order.
/// Throws InvalidThreshold unless 0 < min_support <= 1.
std::vector<Pattern> mine(const SequenceDatabase& db, double min_support, const MineOptions& options = {});

struct Calibration {
    double threshold = 1.0;
    /// Pattern count at `threshold`, capped at the target.
    std::size_t achieved = 0;
    bool reached = false;
};

/// Largest support threshold (a multiple of 1/|db|, at least 2/|db|)
/// yielding at least `target` patterns. When even the lowest threshold
/// falls short, returns that threshold with `reached` unset.
Calibration calibrate_threshold(const SequenceDatabase& db, std::size_t target, const MineOptions& options = {});

/// Store ordering: support descending, depth ascending, rendering ascending.
void sort_patterns(std::vector<Pattern>& patterns);

struct GaPatterns {
    double threshold = 1.0;
    std::vector<Pattern> patterns;

    friend bool operator==(const GaPatterns&, const GaPatterns&) = default;
};

struct PatternStore {
    SequenceLayout layout = SequenceLayout::Sequential;
    /// Preprocessing settings the recognizer must reproduce.
    std::map<std::string, std::string> metadata;
    std::map<std::string, GaPatterns> gas;

    friend bool operator==(const PatternStore&, const PatternStore&) = default;
};

struct TrainOptions {
    std::size_t target_pattern_count = 50;
    MineOptions mine;
    SequenceLayout layout = SequenceLayout::Sequential;
    /// Keep only the first `target_pattern_count` patterns in store order.
    bool truncate_to_target = true;
};

PatternStore train(const std::map<std::string, std::vector<RelationEpisode>>& per_ga_episodes,
                   const TrainOptions& options = {});

}  // namespace gar
