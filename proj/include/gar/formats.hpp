#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gar/event_model.hpp"
#include "gar/knowledge_base.hpp"
#include "gar/pattern_tree.hpp"
#include "gar/preprocessing.hpp"
#include "gar/recognizer.hpp"

// Plain-text artifact formats. Every writer is deterministic and every
// reader accepts exactly what the writer produces, so a load/save cycle
// reproduces the input byte for byte.
namespace gar {

inline constexpr std::string_view kPatternStoreMagic = "gar-pattern-store";
inline constexpr int kPatternStoreVersion = 1;

/// Shortest decimal that round-trips to the same double.
std::string format_double(double value);
double parse_double(std::string_view text, std::string_view what);
long long parse_int(std::string_view text, std::string_view what);

/// `timestamp<TAB>source_id<TAB>value`, one record per line.
std::vector<RawRecord> read_raw_records(std::istream& in, std::string_view origin = "<raw>");
void write_raw_records(std::ostream& out, std::span<const RawRecord> records);

/// Episode blocks:
///   episode<TAB>id
///   ga_label<TAB>name        (empty name: unlabelled)
///   events<TAB>count
///   label,start_time,end_time,source_kind   (count lines)
void write_episodes(std::ostream& out, std::span<const Episode> episodes);
std::vector<Episode> read_episodes(std::istream& in, std::string_view origin = "<episodes>");

/// Same block layout with `relations<TAB>count` and
/// `relation,first,second,start_time,end_time` lines.
void write_relation_episodes(std::ostream& out, std::span<const RelationEpisode> episodes);
std::vector<RelationEpisode> read_relation_episodes(std::istream& in, std::string_view origin = "<relations>");

/// Sections [is_about] [publishes] [kind_of] [affects] [related_to]
/// [ga_specific_events], one tab-separated entry per line.
void write_knowledge_base(std::ostream& out, const KnowledgeBase& kb);
KnowledgeBase read_knowledge_base(std::istream& in, std::string_view origin = "<kb>");

/// Header `gar-pattern-store<TAB>1`, then `layout`, `meta` lines and per
/// GA a `ga<TAB>name<TAB>threshold<TAB>count` line followed by
/// `support<TAB>depth<TAB>pattern` lines.
void write_pattern_store(std::ostream& out, const PatternStore& store);
PatternStore read_pattern_store(std::istream& in, std::string_view origin = "<store>");

/// `episode_id<TAB>predicted_ga<TAB>ga=likelihood,ga=likelihood`.
std::string format_prediction(const std::string& episode_id, const std::string& predicted,
                              const std::vector<MatchResult>& results);

std::vector<RawRecord> load_raw_records(const std::filesystem::path& path);
std::vector<Episode> load_episodes(const std::filesystem::path& path);
KnowledgeBase load_knowledge_base(const std::filesystem::path& path);
PatternStore load_pattern_store(const std::filesystem::path& path);

void save_episodes(const std::filesystem::path& path, std::span<const Episode> episodes);
void save_knowledge_base(const std::filesystem::path& path, const KnowledgeBase& kb);
void save_pattern_store(const std::filesystem::path& path, const PatternStore& store);

std::string to_text(const PatternStore& store);
std::string to_text(const KnowledgeBase& kb);
std::string to_text(std::span<const Episode> episodes);

}  // namespace gar
