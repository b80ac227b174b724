#include "gar/preprocessing.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "gar/error.hpp"

namespace gar {

std::string_view to_string(AllenRelation relation) {
    switch (relation) {
        case AllenRelation::After: return "After";
        case AllenRelation::Meets: return "Meets";
        case AllenRelation::Overlaps: return "Overlaps";
        case AllenRelation::Starts: return "Starts";
        case AllenRelation::During: return "During";
        case AllenRelation::Finishes: return "Finishes";
        case AllenRelation::Equals: return "Equals";
    }
    return "After";
}

AllenRelation parse_allen_relation(std::string_view text) {
    for (auto r : kAllAllenRelations) {
        if (to_string(r) == text) return r;
    }
    throw Error(ErrorCode::Parse, "unknown Allen relation '" + std::string(text) + "'");
}

AllenRelation classify_allen(const Event& first, const Event& second) {
    const TimeMs s1 = first.start_time, f1 = first.end_time;
    const TimeMs s2 = second.start_time, f2 = second.end_time;
    if (s1 == s2) return f1 == f2 ? AllenRelation::Equals : AllenRelation::Starts;
    // s1 < s2 from here on. Meets is tested before Finishes so that a
    // zero-length event placed at the end of `first` meets it.
    if (f1 < s2) return AllenRelation::After;
    if (f1 == s2) return AllenRelation::Meets;
    if (f2 < f1) return AllenRelation::During;
    if (f2 == f1) return AllenRelation::Finishes;
    return AllenRelation::Overlaps;
}

std::string CausalRelation::symbol() const {
    std::string out(to_string(relation));
    out.reserve(out.size() + first.size() + second.size() + 4);
    out += '(';
    out += first;
    out += ", ";
    out += second;
    out += ')';
    return out;
}

bool relation_order(const CausalRelation& a, const CausalRelation& b) {
    return std::tie(a.start_time, a.end_time, a.relation, a.first, a.second) <
           std::tie(b.start_time, b.end_time, b.relation, b.first, b.second);
}

namespace {

const std::set<std::string>& specific_for(const KnowledgeBase& kb, const std::string& ga) {
    static const std::set<std::string> none;
    auto it = kb.ga_specific_events.find(ga);
    return it == kb.ga_specific_events.end() ? none : it->second;
}

}  // namespace

Episode emphasize_ga_specific(const Episode& episode, const KnowledgeBase& kb, std::size_t n_split) {
    if (!episode.ga_label) {
        throw Error(ErrorCode::MissingLabel, "GA-specific emphasis needs a labelled episode");
    }
    if (n_split == 0) throw Error(ErrorCode::InvalidArgument, "n_split must be >= 1");
    const auto& specific = specific_for(kb, *episode.ga_label);

    Episode out{episode.id, episode.ga_label, {}};
    out.events.reserve(episode.events.size());
    for (const auto& ev : episode.events) {
        if (n_split == 1 || !specific.contains(ev.label)) {
            out.events.push_back(ev);
            continue;
        }
        const TimeMs len = ev.length();
        const auto n = static_cast<TimeMs>(n_split);
        for (TimeMs k = 0; k < n; ++k) {
            Event part = ev;
            part.start_time = ev.start_time + len * k / n;
            part.end_time = ev.start_time + len * (k + 1) / n;
            out.events.push_back(std::move(part));
        }
    }
    std::stable_sort(out.events.begin(), out.events.end(), event_order);
    return out;
}

std::size_t auto_split_factor(const std::vector<Episode>& ga_episodes, const KnowledgeBase& kb,
                              const std::string& ga) {
    const auto& specific = specific_for(kb, ga);
    if (ga_episodes.empty() || specific.empty()) return 1;
    std::size_t sensor = 0, special = 0;
    for (const auto& e : ga_episodes) {
        for (const auto& ev : e.events) {
            if (specific.contains(ev.label)) {
                ++special;
            } else if (ev.source_kind == SmartObjectKind::PervasiveSensor) {
                ++sensor;
            }
        }
    }
    if (special == 0) return 1;
    // Both means share the episode count, which cancels.
    const double ratio = static_cast<double>(sensor) / static_cast<double>(special);
    const auto rounded = static_cast<long long>(std::llround(ratio));
    return static_cast<std::size_t>(std::clamp<long long>(rounded, 1, 50));
}

RelationEpisode extract_causal_relations(const Episode& episode, const KnowledgeBase& kb,
                                         const ExtractionOptions& options) {
    std::vector<Event> events = episode.events;
    std::stable_sort(events.begin(), events.end(), event_order);

    RelationEpisode out{episode.id, episode.ga_label, {}};
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& a = events[i];
        for (std::size_t j = i + 1; j < events.size(); ++j) {
            const auto& b = events[j];
            // Starts are non-decreasing in j, so the gap only grows.
            if (options.horizon && b.start_time - a.end_time > *options.horizon) break;
            const auto rel = classify_allen(a, b);
            if (rel == AllenRelation::After) {
                if (options.drop_after) continue;
                if (options.filter_non_causal && !causally_related(kb, a.label, b.label)) continue;
            }
            out.relations.push_back(CausalRelation{rel, a.label, b.label, std::min(a.start_time, b.start_time),
                                                   std::max(a.end_time, b.end_time)});
        }
    }
    std::sort(out.relations.begin(), out.relations.end(), relation_order);
    return out;
}

}  // namespace gar
