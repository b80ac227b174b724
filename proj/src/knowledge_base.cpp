#include "gar/knowledge_base.hpp"

#include <cmath>
#include <limits>

#include "gar/error.hpp"

namespace gar {

TrainingCorpus group_by_ga(const std::vector<Episode>& episodes) {
    TrainingCorpus corpus;
    for (const auto& e : episodes) {
        if (!e.ga_label) throw Error(ErrorCode::MissingLabel, "episode '" + e.id + "' has no GA label");
        corpus[*e.ga_label].push_back(e);
    }
    return corpus;
}

KnowledgeBase KnowledgeBase::from_registry(const SourceRegistry& registry) {
    KnowledgeBase kb;
    for (const auto& [id, spec] : registry.sources()) {
        kb.kind_of[id] = spec.kind;
        auto& published = kb.publishes[id];
        for (const auto& label : spec.labels()) {
            published.insert(label);
            kb.is_about[label] = spec.context;
        }
    }
    return kb;
}

const std::string& KnowledgeBase::context_of(const std::string& label) const {
    auto it = is_about.find(label);
    if (it == is_about.end()) throw Error(ErrorCode::UnknownEvent, "event '" + label + "' is not registered");
    return it->second;
}

SmartObjectKind KnowledgeBase::kind_of_label(const std::string& label) const {
    for (const auto& [source, labels] : publishes) {
        if (labels.contains(label)) {
            auto it = kind_of.find(source);
            if (it == kind_of.end()) break;
            return it->second;
        }
    }
    throw Error(ErrorCode::UnknownEvent, "event '" + label + "' has no registered publisher");
}

std::set<std::string> KnowledgeBase::contexts() const {
    std::set<std::string> out;
    for (const auto& [label, context] : is_about) out.insert(context);
    return out;
}

bool KnowledgeBase::has_context(const std::string& context) const {
    for (const auto& [label, c] : is_about) {
        if (c == context) return true;
    }
    return false;
}

namespace {

double tf_idf(double f, std::size_t gaf, std::size_t n) {
    if (f == 0.0 || gaf == 0) return 0.0;
    return f * std::log10(static_cast<double>(n) / static_cast<double>(gaf));
}

void require_training(const TrainingCorpus& training) {
    if (training.empty()) throw Error(ErrorCode::InsufficientData, "training corpus is empty");
}

void require_context(const KnowledgeBase& kb, const std::string& context) {
    if (!kb.has_context(context)) {
        throw Error(ErrorCode::UnknownContext, "context '" + context + "' is not registered");
    }
}

// Event counts per context for every GA.
struct ContextCounts {
    std::map<std::string, std::map<std::string, std::size_t>> per_ga;
    std::map<std::string, std::size_t> totals;
};

ContextCounts count_contexts(const TrainingCorpus& training, const KnowledgeBase& kb) {
    ContextCounts counts;
    for (const auto& [ga, episodes] : training) {
        auto& per_context = counts.per_ga[ga];
        std::size_t total = 0;
        for (const auto& e : episodes) {
            for (const auto& ev : e.events) {
                ++per_context[kb.context_of(ev.label)];
                ++total;
            }
        }
        counts.totals[ga] = total;
    }
    return counts;
}

struct OrderedSetCounts {
    std::map<std::string, std::map<ContextPair, std::size_t>> per_ga;
    std::map<std::string, std::size_t> totals;
};

OrderedSetCounts count_ordered_sets(const TrainingCorpus& training, const KnowledgeBase& kb) {
    OrderedSetCounts counts;
    for (const auto& [ga, episodes] : training) {
        auto& per_pair = counts.per_ga[ga];
        std::size_t total = 0;
        for (const auto& e : episodes) {
            for (const auto& pair : ordered_sets(e, kb)) {
                ++per_pair[pair];
                ++total;
            }
        }
        counts.totals[ga] = total;
    }
    return counts;
}

template <typename Key>
std::size_t ga_frequency(const std::map<std::string, std::map<Key, std::size_t>>& per_ga, const Key& key) {
    std::size_t gaf = 0;
    for (const auto& [ga, counts] : per_ga) {
        auto it = counts.find(key);
        if (it != counts.end() && it->second > 0) ++gaf;
    }
    return gaf;
}

template <typename Key>
ImportanceScore importance_from(const std::map<std::string, std::map<Key, std::size_t>>& per_ga,
                                const std::map<std::string, std::size_t>& totals, const Key& key,
                                const std::string& ga) {
    ImportanceScore s;
    s.n = per_ga.size();
    s.gaf = ga_frequency(per_ga, key);
    const auto total = totals.at(ga);
    const auto& counts = per_ga.at(ga);
    auto it = counts.find(key);
    const std::size_t count = it == counts.end() ? 0 : it->second;
    s.f = total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
    s.value = tf_idf(s.f, s.gaf, s.n);
    return s;
}

}  // namespace

ImportanceScore context_importance(const TrainingCorpus& training, const KnowledgeBase& kb,
                                   const std::string& context, const std::string& ga) {
    require_training(training);
    require_context(kb, context);
    if (!training.contains(ga)) throw Error(ErrorCode::UnknownGA, "GA '" + ga + "' has no training episodes");
    const auto counts = count_contexts(training, kb);
    if (counts.totals.at(ga) == 0) throw Error(ErrorCode::EmptyGA, "GA '" + ga + "' has no events");
    return importance_from(counts.per_ga, counts.totals, context, ga);
}

std::map<std::string, std::set<std::string>> induce_affects(const TrainingCorpus& training,
                                                            const KnowledgeBase& kb) {
    require_training(training);
    const auto counts = count_contexts(training, kb);
    const auto contexts = kb.contexts();
    std::map<std::string, std::set<std::string>> affects;
    for (const auto& [ga, episodes] : training) {
        auto& set = affects[ga];
        if (counts.totals.at(ga) == 0) continue;
        for (const auto& c : contexts) {
            if (importance_from(counts.per_ga, counts.totals, c, ga).value > 0.0) set.insert(c);
        }
    }
    return affects;
}

std::set<ContextPair> ordered_sets(const Episode& episode, const KnowledgeBase& kb) {
    // (x, y) occurs iff the earliest start of x precedes the latest start of y.
    std::map<std::string, std::pair<TimeMs, TimeMs>> span;
    for (const auto& ev : episode.events) {
        const auto& c = kb.context_of(ev.label);
        auto [it, inserted] = span.emplace(c, std::pair{ev.start_time, ev.start_time});
        if (!inserted) {
            it->second.first = std::min(it->second.first, ev.start_time);
            it->second.second = std::max(it->second.second, ev.start_time);
        }
    }
    std::set<ContextPair> out;
    for (const auto& [x, sx] : span) {
        for (const auto& [y, sy] : span) {
            if (sx.first < sy.second) out.emplace(x, y);
        }
    }
    return out;
}

ImportanceScore ordered_set_importance(const TrainingCorpus& training, const KnowledgeBase& kb,
                                       const ContextPair& pair, const std::string& ga) {
    require_training(training);
    require_context(kb, pair.first);
    require_context(kb, pair.second);
    if (!training.contains(ga)) throw Error(ErrorCode::UnknownGA, "GA '" + ga + "' has no training episodes");
    const auto counts = count_ordered_sets(training, kb);
    return importance_from(counts.per_ga, counts.totals, pair, ga);
}

std::set<ContextPair> induce_related_to(const TrainingCorpus& training, const KnowledgeBase& kb,
                                        RelatedToAggregation aggregation) {
    require_training(training);
    const auto counts = count_ordered_sets(training, kb);
    const auto contexts = kb.contexts();
    std::set<ContextPair> related;
    for (const auto& x : contexts) {
        for (const auto& y : contexts) {
            const ContextPair pair{x, y};
            double agg = aggregation == RelatedToAggregation::Min ? std::numeric_limits<double>::infinity() : 0.0;
            for (const auto& [ga, episodes] : training) {
                const double v = importance_from(counts.per_ga, counts.totals, pair, ga).value;
                agg = aggregation == RelatedToAggregation::Min ? std::min(agg, v) : std::max(agg, v);
            }
            if (agg > 0.0) related.insert(pair);
        }
    }
    return related;
}

std::set<std::string> ga_specific_events(const KnowledgeBase& kb, const std::string& ga) {
    auto it = kb.affects.find(ga);
    if (it == kb.affects.end()) throw Error(ErrorCode::UnknownGA, "GA '" + ga + "' is not in the knowledge base");
    std::set<std::string> out;
    for (const auto& [source, labels] : kb.publishes) {
        auto kind = kb.kind_of.find(source);
        if (kind == kb.kind_of.end() || kind->second != SmartObjectKind::Actuator) continue;
        for (const auto& label : labels) {
            if (it->second.contains(kb.context_of(label))) out.insert(label);
        }
    }
    return out;
}

bool causally_related(const KnowledgeBase& kb, const std::string& first_label, const std::string& second_label) {
    return kb.related_to.contains(ContextPair{kb.context_of(first_label), kb.context_of(second_label)});
}

KnowledgeBase induce_knowledge_base(KnowledgeBase kb, const TrainingCorpus& training,
                                    const KbDeclarations& declared, RelatedToAggregation aggregation) {
    for (const auto& [ga, contexts] : declared.affects) {
        for (const auto& c : contexts) require_context(kb, c);
    }
    for (const auto& [x, y] : declared.related_to) {
        require_context(kb, x);
        require_context(kb, y);
    }

    kb.affects = induce_affects(training, kb);
    for (const auto& [ga, contexts] : declared.affects) kb.affects[ga].insert(contexts.begin(), contexts.end());

    kb.related_to = induce_related_to(training, kb, aggregation);
    kb.related_to.insert(declared.related_to.begin(), declared.related_to.end());

    kb.ga_specific_events.clear();
    for (const auto& [ga, contexts] : kb.affects) kb.ga_specific_events[ga] = ga_specific_events(kb, ga);
    return kb;
}

}  // namespace gar
