#pragma once

// Brute-force reference implementations used by the unit and acceptance
// tests. They follow the definitions directly and share no code with the
// library beyond its data types.

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gar/knowledge_base.hpp"
#include "gar/pattern_tree.hpp"
#include "gar/preprocessing.hpp"

namespace oracle {

// Allen's thirteen interval relations, from endpoint comparisons.
enum class Allen13 {
    Before, After, Meets, MetBy, Overlaps, OverlappedBy, Starts, StartedBy,
    During, Contains, Finishes, FinishedBy, Equals,
};

inline Allen13 allen13(long long s1, long long e1, long long s2, long long e2) {
    if (s1 == s2 && e1 == e2) return Allen13::Equals;
    if (e1 < s2) return Allen13::Before;
    if (e2 < s1) return Allen13::After;
    if (e1 == s2) return Allen13::Meets;
    if (e2 == s1) return Allen13::MetBy;
    if (s1 == s2) return e1 < e2 ? Allen13::Starts : Allen13::StartedBy;
    if (e1 == e2) return s1 > s2 ? Allen13::Finishes : Allen13::FinishedBy;
    if (s1 > s2 && e1 < e2) return Allen13::During;
    if (s1 < s2 && e1 > e2) return Allen13::Contains;
    return s1 < s2 ? Allen13::Overlaps : Allen13::OverlappedBy;
}

// Collapses a relation and its inverse onto the seven names used for
// canonically ordered pairs.
inline gar::AllenRelation collapse(Allen13 r) {
    switch (r) {
        case Allen13::Before:
        case Allen13::After: return gar::AllenRelation::After;
        case Allen13::Meets:
        case Allen13::MetBy: return gar::AllenRelation::Meets;
        case Allen13::Overlaps:
        case Allen13::OverlappedBy: return gar::AllenRelation::Overlaps;
        case Allen13::Starts:
        case Allen13::StartedBy: return gar::AllenRelation::Starts;
        case Allen13::During:
        case Allen13::Contains: return gar::AllenRelation::During;
        case Allen13::Finishes:
        case Allen13::FinishedBy: return gar::AllenRelation::Finishes;
        case Allen13::Equals: return gar::AllenRelation::Equals;
    }
    return gar::AllenRelation::Equals;
}

// Symbol-level pattern: itemsets of symbol ids.
using Seq = std::vector<std::vector<gar::SymbolId>>;

inline std::size_t items(const Seq& s) {
    std::size_t n = 0;
    for (const auto& i : s) n += i.size();
    return n;
}

// Every pattern embedded in `row`: choose increasing positions and a
// non-empty subset of each chosen itemset.
inline void all_subsequences(const Seq& row, std::size_t max_items, std::set<Seq>& out) {
    Seq current;
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (!current.empty()) out.insert(current);
        for (std::size_t p = pos; p < row.size(); ++p) {
            const auto& itemset = row[p];
            const std::size_t n = itemset.size();
            for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
                std::vector<gar::SymbolId> chosen;
                for (std::size_t b = 0; b < n; ++b) {
                    if (mask & (std::size_t{1} << b)) chosen.push_back(itemset[b]);
                }
                if (max_items != 0 && items(current) + chosen.size() > max_items) continue;
                current.push_back(chosen);
                self(self, p + 1);
                current.pop_back();
            }
        }
    };
    rec(rec, 0);
}

// Frequent patterns with their supports, by exhaustive enumeration.
inline std::map<Seq, double> frequent_subsequences(const gar::SequenceDatabase& db, double min_support,
                                                   std::size_t max_items) {
    std::map<Seq, std::size_t> counts;
    for (const auto& row : db.sequences) {
        std::set<Seq> seen;
        all_subsequences(row, max_items, seen);
        for (const auto& s : seen) ++counts[s];
    }
    std::map<Seq, double> out;
    const double n = static_cast<double>(db.size());
    for (const auto& [s, c] : counts) {
        const double support = static_cast<double>(c) / n;
        if (support >= min_support) out[s] = support;
    }
    return out;
}

// Brute-force embedding: try every increasing assignment of pattern
// elements to row positions.
inline bool embeds(const gar::SymbolicSequence& pattern, const gar::SymbolicSequence& row) {
    auto contains = [](const std::vector<std::string>& big, const std::vector<std::string>& small) {
        for (const auto& s : small) {
            if (std::find(big.begin(), big.end(), s) == big.end()) return false;
        }
        return true;
    };
    auto rec = [&](auto&& self, std::size_t i, std::size_t from) -> bool {
        if (i == pattern.size()) return true;
        for (std::size_t p = from; p < row.size(); ++p) {
            if (contains(row[p], pattern[i]) && self(self, i + 1, p + 1)) return true;
        }
        return false;
    };
    return rec(rec, 0, 0);
}

// Direct TF-IDF evaluation of context importance.
struct DirectKb {
    std::map<std::string, std::set<std::string>> affects;
    std::map<std::pair<std::string, std::string>, double> context_importance;  // (context, ga)
    std::set<gar::ContextPair> related_min;
    std::set<gar::ContextPair> related_max;
    std::map<std::pair<gar::ContextPair, std::string>, double> pair_importance;  // (pair, ga)
};

inline DirectKb direct_kb(const gar::TrainingCorpus& training, const gar::KnowledgeBase& kb) {
    DirectKb out;
    const auto contexts = kb.contexts();
    const double n = static_cast<double>(training.size());

    // Context importance, TF-IDF style.
    for (const auto& [ga, episodes] : training) {
        double total = 0;
        for (const auto& e : episodes) total += static_cast<double>(e.events.size());
        out.affects[ga];
        for (const auto& c : contexts) {
            double count = 0;
            for (const auto& e : episodes) {
                for (const auto& ev : e.events) count += kb.is_about.at(ev.label) == c ? 1 : 0;
            }
            double gaf = 0;
            for (const auto& [other, eps] : training) {
                bool any = false;
                for (const auto& e : eps) {
                    for (const auto& ev : e.events) any = any || kb.is_about.at(ev.label) == c;
                }
                gaf += any ? 1 : 0;
            }
            const double f = total == 0 ? 0 : count / total;
            const double value = (f == 0 || gaf == 0) ? 0.0 : f * std::log10(n / gaf);
            out.context_importance[{c, ga}] = value;
            if (value > 0) out.affects[ga].insert(c);
        }
    }

    // Ordered context pairs: (x, y) occurs in an episode when
    // some event of x starts strictly before some event of y.
    auto occurs = [&](const gar::Episode& e, const std::string& x, const std::string& y) {
        for (const auto& a : e.events) {
            if (kb.is_about.at(a.label) != x) continue;
            for (const auto& b : e.events) {
                if (kb.is_about.at(b.label) == y && a.start_time < b.start_time) return true;
            }
        }
        return false;
    };
    std::map<std::string, double> totals;
    std::map<std::pair<gar::ContextPair, std::string>, double> counts;
    for (const auto& [ga, episodes] : training) {
        for (const auto& e : episodes) {
            for (const auto& x : contexts) {
                for (const auto& y : contexts) {
                    if (occurs(e, x, y)) {
                        counts[{{x, y}, ga}] += 1;
                        totals[ga] += 1;
                    }
                }
            }
        }
    }
    for (const auto& x : contexts) {
        for (const auto& y : contexts) {
            const gar::ContextPair pair{x, y};
            double gaf = 0;
            for (const auto& [ga, episodes] : training) gaf += counts[{pair, ga}] > 0 ? 1 : 0;
            double lo = 1e300, hi = 0;
            for (const auto& [ga, episodes] : training) {
                const double f = totals[ga] == 0 ? 0 : counts[{pair, ga}] / totals[ga];
                const double value = (f == 0 || gaf == 0) ? 0.0 : f * std::log10(n / gaf);
                out.pair_importance[{pair, ga}] = value;
                lo = std::min(lo, value);
                hi = std::max(hi, value);
            }
            if (lo > 0) out.related_min.insert(pair);
            if (hi > 0) out.related_max.insert(pair);
        }
    }
    return out;
}

}  // namespace oracle
