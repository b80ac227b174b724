#include "gar/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gar/error.hpp"

namespace gar {

namespace {

template <typename Set>
bool is_subset(const Set& small, const Set& big) {
    // Both sorted.
    return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

template <typename Row>
bool greedy_embed(const Row& pattern, const Row& row) {
    // Earliest-position greedy matching is optimal for subsequence embedding.
    std::size_t pos = 0;
    for (const auto& itemset : pattern) {
        while (pos < row.size() && !is_subset(itemset, row[pos])) ++pos;
        if (pos == row.size()) return false;
        ++pos;
    }
    return true;
}

SymbolicSequence sorted_row(const SymbolicSequence& row) {
    SymbolicSequence out = row;
    for (auto& itemset : out) {
        std::sort(itemset.begin(), itemset.end());
        itemset.erase(std::unique(itemset.begin(), itemset.end()), itemset.end());
    }
    return out;
}

}  // namespace

bool matches(const SymbolicSequence& pattern, const SymbolicSequence& test_row) {
    return greedy_embed(sorted_row(pattern), sorted_row(test_row));
}

bool matches(const Pattern& pattern, const SymbolicSequence& test_row) {
    return matches(pattern.elements, test_row);
}

std::vector<MatchResult> score_row(const SymbolicSequence& test_row, const PatternStore& store) {
    if (store.gas.empty()) throw Error(ErrorCode::EmptyStore, "pattern store holds no GA");
    const auto row = sorted_row(test_row);
    std::vector<MatchResult> out;
    for (const auto& [ga, patterns] : store.gas) {
        MatchResult r;
        r.ga = ga;
        for (std::size_t i = 0; i < patterns.patterns.size(); ++i) {
            const auto& p = patterns.patterns[i];
            r.total_weight += p.support;
            if (greedy_embed(sorted_row(p.elements), row)) {
                r.matched_pattern_ids.push_back(i);
                r.weight_sum += p.support;
            }
        }
        r.log_likelihood = r.weight_sum - r.total_weight;
        r.likelihood = std::exp(r.log_likelihood);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<MatchResult> score(const RelationEpisode& test, const PatternStore& store) {
    return score_row(build_sequence_row(test, store.layout), store);
}

std::string best_ga(const std::vector<MatchResult>& results) {
    if (results.empty()) throw Error(ErrorCode::EmptyStore, "no GA scored");
    const MatchResult* best = &results.front();
    for (const auto& r : results) {
        if (r.log_likelihood > best->log_likelihood ||
            (r.log_likelihood == best->log_likelihood && r.ga < best->ga)) {
            best = &r;
        }
    }
    return best->ga;
}

std::string recognize(const RelationEpisode& test, const PatternStore& store) {
    return best_ga(score(test, store));
}

Recognizer::Recognizer(const PatternStore& store) : layout_(store.layout) {
    if (store.gas.empty()) throw Error(ErrorCode::EmptyStore, "pattern store holds no GA");
    std::set<std::string> symbols;
    for (const auto& [ga, patterns] : store.gas) {
        for (const auto& p : patterns.patterns) {
            for (const auto& itemset : p.elements) symbols.insert(itemset.begin(), itemset.end());
        }
    }
    alphabet_.assign(symbols.begin(), symbols.end());
    auto id_of = [this](const std::string& s) {
        return static_cast<std::uint32_t>(std::lower_bound(alphabet_.begin(), alphabet_.end(), s) -
                                          alphabet_.begin());
    };
    for (const auto& [ga, patterns] : store.gas) {
        CompiledGa compiled{ga, {}, 0.0};
        for (const auto& p : patterns.patterns) {
            CompiledPattern cp;
            cp.weight = p.support;
            for (const auto& itemset : p.elements) {
                auto& ids = cp.elements.emplace_back();
                for (const auto& s : itemset) ids.push_back(id_of(s));
                std::sort(ids.begin(), ids.end());
                ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            }
            compiled.total_weight += p.support;
            compiled.patterns.push_back(std::move(cp));
        }
        gas_.push_back(std::move(compiled));
    }
}

bool Recognizer::embeds(const std::vector<std::vector<std::uint32_t>>& pattern,
                        const std::vector<std::vector<std::uint32_t>>& row) {
    return greedy_embed(pattern, row);
}

std::vector<std::vector<std::uint32_t>> Recognizer::compile_row(const RelationEpisode& test) const {
    // Symbols never seen in training cannot satisfy any pattern element.
    std::vector<std::vector<std::uint32_t>> row;
    for (const auto& itemset : build_sequence_row(test, layout_)) {
        auto& ids = row.emplace_back();
        for (const auto& s : itemset) {
            auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), s);
            if (it != alphabet_.end() && *it == s) ids.push_back(static_cast<std::uint32_t>(it - alphabet_.begin()));
        }
        std::sort(ids.begin(), ids.end());
    }
    return row;
}

MatchResult Recognizer::score_compiled(const CompiledGa& ga, const std::vector<std::vector<std::uint32_t>>& row) {
    MatchResult r;
    r.ga = ga.name;
    r.total_weight = ga.total_weight;
    for (std::size_t i = 0; i < ga.patterns.size(); ++i) {
        if (embeds(ga.patterns[i].elements, row)) {
            r.matched_pattern_ids.push_back(i);
            r.weight_sum += ga.patterns[i].weight;
        }
    }
    r.log_likelihood = r.weight_sum - r.total_weight;
    r.likelihood = std::exp(r.log_likelihood);
    return r;
}

std::vector<MatchResult> Recognizer::score(const RelationEpisode& test) const {
    const auto row = compile_row(test);
    std::vector<MatchResult> out;
    out.reserve(gas_.size());
    for (const auto& ga : gas_) out.push_back(score_compiled(ga, row));
    return out;
}

MatchResult Recognizer::score_ga(std::size_t index, const RelationEpisode& test) const {
    if (index >= gas_.size()) throw Error(ErrorCode::UnknownGA, "GA index " + std::to_string(index) + " out of range");
    return score_compiled(gas_[index], compile_row(test));
}

std::vector<std::string> Recognizer::gas() const {
    std::vector<std::string> out;
    for (const auto& ga : gas_) out.push_back(ga.name);
    return out;
}

std::string Recognizer::recognize(const RelationEpisode& test) const { return best_ga(score(test)); }

}  // namespace gar
