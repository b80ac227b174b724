#include "gar/pattern_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "gar/error.hpp"

namespace gar {

std::string_view to_string(SequenceLayout layout) {
    return layout == SequenceLayout::Sequential ? "sequential" : "unordered";
}

SequenceLayout parse_sequence_layout(std::string_view text) {
    if (text == "sequential") return SequenceLayout::Sequential;
    if (text == "unordered") return SequenceLayout::Unordered;
    throw Error(ErrorCode::Parse, "unknown sequence layout '" + std::string(text) + "'");
}

std::optional<SymbolId> SequenceDatabase::lookup(std::string_view symbol) const {
    auto it = std::lower_bound(alphabet.begin(), alphabet.end(), symbol);
    if (it == alphabet.end() || *it != symbol) return std::nullopt;
    return static_cast<SymbolId>(it - alphabet.begin());
}

SymbolicSequence build_sequence_row(const RelationEpisode& episode, SequenceLayout layout) {
    std::vector<CausalRelation> relations = episode.relations;
    std::sort(relations.begin(), relations.end(), relation_order);
    SymbolicSequence row;
    if (layout == SequenceLayout::Unordered) {
        if (relations.empty()) return row;
        std::set<std::string> all;
        for (const auto& r : relations) all.insert(r.symbol());
        row.emplace_back(all.begin(), all.end());
        return row;
    }
    for (std::size_t i = 0; i < relations.size();) {
        std::set<std::string> itemset;
        std::size_t j = i;
        while (j < relations.size() && relations[j].start_time == relations[i].start_time &&
               relations[j].end_time == relations[i].end_time) {
            itemset.insert(relations[j].symbol());
            ++j;
        }
        row.emplace_back(itemset.begin(), itemset.end());
        i = j;
    }
    return row;
}

SequenceDatabase make_sequence_database(const std::vector<SymbolicSequence>& rows) {
    std::set<std::string> symbols;
    for (const auto& row : rows) {
        for (const auto& itemset : row) symbols.insert(itemset.begin(), itemset.end());
    }
    SequenceDatabase db;
    db.alphabet.assign(symbols.begin(), symbols.end());
    db.sequences.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<Itemset> seq;
        seq.reserve(row.size());
        for (const auto& itemset : row) {
            Itemset ids;
            ids.reserve(itemset.size());
            for (const auto& s : itemset) ids.push_back(*db.lookup(s));
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            if (!ids.empty()) seq.push_back(std::move(ids));
        }
        db.sequences.push_back(std::move(seq));
    }
    return db;
}

SequenceDatabase build_sequence_database(std::span<const RelationEpisode> episodes, SequenceLayout layout) {
    std::vector<SymbolicSequence> rows;
    rows.reserve(episodes.size());
    for (const auto& e : episodes) rows.push_back(build_sequence_row(e, layout));
    return make_sequence_database(rows);
}

std::string render_pattern(const SymbolicSequence& elements) {
    std::string out;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i) out += ',';
        out += '(';
        for (std::size_t j = 0; j < elements[i].size(); ++j) {
            if (j) out += ',';
            out += elements[i][j];
        }
        out += ')';
    }
    return out;
}

std::string Pattern::render() const { return render_pattern(elements); }

SymbolicSequence parse_pattern(std::string_view text) {
    // Itemsets sit at nesting depth 1, relation arguments at depth 2.
    SymbolicSequence out;
    int depth = 0;
    std::string current;
    auto fail = [&](const char* why) {
        throw Error(ErrorCode::Parse, std::string(why) + " in pattern '" + std::string(text) + "'");
    };
    for (char c : text) {
        switch (c) {
            case '(':
                if (depth == 0) {
                    out.emplace_back();
                } else {
                    current += c;
                }
                ++depth;
                if (depth > 2) fail("nesting too deep");
                break;
            case ')':
                if (depth == 0) fail("unbalanced ')'");
                --depth;
                if (depth == 0) {
                    if (current.empty()) fail("empty relation");
                    out.back().push_back(std::move(current));
                    current.clear();
                } else {
                    current += c;
                }
                break;
            case ',':
                if (depth == 1) {
                    if (current.empty()) fail("empty relation");
                    out.back().push_back(std::move(current));
                    current.clear();
                } else if (depth == 2) {
                    current += c;
                }
                break;
            default:
                if (depth == 0) fail("text outside an itemset");
                current += c;
        }
    }
    if (depth != 0) fail("unbalanced '('");
    return out;
}

namespace {

struct SeqPositions {
    std::uint32_t seq = 0;
    std::vector<std::uint32_t> positions;
};
using IdList = std::vector<SeqPositions>;

void check_threshold(double min_support) {
    if (!(min_support > 0.0 && min_support <= 1.0)) {
        throw Error(ErrorCode::InvalidThreshold, "support threshold must lie in (0, 1]");
    }
}

}  // namespace

class TreeBuilder {
public:
    TreeBuilder(PatternTree& tree, const SequenceDatabase& db, double min_support, const MineOptions& options)
        : tree_(tree), db_(db), min_support_(min_support), options_(options) {
        occurrences_.resize(db.alphabet.size());
        for (std::uint32_t s = 0; s < db.sequences.size(); ++s) {
            const auto& seq = db.sequences[s];
            for (std::uint32_t p = 0; p < seq.size(); ++p) {
                for (SymbolId sym : seq[p]) {
                    auto& occ = occurrences_[sym];
                    if (occ.empty() || occ.back().seq != s) occ.push_back(SeqPositions{s, {}});
                    occ.back().positions.push_back(p);
                }
            }
        }
    }

    void run() {
        tree_.nodes_.push_back(PatternNode{});
        std::vector<SymbolId> frequent;
        for (SymbolId s = 0; s < occurrences_.size(); ++s) {
            if (is_frequent(occurrences_[s].size())) frequent.push_back(s);
        }
        for (SymbolId s : frequent) {
            if (stopped()) return;
            const auto node = add_node(0, s, ExtensionKind::SequenceExtension, occurrences_[s].size());
            grow(node, occurrences_[s], frequent, greater_than(frequent, s));
        }
    }

private:
    PatternTree& tree_;
    const SequenceDatabase& db_;
    double min_support_;
    MineOptions options_;
    std::vector<IdList> occurrences_;

    [[nodiscard]] bool is_frequent(std::size_t count) const {
        return static_cast<double>(count) / static_cast<double>(db_.size()) >= min_support_;
    }

    [[nodiscard]] bool stopped() const { return tree_.hit_limit_; }

    static std::vector<SymbolId> greater_than(const std::vector<SymbolId>& symbols, SymbolId s) {
        return {std::upper_bound(symbols.begin(), symbols.end(), s), symbols.end()};
    }

    std::size_t add_node(std::size_t parent, SymbolId symbol, ExtensionKind kind, std::size_t count) {
        PatternNode node;
        node.symbol = symbol;
        // The first relation of a pattern starts a new position, so depth-1
        // nodes are recorded as sequence extensions of the root.
        node.extension_kind = kind;
        node.support_count = count;
        node.support = static_cast<double>(count) / static_cast<double>(db_.size());
        node.depth = tree_.nodes_[parent].depth + 1;
        node.parent = parent;
        const auto index = tree_.nodes_.size();
        tree_.nodes_.push_back(std::move(node));
        tree_.nodes_[parent].children.push_back(index);
        if (options_.limit != 0 && tree_.pattern_count() >= options_.limit) tree_.hit_limit_ = true;
        return index;
    }

    // Sequence step: positions of `sym` strictly after the earliest end of the prefix.
    static IdList sequence_step(const IdList& prefix, const IdList& sym) {
        IdList out;
        auto a = prefix.begin();
        auto b = sym.begin();
        while (a != prefix.end() && b != sym.end()) {
            if (a->seq < b->seq) {
                ++a;
            } else if (b->seq < a->seq) {
                ++b;
            } else {
                const auto first_end = a->positions.front();
                auto it = std::upper_bound(b->positions.begin(), b->positions.end(), first_end);
                if (it != b->positions.end()) out.push_back(SeqPositions{a->seq, {it, b->positions.end()}});
                ++a;
                ++b;
            }
        }
        return out;
    }

    // Itemset step: positions where the last itemset also contains `sym`.
    static IdList itemset_step(const IdList& prefix, const IdList& sym) {
        IdList out;
        auto a = prefix.begin();
        auto b = sym.begin();
        while (a != prefix.end() && b != sym.end()) {
            if (a->seq < b->seq) {
                ++a;
            } else if (b->seq < a->seq) {
                ++b;
            } else {
                SeqPositions common{a->seq, {}};
                std::set_intersection(a->positions.begin(), a->positions.end(), b->positions.begin(),
                                      b->positions.end(), std::back_inserter(common.positions));
                if (!common.positions.empty()) out.push_back(std::move(common));
                ++a;
                ++b;
            }
        }
        return out;
    }

    void grow(std::size_t node, const IdList& ids, const std::vector<SymbolId>& seq_candidates,
              const std::vector<SymbolId>& itemset_candidates) {
        if (stopped()) return;
        if (options_.max_depth != 0 && tree_.nodes_[node].depth >= options_.max_depth) return;

        struct Child {
            SymbolId symbol;
            IdList ids;
        };
        std::vector<Child> itemset_children;
        for (SymbolId s : itemset_candidates) {
            auto child = itemset_step(ids, occurrences_[s]);
            if (is_frequent(child.size())) itemset_children.push_back(Child{s, std::move(child)});
        }
        std::vector<Child> seq_children;
        if (options_.sequence_extension) {
            for (SymbolId s : seq_candidates) {
                auto child = sequence_step(ids, occurrences_[s]);
                if (is_frequent(child.size())) seq_children.push_back(Child{s, std::move(child)});
            }
        }

        std::vector<SymbolId> itemset_frequent, seq_frequent;
        for (const auto& c : itemset_children) itemset_frequent.push_back(c.symbol);
        for (const auto& c : seq_children) seq_frequent.push_back(c.symbol);

        for (auto& c : itemset_children) {
            if (stopped()) return;
            const auto child = add_node(node, c.symbol, ExtensionKind::ItemsetExtension, c.ids.size());
            grow(child, c.ids, seq_frequent, greater_than(itemset_frequent, c.symbol));
        }
        for (auto& c : seq_children) {
            if (stopped()) return;
            const auto child = add_node(node, c.symbol, ExtensionKind::SequenceExtension, c.ids.size());
            grow(child, c.ids, seq_frequent, greater_than(seq_frequent, c.symbol));
        }
    }
};

PatternTree PatternTree::build(const SequenceDatabase& db, double min_support, const MineOptions& options) {
    check_threshold(min_support);
    PatternTree tree;
    tree.db_ = &db;
    if (db.size() == 0) {
        tree.nodes_.push_back(PatternNode{});
        return tree;
    }
    TreeBuilder builder(tree, db, min_support, options);
    builder.run();
    return tree;
}

std::vector<Itemset> PatternTree::elements_of(std::size_t node) const {
    std::vector<const PatternNode*> chain;
    for (std::size_t i = node; i != 0; i = nodes_[i].parent) chain.push_back(&nodes_[i]);
    std::vector<Itemset> out;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        if ((*it)->extension_kind == ExtensionKind::ItemsetExtension && !out.empty()) {
            out.back().push_back((*it)->symbol);
        } else {
            out.push_back(Itemset{(*it)->symbol});
        }
    }
    return out;
}

std::vector<Pattern> PatternTree::extract_patterns() const {
    std::vector<Pattern> out;
    out.reserve(pattern_count());
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
        Pattern p;
        for (const auto& itemset : elements_of(i)) {
            auto& names = p.elements.emplace_back();
            for (SymbolId s : itemset) names.push_back(db_->alphabet[s]);
        }
        p.support = nodes_[i].support;
        p.depth = nodes_[i].depth;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<Pattern> mine(const SequenceDatabase& db, double min_support, const MineOptions& options) {
    return PatternTree::build(db, min_support, options).extract_patterns();
}

namespace {

std::size_t count_at(const SequenceDatabase& db, std::size_t k, const MineOptions& options, std::size_t limit) {
    MineOptions o = options;
    o.limit = limit;
    const double t = static_cast<double>(k) / static_cast<double>(db.size());
    return PatternTree::build(db, t, o).pattern_count();
}

}  // namespace

Calibration calibrate_threshold(const SequenceDatabase& db, std::size_t target, const MineOptions& options) {
    if (target == 0) throw Error(ErrorCode::InvalidArgument, "target pattern count must be >= 1");
    const std::size_t n = db.size();
    if (n == 0) throw Error(ErrorCode::InsufficientData, "cannot calibrate on an empty database");
    const auto threshold = [n](std::size_t k) { return static_cast<double>(k) / static_cast<double>(n); };

    const std::size_t floor_k = std::min<std::size_t>(2, n);
    if (const auto c = count_at(db, floor_k, options, target); c < target) {
        return Calibration{threshold(floor_k), c, false};
    }
    // count_at is non-increasing in k; find the largest k still reaching target.
    std::size_t lo = floor_k, hi = n;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo + 1) / 2;
        if (count_at(db, mid, options, target) >= target) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return Calibration{threshold(lo), target, true};
}

void sort_patterns(std::vector<Pattern>& patterns) {
    std::vector<std::pair<std::string, std::size_t>> keys;
    keys.reserve(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i) keys.emplace_back(patterns[i].render(), i);
    std::sort(keys.begin(), keys.end(), [&](const auto& a, const auto& b) {
        const auto& pa = patterns[a.second];
        const auto& pb = patterns[b.second];
        if (pa.support != pb.support) return pa.support > pb.support;
        if (pa.depth != pb.depth) return pa.depth < pb.depth;
        return a.first < b.first;
    });
    std::vector<Pattern> sorted;
    sorted.reserve(patterns.size());
    for (const auto& k : keys) sorted.push_back(std::move(patterns[k.second]));
    patterns = std::move(sorted);
}

namespace {

// First `target` patterns of sort_patterns(mine(db, threshold)) without
// enumerating every pattern at `threshold`. Requires that mining at the
// next support count up yields fewer than `target` patterns, which holds
// for a threshold returned by calibrate_threshold with `reached` set.
std::vector<Pattern> top_patterns(const SequenceDatabase& db, double threshold, std::size_t target,
                                  const MineOptions& options) {
    const std::size_t n = db.size();
    const auto k = static_cast<std::size_t>(std::llround(threshold * static_cast<double>(n)));
    std::vector<Pattern> out;
    std::set<std::string> seen;
    auto take = [&](std::vector<Pattern> patterns) {
        for (auto& p : patterns) {
            if (seen.insert(p.render()).second) out.push_back(std::move(p));
        }
    };
    if (k < n) take(mine(db, static_cast<double>(k + 1) / static_cast<double>(n), options));
    // Patterns at exactly support k/n rank by depth, so grow the depth bound
    // until the shallow ones alone reach the target.
    const std::size_t max_depth = options.max_depth == 0 ? std::numeric_limits<std::size_t>::max() : options.max_depth;
    for (std::size_t depth = 1; depth <= max_depth; ++depth) {
        MineOptions o = options;
        o.max_depth = depth;
        o.limit = 0;
        auto tree = PatternTree::build(db, threshold, o);
        const bool deeper_possible = depth < max_depth && tree.pattern_count() > 0;
        if (tree.pattern_count() >= target || !deeper_possible) {
            take(tree.extract_patterns());
            break;
        }
        // A depth bound that did not grow the tree means nothing deeper exists.
        MineOptions next = o;
        next.max_depth = depth + 1;
        next.limit = tree.pattern_count() + 1;
        if (PatternTree::build(db, threshold, next).pattern_count() == tree.pattern_count()) {
            take(tree.extract_patterns());
            break;
        }
    }
    sort_patterns(out);
    if (out.size() > target) out.resize(target);
    return out;
}

}  // namespace

PatternStore train(const std::map<std::string, std::vector<RelationEpisode>>& per_ga_episodes,
                   const TrainOptions& options) {
    if (per_ga_episodes.empty()) throw Error(ErrorCode::InsufficientData, "no GA to train");
    PatternStore store;
    store.layout = options.layout;
    MineOptions mine_options = options.mine;
    mine_options.limit = 0;
    if (options.layout == SequenceLayout::Unordered) mine_options.sequence_extension = false;

    for (const auto& [ga, episodes] : per_ga_episodes) {
        if (episodes.size() < 2) {
            throw Error(ErrorCode::InsufficientData, "GA '" + ga + "' needs at least 2 training episodes");
        }
        const auto db = build_sequence_database(episodes, options.layout);
        const auto calibration = calibrate_threshold(db, options.target_pattern_count, mine_options);
        std::vector<Pattern> patterns;
        if (options.truncate_to_target && calibration.reached) {
            patterns = top_patterns(db, calibration.threshold, options.target_pattern_count, mine_options);
        } else {
            patterns = mine(db, calibration.threshold, mine_options);
            sort_patterns(patterns);
            if (options.truncate_to_target && patterns.size() > options.target_pattern_count) {
                patterns.resize(options.target_pattern_count);
            }
        }
        store.gas[ga] = GaPatterns{calibration.threshold, std::move(patterns)};
    }
    return store;
}

}  // namespace gar
