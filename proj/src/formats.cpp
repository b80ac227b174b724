#include "gar/formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "gar/error.hpp"

namespace gar {

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) throw Error(ErrorCode::InvalidArgument, "cannot format number");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::Parse, "invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

long long parse_int(std::string_view text, std::string_view what) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorCode::Parse, "invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

namespace {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string join(const std::set<std::string>& items, char sep) {
    std::string out;
    for (const auto& s : items) {
        if (!out.empty()) out += sep;
        out += s;
    }
    return out;
}

void check_name(const std::string& name, std::string_view what) {
    if (name.find_first_of("\t\n\r,") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, std::string(what) + " '" + name + "' contains a reserved character");
    }
}

class LineReader {
public:
    LineReader(std::istream& in, std::string_view origin) : in_(in), origin_(origin) {}

    std::optional<std::string> next() {
        std::string line;
        if (!std::getline(in_, line)) return std::nullopt;
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
    }

    std::string require() {
        auto line = next();
        if (!line) fail("unexpected end of file");
        return *line;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw Error(ErrorCode::Parse, origin_ + ":" + std::to_string(line_no_) + ": " + why);
    }

    // Expects `key<TAB>value` and returns value.
    std::string field(std::string_view key) {
        auto line = require();
        auto parts = split(line, '\t');
        if (parts.size() != 2 || parts[0] != key) fail("expected '" + std::string(key) + "<TAB>value'");
        return parts[1];
    }

    template <typename F>
    auto guard(F&& f) {
        try {
            return f();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Parse && e.detail().starts_with(origin_ + ":")) throw;
            fail(e.detail());
        }
    }

    [[nodiscard]] std::size_t line_no() const { return line_no_; }

private:
    std::istream& in_;
    std::string origin_;
    std::size_t line_no_ = 0;
};

template <typename Body>
void write_block_header(std::ostream& out, const std::string& id, const std::optional<std::string>& label,
                        std::string_view items, std::size_t count, Body&& body) {
    check_name(id, "episode id");
    if (label) check_name(*label, "GA label");
    out << "episode\t" << id << '\n';
    out << "ga_label\t" << (label ? *label : std::string{}) << '\n';
    out << items << '\t' << count << '\n';
    body();
}

}  // namespace

std::vector<RawRecord> read_raw_records(std::istream& in, std::string_view origin) {
    LineReader reader(in, origin);
    std::vector<RawRecord> out;
    while (auto line = reader.next()) {
        if (line->empty()) continue;
        auto parts = split(*line, '\t');
        if (parts.size() != 3 || parts[1].empty()) reader.fail("expected 'timestamp<TAB>source_id<TAB>value'");
        RawRecord r;
        r.timestamp = reader.guard([&] { return parse_int(parts[0], "timestamp"); });
        if (r.timestamp < 0) reader.fail("negative timestamp");
        r.source_id = parts[1];
        r.value = parts[2];
        out.push_back(std::move(r));
    }
    return out;
}

void write_raw_records(std::ostream& out, std::span<const RawRecord> records) {
    for (const auto& r : records) out << r.timestamp << '\t' << r.source_id << '\t' << r.value << '\n';
}

void write_episodes(std::ostream& out, std::span<const Episode> episodes) {
    for (const auto& e : episodes) {
        write_block_header(out, e.id, e.ga_label, "events", e.events.size(), [&] {
            for (const auto& ev : e.events) {
                out << ev.label << ',' << ev.start_time << ',' << ev.end_time << ',' << to_string(ev.source_kind)
                    << '\n';
            }
        });
    }
}

namespace {

template <typename Item, typename ParseItem>
auto read_blocks(std::istream& in, std::string_view origin, std::string_view items, ParseItem parse_item) {
    struct Block {
        std::string id;
        std::optional<std::string> ga_label;
        std::vector<Item> items;
    };
    LineReader reader(in, origin);
    std::vector<Block> out;
    while (auto line = reader.next()) {
        if (line->empty()) continue;
        auto head = split(*line, '\t');
        if (head.size() != 2 || head[0] != "episode") reader.fail("expected 'episode<TAB>id'");
        Block b;
        b.id = head[1];
        auto label = reader.field("ga_label");
        if (!label.empty()) b.ga_label = label;
        const auto count_text = reader.field(items);
        const auto count = reader.guard([&] { return parse_int(count_text, "item count"); });
        if (count < 0) reader.fail("negative item count");
        for (long long i = 0; i < count; ++i) {
            auto parts = split(reader.require(), ',');
            b.items.push_back(reader.guard([&] { return parse_item(parts); }));
        }
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace

std::vector<Episode> read_episodes(std::istream& in, std::string_view origin) {
    auto blocks = read_blocks<Event>(in, origin, "events", [](const std::vector<std::string>& p) {
        if (p.size() != 4 || p[0].empty()) {
            throw Error(ErrorCode::Parse, "expected 'label,start_time,end_time,source_kind'");
        }
        Event ev{p[0], parse_int(p[1], "start_time"), parse_int(p[2], "end_time"), parse_smart_object_kind(p[3])};
        if (ev.start_time > ev.end_time) throw Error(ErrorCode::Parse, "event ends before it starts");
        return ev;
    });
    std::vector<Episode> out;
    out.reserve(blocks.size());
    for (auto& b : blocks) out.push_back(Episode{std::move(b.id), std::move(b.ga_label), std::move(b.items)});
    return out;
}

void write_relation_episodes(std::ostream& out, std::span<const RelationEpisode> episodes) {
    for (const auto& e : episodes) {
        write_block_header(out, e.id, e.ga_label, "relations", e.relations.size(), [&] {
            for (const auto& r : e.relations) {
                out << to_string(r.relation) << ',' << r.first << ',' << r.second << ',' << r.start_time << ','
                    << r.end_time << '\n';
            }
        });
    }
}

std::vector<RelationEpisode> read_relation_episodes(std::istream& in, std::string_view origin) {
    auto blocks = read_blocks<CausalRelation>(in, origin, "relations", [](const std::vector<std::string>& p) {
        if (p.size() != 5) throw Error(ErrorCode::Parse, "expected 'relation,first,second,start_time,end_time'");
        return CausalRelation{parse_allen_relation(p[0]), p[1], p[2], parse_int(p[3], "start_time"),
                              parse_int(p[4], "end_time")};
    });
    std::vector<RelationEpisode> out;
    out.reserve(blocks.size());
    for (auto& b : blocks) {
        out.push_back(RelationEpisode{std::move(b.id), std::move(b.ga_label), std::move(b.items)});
    }
    return out;
}

void write_knowledge_base(std::ostream& out, const KnowledgeBase& kb) {
    out << "[is_about]\n";
    for (const auto& [label, context] : kb.is_about) {
        check_name(label, "event label");
        check_name(context, "context");
        out << label << '\t' << context << '\n';
    }
    out << "[publishes]\n";
    for (const auto& [source, labels] : kb.publishes) {
        check_name(source, "source id");
        out << source << '\t' << join(labels, ',') << '\n';
    }
    out << "[kind_of]\n";
    for (const auto& [source, kind] : kb.kind_of) out << source << '\t' << to_string(kind) << '\n';
    out << "[affects]\n";
    for (const auto& [ga, contexts] : kb.affects) {
        check_name(ga, "GA name");
        out << ga << '\t' << join(contexts, ',') << '\n';
    }
    out << "[related_to]\n";
    for (const auto& [x, y] : kb.related_to) out << x << '\t' << y << '\n';
    out << "[ga_specific_events]\n";
    for (const auto& [ga, labels] : kb.ga_specific_events) out << ga << '\t' << join(labels, ',') << '\n';
}

KnowledgeBase read_knowledge_base(std::istream& in, std::string_view origin) {
    static constexpr std::string_view kSections[] = {"[is_about]", "[publishes]",  "[kind_of]",
                                                     "[affects]",  "[related_to]", "[ga_specific_events]"};
    LineReader reader(in, origin);
    KnowledgeBase kb;
    std::size_t next_section = 0;
    std::string_view section;
    auto to_set = [](const std::string& text) {
        std::set<std::string> out;
        if (text.empty()) return out;
        for (auto& s : split(text, ',')) out.insert(std::move(s));
        return out;
    };
    while (auto line = reader.next()) {
        if (line->empty()) continue;
        if ((*line)[0] == '[') {
            if (next_section >= std::size(kSections) || *line != kSections[next_section]) {
                reader.fail("unexpected section header '" + *line + "'");
            }
            section = kSections[next_section++];
            continue;
        }
        auto parts = split(*line, '\t');
        if (parts.size() != 2 || parts[0].empty()) reader.fail("expected 'key<TAB>value'");
        if (section == "[is_about]") {
            kb.is_about[parts[0]] = parts[1];
        } else if (section == "[publishes]") {
            kb.publishes[parts[0]] = to_set(parts[1]);
        } else if (section == "[kind_of]") {
            kb.kind_of[parts[0]] = reader.guard([&] { return parse_smart_object_kind(parts[1]); });
        } else if (section == "[affects]") {
            kb.affects[parts[0]] = to_set(parts[1]);
        } else if (section == "[related_to]") {
            kb.related_to.emplace(parts[0], parts[1]);
        } else if (section == "[ga_specific_events]") {
            kb.ga_specific_events[parts[0]] = to_set(parts[1]);
        } else {
            reader.fail("entry outside a section");
        }
    }
    if (next_section != std::size(kSections)) reader.fail("missing knowledge base sections");
    return kb;
}

void write_pattern_store(std::ostream& out, const PatternStore& store) {
    out << kPatternStoreMagic << '\t' << kPatternStoreVersion << '\n';
    out << "layout\t" << to_string(store.layout) << '\n';
    for (const auto& [key, value] : store.metadata) {
        check_name(key, "metadata key");
        check_name(value, "metadata value");
        out << "meta\t" << key << '\t' << value << '\n';
    }
    for (const auto& [ga, patterns] : store.gas) {
        check_name(ga, "GA name");
        out << "ga\t" << ga << '\t' << format_double(patterns.threshold) << '\t' << patterns.patterns.size() << '\n';
        for (const auto& p : patterns.patterns) {
            out << format_double(p.support) << '\t' << p.depth << '\t' << p.render() << '\n';
        }
    }
}

PatternStore read_pattern_store(std::istream& in, std::string_view origin) {
    LineReader reader(in, origin);
    auto header = split(reader.require(), '\t');
    if (header.size() != 2 || header[0] != kPatternStoreMagic) reader.fail("not a pattern store");
    if (header[1] != std::to_string(kPatternStoreVersion)) {
        throw Error(ErrorCode::VersionMismatch, std::string(origin) + ": pattern store version " + header[1] +
                                                    " is not supported (expected " +
                                                    std::to_string(kPatternStoreVersion) + ")");
    }
    PatternStore store;
    const auto layout = reader.field("layout");
    store.layout = reader.guard([&] { return parse_sequence_layout(layout); });
    while (auto line = reader.next()) {
        if (line->empty()) continue;
        auto parts = split(*line, '\t');
        if (parts[0] == "meta" && parts.size() == 3) {
            store.metadata[parts[1]] = parts[2];
            continue;
        }
        if (parts[0] != "ga" || parts.size() != 4) reader.fail("expected 'ga<TAB>name<TAB>threshold<TAB>count'");
        auto& ga = store.gas[parts[1]];
        ga.threshold = reader.guard([&] { return parse_double(parts[2], "threshold"); });
        const auto count = reader.guard([&] { return parse_int(parts[3], "pattern count"); });
        if (count < 0) reader.fail("negative pattern count");
        for (long long i = 0; i < count; ++i) {
            auto row = split(reader.require(), '\t');
            if (row.size() != 3) reader.fail("expected 'support<TAB>depth<TAB>pattern'");
            Pattern p;
            p.support = reader.guard([&] { return parse_double(row[0], "support"); });
            p.depth = static_cast<std::size_t>(reader.guard([&] { return parse_int(row[1], "depth"); }));
            p.elements = reader.guard([&] { return parse_pattern(row[2]); });
            ga.patterns.push_back(std::move(p));
        }
    }
    return store;
}

std::string format_prediction(const std::string& episode_id, const std::string& predicted,
                              const std::vector<MatchResult>& results) {
    std::string out = episode_id + '\t' + predicted + '\t';
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (i) out += ',';
        out += results[i].ga + '=' + format_double(results[i].likelihood);
    }
    return out;
}

namespace {

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
    return in;
}

template <typename Write>
void save(const std::filesystem::path& path, Write&& write) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
    write(out);
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path.string() + "'");
}

}  // namespace

std::vector<RawRecord> load_raw_records(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_raw_records(in, path.string());
}

std::vector<Episode> load_episodes(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_episodes(in, path.string());
}

KnowledgeBase load_knowledge_base(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_knowledge_base(in, path.string());
}

PatternStore load_pattern_store(const std::filesystem::path& path) {
    auto in = open_in(path);
    return read_pattern_store(in, path.string());
}

void save_episodes(const std::filesystem::path& path, std::span<const Episode> episodes) {
    save(path, [&](std::ostream& out) { write_episodes(out, episodes); });
}

void save_knowledge_base(const std::filesystem::path& path, const KnowledgeBase& kb) {
    save(path, [&](std::ostream& out) { write_knowledge_base(out, kb); });
}

void save_pattern_store(const std::filesystem::path& path, const PatternStore& store) {
    save(path, [&](std::ostream& out) { write_pattern_store(out, store); });
}

std::string to_text(const PatternStore& store) {
    std::ostringstream out;
    write_pattern_store(out, store);
    return out.str();
}

std::string to_text(const KnowledgeBase& kb) {
    std::ostringstream out;
    write_knowledge_base(out, kb);
    return out.str();
}

std::string to_text(std::span<const Episode> episodes) {
    std::ostringstream out;
    write_episodes(out, episodes);
    return out.str();
}

}  // namespace gar
