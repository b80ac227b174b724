#include "gar/config.hpp"

#include <fstream>
#include <sstream>

#include "gar/error.hpp"
#include "gar/formats.hpp"

namespace gar {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto end = comma == std::string_view::npos ? s.size() : comma;
        if (auto item = trim(s.substr(pos, end - pos)); !item.empty()) out.push_back(std::move(item));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::size_t to_count(std::string_view key, std::string_view value, std::size_t min = 0) {
    long long v = 0;
    try {
        v = parse_int(value, key);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.detail());
    }
    if (v < static_cast<long long>(min)) {
        throw Error(ErrorCode::InvalidConfig,
                    std::string(key) + " must be at least " + std::to_string(min) + ", got " + std::string(value));
    }
    return static_cast<std::size_t>(v);
}

double to_probability(std::string_view key, std::string_view value) {
    double v = 0.0;
    try {
        v = parse_double(value, key);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidConfig, e.detail());
    }
    if (!(v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::InvalidConfig, std::string(key) + " must lie in [0, 1], got " + std::string(value));
    }
    return v;
}

}  // namespace

void Config::set(std::string_view key, std::string_view raw) {
    const std::string value = trim(raw);
    const std::string k(key);
    try {
        if (k == "n_split") {
            if (value == "auto") {
                pipeline.n_split = {true, pipeline.n_split.value};
            } else {
                pipeline.n_split = {false, to_count(k, value, 1)};
            }
        } else if (k == "target_pattern_count") {
            pipeline.target_pattern_count = to_count(k, value, 1);
        } else if (k == "max_depth") {
            pipeline.max_depth = to_count(k, value);
        } else if (k == "horizon") {
            if (value == "none") {
                pipeline.horizon.reset();
            } else {
                pipeline.horizon = static_cast<TimeMs>(to_count(k, value));
            }
        } else if (k == "mode") {
            pipeline.mode = parse_ablation_mode(value);
        } else if (k == "related_to_aggregation") {
            if (value == "min") {
                pipeline.aggregation = RelatedToAggregation::Min;
            } else if (value == "max") {
                pipeline.aggregation = RelatedToAggregation::Max;
            } else {
                throw Error(ErrorCode::InvalidConfig, "related_to_aggregation must be min or max");
            }
        } else if (k == "window") {
            window = to_count(k, value, 1);
        } else if (k == "seed") {
            seed = to_count(k, value);
            noise.seed = seed;
        } else if (k == "jobs") {
            jobs = to_count(k, value);
        } else if (k == "noise.ratio") {
            noise.noisy_episode_ratio = to_probability(k, value);
        } else if (k == "noise.missing") {
            noise.missing_probability = to_probability(k, value);
        } else if (k == "noise.false") {
            noise.false_probability = to_probability(k, value);
        } else if (k == "noise.ratios") {
            noise_ratios.clear();
            for (const auto& item : split_list(value)) noise_ratios.push_back(to_probability(k, item));
        } else if (k == "sweep.counts") {
            sweep_counts.clear();
            for (const auto& item : split_list(value)) sweep_counts.push_back(to_count(k, item, 1));
        } else if (k == "runtime.sizes") {
            runtime_sizes.clear();
            for (const auto& item : split_list(value)) runtime_sizes.push_back(to_count(k, item, 1));
        } else if (k == "runtime.repeats") {
            runtime_repeats = to_count(k, value, 3);
        } else if (k == "synthetic.episodes_per_ga") {
            synthetic_episodes_per_ga = to_count(k, value, 1);
        } else if (k.starts_with("declare.affects.") && k.size() > 16) {
            auto& set = declarations.affects[k.substr(16)];
            for (const auto& c : split_list(value)) set.insert(c);
        } else if (k == "declare.related_to") {
            for (const auto& item : split_list(value)) {
                const auto gt = item.find('>');
                if (gt == std::string::npos || gt == 0 || gt + 1 == item.size()) {
                    throw Error(ErrorCode::InvalidConfig, "related_to entries look like x>y, got '" + item + "'");
                }
                declarations.related_to.insert({trim(item.substr(0, gt)), trim(item.substr(gt + 1))});
            }
        } else if (k.starts_with("source.")) {
            const auto dot = k.rfind('.');
            const std::string id = k.substr(7, dot - 7);
            const std::string field = k.substr(dot + 1);
            static const std::vector<std::string> fields{"kind", "prefix", "context", "states", "thresholds", "window"};
            if (dot <= 7 || id.empty() || std::find(fields.begin(), fields.end(), field) == fields.end()) {
                throw Error(ErrorCode::InvalidConfig, "unknown key '" + k + "'");
            }
            sources_[id].fields[field] = value;
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown key '" + k + "'");
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig) throw;
        throw Error(ErrorCode::InvalidConfig, std::string(key) + ": " + e.detail());
    }
}

SourceRegistry Config::registry() const {
    SourceRegistry registry;
    for (const auto& [id, partial] : sources_) {
        const auto& f = partial.fields;
        auto get = [&](const std::string& name) -> const std::string* {
            auto it = f.find(name);
            return it == f.end() ? nullptr : &it->second;
        };
        SourceSpec spec;
        spec.id = id;
        if (!get("kind")) throw Error(ErrorCode::InvalidConfig, "source." + id + ".kind is required");
        try {
            spec.kind = parse_smart_object_kind(*get("kind"));
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidConfig, "source." + id + ".kind: " + e.detail());
        }
        spec.label_prefix = get("prefix") ? *get("prefix") : id;
        spec.context = get("context") ? *get("context") : id;
        if (const auto* s = get("states")) spec.states = split_list(*s);
        if (const auto* t = get("thresholds")) {
            try {
                for (const auto& item : split_list(*t)) spec.thresholds.push_back(parse_double(item, "threshold"));
            } catch (const Error& e) {
                throw Error(ErrorCode::InvalidConfig, "source." + id + ".thresholds: " + e.detail());
            }
        }
        spec.window = get("window") ? to_count("source." + id + ".window", *get("window"), 1) : window;
        try {
            registry.add(std::move(spec));
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidConfig, "source." + id + ": " + e.detail());
        }
    }
    return registry;
}

Config read_config(std::istream& in, std::string_view origin) {
    Config config;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        const auto where = std::string(origin) + ":" + std::to_string(number) + ": ";
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, where + "expected key = value");
        try {
            config.set(trim(text.substr(0, eq)), text.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidConfig, where + e.detail());
        }
    }
    return config;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path.string() + "'");
    return read_config(in, path.string());
}

void apply_overrides(Config& config, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::InvalidConfig, "override '" + o + "' is not key=value");
        config.set(trim(o.substr(0, eq)), o.substr(eq + 1));
    }
}

}  // namespace gar
