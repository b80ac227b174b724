#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gar/eval_harness.hpp"

namespace gar {

/// Run configuration, loaded from a `key = value` file ('#' starts a
/// comment) and overridable key by key from the command line.
///
/// Keys:
///   n_split                    count or "auto"
///   target_pattern_count, max_depth, horizon ("none" or ms)
///   mode                       ASSOC_RULE .. SEQ_PATTERN_FT_GA
///   related_to_aggregation     min | max
///   window                     default averaging window for sensors
///   seed, jobs
///   noise.ratio, noise.missing, noise.false
///   noise.ratios, sweep.counts, runtime.sizes, runtime.repeats
///   synthetic.episodes_per_ga
///   source.<id>.kind|prefix|context|states|thresholds|window
///   declare.affects.<GA>       comma-separated contexts
///   declare.related_to         comma-separated x>y pairs
struct Config {
    PipelineConfig pipeline;
    std::size_t window = 5;
    std::uint64_t seed = 1;
    std::size_t jobs = 1;
    NoiseSpec noise;
    std::vector<double> noise_ratios{0.0, 0.1, 0.2, 0.3, 0.4};
    std::vector<std::size_t> sweep_counts{10, 25, 50, 100, 200};
    std::vector<std::size_t> runtime_sizes{30, 60, 90, 120, 150};
    std::size_t runtime_repeats = 3;
    std::size_t synthetic_episodes_per_ga = 20;
    KbDeclarations declarations;

    /// Applies one setting. Throws InvalidConfig for unknown keys or
    /// invalid values.
    void set(std::string_view key, std::string_view value);

    /// Sources declared through `source.<id>.*` keys, in id order.
    [[nodiscard]] SourceRegistry registry() const;
    [[nodiscard]] bool has_sources() const { return !sources_.empty(); }

private:
    struct PartialSource {
        std::map<std::string, std::string> fields;
    };
    std::map<std::string, PartialSource> sources_;
};

Config read_config(std::istream& in, std::string_view origin = "<config>");
Config load_config(const std::filesystem::path& path);
/// Applies `key=value` overrides in order.
void apply_overrides(Config& config, const std::vector<std::string>& overrides);

}  // namespace gar
