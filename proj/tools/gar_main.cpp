#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "gar/casas.hpp"
#include "gar/config.hpp"
#include "gar/error.hpp"
#include "gar/eval_harness.hpp"
#include "gar/formats.hpp"
#include "gar/synthetic.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gar;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct Globals {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::vector<std::string> overrides;
};

// Where episodes and the vocabulary describing them come from.
struct CorpusOptions {
    std::vector<std::string> episodes;
    std::string synthetic;
    std::vector<std::string> casas;
    std::string vocabulary;
};

struct LoadedCorpus {
    KnowledgeBase vocabulary;
    std::vector<Episode> episodes;
    KbDeclarations declarations;
};

Config resolve_config(const Globals& g) {
    Config config = g.config_path.empty() ? Config{} : load_config(g.config_path);
    apply_overrides(config, g.overrides);
    if (g.seed) config.set("seed", std::to_string(*g.seed));
    if (g.jobs) config.set("jobs", std::to_string(*g.jobs));
    return config;
}

void add_corpus_options(CLI::App* cmd, CorpusOptions& o) {
    cmd->add_option("--episodes", o.episodes, "Episode files");
    cmd->add_option("--synthetic", o.synthetic, "Built-in synthetic corpus")
        ->check(CLI::IsMember(named_corpora()));
    cmd->add_option("--casas", o.casas, "CASAS-style sensor logs");
    cmd->add_option("--vocabulary", o.vocabulary, "KB file supplying is_about/publishes/kind_of");
}

KnowledgeBase vocabulary_only(KnowledgeBase kb) {
    kb.affects.clear();
    kb.related_to.clear();
    kb.ga_specific_events.clear();
    return kb;
}

KnowledgeBase configured_vocabulary(const CorpusOptions& o, const Config& config) {
    if (!o.vocabulary.empty()) return vocabulary_only(load_knowledge_base(o.vocabulary));
    if (!config.has_sources()) {
        throw Error(ErrorCode::InvalidConfig,
                    "no vocabulary: declare source.<id>.* keys in the config or pass --vocabulary");
    }
    return KnowledgeBase::from_registry(config.registry());
}

LoadedCorpus load_corpus(const CorpusOptions& o, const Config& config) {
    const int given = !o.episodes.empty() + !o.synthetic.empty() + !o.casas.empty();
    if (given != 1) throw CLI::ValidationError("exactly one of --episodes, --synthetic, --casas is required");
    LoadedCorpus out;
    out.declarations = config.declarations;
    if (!o.synthetic.empty()) {
        auto corpus = generate_corpus(named_corpus_spec(o.synthetic, config.synthetic_episodes_per_ga, config.seed));
        out.vocabulary = KnowledgeBase::from_registry(corpus.registry);
        out.episodes = std::move(corpus.episodes);
        for (const auto& [ga, contexts] : corpus.declarations.affects) out.declarations.affects[ga].insert(contexts.begin(), contexts.end());
        out.declarations.related_to.insert(corpus.declarations.related_to.begin(), corpus.declarations.related_to.end());
    } else if (!o.casas.empty()) {
        auto data = load_casas({o.casas.begin(), o.casas.end()});
        out.vocabulary = KnowledgeBase::from_registry(data.registry);
        out.episodes = std::move(data.episodes);
    } else {
        out.vocabulary = configured_vocabulary(o, config);
        for (const auto& f : o.episodes) {
            auto e = load_episodes(f);
            out.episodes.insert(out.episodes.end(), e.begin(), e.end());
        }
    }
    return out;
}

ExperimentContext context_for(const LoadedCorpus& corpus, const Config& config) {
    ExperimentContext c;
    c.vocabulary = corpus.vocabulary;
    c.declarations = corpus.declarations;
    c.pipeline = config.pipeline;
    c.jobs = config.jobs;
    return c;
}

json config_json(const Config& c) {
    json j;
    j["mode"] = to_string(c.pipeline.mode);
    j["n_split"] = c.pipeline.n_split.automatic ? json("auto") : json(c.pipeline.n_split.value);
    j["target_pattern_count"] = c.pipeline.target_pattern_count;
    j["max_depth"] = c.pipeline.max_depth;
    j["horizon"] = c.pipeline.horizon ? json(*c.pipeline.horizon) : json("none");
    j["related_to_aggregation"] = c.pipeline.aggregation == RelatedToAggregation::Min ? "min" : "max";
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    return j;
}

json metrics_json(const Metrics& m) {
    json j;
    j["episodes"] = m.episodes;
    j["macro"] = {{"specificity", m.macro_specificity},
                  {"recall", m.macro_recall},
                  {"precision", m.macro_precision},
                  {"f1", m.macro_f1}};
    j["micro"] = {{"recall", m.micro_recall}, {"precision", m.micro_precision}, {"f1", m.micro_f1}};
    json per = json::array();
    for (const auto& g : m.per_ga) {
        per.push_back({{"ga", g.ga},
                       {"tp", g.tp},
                       {"fp", g.fp},
                       {"fn", g.fn},
                       {"tn", g.tn},
                       {"specificity", g.specificity},
                       {"recall", g.recall},
                       {"precision", g.precision},
                       {"f1", g.f1}});
    }
    j["per_ga"] = per;
    return j;
}

void write_metrics_table(std::ostream& out, const Metrics& m) {
    out << "ga\ttp\tfp\tfn\ttn\tspecificity\trecall\tprecision\tf1\n";
    for (const auto& g : m.per_ga) {
        out << g.ga << '\t' << g.tp << '\t' << g.fp << '\t' << g.fn << '\t' << g.tn << '\t'
            << format_double(g.specificity) << '\t' << format_double(g.recall) << '\t' << format_double(g.precision)
            << '\t' << format_double(g.f1) << '\n';
    }
    out << "macro\t\t\t\t\t" << format_double(m.macro_specificity) << '\t' << format_double(m.macro_recall) << '\t'
        << format_double(m.macro_precision) << '\t' << format_double(m.macro_f1) << '\n';
    out << "micro\t\t\t\t\t\t" << format_double(m.micro_recall) << '\t' << format_double(m.micro_precision) << '\t'
        << format_double(m.micro_f1) << '\n';
}

// Writes to `path`, or stdout when empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    out << text;
}

void emit_summary(const std::string& path, const json& summary) {
    if (!path.empty()) emit(path, summary.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group activity recognition from smart-space event streams"};
    app.require_subcommand(1);
    Globals g;
    app.add_option("--config", g.config_path, "Configuration file (key = value)");
    app.add_option("--seed", g.seed, "Random seed (overrides config)");
    app.add_option("--jobs", g.jobs, "Worker threads for experiments, 0 = all cores");
    app.add_option("--set", g.overrides, "Config override key=value, repeatable");

    std::function<void()> action;

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Convert raw records into an episode file");
    std::vector<std::string> raw_files;
    std::string ingest_label, ingest_out;
    CorpusOptions ingest_corpus;
    ingest->add_option("--raw", raw_files, "Raw record files, one episode each");
    ingest->add_option("--label", ingest_label, "GA label for the raw episodes");
    ingest->add_option("--synthetic", ingest_corpus.synthetic, "Built-in synthetic corpus")
        ->check(CLI::IsMember(named_corpora()));
    ingest->add_option("--casas", ingest_corpus.casas, "CASAS-style sensor logs");
    ingest->add_option("--out", ingest_out, "Episode file to write")->required();
    ingest->callback([&] {
        action = [&] {
            const Config config = resolve_config(g);
            std::vector<Episode> episodes;
            const int given = !raw_files.empty() + !ingest_corpus.synthetic.empty() + !ingest_corpus.casas.empty();
            if (given != 1) throw CLI::ValidationError("exactly one of --raw, --synthetic, --casas is required");
            if (!raw_files.empty()) {
                if (!config.has_sources()) {
                    throw Error(ErrorCode::InvalidConfig, "ingest --raw needs source.<id>.* keys in the config");
                }
                const auto registry = config.registry();
                for (const auto& f : raw_files) {
                    const auto records = load_raw_records(f);
                    std::optional<std::string> label;
                    if (!ingest_label.empty()) label = ingest_label;
                    episodes.push_back(build_episode(convert_records(records, registry), label,
                                                     fs::path(f).stem().string()));
                }
            } else {
                episodes = load_corpus(ingest_corpus, config).episodes;
            }
            save_episodes(ingest_out, episodes);
            std::cout << "episodes\t" << episodes.size() << '\n';
        };
    });

    // induce-kb
    auto* induce = app.add_subcommand("induce-kb", "Induce the knowledge base from labelled episodes");
    CorpusOptions induce_corpus;
    std::string induce_out;
    add_corpus_options(induce, induce_corpus);
    induce->add_option("--out", induce_out, "KB file to write")->required();
    induce->callback([&] {
        action = [&] {
            const Config config = resolve_config(g);
            const auto corpus = load_corpus(induce_corpus, config);
            const auto kb = induce_knowledge_base(corpus.vocabulary, group_by_ga(corpus.episodes),
                                                  corpus.declarations, config.pipeline.aggregation);
            save_knowledge_base(induce_out, kb);
            for (const auto& [ga, contexts] : kb.affects) std::cout << "affects\t" << ga << '\t' << contexts.size() << '\n';
            std::cout << "related_to\t" << kb.related_to.size() << '\n';
        };
    });

    // train
    auto* train_cmd = app.add_subcommand("train", "Train the pattern store");
    CorpusOptions train_corpus;
    std::string kb_out, store_out, train_summary;
    add_corpus_options(train_cmd, train_corpus);
    train_cmd->add_option("--kb-out", kb_out, "KB file to write")->required();
    train_cmd->add_option("--store-out", store_out, "Pattern store file to write")->required();
    train_cmd->add_option("--summary", train_summary, "JSON run summary");
    train_cmd->callback([&] {
        action = [&] {
            const Config config = resolve_config(g);
            const auto corpus = load_corpus(train_corpus, config);
            const auto model = train_model(corpus.episodes, corpus.vocabulary, corpus.declarations, config.pipeline);
            save_knowledge_base(kb_out, model.kb);
            save_pattern_store(store_out, model.store);
            json summary;
            summary["command"] = "train";
            summary["config"] = config_json(config);
            summary["episodes"] = corpus.episodes.size();
            json gas = json::array();
            std::cout << "ga\tthreshold\tpatterns\n";
            for (const auto& [ga, p] : model.store.gas) {
                std::cout << ga << '\t' << format_double(p.threshold) << '\t' << p.patterns.size() << '\n';
                gas.push_back({{"ga", ga}, {"threshold", p.threshold}, {"patterns", p.patterns.size()}});
            }
            summary["gas"] = gas;
            emit_summary(train_summary, summary);
        };
    });

    // recognize
    auto* recognize_cmd = app.add_subcommand("recognize", "Recognize the GA of test episodes");
    std::vector<std::string> test_files;
    std::string kb_in, store_in, predictions_out;
    recognize_cmd->add_option("--episodes", test_files, "Test episode files")->required();
    recognize_cmd->add_option("--kb", kb_in, "KB file")->required();
    recognize_cmd->add_option("--store", store_in, "Pattern store file")->required();
    recognize_cmd->add_option("--out", predictions_out, "Prediction file (default stdout)");
    recognize_cmd->callback([&] {
        action = [&] {
            const Classifier classifier(TrainedModel{load_knowledge_base(kb_in), load_pattern_store(store_in)});
            std::ostringstream out;
            for (const auto& f : test_files) {
                for (const auto& e : load_episodes(f)) {
                    const auto results = classifier.score(e);
                    out << format_prediction(e.id, best_ga(results), results) << '\n';
                }
            }
            emit(predictions_out, out.str());
        };
    });

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run an evaluation protocol");
    experiment->require_subcommand(1);
    CorpusOptions exp_corpus;
    std::string exp_out, exp_summary, exp_predictions;
    auto add_common = [&](CLI::App* cmd) {
        add_corpus_options(cmd, exp_corpus);
        cmd->add_option("--out", exp_out, "TSV table (default stdout)");
        cmd->add_option("--summary", exp_summary, "JSON run summary");
    };
    auto* loocv_cmd = experiment->add_subcommand("loocv", "Leave-one-out cross validation");
    add_common(loocv_cmd);
    loocv_cmd->add_option("--predictions", exp_predictions, "Per-episode predictions TSV");
    auto* ablation_cmd = experiment->add_subcommand("ablation", "LOOCV under every ablation mode");
    add_common(ablation_cmd);
    auto* sweep_cmd = experiment->add_subcommand("sweep", "LOOCV per target pattern count");
    add_common(sweep_cmd);
    auto* noise_cmd = experiment->add_subcommand("noise", "LOOCV with corrupted training episodes");
    add_common(noise_cmd);
    auto* runtime_cmd = experiment->add_subcommand("runtime", "Train and inference wall time per corpus size");
    add_common(runtime_cmd);

    auto run_experiment = [&](const std::string& which) {
        const Config config = resolve_config(g);
        const auto corpus = load_corpus(exp_corpus, config);
        const auto context = context_for(corpus, config);
        json summary;
        summary["command"] = "experiment " + which;
        summary["config"] = config_json(config);
        summary["episodes"] = corpus.episodes.size();
        std::ostringstream table;
        if (which == "loocv") {
            const auto r = loocv(corpus.episodes, context);
            write_metrics_table(table, r.metrics);
            summary["metrics"] = metrics_json(r.metrics);
            if (!exp_predictions.empty()) {
                std::ostringstream p;
                p << "episode\ttruth\tpredicted\n";
                for (const auto& row : r.predictions) p << row.episode_id << '\t' << row.truth << '\t' << row.predicted << '\n';
                emit(exp_predictions, p.str());
            }
        } else if (which == "ablation") {
            table << "mode\tmacro_recall\tmacro_precision\tmacro_f1\tmicro_f1\n";
            json modes = json::array();
            for (auto mode : kAllAblationModes) {
                const auto r = run_ablation(corpus.episodes, context, mode);
                table << to_string(mode) << '\t' << format_double(r.metrics.macro_recall) << '\t'
                      << format_double(r.metrics.macro_precision) << '\t' << format_double(r.metrics.macro_f1) << '\t'
                      << format_double(r.metrics.micro_f1) << '\n';
                modes.push_back({{"mode", to_string(mode)}, {"metrics", metrics_json(r.metrics)}});
            }
            summary["modes"] = modes;
        } else if (which == "sweep") {
            const auto rows = sweep_pattern_count(corpus.episodes, context, config.sweep_counts);
            table << "count\tmacro_f1\tmicro_f1\tthresholds\n";
            json out = json::array();
            for (const auto& row : rows) {
                std::string th;
                json tj;
                for (const auto& [ga, t] : row.thresholds) {
                    th += (th.empty() ? "" : ",") + ga + "=" + format_double(t);
                    tj[ga] = t;
                }
                table << row.target_pattern_count << '\t' << format_double(row.macro_f1) << '\t'
                      << format_double(row.micro_f1) << '\t' << th << '\n';
                out.push_back({{"count", row.target_pattern_count},
                               {"macro_f1", row.macro_f1},
                               {"micro_f1", row.micro_f1},
                               {"thresholds", tj}});
            }
            summary["rows"] = out;
        } else if (which == "noise") {
            const auto rows = noise_sweep(corpus.episodes, context, config.noise_ratios, config.noise);
            table << "ratio\tmacro_f1\tmicro_f1\n";
            json out = json::array();
            for (const auto& row : rows) {
                table << format_double(row.ratio) << '\t' << format_double(row.macro_f1) << '\t'
                      << format_double(row.micro_f1) << '\n';
                out.push_back({{"ratio", row.ratio}, {"macro_f1", row.macro_f1}, {"micro_f1", row.micro_f1}});
            }
            summary["noise"] = {{"missing", config.noise.missing_probability},
                                {"false", config.noise.false_probability},
                                {"seed", config.noise.seed}};
            summary["rows"] = out;
        } else {
            std::vector<std::size_t> sizes;
            for (auto s : config.runtime_sizes) {
                if (s <= corpus.episodes.size()) sizes.push_back(s);
            }
            const auto rows = measure_runtime(corpus.episodes, context, sizes, config.runtime_repeats, config.seed);
            table << "episodes\trepeats\ttrain_s\tinference_s\ttotal_s\n";
            json out = json::array();
            for (const auto& row : rows) {
                table << row.episodes << '\t' << row.repeats << '\t' << format_double(row.mean_train_seconds) << '\t'
                      << format_double(row.mean_inference_seconds) << '\t' << format_double(row.mean_total_seconds)
                      << '\n';
                out.push_back({{"episodes", row.episodes},
                               {"repeats", row.repeats},
                               {"train_s", row.mean_train_seconds},
                               {"inference_s", row.mean_inference_seconds},
                               {"total_s", row.mean_total_seconds}});
            }
            summary["rows"] = out;
        }
        emit(exp_out, table.str());
        emit_summary(exp_summary, summary);
    };
    for (auto* cmd : {loocv_cmd, ablation_cmd, sweep_cmd, noise_cmd, runtime_cmd}) {
        cmd->callback([&, cmd] {
            action = [&, name = cmd->get_name()] { run_experiment(name); };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    try {
        if (action) action();
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::InvalidConfig ? kExitUsage : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
