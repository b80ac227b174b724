#include "gar/eval_harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "gar/error.hpp"

namespace gar {

namespace {

std::size_t worker_count(std::size_t jobs, std::size_t tasks) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    return std::max<std::size_t>(1, std::min(jobs, tasks));
}

// Runs body(i) for i in [0, n) over `jobs` threads. Exceptions are
// rethrown on the calling thread, lowest index first.
template <typename Body>
void parallel_for(std::size_t n, std::size_t jobs, Body body) {
    const std::size_t workers = worker_count(jobs, n);
    std::vector<std::exception_ptr> errors(n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) {
                    try {
                        body(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<std::string> labels_of(std::span<const Episode> corpus) {
    std::set<std::string> labels;
    for (const auto& e : corpus) {
        if (!e.ga_label) throw Error(ErrorCode::MissingLabel, "episode '" + e.id + "' has no GA label");
        labels.insert(*e.ga_label);
    }
    return {labels.begin(), labels.end()};
}

void require_loocv_sizes(std::span<const Episode> corpus) {
    std::map<std::string, std::size_t> per_ga;
    for (const auto& e : corpus) ++per_ga[*e.ga_label];
    for (const auto& [ga, n] : per_ga) {
        if (n < 3) {
            throw Error(ErrorCode::InsufficientData,
                        "GA '" + ga + "' has " + std::to_string(n) + " episodes; leave-one-out needs 3");
        }
    }
}

}  // namespace

EvaluationResult loocv_with_training(std::span<const Episode> testing, std::span<const Episode> training,
                                     const ExperimentContext& context) {
    if (testing.size() != training.size()) {
        throw Error(ErrorCode::InvalidArgument, "testing and training corpora differ in size");
    }
    const auto labels = labels_of(testing);
    labels_of(training);
    require_loocv_sizes(training);

    std::vector<std::string> predicted(testing.size());
    parallel_for(testing.size(), context.jobs, [&](std::size_t i) {
        std::vector<Episode> fold;
        fold.reserve(training.size() - 1);
        for (std::size_t j = 0; j < training.size(); ++j) {
            if (j != i) fold.push_back(training[j]);
        }
        const Classifier classifier(train_model(fold, context.vocabulary, context.declarations, context.pipeline));
        predicted[i] = classifier.predict(testing[i]);
    });

    EvaluationResult result;
    result.confusion = ConfusionMatrix(labels);
    for (std::size_t i = 0; i < testing.size(); ++i) {
        result.confusion.add(*testing[i].ga_label, predicted[i]);
        result.predictions.push_back({testing[i].id, *testing[i].ga_label, predicted[i]});
    }
    result.metrics = compute_metrics(result.confusion);
    return result;
}

EvaluationResult loocv(std::span<const Episode> corpus, const ExperimentContext& context) {
    return loocv_with_training(corpus, corpus, context);
}

EvaluationResult run_ablation(std::span<const Episode> corpus, const ExperimentContext& context, AblationMode mode) {
    ExperimentContext c = context;
    c.pipeline.mode = mode;
    return loocv(corpus, c);
}

std::vector<SweepRow> sweep_pattern_count(std::span<const Episode> corpus, const ExperimentContext& context,
                                          std::span<const std::size_t> counts) {
    std::vector<SweepRow> rows;
    for (auto count : counts) {
        if (count == 0) throw Error(ErrorCode::InvalidArgument, "pattern counts must be positive");
    }
    for (auto count : counts) {
        ExperimentContext c = context;
        c.pipeline.target_pattern_count = count;
        SweepRow row;
        row.target_pattern_count = count;
        const auto full = train_model(corpus, c.vocabulary, c.declarations, c.pipeline);
        for (const auto& [ga, p] : full.store.gas) row.thresholds.emplace_back(ga, p.threshold);
        const auto r = loocv(corpus, c);
        row.macro_f1 = r.metrics.macro_f1;
        row.micro_f1 = r.metrics.micro_f1;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<Episode> inject_noise(std::span<const Episode> corpus, const NoiseSpec& spec,
                                  const KnowledgeBase& vocabulary) {
    for (double p : {spec.noisy_episode_ratio, spec.missing_probability, spec.false_probability}) {
        if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "noise ratios must lie in [0, 1]");
    }
    std::vector<Episode> out(corpus.begin(), corpus.end());
    const auto n_noisy = static_cast<std::size_t>(
        std::ceil(spec.noisy_episode_ratio * static_cast<double>(corpus.size()) - 1e-9));
    if (n_noisy == 0) return out;

    std::vector<std::string> labels;
    for (const auto& [label, context] : vocabulary.is_about) labels.push_back(label);

    std::mt19937_64 rng(spec.seed);
    std::vector<std::size_t> order(corpus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    order.resize(std::min(n_noisy, order.size()));
    std::sort(order.begin(), order.end());

    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto idx : order) {
        const Episode& source = corpus[idx];
        if (source.events.empty()) continue;
        TimeMs lo = source.events.front().start_time, hi = source.events.front().end_time;
        for (const auto& e : source.events) {
            lo = std::min(lo, e.start_time);
            hi = std::max(hi, e.end_time);
        }
        std::vector<Event> events;
        for (const auto& e : source.events) {
            if (coin(rng) >= spec.missing_probability) events.push_back(e);
            if (!labels.empty() && coin(rng) < spec.false_probability) {
                Event fake;
                fake.label = labels[std::uniform_int_distribution<std::size_t>(0, labels.size() - 1)(rng)];
                fake.start_time = std::uniform_int_distribution<TimeMs>(lo, hi)(rng);
                fake.end_time = fake.start_time + e.length();
                fake.source_kind = vocabulary.kind_of_label(fake.label);
                events.push_back(std::move(fake));
            }
        }
        out[idx] = build_episode(std::move(events), source.ga_label, source.id);
    }
    return out;
}

std::vector<NoiseRow> noise_sweep(std::span<const Episode> corpus, const ExperimentContext& context,
                                  std::span<const double> ratios, NoiseSpec base) {
    std::vector<NoiseRow> rows;
    for (double ratio : ratios) {
        NoiseSpec spec = base;
        spec.noisy_episode_ratio = ratio;
        const auto noisy = inject_noise(corpus, spec, context.vocabulary);
        const auto r = loocv_with_training(corpus, noisy, context);
        rows.push_back({ratio, r.metrics.macro_f1, r.metrics.micro_f1});
    }
    return rows;
}

std::vector<RuntimeRow> measure_runtime(std::span<const Episode> corpus, const ExperimentContext& context,
                                        std::span<const std::size_t> sizes, std::size_t repeats,
                                        std::uint64_t seed) {
    repeats = std::max<std::size_t>(repeats, 3);
    std::map<std::string, std::vector<std::size_t>> by_ga;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (!corpus[i].ga_label) throw Error(ErrorCode::MissingLabel, "episode '" + corpus[i].id + "' has no GA label");
        by_ga[*corpus[i].ga_label].push_back(i);
    }
    std::vector<RuntimeRow> rows;
    std::mt19937_64 rng(seed);
    using clock = std::chrono::steady_clock;
    for (auto size : sizes) {
        if (size > corpus.size()) {
            throw Error(ErrorCode::InvalidArgument, "runtime size " + std::to_string(size) + " exceeds corpus size " +
                                                        std::to_string(corpus.size()));
        }
        if (size < 2 * by_ga.size()) {
            throw Error(ErrorCode::InvalidArgument, "runtime size " + std::to_string(size) +
                                                        " leaves some GA with fewer than 2 episodes");
        }
        RuntimeRow row;
        row.episodes = size;
        row.repeats = repeats;
        for (std::size_t r = 0; r < repeats; ++r) {
            // Round-robin over shuffled per-GA pools keeps GA proportions.
            std::vector<std::vector<std::size_t>> pools;
            for (auto [ga, idx] : by_ga) {
                std::shuffle(idx.begin(), idx.end(), rng);
                pools.push_back(std::move(idx));
            }
            std::vector<Episode> subset;
            for (std::size_t k = 0; subset.size() < size; ++k) {
                for (auto& pool : pools) {
                    if (k < pool.size() && subset.size() < size) subset.push_back(corpus[pool[k]]);
                }
            }
            const auto t0 = clock::now();
            const Classifier classifier(train_model(subset, context.vocabulary, context.declarations, context.pipeline));
            const auto t1 = clock::now();
            for (const auto& e : subset) (void)classifier.predict(e);
            const auto t2 = clock::now();
            row.mean_train_seconds += std::chrono::duration<double>(t1 - t0).count();
            row.mean_inference_seconds += std::chrono::duration<double>(t2 - t1).count();
        }
        row.mean_train_seconds /= static_cast<double>(repeats);
        row.mean_inference_seconds /= static_cast<double>(repeats);
        row.mean_total_seconds = row.mean_train_seconds + row.mean_inference_seconds;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace gar
