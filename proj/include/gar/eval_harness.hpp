#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gar/metrics.hpp"
#include "gar/pipeline.hpp"

namespace gar {

/// Everything a fold needs besides its episodes.
struct ExperimentContext {
    KnowledgeBase vocabulary;
    KbDeclarations declarations;
    PipelineConfig pipeline;
    /// Worker threads for fold evaluation; 0 picks the hardware concurrency.
    std::size_t jobs = 1;
};

struct Prediction {
    std::string episode_id;
    std::string truth;
    std::string predicted;
};

struct EvaluationResult {
    Metrics metrics;
    ConfusionMatrix confusion{{}};
    /// In corpus order.
    std::vector<Prediction> predictions;
};

/// Leave-one-out cross validation. Every episode must be labelled and
/// every GA needs at least three episodes so that each fold still trains
/// on two. Throws InsufficientData.
EvaluationResult loocv(std::span<const Episode> corpus, const ExperimentContext& context);

/// Same protocol, but fold i trains on `training` with its i-th episode
/// removed and tests on `testing[i]`. Used to corrupt training data while
/// keeping the held-out episode clean. Both spans must be aligned.
EvaluationResult loocv_with_training(std::span<const Episode> testing, std::span<const Episode> training,
                                     const ExperimentContext& context);

/// LOOCV with the pipeline switched to `mode`.
EvaluationResult run_ablation(std::span<const Episode> corpus, const ExperimentContext& context, AblationMode mode);

struct SweepRow {
    std::size_t target_pattern_count = 0;
    /// Thresholds of a model trained on the full corpus, per GA.
    std::vector<std::pair<std::string, double>> thresholds;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
};

/// Throws InvalidArgument for a zero count.
std::vector<SweepRow> sweep_pattern_count(std::span<const Episode> corpus, const ExperimentContext& context,
                                          std::span<const std::size_t> counts);

struct NoiseSpec {
    double noisy_episode_ratio = 0.0;
    double missing_probability = 0.1;
    double false_probability = 0.1;
    std::uint64_t seed = 1;
};

/// Corrupts ceil(ratio * n) episodes chosen by seed: each event is dropped
/// with the missing probability, and after each original event a random
/// vocabulary event is inserted with the false probability. Throws
/// InvalidArgument for probabilities outside [0, 1].
std::vector<Episode> inject_noise(std::span<const Episode> corpus, const NoiseSpec& spec,
                                  const KnowledgeBase& vocabulary);

struct NoiseRow {
    double ratio = 0.0;
    double macro_f1 = 0.0;
    double micro_f1 = 0.0;
};

/// LOOCV per ratio with the training side corrupted and held-out episodes
/// left clean.
std::vector<NoiseRow> noise_sweep(std::span<const Episode> corpus, const ExperimentContext& context,
                                  std::span<const double> ratios, NoiseSpec base);

struct RuntimeRow {
    std::size_t episodes = 0;
    std::size_t repeats = 0;
    double mean_train_seconds = 0.0;
    double mean_inference_seconds = 0.0;
    double mean_total_seconds = 0.0;
};

/// For each size, draws a GA-stratified random subset (seeded) `repeats`
/// times, trains on it and recognizes every episode of it. Sizes larger
/// than the corpus throw InvalidArgument; repeats is at least 3.
std::vector<RuntimeRow> measure_runtime(std::span<const Episode> corpus, const ExperimentContext& context,
                                        std::span<const std::size_t> sizes, std::size_t repeats,
                                        std::uint64_t seed);

}  // namespace gar
