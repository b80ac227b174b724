#pragma once

#include <string>
#include <vector>

namespace gar {

class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<std::string> labels);

    void add(const std::string& truth, const std::string& predicted);

    [[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
    /// counts()[truth][predicted]
    [[nodiscard]] const std::vector<std::vector<std::size_t>>& counts() const { return counts_; }
    [[nodiscard]] std::size_t total() const;
    [[nodiscard]] std::size_t index_of(const std::string& label) const;

private:
    std::vector<std::string> labels_;
    std::vector<std::vector<std::size_t>> counts_;
};

struct GaMetrics {
    std::string ga;
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
    double specificity = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
};

/// Per-GA one-vs-rest scores, their macro averages and the micro
/// averages obtained by summing TP/FP/FN before dividing. With exactly
/// one prediction per episode micro recall, precision and F1 coincide.
/// Undefined ratios (0/0) are reported as 0.
struct Metrics {
    std::vector<GaMetrics> per_ga;
    double macro_specificity = 0.0;
    double macro_recall = 0.0;
    double macro_precision = 0.0;
    double macro_f1 = 0.0;
    double micro_recall = 0.0;
    double micro_precision = 0.0;
    double micro_f1 = 0.0;
    std::size_t episodes = 0;
};

Metrics compute_metrics(const ConfusionMatrix& matrix);

}  // namespace gar
