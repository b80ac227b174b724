#include "gar/metrics.hpp"

#include <algorithm>

#include "gar/error.hpp"

namespace gar {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels) : labels_(std::move(labels)) {
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
    counts_.assign(labels_.size(), std::vector<std::size_t>(labels_.size(), 0));
}

std::size_t ConfusionMatrix::index_of(const std::string& label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) throw Error(ErrorCode::UnknownGA, "label '" + label + "' not in matrix");
    return static_cast<std::size_t>(it - labels_.begin());
}

void ConfusionMatrix::add(const std::string& truth, const std::string& predicted) {
    ++counts_[index_of(truth)][index_of(predicted)];
}

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts_) {
        for (auto c : row) t += c;
    }
    return t;
}

namespace {

double ratio(std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double precision, double recall) {
    return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

}  // namespace

Metrics compute_metrics(const ConfusionMatrix& matrix) {
    Metrics m;
    const auto& c = matrix.counts();
    const std::size_t k = matrix.labels().size();
    const std::size_t total = matrix.total();
    m.episodes = total;
    std::size_t sum_tp = 0, sum_fp = 0, sum_fn = 0;
    for (std::size_t i = 0; i < k; ++i) {
        GaMetrics g;
        g.ga = matrix.labels()[i];
        g.tp = c[i][i];
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            g.fn += c[i][j];
            g.fp += c[j][i];
        }
        g.tn = total - g.tp - g.fn - g.fp;
        g.specificity = ratio(g.tn, g.tn + g.fp);
        g.recall = ratio(g.tp, g.tp + g.fn);
        g.precision = ratio(g.tp, g.tp + g.fp);
        g.f1 = f1_of(g.precision, g.recall);
        sum_tp += g.tp;
        sum_fp += g.fp;
        sum_fn += g.fn;
        m.macro_specificity += g.specificity;
        m.macro_recall += g.recall;
        m.macro_precision += g.precision;
        m.macro_f1 += g.f1;
        m.per_ga.push_back(std::move(g));
    }
    if (k > 0) {
        const auto kd = static_cast<double>(k);
        m.macro_specificity /= kd;
        m.macro_recall /= kd;
        m.macro_precision /= kd;
        m.macro_f1 /= kd;
    }
    m.micro_recall = ratio(sum_tp, sum_tp + sum_fn);
    m.micro_precision = ratio(sum_tp, sum_tp + sum_fp);
    m.micro_f1 = f1_of(m.micro_precision, m.micro_recall);
    return m;
}

}  // namespace gar
