// Classification evaluation. The positive class is the local model label
// (encoded 0), matching the reporting convention of the coupling pipeline.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace vhcm {

struct ConfusionMatrix {
    long tp = 0;  // correctly predicted local
    long fp = 0;  // predicted local, actually nonlocal
    long tn = 0;  // correctly predicted nonlocal
    long fn = 0;  // predicted nonlocal, actually local

    long total() const { return tp + fp + tn + fn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o);
};

ConfusionMatrix confusion(const std::vector<std::uint8_t>& predicted, const std::vector<std::uint8_t>& reference);

double accuracy(const ConfusionMatrix& cm);
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);
double f1_score(const ConfusionMatrix& cm);

/// Fraction of actual local / nonlocal instances predicted correctly.
double local_correct_rate(const ConfusionMatrix& cm);
double nonlocal_correct_rate(const ConfusionMatrix& cm);

struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    ConfusionMatrix pooled;       // summed counts
    double local_correct = 0.0;   // pooled percentage-form confusion entries
    double nonlocal_correct = 0.0;
    std::size_t sample_count = 0;
};

/// Per-sample metrics averaged over the list; pooled counts are also kept.
MetricsReport average_metrics(const std::vector<ConfusionMatrix>& per_sample);

std::string format_report(const MetricsReport& report);

}  // namespace vhcm
