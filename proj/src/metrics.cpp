#include "metrics.hpp"

#include <sstream>
#include <stdexcept>

namespace vhcm {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
    tp += o.tp;
    fp += o.fp;
    tn += o.tn;
    fn += o.fn;
    return *this;
}

ConfusionMatrix confusion(const std::vector<std::uint8_t>& predicted, const std::vector<std::uint8_t>& reference) {
    if (predicted.size() != reference.size()) throw std::invalid_argument("confusion: length mismatch");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        bool pred_local = predicted[i] == 0;
        bool ref_local = reference[i] == 0;
        if (pred_local && ref_local) ++cm.tp;
        else if (pred_local && !ref_local) ++cm.fp;
        else if (!pred_local && !ref_local) ++cm.tn;
        else ++cm.fn;
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    long total = cm.total();
    return total == 0 ? 0.0 : static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
}

double precision(const ConfusionMatrix& cm) {
    long den = cm.tp + cm.fp;
    return den == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(den);
}

double recall(const ConfusionMatrix& cm) {
    long den = cm.tp + cm.fn;
    return den == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(den);
}

double f1_score(const ConfusionMatrix& cm) {
    double p = precision(cm);
    double r = recall(cm);
    return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

double local_correct_rate(const ConfusionMatrix& cm) {
    long den = cm.tp + cm.fn;
    return den == 0 ? 0.0 : static_cast<double>(cm.tp) / static_cast<double>(den);
}

double nonlocal_correct_rate(const ConfusionMatrix& cm) {
    long den = cm.tn + cm.fp;
    return den == 0 ? 0.0 : static_cast<double>(cm.tn) / static_cast<double>(den);
}

MetricsReport average_metrics(const std::vector<ConfusionMatrix>& per_sample) {
    if (per_sample.empty()) throw std::invalid_argument("average_metrics: empty sample list");
    MetricsReport r;
    r.sample_count = per_sample.size();
    for (const auto& cm : per_sample) {
        r.accuracy += accuracy(cm);
        r.precision += precision(cm);
        r.recall += recall(cm);
        r.f1 += f1_score(cm);
        r.pooled += cm;
    }
    double inv = 1.0 / static_cast<double>(per_sample.size());
    r.accuracy *= inv;
    r.precision *= inv;
    r.recall *= inv;
    r.f1 *= inv;
    r.local_correct = local_correct_rate(r.pooled);
    r.nonlocal_correct = nonlocal_correct_rate(r.pooled);
    return r;
}

std::string format_report(const MetricsReport& r) {
    std::ostringstream os;
    os << "samples = " << r.sample_count << "\n";
    os << "accuracy = " << r.accuracy << "\n";
    os << "precision = " << r.precision << "\n";
    os << "recall = " << r.recall << "\n";
    os << "f1 = " << r.f1 << "\n";
    os << "confusion.tp = " << r.pooled.tp << "\n";
    os << "confusion.fp = " << r.pooled.fp << "\n";
    os << "confusion.tn = " << r.pooled.tn << "\n";
    os << "confusion.fn = " << r.pooled.fn << "\n";
    os << "confusion.local_correct_pct = " << 100.0 * r.local_correct << "\n";
    os << "confusion.nonlocal_correct_pct = " << 100.0 * r.nonlocal_correct << "\n";
    return os.str();
}

}  // namespace vhcm
