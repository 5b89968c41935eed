// End-to-end commands behind the CLI: dataset generation, training,
// prediction, verification against the coupled solve and report emission.
#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "io.hpp"
#include "labeling.hpp"
#include "metrics.hpp"
#include "nn.hpp"

namespace vhcm {

/// The training roster: f1/f2 at evenly spaced off-node jump positions, their
/// negations, and f3 with seeded random coefficients.
std::vector<LoadExpr> build_roster(const ExperimentConfig& cfg);

struct GenerateSummary {
    std::string dataset_path;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t total_samples = 0;
    std::size_t train_samples = 0;
    std::size_t validation_samples = 0;
    std::size_t test_samples = 0;
    double wall_seconds = 0.0;
};

GenerateSummary cmd_generate(const ExperimentConfig& cfg, const std::string& out_dir);

struct TrainSummary {
    std::string model_path;
    std::string history_path;
    std::string metrics_path;
    int best_epoch = 0;
    int epochs_run = 0;
    double best_validation_loss = 0.0;
    MetricsReport test_metrics;
    double wall_seconds = 0.0;
};

TrainSummary cmd_train(const ExperimentConfig& cfg, const std::string& dataset_path, const std::string& out_dir);

struct PredictionResult {
    std::vector<double> probability;       // per node
    std::vector<std::uint8_t> raw_labels;  // thresholded at 0.5
    std::vector<std::uint8_t> labels;      // after post processing
};

/// Preprocess (second derivative, normalize, window if node-wise), run the
/// model at every node and apply the cleanup rule.
PredictionResult predict_regions(const CnnModel& model, const ModelMeta& meta, const Grid& grid,
                                 const std::vector<double>& load_values);

/// `load_arg` is either a load expression ("f1 x_jump=0.71") or a path to a
/// CSV of sampled load values when `load_is_file` is set.
void cmd_predict(const std::string& model_path, const std::string& load_arg, bool load_is_file,
                 const std::string& out_csv);

struct VerifyRecord {
    std::string spec;
    double rel_error = 0.0;
    bool degenerate = false;  // zero reference norm
    bool all_local = false;   // prediction had no nonlocal region
    int interval_count = 0;
    bool passed = false;  // rel_error < epsilon
};

struct VerifySummary {
    std::vector<VerifyRecord> records;
    double epsilon = 0.0;
    std::string report_path;
};

VerifySummary verify_loads(const CnnModel& model, const ModelMeta& meta, const std::vector<LoadExpr>& loads,
                           const std::string& out_dir);

VerifySummary cmd_verify(const std::string& model_path, const std::string& specs_path, const std::string& out_dir);

/// Renders whatever inputs are given (empty strings skip): loss curves from a
/// history file, a confusion matrix from a metrics file, displacement /
/// pointwise-error / label plots from a verification directory.
void cmd_report(const std::string& history_path, const std::string& metrics_path,
                const std::string& verify_dir, const std::string& out_dir);

}  // namespace vhcm
