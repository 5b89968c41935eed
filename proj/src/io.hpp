// File formats: the dataset text format, the binary weights format with its
// text sidecar, history/solution CSV emission and checksums.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "labeling.hpp"
#include "nn.hpp"

namespace vhcm {

/// Header line plus one comma-separated record per sample, numbers printed
/// with 17 significant digits so doubles round-trip exactly.
void write_dataset(const Dataset& dataset, const std::string& path);
Dataset read_dataset(const std::string& path);

/// Weights file: magic "VHCMNN1", then little-endian u32 output size, input
/// length and layer count, a shape header per layer, then the raw 64-bit
/// float parameter arrays in declaration order.
struct ModelMeta {
    std::string case_kind = "window";
    double length = 1.0;
    int n = 256;
    int m = 8;
    double modulus = 1.0;
    double area = 1.0;
    double bc_left = 0.0;
    std::string bc_right_kind = "dirichlet";
    double bc_right = 0.0;
    double epsilon = 0.01;
    std::uint64_t dataset_checksum = 0;
    TrainConfig train;
};

void save_model(const CnnModel& model, const ModelMeta& meta, const std::string& path);
CnnModel load_model(const std::string& path, ModelMeta* meta = nullptr);

void write_history(const std::vector<EpochStats>& history, const std::string& path);
std::vector<EpochStats> read_history(const std::string& path);

/// Two-column (x, u) CSV for a solution, or a wider table when more columns
/// are supplied.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// FNV-1a 64 over the file bytes.
std::uint64_t file_checksum(const std::string& path);

std::string format_g17(double v);

}  // namespace vhcm
