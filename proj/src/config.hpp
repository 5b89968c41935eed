// Experiment configuration: flat `section.key = value` text files, one seed
// for every source of randomness.
#pragma once

#include <cstdint>
#include <string>

#include "nn.hpp"
#include "solver.hpp"

namespace vhcm {

struct ExperimentConfig {
    // grid + material
    double length = 1.0;
    int n = 256;
    int m = 8;
    double modulus = 1.0;
    double area = 1.0;

    // boundary conditions
    double bc_left = 0.0;
    std::string bc_right_kind = "dirichlet";  // dirichlet | neumann
    double bc_right = 0.0;

    // error gate
    double epsilon = 0.01;

    // load roster
    int f12_positions = 150;
    double f12_lo = 0.15;
    double f12_hi = 0.85;
    int f3_count = 186;
    double f3_c1_range = 30.0;
    double f3_c2_range = 10.0;

    // dataset
    double split_train = 0.75;
    double split_validation = 0.10;
    std::string case_kind = "window";  // full_domain | window
    std::uint64_t seed = 42;
    int generation_threads = 2;

    TrainConfig train;

    Grid grid() const { return Grid(length, n, m); }
    Material material() const { return make_material(modulus, area); }
    BoundaryConditions bc() const;
    CaseKind parsed_case() const;

    void set(const std::string& key, const std::string& value);
    std::string get(const std::string& key) const;
    std::string to_text() const;
};

ExperimentConfig default_config();
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& cfg, const std::string& path);

/// Thrown for unknown keys, malformed values or unsatisfiable settings; the
/// command line maps it to its configuration exit code.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace vhcm
