// Ground-truth region generation (the epsilon-gated smallest-interval
// search), dataset assembly for the full-domain and windowed framings,
// normalization, deduplication and the post-prediction cleanup rule.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grid.hpp"
#include "loads.hpp"
#include "regions.hpp"
#include "solver.hpp"

namespace vhcm {

/// Accepted (or rejected) reference coupling configuration for one load.
struct ReferenceConfig {
    LoadExpr expr;
    RegionLabels labels;
    double achieved_error = 0.0;
    double alpha = 0.0;  // half width of the nonlocal interval; 0 for fully local
    bool rejected = false;
    std::string reject_reason;
};

/// Sweeps alpha = m*h, (m+1)*h, ... and returns the first symmetric interval
/// (x_jump - alpha, x_jump + alpha) whose coupled solution passes the
/// relative-error gate against the fully nonlocal reference. Nodes strictly
/// inside the interval are labelled nonlocal, so the flanking interface nodes
/// always sit on the grid regardless of where x_jump falls.
ReferenceConfig find_reference_region(const LoadSpec& spec, const Grid& grid, const Material& material,
                                      const BoundaryConditions& bc, double epsilon);

/// Fully local reference for polynomial loads; the achieved error is recorded
/// from comparing the two solvers.
ReferenceConfig reference_for_polynomial(const LoadSpec& spec, const Grid& grid, const Material& material,
                                         const BoundaryConditions& bc);

/// Reference for an arbitrary load expression (dispatches on the family).
ReferenceConfig build_reference(const LoadExpr& expr, const Grid& grid, const Material& material,
                                const BoundaryConditions& bc, double epsilon);

/// References for a whole roster, computed in a worker pool and returned in
/// roster order.
std::vector<ReferenceConfig> build_references(const std::vector<LoadExpr>& roster, const Grid& grid,
                                              const Material& material, const BoundaryConditions& bc,
                                              double epsilon, int threads);

/// (v - mean) / std with the population standard deviation; vectors that are
/// constant to round-off are only centred.
std::vector<double> normalize(const std::vector<double>& v);

enum class Split : std::uint8_t { Train = 0, Validation = 1, Test = 2 };
const char* split_name(Split s);
Split split_from_name(const std::string& name);

enum class CaseKind : std::uint8_t { FullDomain = 0, Window = 1 };
const char* case_name(CaseKind c);
CaseKind case_from_name(const std::string& name);

struct Sample {
    std::vector<double> input;
    std::vector<std::uint8_t> label;  // n+1 labels (full domain) or 1 (window)
    LoadExpr origin;
    int center = -1;  // window centre node; -1 for full-domain samples
    Split split = Split::Train;
};

struct Dataset {
    CaseKind case_kind = CaseKind::FullDomain;
    int input_width = 0;
    int label_width = 0;
    std::uint64_t seed = 0;
    double epsilon = 0.0;
    double length = 1.0;
    int n = 0;
    int m = 0;
    // problem description the reference labels were generated under
    double modulus = 1.0;
    double area = 1.0;
    double bc_left = 0.0;
    std::string bc_right_kind = "dirichlet";
    double bc_right = 0.0;
    std::vector<Sample> samples;

    std::vector<std::size_t> indices_of(Split s) const;
};

/// Assigns whole loads to train/validation/test with a seeded shuffle;
/// fractions floor to counts, the remainder goes to the test set.
std::vector<Split> assign_splits(std::size_t count, double train_frac, double validation_frac,
                                 std::uint64_t seed);

/// One sample per accepted reference: normalized second derivative of the
/// load against the full label vector.
Dataset build_fulldomain_dataset(const std::vector<ReferenceConfig>& refs, const Grid& grid,
                                 std::uint64_t seed, double epsilon, double train_frac,
                                 double validation_frac);

/// Splits the source loads first, then emits one window per node (width
/// 4m+1, boundary windows replicate the edge value) labelled by the centre
/// node, and finally removes duplicated (window, label) pairs within and
/// across splits, keeping the higher-priority copy (train > validation >
/// test). Windows are rounded to 9 significant digits for the duplicate test.
Dataset build_window_dataset(const std::vector<ReferenceConfig>& refs, const Grid& grid,
                             std::uint64_t seed, double epsilon, double train_frac,
                             double validation_frac);

/// Extracts the window centred at `center` from a full-length vector.
std::vector<double> extract_window(const std::vector<double>& values, int center, int m);

/// Post-prediction cleanup: nonlocal runs shorter than m nodes become local;
/// surviving runs are widened (symmetrically, clipped away from the
/// boundaries) until they span at least 2m grid intervals, and runs whose
/// interfaces would collide are merged. Idempotent.
std::vector<std::uint8_t> post_process(const std::vector<std::uint8_t>& labels, int m);

}  // namespace vhcm
