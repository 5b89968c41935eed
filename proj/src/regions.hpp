// Per-node local/nonlocal classification and its interval form.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace vhcm {

inline constexpr std::uint8_t kLocal = 0;
inline constexpr std::uint8_t kNonlocal = 1;

/// One label per node. Nonlocal labels mark nodes strictly inside a coupling
/// interval (a, b); the interface nodes themselves stay local, they carry the
/// stress matching equations. The two boundary nodes are always treated as
/// local when extracting intervals.
struct RegionLabels {
    std::vector<std::uint8_t> labels;

    RegionLabels() = default;
    explicit RegionLabels(int node_count, std::uint8_t fill = kLocal) : labels(node_count, fill) {}

    int node_count() const { return static_cast<int>(labels.size()); }
    bool all_local() const;

    /// Maximal nonlocal runs converted to interface node pairs (ia, ib):
    /// a run of nonlocal nodes [k1..k2] yields ia = k1-1, ib = k2+1. The
    /// degenerate pair (0, n) describes the fully nonlocal reference.
    std::vector<std::pair<int, int>> intervals() const;

    /// Inverse of intervals(): marks nodes strictly inside each (ia, ib).
    static RegionLabels from_intervals(int node_count, const std::vector<std::pair<int, int>>& intervals);

    /// All interior nodes nonlocal; the fully nonlocal reference configuration.
    static RegionLabels full_nonlocal(int node_count);
};

}  // namespace vhcm
