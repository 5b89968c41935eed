#include "regions.hpp"

#include <stdexcept>

namespace vhcm {

bool RegionLabels::all_local() const {
    for (auto l : labels)
        if (l != kLocal) return false;
    return true;
}

std::vector<std::pair<int, int>> RegionLabels::intervals() const {
    const int n = node_count() - 1;
    std::vector<std::pair<int, int>> out;
    int run_start = -1;
    for (int k = 1; k < n; ++k) {  // boundary nodes are local by convention
        bool nl = labels[k] == kNonlocal;
        if (nl && run_start < 0) run_start = k;
        if ((!nl || k == n - 1) && run_start >= 0) {
            int run_end = nl ? k : k - 1;
            out.emplace_back(run_start - 1, run_end + 1);
            run_start = -1;
        }
    }
    return out;
}

RegionLabels RegionLabels::from_intervals(int node_count, const std::vector<std::pair<int, int>>& intervals) {
    RegionLabels rl(node_count, kLocal);
    for (auto [ia, ib] : intervals) {
        if (ia < 0 || ib > node_count - 1 || ib - ia < 2)
            throw std::invalid_argument("region interval out of range");
        for (int k = ia + 1; k < ib; ++k) rl.labels[k] = kNonlocal;
    }
    return rl;
}

RegionLabels RegionLabels::full_nonlocal(int node_count) {
    RegionLabels rl(node_count, kNonlocal);
    rl.labels.front() = kLocal;
    rl.labels.back() = kLocal;
    return rl;
}

}  // namespace vhcm
