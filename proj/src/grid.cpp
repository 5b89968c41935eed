#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vhcm {

Grid::Grid(double length_, int n_, int m_) : length(length_), n(n_), m(m_) {
    if (length <= 0.0) throw std::invalid_argument("grid: length must be positive");
    if (m < 1) throw std::invalid_argument("grid: horizon ratio m must be >= 1");
    if (n < 4 * m + 2)
        throw std::invalid_argument("grid: n must be at least 4m+2 = " + std::to_string(4 * m + 2) +
                                    " so an interior nonlocal region fits");
    h = length / n;
    delta = m * h;
}

Grid make_grid(double length, int n, int m) { return Grid(length, n, m); }

int Grid::nearest_node(double pos) const {
    int k = static_cast<int>(std::lround(pos / h));
    return std::clamp(k, 0, n);
}

std::vector<double> Grid::nodes() const {
    std::vector<double> xs(node_count());
    for (int k = 0; k <= n; ++k) xs[k] = x(k);
    return xs;
}

Material make_material(double modulus, double area) {
    if (modulus <= 0.0 || area <= 0.0) throw std::invalid_argument("material: E and A must be positive");
    return Material{modulus, area};
}

double variable_horizon(const Grid& grid, double a, double b, double x) {
    if (!(a < x && x < b)) throw std::invalid_argument("variable_horizon: x must lie strictly inside (a, b)");
    return std::min({x - a, grid.delta, b - x});
}

int horizon_steps(const Grid& grid, int ia, int ib, int k) {
    if (!(ia < k && k < ib)) throw std::invalid_argument("horizon_steps: node outside the interval");
    return std::min({k - ia, grid.m, ib - k});
}

}  // namespace vhcm
