// Uniform 1D discretization of the bar and the index arithmetic shared by the
// solvers and the dataset builders.
#pragma once

#include <stdexcept>
#include <vector>

namespace vhcm {

/// Uniform grid on [0, length] with n intervals and horizon delta = m*h.
/// Immutable after construction.
struct Grid {
    double length = 1.0;
    int n = 0;        // number of intervals; n+1 nodes
    int m = 0;        // horizon ratio delta/h
    double h = 0.0;   // spacing length/n
    double delta = 0.0;

    Grid(double length_, int n_, int m_);

    int node_count() const { return n + 1; }

    // Node coordinates are always derived as k*h so that interface positions
    // are reproducible bit for bit.
    double x(int k) const { return k * h; }

    int nearest_node(double pos) const;

    std::vector<double> nodes() const;
};

Grid make_grid(double length, int n, int m);

/// Elastic modulus, cross section and the derived bond stiffness
/// kappa = 2EA/delta^2. The position dependent stiffness 2EA/delta_v(x)^2 is
/// always recomputed from the local horizon, never stored.
struct Material {
    double modulus = 1.0;       // E
    double area = 1.0;          // A
    double kappa(double horizon) const { return 2.0 * modulus * area / (horizon * horizon); }
    double ea() const { return modulus * area; }
};

Material make_material(double modulus, double area);

/// Piecewise linear variable horizon min(x - a, delta, b - x) for x inside
/// the nonlocal interval (a, b). The result is a positive multiple of h when
/// all three positions sit on nodes.
double variable_horizon(const Grid& grid, double a, double b, double x);

/// Same in index space: horizon (in units of h) at node k for the interval
/// with interface nodes (ia, ib).
int horizon_steps(const Grid& grid, int ia, int ib, int k);

}  // namespace vhcm
