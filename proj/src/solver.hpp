// Assembly and direct solution of the fully local, fully nonlocal and coupled
// variable-horizon systems, plus the relative error gate used to accept a
// coupling configuration.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "grid.hpp"
#include "loads.hpp"
#include "regions.hpp"

namespace vhcm {

struct BoundaryConditions {
    enum class RightKind { Dirichlet, Neumann };

    double left_value = 0.0;  // Dirichlet displacement at x = 0
    RightKind right_kind = RightKind::Dirichlet;
    double right_value = 0.0;  // displacement, or traction g for Neumann

    static BoundaryConditions dirichlet(double left, double right) {
        return {left, RightKind::Dirichlet, right};
    }
    static BoundaryConditions neumann(double left, double traction) {
        return {left, RightKind::Neumann, traction};
    }
};

/// One matrix row as a dense coefficient run starting at column `first_col`.
struct Stencil {
    int first_col = 0;
    std::vector<double> coeffs;

    double coeff_at(int col) const {
        int i = col - first_col;
        if (i < 0 || i >= static_cast<int>(coeffs.size())) return 0.0;
        return coeffs[static_cast<std::size_t>(i)];
    }
};

/// Discrete row of -integral of kappa_bar (u(y)-u(x))/|y-x| dy at node k with
/// horizon m_local*h, built from trapezoidal quadrature of the kernel:
/// coefficient of u_{k+-j} is -kappa_bar*beta_j/j with beta_j = 1 for
/// 0 < j < m_local and 1/2 at j = m_local, centre coefficient minus the sum
/// of the others, kappa_bar = 2EA/(m_local*h)^2. Reduces to the local
/// three-point row at m_local = 1 and is exact on cubic displacements.
Stencil nonlocal_row(const Grid& grid, const Material& material, int m_local, int k);

struct LinearSystem {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
};

/// One equation per node: Dirichlet row at x=0, central second differences in
/// the local interiors, third-order one-sided stress matching rows at the
/// interfaces, trapezoidal nonlocal rows with the variable horizon inside the
/// coupling intervals, and the boundary row at x=l per `bc`. Intervals that
/// touch the domain boundary take the boundary-condition row instead of a
/// stress row, which yields the fully nonlocal reference configuration.
LinearSystem assemble_vhcm(const Grid& grid, const Material& material, const RegionLabels& regions,
                           const BoundaryConditions& bc, const LoadVector& load);

struct Solution {
    std::vector<double> u;
    double residual_norm = 0.0;
};

/// Dense partial-pivoting factorization; throws with a condition estimate if
/// the matrix is numerically singular.
Solution solve(const LinearSystem& system);

Solution solve_vhcm(const Grid& grid, const Material& material, const RegionLabels& regions,
                    const BoundaryConditions& bc, const LoadVector& load);
Solution solve_local(const Grid& grid, const Material& material, const BoundaryConditions& bc,
                     const LoadVector& load);
Solution solve_nonlocal(const Grid& grid, const Material& material, const BoundaryConditions& bc,
                        const LoadVector& load);

struct RelativeError {
    double value = 0.0;
    // Set when the reference norm vanishes; `value` is then the absolute
    // norm of the test vector.
    bool degenerate_reference = false;
};

/// l2 norm of the nodal difference over the l2 norm of the reference.
RelativeError relative_error(const Solution& reference, const Solution& test);
RelativeError relative_error(const std::vector<double>& reference, const std::vector<double>& test);

std::vector<double> pointwise_error(const Solution& reference, const Solution& test);

}  // namespace vhcm
