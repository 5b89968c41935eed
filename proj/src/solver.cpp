#include "solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vhcm {

namespace {

void add_row(LinearSystem& sys, int row, const Stencil& st, double rhs) {
    for (std::size_t i = 0; i < st.coeffs.size(); ++i) sys.matrix(row, st.first_col + static_cast<int>(i)) = st.coeffs[i];
    sys.rhs(row) = rhs;
}

Stencil local_row(const Grid& grid, const Material& material, int k) {
    double s = material.ea() / (grid.h * grid.h);
    return {k - 1, {-s, 2.0 * s, -s}};
}

// Third-order one-sided first derivative at the interface, local side minus
// peridynamic stress side; kappa*delta^2/2 = EA makes both sides share the
// EA/(6h) scale.
Stencil left_interface_row(const Grid& grid, const Material& material, int k) {
    double s = material.ea() / (6.0 * grid.h);
    return {k - 3, {-2.0 * s, 9.0 * s, -18.0 * s, 22.0 * s, -18.0 * s, 9.0 * s, -2.0 * s}};
}

Stencil right_interface_row(const Grid& grid, const Material& material, int k) {
    double s = material.ea() / (6.0 * grid.h);
    return {k - 3, {2.0 * s, -9.0 * s, 18.0 * s, -22.0 * s, 18.0 * s, -9.0 * s, 2.0 * s}};
}

Stencil neumann_row(const Grid& grid, const Material& material, int k) {
    double s = material.ea() / (6.0 * grid.h);
    return {k - 3, {-2.0 * s, 9.0 * s, -18.0 * s, 11.0 * s}};
}

}  // namespace

Stencil nonlocal_row(const Grid& grid, const Material& material, int m_local, int k) {
    if (m_local < 1 || m_local > grid.m) throw std::invalid_argument("nonlocal_row: m_local out of 1..m");
    if (k - m_local < 0 || k + m_local > grid.n) throw std::invalid_argument("nonlocal_row: stencil exits the grid");

    const double kappa_bar = material.kappa(m_local * grid.h);
    Stencil st;
    st.first_col = k - m_local;
    st.coeffs.assign(2 * m_local + 1, 0.0);
    double centre = 0.0;
    for (int j = 1; j <= m_local; ++j) {
        double beta = (j == m_local) ? 0.5 : 1.0;
        double c = -kappa_bar * beta / j;
        st.coeffs[m_local - j] = c;
        st.coeffs[m_local + j] = c;
        centre -= 2.0 * c;
    }
    st.coeffs[m_local] = centre;
    return st;
}

LinearSystem assemble_vhcm(const Grid& grid, const Material& material, const RegionLabels& regions,
                           const BoundaryConditions& bc, const LoadVector& load) {
    const int n = grid.n;
    if (regions.node_count() != grid.node_count())
        throw std::invalid_argument("assemble: label vector does not match grid");
    if (load.values.size() != static_cast<std::size_t>(grid.node_count()))
        throw std::invalid_argument("assemble: load vector does not match grid");

    auto intervals = regions.intervals();
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        auto [ia, ib] = intervals[i];
        if (ib - ia < 2 * grid.m)
            throw std::invalid_argument("assemble: nonlocal interval must span at least 2m grid intervals");
        if (ia != 0 && ia < 3) throw std::invalid_argument("assemble: left interface too close to the boundary");
        if (ib != n && ib > n - 3) throw std::invalid_argument("assemble: right interface too close to the boundary");
        if (i > 0 && ia - intervals[i - 1].second < 2)
            throw std::invalid_argument("assemble: nonlocal intervals must be separated by a local node");
    }

    LinearSystem sys;
    sys.matrix = Eigen::MatrixXd::Zero(n + 1, n + 1);
    sys.rhs = Eigen::VectorXd::Zero(n + 1);

    // Local rows everywhere first, then overwrite the nonlocal interiors and
    // the interface/boundary rows.
    add_row(sys, 0, Stencil{0, {1.0}}, bc.left_value);
    for (int k = 1; k < n; ++k) add_row(sys, k, local_row(grid, material, k), load.values[k]);
    if (bc.right_kind == BoundaryConditions::RightKind::Neumann)
        add_row(sys, n, neumann_row(grid, material, n), bc.right_value);
    else
        add_row(sys, n, Stencil{n, {1.0}}, bc.right_value);

    for (auto [ia, ib] : intervals) {
        if (ia != 0) add_row(sys, ia, left_interface_row(grid, material, ia), 0.0);
        if (ib != n) add_row(sys, ib, right_interface_row(grid, material, ib), 0.0);
        for (int k = ia + 1; k < ib; ++k) {
            int p = horizon_steps(grid, ia, ib, k);
            add_row(sys, k, nonlocal_row(grid, material, p, k), load.values[k]);
        }
    }
    return sys;
}

Solution solve(const LinearSystem& system) {
    if (system.matrix.rows() != system.matrix.cols() || system.matrix.rows() != system.rhs.size())
        throw std::invalid_argument("solve: system is not square");

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system.matrix);
    double rcond = lu.rcond();
    if (!(rcond > 1e-15)) {
        std::ostringstream os;
        os << "solve: matrix is numerically singular (reciprocal condition estimate " << rcond << ")";
        throw std::runtime_error(os.str());
    }
    Eigen::VectorXd u = lu.solve(system.rhs);

    double residual = (system.matrix * u - system.rhs).norm();
    double gate = 1e-10 * std::max(system.rhs.norm(), 1.0);
    if (!(residual <= gate)) {
        std::ostringstream os;
        os << "solve: residual " << residual << " exceeds " << gate << " (rcond " << rcond << ")";
        throw std::runtime_error(os.str());
    }

    Solution sol;
    sol.u.assign(u.data(), u.data() + u.size());
    sol.residual_norm = residual;
    return sol;
}

Solution solve_vhcm(const Grid& grid, const Material& material, const RegionLabels& regions,
                    const BoundaryConditions& bc, const LoadVector& load) {
    return solve(assemble_vhcm(grid, material, regions, bc, load));
}

Solution solve_local(const Grid& grid, const Material& material, const BoundaryConditions& bc,
                     const LoadVector& load) {
    return solve_vhcm(grid, material, RegionLabels(grid.node_count(), kLocal), bc, load);
}

Solution solve_nonlocal(const Grid& grid, const Material& material, const BoundaryConditions& bc,
                        const LoadVector& load) {
    return solve_vhcm(grid, material, RegionLabels::full_nonlocal(grid.node_count()), bc, load);
}

RelativeError relative_error(const std::vector<double>& reference, const std::vector<double>& test) {
    if (reference.size() != test.size()) throw std::invalid_argument("relative_error: length mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        double d = reference[i] - test[i];
        num += d * d;
        den += reference[i] * reference[i];
    }
    if (den == 0.0) {
        double tn = 0.0;
        for (double v : test) tn += v * v;
        return {std::sqrt(tn), true};
    }
    return {std::sqrt(num / den), false};
}

RelativeError relative_error(const Solution& reference, const Solution& test) {
    return relative_error(reference.u, test.u);
}

std::vector<double> pointwise_error(const Solution& reference, const Solution& test) {
    if (reference.u.size() != test.u.size()) throw std::invalid_argument("pointwise_error: length mismatch");
    std::vector<double> e(reference.u.size());
    for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::abs(reference.u[i] - test.u[i]);
    return e;
}

}  // namespace vhcm
