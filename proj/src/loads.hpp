// The five parametric load families, their shifted/negated variants and the
// second-derivative preprocessing that feeds the classifier.
#pragma once

#include <string>
#include <vector>

#include "grid.hpp"

namespace vhcm {

enum class LoadFamily { F1, F2, F3, F4, F5 };

const char* family_name(LoadFamily f);
LoadFamily family_from_name(const std::string& name);

/// Parametric description of one loading function.
///
/// F1 and F2 carry a jump position and the transition width `delta` (the same
/// delta as the model horizon). F3 is the linear load c1*x + c2, F4 the
/// tanh((x-1/2)/t) ramp and F5 the Gaussian bump centred at c.
struct LoadSpec {
    LoadFamily family = LoadFamily::F3;
    double x_jump = 0.5;  // F1/F2 singularity location
    double c1 = 0.0;      // F3 slope
    double c2 = 0.0;      // F3 offset
    double t = 1.0;       // F4 sharpness
    double c = 0.5;       // F5 centre
    double delta = 0.0;   // F1/F2 transition width
    bool negated = false;

    static LoadSpec f1(double x_jump, double delta, bool negated = false);
    static LoadSpec f2(double x_jump, double delta, bool negated = false);
    static LoadSpec f3(double c1, double c2);
    static LoadSpec f4(double t);
    static LoadSpec f5(double c);

    LoadSpec negate() const;
    std::string to_string() const;
};

/// A load is in general a sum of primitive specs; single-family loads are the
/// common case, two-term sums model loads with several jumps.
using LoadExpr = std::vector<LoadSpec>;

std::string expr_to_string(const LoadExpr& expr);
LoadExpr parse_load_expr(const std::string& text);

/// f_b sampled at every node.
struct LoadVector {
    std::vector<double> values;  // length n+1
    LoadExpr expr;
};

/// Checks the family specific parameter constraints against the grid.
void validate_load(const LoadSpec& spec, const Grid& grid);

/// Pointwise evaluation. F1/F2 follow the half-open branch structure of the
/// published formulas, shifted so the singularity sits at x_jump; the
/// logarithm argument is floored at delta/16 so that collocation at a node
/// coinciding with the singularity stays finite.
double eval_load(const LoadSpec& spec, double x);

double eval_expr(const LoadExpr& expr, double x);

LoadVector sample_load(const LoadSpec& spec, const Grid& grid);
LoadVector sample_expr(const LoadExpr& expr, const Grid& grid);

/// Central second-difference quotient at interior nodes, second-order
/// one-sided stencils at the two boundary nodes. Entries whose magnitude is
/// below round-off scale (1e-12 * max|v| / h^2) are snapped to exactly zero,
/// which keeps the second derivative of linear loads identically zero.
std::vector<double> second_derivative(const std::vector<double>& values, const Grid& grid);
std::vector<double> second_derivative(const LoadVector& load, const Grid& grid);

/// Adds a negated copy of every F1/F2 spec. F3 already spans both signs
/// through its coefficients, F4/F5 are test-only families.
std::vector<LoadExpr> augment(const std::vector<LoadExpr>& exprs);

}  // namespace vhcm
