#include "loads.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace vhcm {

const char* family_name(LoadFamily f) {
    switch (f) {
        case LoadFamily::F1: return "f1";
        case LoadFamily::F2: return "f2";
        case LoadFamily::F3: return "f3";
        case LoadFamily::F4: return "f4";
        case LoadFamily::F5: return "f5";
    }
    return "?";
}

LoadFamily family_from_name(const std::string& name) {
    if (name == "f1") return LoadFamily::F1;
    if (name == "f2") return LoadFamily::F2;
    if (name == "f3") return LoadFamily::F3;
    if (name == "f4") return LoadFamily::F4;
    if (name == "f5") return LoadFamily::F5;
    throw std::invalid_argument("unknown load family: " + name);
}

LoadSpec LoadSpec::f1(double x_jump, double delta, bool negated) {
    LoadSpec s;
    s.family = LoadFamily::F1;
    s.x_jump = x_jump;
    s.delta = delta;
    s.negated = negated;
    return s;
}

LoadSpec LoadSpec::f2(double x_jump, double delta, bool negated) {
    LoadSpec s = f1(x_jump, delta, negated);
    s.family = LoadFamily::F2;
    return s;
}

LoadSpec LoadSpec::f3(double c1, double c2) {
    LoadSpec s;
    s.family = LoadFamily::F3;
    s.c1 = c1;
    s.c2 = c2;
    return s;
}

LoadSpec LoadSpec::f4(double t) {
    LoadSpec s;
    s.family = LoadFamily::F4;
    s.t = t;
    return s;
}

LoadSpec LoadSpec::f5(double c) {
    LoadSpec s;
    s.family = LoadFamily::F5;
    s.c = c;
    return s;
}

LoadSpec LoadSpec::negate() const {
    LoadSpec s = *this;
    s.negated = !s.negated;
    return s;
}

std::string LoadSpec::to_string() const {
    std::ostringstream os;
    os << family_name(family);
    switch (family) {
        case LoadFamily::F1:
        case LoadFamily::F2: os << " x_jump=" << x_jump; break;
        case LoadFamily::F3: os << " c1=" << c1 << " c2=" << c2; break;
        case LoadFamily::F4: os << " t=" << t; break;
        case LoadFamily::F5: os << " c=" << c; break;
    }
    if (negated) os << " neg";
    return os.str();
}

std::string expr_to_string(const LoadExpr& expr) {
    std::string out;
    for (std::size_t i = 0; i < expr.size(); ++i) {
        if (i) out += " + ";
        out += expr[i].to_string();
    }
    return out;
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string tok; is >> tok;) out.push_back(tok);
    return out;
}

LoadSpec parse_term(const std::string& term) {
    auto toks = split_ws(term);
    if (toks.empty()) throw std::invalid_argument("empty load term");
    LoadSpec s;
    s.family = family_from_name(toks[0]);
    for (std::size_t i = 1; i < toks.size(); ++i) {
        const std::string& t = toks[i];
        if (t == "neg") {
            s.negated = true;
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("bad load parameter: " + t);
        std::string key = t.substr(0, eq);
        double val = std::stod(t.substr(eq + 1));
        if (key == "x_jump") s.x_jump = val;
        else if (key == "c1") s.c1 = val;
        else if (key == "c2") s.c2 = val;
        else if (key == "t") s.t = val;
        else if (key == "c") s.c = val;
        else if (key == "delta") s.delta = val;
        else throw std::invalid_argument("unknown load parameter: " + key);
    }
    return s;
}

}  // namespace

LoadExpr parse_load_expr(const std::string& text) {
    LoadExpr expr;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto plus = text.find('+', start);
        std::string term = text.substr(start, plus == std::string::npos ? std::string::npos : plus - start);
        if (!split_ws(term).empty()) expr.push_back(parse_term(term));
        if (plus == std::string::npos) break;
        start = plus + 1;
    }
    if (expr.empty()) throw std::invalid_argument("empty load expression");
    return expr;
}

void validate_load(const LoadSpec& spec, const Grid& grid) {
    switch (spec.family) {
        case LoadFamily::F1:
        case LoadFamily::F2: {
            if (spec.delta <= 0.0) throw std::invalid_argument("f1/f2: delta must be positive");
            double lo = 2.0 * grid.delta;
            double hi = grid.length - 2.0 * grid.delta;
            if (!(lo < spec.x_jump && spec.x_jump < hi))
                throw std::invalid_argument("f1/f2: x_jump must lie inside (2*delta, length - 2*delta)");
            break;
        }
        case LoadFamily::F3: break;
        case LoadFamily::F4:
            if (spec.t <= 0.0) throw std::invalid_argument("f4: t must be positive");
            break;
        case LoadFamily::F5:
            if (!(0.0 < spec.c && spec.c < grid.length))
                throw std::invalid_argument("f5: c must lie inside (0, length)");
            break;
    }
}

namespace {

// Canonical f1 middle-left branch on [1/2-d, 1/2); `floor_arg` keeps the log
// finite when xc touches the singular point.
double f1_mid_left(double xc, double d) {
    double arg = std::max(0.5 - xc, d / 16.0);
    double lnd = std::log(d);
    return 0.5 * d * d - d + 0.375 + (2.0 * d - 1.5 - lnd) * xc + (1.5 + lnd) * xc * xc -
           (xc * xc - xc) * std::log(arg);
}

double f1_canonical(double xc, double d) {
    if (xc < 0.5 - d) return 0.0;
    if (xc < 0.5) return f1_mid_left(xc, d);
    if (xc < 0.5 + d) return 1.0 - f1_mid_left(1.0 - xc, d);  // mirror branch
    return 1.0;
}

double f2_canonical(double xc, double d) {
    double scale = 0.5 / (d * d);
    if (xc < 0.5 - d) return 0.0;
    if (xc < 0.5) return scale * (std::log(d) - std::log(std::max(0.5 - xc, d / 16.0)));
    if (xc < 0.5 + d) return scale * (std::log(std::max(xc - 0.5, d / 16.0)) - std::log(d));
    return 0.0;
}

}  // namespace

double eval_load(const LoadSpec& spec, double x) {
    double v = 0.0;
    switch (spec.family) {
        case LoadFamily::F1: v = f1_canonical(x + (0.5 - spec.x_jump), spec.delta); break;
        case LoadFamily::F2: v = f2_canonical(x + (0.5 - spec.x_jump), spec.delta); break;
        case LoadFamily::F3: v = spec.c1 * x + spec.c2; break;
        case LoadFamily::F4: v = std::tanh((x - 0.5) / spec.t); break;
        case LoadFamily::F5: {
            double r = x - spec.c;
            v = std::exp(-400.0 * r * r);
            break;
        }
    }
    return spec.negated ? -v : v;
}

double eval_expr(const LoadExpr& expr, double x) {
    double v = 0.0;
    for (const auto& s : expr) v += eval_load(s, x);
    return v;
}

LoadVector sample_load(const LoadSpec& spec, const Grid& grid) {
    validate_load(spec, grid);
    LoadVector lv;
    lv.expr = {spec};
    lv.values.resize(grid.node_count());
    for (int k = 0; k <= grid.n; ++k) lv.values[k] = eval_load(spec, grid.x(k));
    return lv;
}

LoadVector sample_expr(const LoadExpr& expr, const Grid& grid) {
    if (expr.empty()) throw std::invalid_argument("sample_expr: empty expression");
    for (const auto& s : expr) validate_load(s, grid);
    LoadVector lv;
    lv.expr = expr;
    lv.values.resize(grid.node_count());
    for (int k = 0; k <= grid.n; ++k) lv.values[k] = eval_expr(expr, grid.x(k));
    return lv;
}

std::vector<double> second_derivative(const std::vector<double>& v, const Grid& grid) {
    const std::size_t len = v.size();
    if (len != static_cast<std::size_t>(grid.node_count()))
        throw std::invalid_argument("second_derivative: vector length does not match grid");
    if (len < 4) throw std::invalid_argument("second_derivative: need at least 4 nodes");

    const double inv_h2 = 1.0 / (grid.h * grid.h);
    std::vector<double> d(len);
    d[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * inv_h2;
    for (std::size_t k = 1; k + 1 < len; ++k) d[k] = (v[k - 1] - 2.0 * v[k] + v[k + 1]) * inv_h2;
    d[len - 1] = (2.0 * v[len - 1] - 5.0 * v[len - 2] + 4.0 * v[len - 3] - v[len - 4]) * inv_h2;

    // Snap accumulated round-off to zero; genuinely flat loads must produce
    // an exactly zero vector.
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    double tol = 1e-12 * vmax * inv_h2;
    for (double& x : d)
        if (std::abs(x) <= tol) x = 0.0;
    return d;
}

std::vector<double> second_derivative(const LoadVector& load, const Grid& grid) {
    return second_derivative(load.values, grid);
}

std::vector<LoadExpr> augment(const std::vector<LoadExpr>& exprs) {
    std::vector<LoadExpr> out;
    out.reserve(2 * exprs.size());
    for (const auto& e : exprs) out.push_back(e);
    for (const auto& e : exprs) {
        bool singular = true;
        for (const auto& s : e)
            singular = singular && (s.family == LoadFamily::F1 || s.family == LoadFamily::F2);
        if (!singular || e.empty()) continue;
        LoadExpr neg;
        for (const auto& s : e) neg.push_back(s.negate());
        out.push_back(neg);
    }
    return out;
}

}  // namespace vhcm
