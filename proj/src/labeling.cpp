#include "labeling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "rng.hpp"

namespace vhcm {

namespace {

RegionLabels labels_for_interval(const Grid& grid, double a, double b) {
    RegionLabels rl(grid.node_count(), kLocal);
    for (int k = 1; k < grid.n; ++k) {
        double x = grid.x(k);
        if (a < x && x < b) rl.labels[k] = kNonlocal;
    }
    return rl;
}

}  // namespace

ReferenceConfig find_reference_region(const LoadSpec& spec, const Grid& grid, const Material& material,
                                      const BoundaryConditions& bc, double epsilon) {
    if (spec.family != LoadFamily::F1 && spec.family != LoadFamily::F2)
        throw std::invalid_argument("find_reference_region: spec must be a singular family");
    validate_load(spec, grid);

    ReferenceConfig ref;
    ref.expr = {spec};

    auto load = sample_load(spec, grid);
    auto u_ref = solve_nonlocal(grid, material, bc, load);

    const int min_node = 2 * grid.m + 1;      // interface node with x > 2*delta
    const int max_node = grid.n - 2 * grid.m - 1;
    for (int ai = grid.m;; ++ai) {
        double alpha = ai * grid.h;
        RegionLabels rl = labels_for_interval(grid, spec.x_jump - alpha, spec.x_jump + alpha);
        auto intervals = rl.intervals();
        if (intervals.size() != 1 || intervals[0].first < min_node || intervals[0].second > max_node) {
            ref.rejected = true;
            ref.reject_reason = "no admissible interval below the error gate";
            return ref;
        }
        auto u_test = solve_vhcm(grid, material, rl, bc, load);
        auto err = relative_error(u_ref, u_test);
        if (err.value < epsilon) {
            ref.labels = rl;
            ref.achieved_error = err.value;
            ref.alpha = alpha;
            return ref;
        }
    }
}

ReferenceConfig reference_for_polynomial(const LoadSpec& spec, const Grid& grid, const Material& material,
                                         const BoundaryConditions& bc) {
    if (spec.family != LoadFamily::F3)
        throw std::invalid_argument("reference_for_polynomial: spec must be the linear family");
    ReferenceConfig ref;
    ref.expr = {spec};
    ref.labels = RegionLabels(grid.node_count(), kLocal);
    auto load = sample_load(spec, grid);
    auto u_nl = solve_nonlocal(grid, material, bc, load);
    auto u_l = solve_local(grid, material, bc, load);
    ref.achieved_error = relative_error(u_nl, u_l).value;
    return ref;
}

ReferenceConfig build_reference(const LoadExpr& expr, const Grid& grid, const Material& material,
                                const BoundaryConditions& bc, double epsilon) {
    if (expr.size() != 1) throw std::invalid_argument("build_reference: composite loads have no reference");
    const LoadSpec& spec = expr[0];
    switch (spec.family) {
        case LoadFamily::F1:
        case LoadFamily::F2: return find_reference_region(spec, grid, material, bc, epsilon);
        case LoadFamily::F3: return reference_for_polynomial(spec, grid, material, bc);
        default: throw std::invalid_argument("build_reference: family has no reference rule");
    }
}

std::vector<ReferenceConfig> build_references(const std::vector<LoadExpr>& roster, const Grid& grid,
                                              const Material& material, const BoundaryConditions& bc,
                                              double epsilon, int threads) {
    std::vector<ReferenceConfig> refs(roster.size());
    threads = std::max(1, threads);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= roster.size()) return;
            try {
                refs[i] = build_reference(roster[i], grid, material, bc, epsilon);
            } catch (const std::exception& e) {
                refs[i].expr = roster[i];
                refs[i].rejected = true;
                refs[i].reject_reason = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    return refs;
}

std::vector<double> normalize(const std::vector<double>& v) {
    if (v.empty()) return v;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    double sd = std::sqrt(var);
    std::vector<double> out(v.size());
    if (sd < 1e-12) {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] - mean;
    } else {
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
    }
    return out;
}

const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Validation: return "validation";
        case Split::Test: return "test";
    }
    return "?";
}

Split split_from_name(const std::string& name) {
    if (name == "train") return Split::Train;
    if (name == "validation") return Split::Validation;
    if (name == "test") return Split::Test;
    throw std::invalid_argument("unknown split: " + name);
}

const char* case_name(CaseKind c) { return c == CaseKind::FullDomain ? "full_domain" : "window"; }

CaseKind case_from_name(const std::string& name) {
    if (name == "full_domain") return CaseKind::FullDomain;
    if (name == "window") return CaseKind::Window;
    throw std::invalid_argument("unknown case: " + name);
}

std::vector<std::size_t> Dataset::indices_of(Split s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < samples.size(); ++i)
        if (samples[i].split == s) out.push_back(i);
    return out;
}

std::vector<Split> assign_splits(std::size_t count, double train_frac, double validation_frac,
                                 std::uint64_t seed) {
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    Rng rng = Rng::derive(seed, "split");
    rng.shuffle(order);

    std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(count));
    std::size_t n_val = static_cast<std::size_t>(validation_frac * static_cast<double>(count));
    std::vector<Split> splits(count, Split::Test);
    for (std::size_t i = 0; i < count; ++i) {
        if (i < n_train) splits[order[i]] = Split::Train;
        else if (i < n_train + n_val) splits[order[i]] = Split::Validation;
    }
    return splits;
}

Dataset build_fulldomain_dataset(const std::vector<ReferenceConfig>& refs, const Grid& grid,
                                 std::uint64_t seed, double epsilon, double train_frac,
                                 double validation_frac) {
    Dataset ds;
    ds.case_kind = CaseKind::FullDomain;
    ds.input_width = grid.node_count();
    ds.label_width = grid.node_count();
    ds.seed = seed;
    ds.epsilon = epsilon;
    ds.length = grid.length;
    ds.n = grid.n;
    ds.m = grid.m;

    std::vector<const ReferenceConfig*> accepted;
    for (const auto& r : refs)
        if (!r.rejected) accepted.push_back(&r);

    auto splits = assign_splits(accepted.size(), train_frac, validation_frac, seed);
    for (std::size_t i = 0; i < accepted.size(); ++i) {
        const ReferenceConfig& r = *accepted[i];
        Sample s;
        s.origin = r.expr;
        s.split = splits[i];
        s.input = normalize(second_derivative(sample_expr(r.expr, grid), grid));
        s.label = r.labels.labels;
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

std::vector<double> extract_window(const std::vector<double>& values, int center, int m) {
    const int last = static_cast<int>(values.size()) - 1;
    std::vector<double> w(4 * m + 1);
    for (int j = -2 * m; j <= 2 * m; ++j) {
        int k = std::clamp(center + j, 0, last);
        w[j + 2 * m] = values[k];
    }
    return w;
}

namespace {

// 128-bit key of the quantized (window, label) pair.
struct DedupKey {
    std::uint64_t a = 0, b = 0;
    bool operator==(const DedupKey&) const = default;
};

struct DedupHash {
    std::size_t operator()(const DedupKey& k) const { return k.a ^ (k.b * 0x9e3779b97f4a7c15ull); }
};

DedupKey window_key(const std::vector<double>& window, std::uint8_t label) {
    std::uint64_t h1 = 0xcbf29ce484222325ull;
    std::uint64_t h2 = 0x6c62272e07bb0142ull;
    char buf[40];
    auto feed = [&](const char* s, int len) {
        for (int i = 0; i < len; ++i) {
            h1 = (h1 ^ static_cast<unsigned char>(s[i])) * 0x100000001b3ull;
            h2 = (h2 ^ static_cast<unsigned char>(s[i])) * 0x100000001b3ull;
            h2 ^= h2 >> 29;
        }
    };
    for (double v : window) {
        // 9 significant decimal digits; normalize the zero sign.
        int len = std::snprintf(buf, sizeof buf, "%.8e,", v == 0.0 ? 0.0 : v);
        feed(buf, len);
    }
    feed(label ? "1" : "0", 1);
    return {h1, h2};
}

}  // namespace

Dataset build_window_dataset(const std::vector<ReferenceConfig>& refs, const Grid& grid,
                             std::uint64_t seed, double epsilon, double train_frac,
                             double validation_frac) {
    Dataset ds;
    ds.case_kind = CaseKind::Window;
    ds.input_width = 4 * grid.m + 1;
    ds.label_width = 1;
    ds.seed = seed;
    ds.epsilon = epsilon;
    ds.length = grid.length;
    ds.n = grid.n;
    ds.m = grid.m;

    std::vector<const ReferenceConfig*> accepted;
    for (const auto& r : refs)
        if (!r.rejected) accepted.push_back(&r);

    // Whole loads are assigned to splits before windowing.
    auto splits = assign_splits(accepted.size(), train_frac, validation_frac, seed);

    std::unordered_set<DedupKey, DedupHash> seen;
    for (Split split : {Split::Train, Split::Validation, Split::Test}) {
        for (std::size_t i = 0; i < accepted.size(); ++i) {
            if (splits[i] != split) continue;
            const ReferenceConfig& r = *accepted[i];
            auto nv = normalize(second_derivative(sample_expr(r.expr, grid), grid));
            for (int center = 0; center <= grid.n; ++center) {
                std::uint8_t label = r.labels.labels[center];
                auto window = extract_window(nv, center, grid.m);
                if (!seen.insert(window_key(window, label)).second) continue;
                Sample s;
                s.origin = r.expr;
                s.center = center;
                s.split = split;
                s.input = std::move(window);
                s.label = {label};
                ds.samples.push_back(std::move(s));
            }
        }
    }
    return ds;
}

std::vector<std::uint8_t> post_process(const std::vector<std::uint8_t>& labels, int m) {
    const int count = static_cast<int>(labels.size());
    const int n = count - 1;
    if (count < 2) return labels;

    struct Run {
        int start, end;  // inclusive node range
    };
    auto extract_runs = [&](const std::vector<std::uint8_t>& ls) {
        std::vector<Run> runs;
        int start = -1;
        for (int k = 1; k < n; ++k) {
            bool nl = ls[k] == kNonlocal;
            if (nl && start < 0) start = k;
            if ((!nl || k == n - 1) && start >= 0) {
                runs.push_back({start, nl ? k : k - 1});
                start = -1;
            }
        }
        return runs;
    };

    auto runs = extract_runs(labels);

    // Rule 1: runs shorter than m nodes become local.
    std::vector<Run> kept;
    for (const Run& r : runs)
        if (r.end - r.start + 1 >= m) kept.push_back(r);

    // Rule 2: widen to the solver's minimum of 2m grid intervals (2m-1 nodes),
    // keeping interfaces at least 3 nodes away from the boundary. The fully
    // nonlocal configuration is left untouched.
    const int min_nodes = 2 * m - 1;
    const int lo = 4, hi = n - 4;
    for (Run& r : kept) {
        if (r.start == 1 && r.end == n - 1) continue;
        int deficit = min_nodes - (r.end - r.start + 1);
        if (deficit > 0) {
            r.start -= (deficit + 1) / 2;
            r.end += deficit / 2;
        }
        r.start = std::clamp(r.start, lo, hi);
        r.end = std::clamp(r.end, lo, hi);
        if (r.end - r.start + 1 < min_nodes) {
            if (r.start == lo) r.end = lo + min_nodes - 1;
            else r.start = hi - min_nodes + 1;
        }
    }

    // Rule 3: merge runs whose interfaces would collide (fewer than one local
    // node between the intervals).
    std::vector<Run> merged;
    for (const Run& r : kept) {
        if (!merged.empty() && r.start - merged.back().end < 4)
            merged.back().end = std::max(merged.back().end, r.end);
        else
            merged.push_back(r);
    }

    std::vector<std::uint8_t> out(count, kLocal);
    for (const Run& r : merged)
        for (int k = r.start; k <= r.end; ++k) out[k] = kNonlocal;
    return out;
}

}  // namespace vhcm
