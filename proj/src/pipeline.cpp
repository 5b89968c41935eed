#include "pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rng.hpp"
#include "solver.hpp"
#include "svg.hpp"

namespace vhcm {

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

BoundaryConditions bc_from(const std::string& kind, double left, double right) {
    if (kind == "neumann") return BoundaryConditions::neumann(left, right);
    if (kind == "dirichlet") return BoundaryConditions::dirichlet(left, right);
    throw ConfigError("unknown boundary condition kind: " + kind);
}

}  // namespace

std::vector<LoadExpr> build_roster(const ExperimentConfig& cfg) {
    Grid grid = cfg.grid();
    std::vector<LoadExpr> roster;

    if (cfg.f12_positions < 0 || cfg.f3_count < 0) throw ConfigError("load roster counts must be nonnegative");
    const double lo = cfg.f12_lo, hi = cfg.f12_hi;
    if (cfg.f12_positions > 0 && !(lo < hi)) throw ConfigError("loads.f12_lo must be below loads.f12_hi");

    for (auto family : {LoadFamily::F1, LoadFamily::F2}) {
        for (int i = 0; i < cfg.f12_positions; ++i) {
            double x_jump = lo + (i + 0.5) * (hi - lo) / cfg.f12_positions;
            LoadSpec s = family == LoadFamily::F1 ? LoadSpec::f1(x_jump, grid.delta) : LoadSpec::f2(x_jump, grid.delta);
            roster.push_back({s});
        }
    }

    Rng rng = Rng::derive(cfg.seed, "f3-coefficients");
    for (int i = 0; i < cfg.f3_count; ++i) {
        double c1 = rng.uniform(-cfg.f3_c1_range, cfg.f3_c1_range);
        double c2 = rng.uniform(-cfg.f3_c2_range, cfg.f3_c2_range);
        roster.push_back({LoadSpec::f3(c1, c2)});
    }
    return augment(roster);
}

GenerateSummary cmd_generate(const ExperimentConfig& cfg, const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);

    Grid grid = cfg.grid();
    Material material = cfg.material();
    BoundaryConditions bc = cfg.bc();

    auto roster = build_roster(cfg);
    auto refs = build_references(roster, grid, material, bc, cfg.epsilon, cfg.generation_threads);

    Dataset ds = cfg.parsed_case() == CaseKind::FullDomain
                     ? build_fulldomain_dataset(refs, grid, cfg.seed, cfg.epsilon, cfg.split_train, cfg.split_validation)
                     : build_window_dataset(refs, grid, cfg.seed, cfg.epsilon, cfg.split_train, cfg.split_validation);
    ds.modulus = cfg.modulus;
    ds.area = cfg.area;
    ds.bc_left = cfg.bc_left;
    ds.bc_right_kind = cfg.bc_right_kind;
    ds.bc_right = cfg.bc_right;

    GenerateSummary summary;
    summary.dataset_path = join(out_dir, "dataset.csv");
    write_dataset(ds, summary.dataset_path);

    for (const auto& r : refs) (r.rejected ? summary.rejected : summary.accepted)++;
    summary.total_samples = ds.samples.size();
    for (const auto& s : ds.samples) {
        if (s.split == Split::Train) ++summary.train_samples;
        else if (s.split == Split::Validation) ++summary.validation_samples;
        else ++summary.test_samples;
    }
    summary.wall_seconds = seconds_since(t0);

    std::ostringstream os;
    os << "generation report\n";
    os << "case = " << cfg.case_kind << "\n";
    os << "loads = " << roster.size() << " (accepted " << summary.accepted << ", rejected " << summary.rejected
       << ")\n";
    os << "samples = " << summary.total_samples << " (train " << summary.train_samples << ", validation "
       << summary.validation_samples << ", test " << summary.test_samples << ")\n";
    os << "dataset = " << summary.dataset_path << "\n";
    os << "dataset_checksum = " << file_checksum(summary.dataset_path) << "\n";
    os << "wall_seconds = " << summary.wall_seconds << "\n";
    os << "\nper-load references (alpha, achieved error):\n";
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const auto& r = refs[i];
        os << i << ": " << expr_to_string(roster[i]) << " -> ";
        if (r.rejected) os << "rejected: " << r.reject_reason;
        else os << "alpha=" << format_g17(r.alpha) << " error=" << format_g17(r.achieved_error);
        os << "\n";
    }
    write_file(join(out_dir, "generate_report.txt"), os.str());
    return summary;
}

namespace {

MetricsReport evaluate_test_split(const CnnModel& model, const Dataset& ds) {
    auto idx = ds.indices_of(Split::Test);
    if (idx.empty()) throw std::runtime_error("dataset has no test split");
    std::vector<ConfusionMatrix> per_sample;
    if (ds.case_kind == CaseKind::FullDomain) {
        per_sample.reserve(idx.size());
        for (auto i : idx) {
            const Sample& s = ds.samples[i];
            per_sample.push_back(confusion(predict_labels(model, s.input), s.label));
        }
    } else {
        // Node-wise case: one pooled matrix over all windows.
        ConfusionMatrix cm;
        for (auto i : idx) {
            const Sample& s = ds.samples[i];
            cm += confusion(predict_labels(model, s.input), s.label);
        }
        per_sample.push_back(cm);
    }
    return average_metrics(per_sample);
}

}  // namespace

TrainSummary cmd_train(const ExperimentConfig& cfg, const std::string& dataset_path, const std::string& out_dir) {
    auto t0 = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);

    Dataset ds = read_dataset(dataset_path);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;

    CnnModel initial = CnnModel::build(ds.input_width, ds.label_width, Rng::derive(tc.seed, "init"));
    TrainResult result = train(initial, ds, tc);

    TrainSummary summary;
    summary.best_epoch = result.best_epoch;
    summary.epochs_run = static_cast<int>(result.history.size());
    summary.best_validation_loss = result.best_validation_loss;
    summary.test_metrics = evaluate_test_split(result.model, ds);

    ModelMeta meta;
    meta.case_kind = case_name(ds.case_kind);
    meta.length = ds.length;
    meta.n = ds.n;
    meta.m = ds.m;
    meta.modulus = ds.modulus;
    meta.area = ds.area;
    meta.bc_left = ds.bc_left;
    meta.bc_right_kind = ds.bc_right_kind;
    meta.bc_right = ds.bc_right;
    meta.epsilon = ds.epsilon;
    meta.dataset_checksum = file_checksum(dataset_path);
    meta.train = tc;

    summary.model_path = join(out_dir, "model.bin");
    summary.history_path = join(out_dir, "history.csv");
    summary.metrics_path = join(out_dir, "metrics.txt");
    save_model(result.model, meta, summary.model_path);
    write_history(result.history, summary.history_path);

    std::ostringstream os;
    os << format_report(summary.test_metrics);
    os << "best_epoch = " << result.best_epoch << "\n";
    os << "epochs_run = " << summary.epochs_run << "\n";
    os << "best_validation_loss = " << format_g17(result.best_validation_loss) << "\n";
    write_file(summary.metrics_path, os.str());

    summary.wall_seconds = seconds_since(t0);
    return summary;
}

PredictionResult predict_regions(const CnnModel& model, const ModelMeta& meta, const Grid& grid,
                                 const std::vector<double>& load_values) {
    auto nv = normalize(second_derivative(load_values, grid));

    PredictionResult result;
    result.probability.resize(grid.node_count());
    if (meta.case_kind == "full_domain") {
        result.probability = forward(model, nv);
    } else {
        for (int k = 0; k <= grid.n; ++k)
            result.probability[k] = forward(model, extract_window(nv, k, grid.m))[0];
    }
    result.raw_labels.resize(result.probability.size());
    for (std::size_t i = 0; i < result.probability.size(); ++i)
        result.raw_labels[i] = result.probability[i] > 0.5 ? 1 : 0;
    result.labels = post_process(result.raw_labels, grid.m);
    return result;
}

namespace {

std::vector<double> read_load_csv(const std::string& path, int expected_nodes) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open load file: " + path);
    std::vector<double> values;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto comma = line.find_last_of(',');
        std::string cell = comma == std::string::npos ? line : line.substr(comma + 1);
        try {
            values.push_back(std::stod(cell));
        } catch (const std::exception&) {
            if (values.empty()) continue;  // header line
            throw std::runtime_error("load file: bad number: " + cell);
        }
    }
    if (static_cast<int>(values.size()) != expected_nodes)
        throw std::runtime_error("load file has " + std::to_string(values.size()) + " values, expected " +
                                 std::to_string(expected_nodes));
    return values;
}

void write_labels_csv(const std::string& path, const Grid& grid, const PredictionResult& pred) {
    std::vector<double> node(grid.node_count()), x(grid.node_count()), prob = pred.probability,
        raw(grid.node_count()), post(grid.node_count());
    for (int k = 0; k <= grid.n; ++k) {
        node[k] = k;
        x[k] = grid.x(k);
        raw[k] = pred.raw_labels[k];
        post[k] = pred.labels[k];
    }
    write_csv(path, {"node", "x", "probability", "raw_label", "label"}, {node, x, prob, raw, post});
}

}  // namespace

void cmd_predict(const std::string& model_path, const std::string& load_arg, bool load_is_file,
                 const std::string& out_csv) {
    ModelMeta meta;
    CnnModel model = load_model(model_path, &meta);
    Grid grid(meta.length, meta.n, meta.m);

    std::vector<double> values;
    if (load_is_file) {
        values = read_load_csv(load_arg, grid.node_count());
    } else {
        values = sample_expr(parse_load_expr(load_arg), grid).values;
    }
    auto pred = predict_regions(model, meta, grid, values);
    write_labels_csv(out_csv, grid, pred);
}

VerifySummary verify_loads(const CnnModel& model, const ModelMeta& meta, const std::vector<LoadExpr>& loads,
                           const std::string& out_dir) {
    fs::create_directories(out_dir);
    Grid grid(meta.length, meta.n, meta.m);
    Material material = make_material(meta.modulus, meta.area);
    BoundaryConditions bc = bc_from(meta.bc_right_kind, meta.bc_left, meta.bc_right);

    VerifySummary summary;
    summary.epsilon = meta.epsilon;

    std::ostringstream report;
    report << "verification report (epsilon = " << format_g17(meta.epsilon) << ")\n\n";

    std::vector<double> ids, errors, passes;
    for (std::size_t i = 0; i < loads.size(); ++i) {
        LoadVector load = sample_expr(loads[i], grid);
        auto pred = predict_regions(model, meta, grid, load.values);

        RegionLabels regions;
        regions.labels = pred.labels;
        auto intervals = regions.intervals();

        auto u_ref = solve_nonlocal(grid, material, bc, load);
        Solution u_test = intervals.empty() ? solve_local(grid, material, bc, load)
                                            : solve_vhcm(grid, material, regions, bc, load);
        auto err = relative_error(u_ref, u_test);

        VerifyRecord rec;
        rec.spec = expr_to_string(loads[i]);
        rec.rel_error = err.value;
        rec.degenerate = err.degenerate_reference;
        rec.all_local = intervals.empty();
        rec.interval_count = static_cast<int>(intervals.size());
        rec.passed = !err.degenerate_reference && err.value < meta.epsilon;
        summary.records.push_back(rec);

        char name[32];
        std::snprintf(name, sizeof name, "solution_%03zu.csv", i);
        auto pw = pointwise_error(u_ref, u_test);
        std::vector<double> xs = grid.nodes();
        write_csv(join(out_dir, name), {"x", "u_nlm", "u_vhcm", "pointwise_error"},
                  {xs, u_ref.u, u_test.u, pw});
        std::snprintf(name, sizeof name, "labels_%03zu.csv", i);
        write_labels_csv(join(out_dir, name), grid, pred);

        report << i << ": " << rec.spec << "\n";
        report << "   intervals = " << rec.interval_count;
        if (rec.all_local) report << " (fully local; error compares the nonlocal and local solutions)";
        report << "\n   relative_error = " << format_g17(rec.rel_error) << (rec.passed ? "  PASS" : "  FAIL")
               << "\n";

        ids.push_back(static_cast<double>(i));
        errors.push_back(rec.rel_error);
        passes.push_back(rec.passed ? 1.0 : 0.0);
    }

    std::size_t passed = 0;
    for (const auto& r : summary.records) passed += r.passed ? 1 : 0;
    report << "\npassed " << passed << " / " << summary.records.size() << "\n";

    summary.report_path = join(out_dir, "verify_report.txt");
    write_file(summary.report_path, report.str());
    if (!ids.empty())
        write_csv(join(out_dir, "verify_summary.csv"), {"index", "relative_error", "passed"},
                  {ids, errors, passes});
    return summary;
}

VerifySummary cmd_verify(const std::string& model_path, const std::string& specs_path, const std::string& out_dir) {
    ModelMeta meta;
    CnnModel model = load_model(model_path, &meta);

    std::ifstream f(specs_path);
    if (!f) throw std::runtime_error("cannot open specs file: " + specs_path);
    std::vector<LoadExpr> loads;
    std::string line;
    while (std::getline(f, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
        if (!blank) loads.push_back(parse_load_expr(line));
    }
    if (loads.empty()) throw std::runtime_error("specs file contains no loads");
    return verify_loads(model, meta, loads, out_dir);
}

namespace {

std::vector<std::vector<double>> read_csv_columns(const std::string& path, std::vector<std::string>* header) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open csv: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty csv: " + path);
    std::vector<std::string> head;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        head.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (header) *header = head;
    std::vector<std::vector<double>> cols(head.size());
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::size_t cell = 0, pos = 0;
        while (cell < cols.size()) {
            auto comma = line.find(',', pos);
            cols[cell].push_back(std::stod(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos)));
            ++cell;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    return cols;
}

}  // namespace

void cmd_report(const std::string& history_path, const std::string& metrics_path,
                const std::string& verify_dir, const std::string& out_dir) {
    fs::create_directories(out_dir);

    if (!history_path.empty()) {
        auto history = read_history(history_path);
        Series train_s, val_s;
        train_s.name = "training loss";
        train_s.color = "#1f77b4";
        val_s.name = "validation loss";
        val_s.color = "#ff7f0e";
        for (const auto& e : history) {
            train_s.x.push_back(e.epoch);
            train_s.y.push_back(e.train_loss);
            val_s.x.push_back(e.epoch);
            val_s.y.push_back(e.validation_loss);
        }
        write_line_plot(join(out_dir, "loss_curves.svg"), "Loss per epoch", "epoch", "loss",
                        {train_s, val_s});
    }

    if (!metrics_path.empty()) {
        ConfusionMatrix cm;
        std::ifstream f(metrics_path);
        if (!f) throw std::runtime_error("cannot open metrics file: " + metrics_path);
        std::string line;
        while (std::getline(f, line)) {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(0, line.find(' '));
            long value = std::strtol(line.c_str() + eq + 1, nullptr, 10);
            if (key == "confusion.tp") cm.tp = value;
            else if (key == "confusion.fp") cm.fp = value;
            else if (key == "confusion.tn") cm.tn = value;
            else if (key == "confusion.fn") cm.fn = value;
        }
        write_confusion_svg(join(out_dir, "confusion.svg"), "Confusion matrix", cm);
    }

    if (!verify_dir.empty()) {
        for (int i = 0;; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "solution_%03d.csv", i);
            std::string sol_path = join(verify_dir, name);
            if (!fs::exists(sol_path)) break;

            auto cols = read_csv_columns(sol_path, nullptr);
            Series nlm, vhcm_s;
            nlm.x = cols[0];
            nlm.y = cols[1];
            nlm.name = "u_nlm";
            nlm.color = "#111111";
            vhcm_s.x = cols[0];
            vhcm_s.y = cols[2];
            vhcm_s.name = "u_vhcm";
            vhcm_s.color = "#999999";
            vhcm_s.markers = true;
            char out_name[48];
            std::snprintf(out_name, sizeof out_name, "displacement_%03d.svg", i);
            write_line_plot(join(out_dir, out_name), "Displacement fields", "x", "u", {nlm, vhcm_s});

            Series pw;
            pw.x = cols[0];
            pw.y = cols[3];
            pw.name = "pointwise error";
            std::snprintf(out_name, sizeof out_name, "pointwise_error_%03d.svg", i);
            write_line_plot(join(out_dir, out_name), "Pointwise error", "x", "|u_nlm - u_vhcm|", {pw});

            std::snprintf(name, sizeof name, "labels_%03d.csv", i);
            std::string lab_path = join(verify_dir, name);
            if (fs::exists(lab_path)) {
                auto lcols = read_csv_columns(lab_path, nullptr);
                std::vector<std::uint8_t> labels(lcols[4].size());
                for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = lcols[4][k] > 0.5 ? 1 : 0;
                std::snprintf(out_name, sizeof out_name, "labels_%03d.svg", i);
                write_label_map(join(out_dir, out_name), "Predicted regions", lcols[1], labels);
            }
        }
    }
}

}  // namespace vhcm
