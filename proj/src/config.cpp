#include "config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace vhcm {

BoundaryConditions ExperimentConfig::bc() const {
    if (bc_right_kind == "dirichlet") return BoundaryConditions::dirichlet(bc_left, bc_right);
    if (bc_right_kind == "neumann") return BoundaryConditions::neumann(bc_left, bc_right);
    throw ConfigError("bc.right_kind must be dirichlet or neumann");
}

CaseKind ExperimentConfig::parsed_case() const {
    if (case_kind == "full_domain") return CaseKind::FullDomain;
    if (case_kind == "window") return CaseKind::Window;
    throw ConfigError("case must be full_domain or window");
}

namespace {

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": " + value);
    }
}

long to_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for " + key + ": " + value);
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad seed value for " + key + ": " + value);
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void ExperimentConfig::set(const std::string& key, const std::string& value) {
    if (key == "grid.length") length = to_double(key, value);
    else if (key == "grid.n") n = static_cast<int>(to_long(key, value));
    else if (key == "grid.m") m = static_cast<int>(to_long(key, value));
    else if (key == "material.e") modulus = to_double(key, value);
    else if (key == "material.a") area = to_double(key, value);
    else if (key == "bc.left") bc_left = to_double(key, value);
    else if (key == "bc.right_kind") bc_right_kind = value;
    else if (key == "bc.right") bc_right = to_double(key, value);
    else if (key == "gate.epsilon") epsilon = to_double(key, value);
    else if (key == "loads.f12_positions") f12_positions = static_cast<int>(to_long(key, value));
    else if (key == "loads.f12_lo") f12_lo = to_double(key, value);
    else if (key == "loads.f12_hi") f12_hi = to_double(key, value);
    else if (key == "loads.f3_count") f3_count = static_cast<int>(to_long(key, value));
    else if (key == "loads.f3_c1_range") f3_c1_range = to_double(key, value);
    else if (key == "loads.f3_c2_range") f3_c2_range = to_double(key, value);
    else if (key == "split.train") split_train = to_double(key, value);
    else if (key == "split.validation") split_validation = to_double(key, value);
    else if (key == "case") case_kind = value;
    else if (key == "seed") seed = to_u64(key, value);
    else if (key == "generation.threads") generation_threads = static_cast<int>(to_long(key, value));
    else if (key == "train.learning_rate") train.learning_rate = to_double(key, value);
    else if (key == "train.batch_size") train.batch_size = static_cast<int>(to_long(key, value));
    else if (key == "train.max_epochs") train.max_epochs = static_cast<int>(to_long(key, value));
    else if (key == "train.patience") train.patience = static_cast<int>(to_long(key, value));
    else if (key == "train.beta1") train.beta1 = to_double(key, value);
    else if (key == "train.beta2") train.beta2 = to_double(key, value);
    else if (key == "train.adam_epsilon") train.adam_epsilon = to_double(key, value);
    else if (key == "train.threads") train.threads = static_cast<int>(to_long(key, value));
    else throw ConfigError("unknown configuration key: " + key);
}

std::string ExperimentConfig::get(const std::string& key) const {
    if (key == "grid.length") return fmt(length);
    if (key == "grid.n") return std::to_string(n);
    if (key == "grid.m") return std::to_string(m);
    if (key == "material.e") return fmt(modulus);
    if (key == "material.a") return fmt(area);
    if (key == "bc.left") return fmt(bc_left);
    if (key == "bc.right_kind") return bc_right_kind;
    if (key == "bc.right") return fmt(bc_right);
    if (key == "gate.epsilon") return fmt(epsilon);
    if (key == "loads.f12_positions") return std::to_string(f12_positions);
    if (key == "loads.f12_lo") return fmt(f12_lo);
    if (key == "loads.f12_hi") return fmt(f12_hi);
    if (key == "loads.f3_count") return std::to_string(f3_count);
    if (key == "loads.f3_c1_range") return fmt(f3_c1_range);
    if (key == "loads.f3_c2_range") return fmt(f3_c2_range);
    if (key == "split.train") return fmt(split_train);
    if (key == "split.validation") return fmt(split_validation);
    if (key == "case") return case_kind;
    if (key == "seed") return std::to_string(seed);
    if (key == "generation.threads") return std::to_string(generation_threads);
    if (key == "train.learning_rate") return fmt(train.learning_rate);
    if (key == "train.batch_size") return std::to_string(train.batch_size);
    if (key == "train.max_epochs") return std::to_string(train.max_epochs);
    if (key == "train.patience") return std::to_string(train.patience);
    if (key == "train.beta1") return fmt(train.beta1);
    if (key == "train.beta2") return fmt(train.beta2);
    if (key == "train.adam_epsilon") return fmt(train.adam_epsilon);
    if (key == "train.threads") return std::to_string(train.threads);
    throw ConfigError("unknown configuration key: " + key);
}

std::string ExperimentConfig::to_text() const {
    static const char* keys[] = {
        "grid.length", "grid.n", "grid.m", "material.e", "material.a",
        "bc.left", "bc.right_kind", "bc.right", "gate.epsilon",
        "loads.f12_positions", "loads.f12_lo", "loads.f12_hi",
        "loads.f3_count", "loads.f3_c1_range", "loads.f3_c2_range",
        "split.train", "split.validation", "case", "seed", "generation.threads",
        "train.learning_rate", "train.batch_size", "train.max_epochs", "train.patience",
        "train.beta1", "train.beta2", "train.adam_epsilon", "train.threads"};
    std::ostringstream os;
    for (const char* k : keys) os << k << " = " << get(k) << "\n";
    return os.str();
}

ExperimentConfig default_config() { return {}; }

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return parse_config(os.str());
}

void save_config(const ExperimentConfig& cfg, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write config file: " + path);
    f << cfg.to_text();
}

}  // namespace vhcm
