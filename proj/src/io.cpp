#include "io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vhcm {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

double parse_double(const std::string& s) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw std::runtime_error("dataset: bad number: " + s);
    }
}

}  // namespace

void write_dataset(const Dataset& dataset, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write dataset file: " + path);
    f << "vhcm-dataset,1,case=" << case_name(dataset.case_kind) << ",length=" << format_g17(dataset.length)
      << ",n=" << dataset.n << ",m=" << dataset.m << ",seed=" << dataset.seed
      << ",epsilon=" << format_g17(dataset.epsilon) << ",input_width=" << dataset.input_width
      << ",label_width=" << dataset.label_width << ",e=" << format_g17(dataset.modulus)
      << ",a=" << format_g17(dataset.area) << ",bc_left=" << format_g17(dataset.bc_left)
      << ",bc_right_kind=" << dataset.bc_right_kind << ",bc_right=" << format_g17(dataset.bc_right) << "\n";
    std::string line;
    for (const Sample& s : dataset.samples) {
        line.clear();
        line += split_name(s.split);
        line += ',';
        line += expr_to_string(s.origin);
        line += ',';
        line += std::to_string(s.center);
        for (double v : s.input) {
            line += ',';
            line += format_g17(v);
        }
        for (std::uint8_t l : s.label) {
            line += ',';
            line += l ? '1' : '0';
        }
        f << line << "\n";
    }
    if (!f) throw std::runtime_error("write error on dataset file: " + path);
}

Dataset read_dataset(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("dataset: empty file");

    auto fields = split_csv(line);
    if (fields.size() < 2 || fields[0] != "vhcm-dataset" || fields[1] != "1")
        throw std::runtime_error("dataset: unrecognized header");

    Dataset ds;
    for (std::size_t i = 2; i < fields.size(); ++i) {
        auto eq = fields[i].find('=');
        if (eq == std::string::npos) continue;
        std::string key = fields[i].substr(0, eq);
        std::string val = fields[i].substr(eq + 1);
        if (key == "case") ds.case_kind = case_from_name(val);
        else if (key == "length") ds.length = parse_double(val);
        else if (key == "n") ds.n = std::stoi(val);
        else if (key == "m") ds.m = std::stoi(val);
        else if (key == "seed") ds.seed = std::stoull(val);
        else if (key == "epsilon") ds.epsilon = parse_double(val);
        else if (key == "input_width") ds.input_width = std::stoi(val);
        else if (key == "label_width") ds.label_width = std::stoi(val);
        else if (key == "e") ds.modulus = parse_double(val);
        else if (key == "a") ds.area = parse_double(val);
        else if (key == "bc_left") ds.bc_left = parse_double(val);
        else if (key == "bc_right_kind") ds.bc_right_kind = val;
        else if (key == "bc_right") ds.bc_right = parse_double(val);
    }

    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        std::size_t expected = 3 + static_cast<std::size_t>(ds.input_width) + ds.label_width;
        if (cells.size() != expected)
            throw std::runtime_error("dataset: record with " + std::to_string(cells.size()) +
                                     " fields, expected " + std::to_string(expected));
        Sample s;
        s.split = split_from_name(cells[0]);
        s.origin = parse_load_expr(cells[1]);
        s.center = std::stoi(cells[2]);
        s.input.reserve(ds.input_width);
        for (int i = 0; i < ds.input_width; ++i) s.input.push_back(parse_double(cells[3 + i]));
        s.label.reserve(ds.label_width);
        for (int i = 0; i < ds.label_width; ++i)
            s.label.push_back(cells[3 + ds.input_width + i] == "1" ? 1 : 0);
        ds.samples.push_back(std::move(s));
    }
    return ds;
}

namespace {

void put_u32(std::ostream& f, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    f.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t get_u32(std::istream& f) {
    unsigned char b[4];
    f.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64_array(std::ostream& f, const std::vector<double>& v) {
    for (double x : v) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, 8);
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        f.write(reinterpret_cast<const char*>(b), 8);
    }
}

void get_f64_array(std::istream& f, std::vector<double>& v) {
    for (double& x : v) {
        unsigned char b[8];
        f.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
        std::memcpy(&x, &bits, 8);
    }
}

constexpr char kMagic[7] = {'V', 'H', 'C', 'M', 'N', 'N', '1'};
constexpr std::uint32_t kConvTag = 0;
constexpr std::uint32_t kDenseTag = 2;

}  // namespace

void save_model(const CnnModel& model, const ModelMeta& meta, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write model file: " + path);
    f.write(kMagic, sizeof kMagic);
    put_u32(f, static_cast<std::uint32_t>(model.output_size));
    put_u32(f, static_cast<std::uint32_t>(model.input_length));
    put_u32(f, 5);  // layer count
    for (const ConvLayer* c : {&model.conv1, &model.conv2, &model.conv3}) {
        put_u32(f, kConvTag);
        put_u32(f, static_cast<std::uint32_t>(c->in_channels));
        put_u32(f, static_cast<std::uint32_t>(c->out_channels));
        put_u32(f, 3);
    }
    for (const DenseLayer* d : {&model.dense1, &model.dense2}) {
        put_u32(f, kDenseTag);
        put_u32(f, static_cast<std::uint32_t>(d->in_dim));
        put_u32(f, static_cast<std::uint32_t>(d->out_dim));
        put_u32(f, static_cast<std::uint32_t>(d->activation));
    }
    for (const auto* t : parameter_tensors(model)) put_f64_array(f, *t);
    if (!f) throw std::runtime_error("write error on model file: " + path);
    f.close();

    std::ostringstream os;
    os << "case = " << meta.case_kind << "\n";
    os << "grid.length = " << format_g17(meta.length) << "\n";
    os << "grid.n = " << meta.n << "\n";
    os << "grid.m = " << meta.m << "\n";
    os << "material.e = " << format_g17(meta.modulus) << "\n";
    os << "material.a = " << format_g17(meta.area) << "\n";
    os << "bc.left = " << format_g17(meta.bc_left) << "\n";
    os << "bc.right_kind = " << meta.bc_right_kind << "\n";
    os << "bc.right = " << format_g17(meta.bc_right) << "\n";
    os << "gate.epsilon = " << format_g17(meta.epsilon) << "\n";
    os << "dataset.checksum = " << meta.dataset_checksum << "\n";
    os << "train.learning_rate = " << format_g17(meta.train.learning_rate) << "\n";
    os << "train.batch_size = " << meta.train.batch_size << "\n";
    os << "train.max_epochs = " << meta.train.max_epochs << "\n";
    os << "train.patience = " << meta.train.patience << "\n";
    os << "train.beta1 = " << format_g17(meta.train.beta1) << "\n";
    os << "train.beta2 = " << format_g17(meta.train.beta2) << "\n";
    os << "train.adam_epsilon = " << format_g17(meta.train.adam_epsilon) << "\n";
    os << "train.seed = " << meta.train.seed << "\n";
    os << "train.threads = " << meta.train.threads << "\n";
    write_file(path + ".meta", os.str());
}

CnnModel load_model(const std::string& path, ModelMeta* meta) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open model file: " + path);
    char magic[7];
    f.read(magic, sizeof magic);
    if (!f || std::memcmp(magic, kMagic, sizeof magic) != 0)
        throw std::runtime_error("model: bad magic bytes");

    std::uint32_t output_size = get_u32(f);
    std::uint32_t input_length = get_u32(f);
    std::uint32_t layers = get_u32(f);
    if (layers != 5) throw std::runtime_error("model: unexpected layer count");

    CnnModel model;
    model.input_length = static_cast<int>(input_length);
    model.output_size = static_cast<int>(output_size);
    ConvLayer* convs[3] = {&model.conv1, &model.conv2, &model.conv3};
    for (ConvLayer* c : convs) {
        if (get_u32(f) != kConvTag) throw std::runtime_error("model: expected a convolution header");
        std::uint32_t in = get_u32(f), out = get_u32(f), width = get_u32(f);
        if (width != 3) throw std::runtime_error("model: unsupported kernel width");
        *c = ConvLayer::zeros(static_cast<int>(in), static_cast<int>(out));
    }
    DenseLayer* denses[2] = {&model.dense1, &model.dense2};
    for (DenseLayer* d : denses) {
        if (get_u32(f) != kDenseTag) throw std::runtime_error("model: expected a dense header");
        std::uint32_t in = get_u32(f), out = get_u32(f), act = get_u32(f);
        *d = DenseLayer::zeros(static_cast<int>(in), static_cast<int>(out), static_cast<Activation>(act));
    }
    for (auto* t : parameter_tensors(model)) get_f64_array(f, *t);
    if (!f) throw std::runtime_error("model: truncated file");

    if (meta) {
        *meta = ModelMeta{};
        std::ifstream mf(path + ".meta");
        if (mf) {
            std::string line;
            while (std::getline(mf, line)) {
                auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                auto trim = [](std::string s) {
                    auto b = s.find_first_not_of(" \t");
                    auto e = s.find_last_not_of(" \t\r");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                std::string key = trim(line.substr(0, eq));
                std::string val = trim(line.substr(eq + 1));
                if (key == "case") meta->case_kind = val;
                else if (key == "grid.length") meta->length = std::stod(val);
                else if (key == "grid.n") meta->n = std::stoi(val);
                else if (key == "grid.m") meta->m = std::stoi(val);
                else if (key == "material.e") meta->modulus = std::stod(val);
                else if (key == "material.a") meta->area = std::stod(val);
                else if (key == "bc.left") meta->bc_left = std::stod(val);
                else if (key == "bc.right_kind") meta->bc_right_kind = val;
                else if (key == "bc.right") meta->bc_right = std::stod(val);
                else if (key == "gate.epsilon") meta->epsilon = std::stod(val);
                else if (key == "dataset.checksum") meta->dataset_checksum = std::stoull(val);
                else if (key == "train.learning_rate") meta->train.learning_rate = std::stod(val);
                else if (key == "train.batch_size") meta->train.batch_size = std::stoi(val);
                else if (key == "train.max_epochs") meta->train.max_epochs = std::stoi(val);
                else if (key == "train.patience") meta->train.patience = std::stoi(val);
                else if (key == "train.beta1") meta->train.beta1 = std::stod(val);
                else if (key == "train.beta2") meta->train.beta2 = std::stod(val);
                else if (key == "train.adam_epsilon") meta->train.adam_epsilon = std::stod(val);
                else if (key == "train.seed") meta->train.seed = std::stoull(val);
                else if (key == "train.threads") meta->train.threads = std::stoi(val);
            }
        }
    }
    return model;
}

void write_history(const std::vector<EpochStats>& history, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write history file: " + path);
    f << "epoch,train_loss,validation_loss\n";
    for (const auto& e : history)
        f << e.epoch << "," << format_g17(e.train_loss) << "," << format_g17(e.validation_loss) << "\n";
}

std::vector<EpochStats> read_history(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open history file: " + path);
    std::vector<EpochStats> out;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        if (cells.size() != 3) throw std::runtime_error("history: bad record");
        out.push_back({std::stoi(cells[0]), parse_double(cells[1]), parse_double(cells[2])});
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (columns.empty() || header.size() != columns.size())
        throw std::invalid_argument("write_csv: header/column mismatch");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write csv file: " + path);
    for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << "\n";
    for (std::size_t r = 0; r < columns[0].size(); ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) f << (c ? "," : "") << format_g17(columns[c][r]);
        f << "\n";
    }
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << content;
    if (!f) throw std::runtime_error("write error on file: " + path);
}

std::uint64_t file_checksum(const std::string& path) {
    std::string data = read_file(path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace vhcm
