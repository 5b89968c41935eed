#include "nn.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace vhcm {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double activate(double x, Activation a) {
    switch (a) {
        case Activation::ReLU: return relu(x);
        case Activation::Sigmoid: return sigmoid(x);
        case Activation::None: return x;
    }
    return x;
}

// Derivative with respect to the pre-activation, expressed from `pre`.
double activate_grad(double pre, Activation a) {
    switch (a) {
        case Activation::ReLU: return pre > 0.0 ? 1.0 : 0.0;
        case Activation::Sigmoid: {
            double s = sigmoid(pre);
            return s * (1.0 - s);
        }
        case Activation::None: return 1.0;
    }
    return 1.0;
}

void run_chunked(std::size_t count, int threads, const std::function<void(int, std::size_t, std::size_t)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || count < 2) {
        fn(0, 0, count);
        return;
    }
    std::size_t chunk = (count + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t) {
        std::size_t b = std::min(count, t * chunk);
        std::size_t e = std::min(count, (t + 1) * chunk);
        if (b < e) pool.emplace_back(fn, t, b, e);
    }
    fn(0, 0, std::min(count, chunk));
    for (auto& th : pool) th.join();
}

}  // namespace

ConvLayer ConvLayer::zeros(int in_channels, int out_channels) {
    ConvLayer l;
    l.in_channels = in_channels;
    l.out_channels = out_channels;
    l.kernels.assign(static_cast<std::size_t>(out_channels) * in_channels * 3, 0.0);
    l.biases.assign(out_channels, 0.0);
    return l;
}

DenseLayer DenseLayer::zeros(int in_dim, int out_dim, Activation activation) {
    DenseLayer l;
    l.in_dim = in_dim;
    l.out_dim = out_dim;
    l.activation = activation;
    l.weights.assign(static_cast<std::size_t>(in_dim) * out_dim, 0.0);
    l.bias.assign(out_dim, 0.0);
    return l;
}

Tensor2D conv_forward(const Tensor2D& input, const ConvLayer& layer, Tensor2D* pre) {
    if (input.channels != layer.in_channels) throw std::invalid_argument("conv: channel mismatch");
    if (input.length < 3) throw std::invalid_argument("conv: input shorter than the kernel");

    const int out_len = input.length - 2;
    const int ci = layer.in_channels;
    const int co = layer.out_channels;
    Tensor2D out(out_len, co);
    if (pre) *pre = Tensor2D(out_len, co);

    for (int p = 0; p < out_len; ++p) {
        for (int j = 0; j < co; ++j) {
            double acc = layer.biases[j];
            for (int d = 0; d < 3; ++d) {
                const double* in_row = &input.data[static_cast<std::size_t>(p + d) * ci];
                const double* k_row = &layer.kernels[(static_cast<std::size_t>(j) * 3 + d) * ci];
                for (int i = 0; i < ci; ++i) acc += in_row[i] * k_row[i];
            }
            if (pre) pre->at(p, j) = acc;
            out.at(p, j) = relu(acc);
        }
    }
    return out;
}

Tensor2D conv_backward(const Tensor2D& input, const ConvLayer& layer, const Tensor2D& pre,
                       const Tensor2D& grad_out, ConvLayer& grad_layer) {
    const int ci = layer.in_channels;
    const int co = layer.out_channels;
    const int out_len = grad_out.length;
    Tensor2D grad_in(input.length, ci);

    for (int p = 0; p < out_len; ++p) {
        for (int j = 0; j < co; ++j) {
            double g = grad_out.at(p, j);
            if (g == 0.0 || pre.at(p, j) <= 0.0) continue;  // ReLU gate
            grad_layer.biases[j] += g;
            for (int d = 0; d < 3; ++d) {
                const double* in_row = &input.data[static_cast<std::size_t>(p + d) * ci];
                const double* k_row = &layer.kernels[(static_cast<std::size_t>(j) * 3 + d) * ci];
                double* gk_row = &grad_layer.kernels[(static_cast<std::size_t>(j) * 3 + d) * ci];
                double* gi_row = &grad_in.data[static_cast<std::size_t>(p + d) * ci];
                for (int i = 0; i < ci; ++i) {
                    gk_row[i] += g * in_row[i];
                    gi_row[i] += g * k_row[i];
                }
            }
        }
    }
    return grad_in;
}

Tensor2D maxpool_forward(const Tensor2D& input, std::vector<int>* argmax) {
    const int out_len = input.length / 2;
    if (out_len < 1) throw std::invalid_argument("maxpool: input too short");
    Tensor2D out(out_len, input.channels);
    if (argmax) argmax->assign(static_cast<std::size_t>(out_len) * input.channels, 0);

    for (int q = 0; q < out_len; ++q) {
        for (int c = 0; c < input.channels; ++c) {
            double a = input.at(2 * q, c);
            double b = input.at(2 * q + 1, c);
            int win = (b > a) ? 2 * q + 1 : 2 * q;  // ties keep the earlier index
            out.at(q, c) = input.at(win, c);
            if (argmax) (*argmax)[static_cast<std::size_t>(q) * input.channels + c] = win;
        }
    }
    return out;
}

Tensor2D maxpool_backward(const Tensor2D& grad_out, const std::vector<int>& argmax, int input_length) {
    Tensor2D grad_in(input_length, grad_out.channels);
    for (int q = 0; q < grad_out.length; ++q)
        for (int c = 0; c < grad_out.channels; ++c) {
            int win = argmax[static_cast<std::size_t>(q) * grad_out.channels + c];
            grad_in.at(win, c) += grad_out.at(q, c);
        }
    return grad_in;
}

std::vector<double> dense_forward(const std::vector<double>& input, const DenseLayer& layer,
                                  std::vector<double>* pre) {
    if (static_cast<int>(input.size()) != layer.in_dim) throw std::invalid_argument("dense: input size mismatch");
    std::vector<double> out(layer.out_dim);
    if (pre) pre->resize(layer.out_dim);
    for (int o = 0; o < layer.out_dim; ++o) {
        const double* w = &layer.weights[static_cast<std::size_t>(o) * layer.in_dim];
        double acc = layer.bias[o];
        for (int i = 0; i < layer.in_dim; ++i) acc += w[i] * input[i];
        if (pre) (*pre)[o] = acc;
        out[o] = activate(acc, layer.activation);
    }
    return out;
}

std::vector<double> dense_backward(const std::vector<double>& input, const DenseLayer& layer,
                                   const std::vector<double>& pre, const std::vector<double>& grad_out,
                                   DenseLayer& grad_layer) {
    std::vector<double> grad_in(layer.in_dim, 0.0);
    for (int o = 0; o < layer.out_dim; ++o) {
        double g = grad_out[o] * activate_grad(pre[o], layer.activation);
        if (g == 0.0) continue;
        grad_layer.bias[o] += g;
        const double* w = &layer.weights[static_cast<std::size_t>(o) * layer.in_dim];
        double* gw = &grad_layer.weights[static_cast<std::size_t>(o) * layer.in_dim];
        for (int i = 0; i < layer.in_dim; ++i) {
            gw[i] += g * input[i];
            grad_in[i] += g * w[i];
        }
    }
    return grad_in;
}

CnnModel CnnModel::build(int input_length, int output_size, Rng init) {
    if (input_length < 3) throw std::invalid_argument("model: input too short");
    if (output_size < 1) throw std::invalid_argument("model: output size must be positive");

    auto chain = [](int len, const char* where) {
        if (len < 1) throw std::invalid_argument(std::string("model: shape chain collapses at ") + where);
        return len;
    };
    int l = input_length;
    l = chain(l - 2, "conv1");
    l = chain(l / 2, "pool1");
    l = chain(l - 2, "conv2");
    l = chain(l / 2, "pool2");
    l = chain(l - 2, "conv3");
    l = chain(l / 2, "pool3");

    CnnModel model;
    model.input_length = input_length;
    model.output_size = output_size;
    model.conv1 = ConvLayer::zeros(1, 32);
    model.conv2 = ConvLayer::zeros(32, 64);
    model.conv3 = ConvLayer::zeros(64, 128);
    model.dense1 = DenseLayer::zeros(l * 128, 64, Activation::ReLU);
    model.dense2 = DenseLayer::zeros(64, output_size, Activation::Sigmoid);

    // Uniform init scaled by 1/sqrt(fan_in); biases start at zero.
    auto fill = [&init](std::vector<double>& w, int fan_in) {
        double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& x : w) x = init.uniform(-bound, bound);
    };
    fill(model.conv1.kernels, 1 * 3);
    fill(model.conv2.kernels, 32 * 3);
    fill(model.conv3.kernels, 64 * 3);
    fill(model.dense1.weights, model.dense1.in_dim);
    fill(model.dense2.weights, model.dense2.in_dim);
    return model;
}

std::pair<int, int> CnnModel::preflatten_shape() const {
    int l = input_length;
    l = (l - 2) / 2;
    l = (l - 2) / 2;
    l = (l - 2) / 2;
    return {l, 128};
}

std::size_t CnnModel::parameter_count() const {
    std::size_t total = 0;
    for (const auto* t : parameter_tensors(*this)) total += t->size();
    return total;
}

std::vector<double> forward(const CnnModel& model, const std::vector<double>& input, ForwardCache* cache) {
    if (static_cast<int>(input.size()) != model.input_length)
        throw std::invalid_argument("forward: input length mismatch");

    ForwardCache local;
    ForwardCache& c = cache ? *cache : local;

    c.x0 = Tensor2D(model.input_length, 1);
    c.x0.data = input;

    c.out1 = conv_forward(c.x0, model.conv1, &c.pre1);
    c.pool1 = maxpool_forward(c.out1, &c.arg1);
    c.out2 = conv_forward(c.pool1, model.conv2, &c.pre2);
    c.pool2 = maxpool_forward(c.out2, &c.arg2);
    c.out3 = conv_forward(c.pool2, model.conv3, &c.pre3);
    c.pool3 = maxpool_forward(c.out3, &c.arg3);

    c.flat = c.pool3.data;  // row-major (position, channel) order
    c.dout1 = dense_forward(c.flat, model.dense1, &c.dpre1);
    c.prediction = dense_forward(c.dout1, model.dense2, &c.dpre2);
    return c.prediction;
}

ModelGrads ModelGrads::zeros(const CnnModel& model) {
    ModelGrads g;
    g.conv1 = ConvLayer::zeros(model.conv1.in_channels, model.conv1.out_channels);
    g.conv2 = ConvLayer::zeros(model.conv2.in_channels, model.conv2.out_channels);
    g.conv3 = ConvLayer::zeros(model.conv3.in_channels, model.conv3.out_channels);
    g.dense1 = DenseLayer::zeros(model.dense1.in_dim, model.dense1.out_dim, model.dense1.activation);
    g.dense2 = DenseLayer::zeros(model.dense2.in_dim, model.dense2.out_dim, model.dense2.activation);
    return g;
}

void ModelGrads::accumulate(const ModelGrads& other) {
    auto mine = parameter_tensors(*this);
    auto theirs = parameter_tensors(other);
    for (std::size_t t = 0; t < mine.size(); ++t)
        for (std::size_t i = 0; i < mine[t]->size(); ++i) (*mine[t])[i] += (*theirs[t])[i];
}

void ModelGrads::scale(double s) {
    for (auto* t : parameter_tensors(*this))
        for (double& x : *t) x *= s;
}

void backward_into(const CnnModel& model, const ForwardCache& cache, const std::vector<double>& grad_prediction,
                   ModelGrads& grads) {
    std::vector<double> g_dout1 = dense_backward(cache.dout1, model.dense2, cache.dpre2, grad_prediction, grads.dense2);
    std::vector<double> g_flat = dense_backward(cache.flat, model.dense1, cache.dpre1, g_dout1, grads.dense1);

    Tensor2D g_pool3(cache.pool3.length, cache.pool3.channels);
    g_pool3.data = g_flat;
    Tensor2D g_out3 = maxpool_backward(g_pool3, cache.arg3, cache.out3.length);
    Tensor2D g_pool2 = conv_backward(cache.pool2, model.conv3, cache.pre3, g_out3, grads.conv3);
    Tensor2D g_out2 = maxpool_backward(g_pool2, cache.arg2, cache.out2.length);
    Tensor2D g_pool1 = conv_backward(cache.pool1, model.conv2, cache.pre2, g_out2, grads.conv2);
    Tensor2D g_out1 = maxpool_backward(g_pool1, cache.arg1, cache.out1.length);
    conv_backward(cache.x0, model.conv1, cache.pre1, g_out1, grads.conv1);
}

ModelGrads backward(const CnnModel& model, const ForwardCache& cache, const std::vector<double>& grad_prediction) {
    ModelGrads grads = ModelGrads::zeros(model);
    backward_into(model, cache, grad_prediction, grads);
    return grads;
}

double bce_loss(const std::vector<double>& prediction, const std::vector<std::uint8_t>& target,
                std::vector<double>* grad) {
    if (prediction.size() != target.size()) throw std::invalid_argument("bce: size mismatch");
    constexpr double kLo = 1e-7;
    constexpr double kHi = 1.0 - 1e-7;
    const double inv_n = 1.0 / static_cast<double>(prediction.size());
    if (grad) grad->assign(prediction.size(), 0.0);

    double loss = 0.0;
    for (std::size_t i = 0; i < prediction.size(); ++i) {
        double p = std::clamp(prediction[i], kLo, kHi);
        double t = target[i] ? 1.0 : 0.0;
        loss -= t * std::log(p) + (1.0 - t) * std::log(1.0 - p);
        if (grad && prediction[i] > kLo && prediction[i] < kHi)
            (*grad)[i] = -inv_n * (t / p - (1.0 - t) / (1.0 - p));
    }
    return loss * inv_n;
}

AdamOptimizer::AdamOptimizer(CnnModel& model, const TrainConfig& config)
    : lr_(config.learning_rate), b1_(config.beta1), b2_(config.beta2), eps_(config.adam_epsilon) {
    for (const auto* t : parameter_tensors(model)) {
        m_.emplace_back(t->size(), 0.0);
        v_.emplace_back(t->size(), 0.0);
    }
}

void AdamOptimizer::step(CnnModel& model, const ModelGrads& grads) {
    ++t_;
    const double bc1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
    auto params = parameter_tensors(model);
    auto gs = parameter_tensors(grads);
    for (std::size_t t = 0; t < params.size(); ++t) {
        auto& p = *params[t];
        const auto& g = *gs[t];
        auto& m = m_[t];
        auto& v = v_[t];
        for (std::size_t i = 0; i < p.size(); ++i) {
            m[i] = b1_ * m[i] + (1.0 - b1_) * g[i];
            v[i] = b2_ * v[i] + (1.0 - b2_) * g[i] * g[i];
            double mhat = m[i] / bc1;
            double vhat = v[i] / bc2;
            p[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

namespace {

double dataset_loss(const CnnModel& model, const Dataset& dataset, const std::vector<std::size_t>& idx,
                    int threads) {
    std::vector<double> partial(std::max(1, threads), 0.0);
    run_chunked(idx.size(), threads, [&](int t, std::size_t b, std::size_t e) {
        double acc = 0.0;
        for (std::size_t i = b; i < e; ++i) {
            const Sample& s = dataset.samples[idx[i]];
            auto pred = forward(model, s.input);
            acc += bce_loss(pred, s.label);
        }
        partial[t] = acc;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total / static_cast<double>(idx.size());
}

}  // namespace

TrainResult train(const CnnModel& initial, const Dataset& dataset, const TrainConfig& config) {
    auto train_idx = dataset.indices_of(Split::Train);
    auto val_idx = dataset.indices_of(Split::Validation);
    if (train_idx.empty() || val_idx.empty())
        throw std::invalid_argument("train: empty training or validation split");

    CnnModel model = initial;
    AdamOptimizer opt(model, config);
    const int threads = std::max(1, config.threads);
    const int batch_size = std::max(1, config.batch_size);

    TrainResult result;
    result.model = model;
    result.best_validation_loss = std::numeric_limits<double>::infinity();
    int since_best = 0;

    Rng shuffle_base = Rng::derive(config.seed, "shuffle");

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        auto order = train_idx;
        Rng rng = shuffle_base.derive(static_cast<std::uint64_t>(epoch));
        rng.shuffle(order);

        double loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch_size) {
            std::size_t stop = std::min(order.size(), start + batch_size);
            std::vector<ModelGrads> part_grads;
            std::vector<double> part_loss(threads, 0.0);
            part_grads.reserve(threads);
            for (int t = 0; t < threads; ++t) part_grads.push_back(ModelGrads::zeros(model));

            run_chunked(stop - start, threads, [&](int t, std::size_t b, std::size_t e) {
                std::vector<double> grad;
                ForwardCache cache;
                for (std::size_t i = b; i < e; ++i) {
                    const Sample& s = dataset.samples[order[start + i]];
                    auto pred = forward(model, s.input, &cache);
                    part_loss[t] += bce_loss(pred, s.label, &grad);
                    backward_into(model, cache, grad, part_grads[t]);
                }
            });
            for (int t = 1; t < threads; ++t) part_grads[0].accumulate(part_grads[t]);
            for (int t = 0; t < threads; ++t) loss_sum += part_loss[t];
            part_grads[0].scale(1.0 / static_cast<double>(stop - start));
            opt.step(model, part_grads[0]);
        }

        EpochStats stats;
        stats.epoch = epoch;
        stats.train_loss = loss_sum / static_cast<double>(order.size());
        stats.validation_loss = dataset_loss(model, dataset, val_idx, threads);
        result.history.push_back(stats);

        if (stats.validation_loss < result.best_validation_loss) {
            result.best_validation_loss = stats.validation_loss;
            result.best_epoch = epoch;
            result.model = model;
            since_best = 0;
        } else {
            ++since_best;
            if (since_best > config.patience) break;
        }
    }
    return result;
}

std::vector<std::uint8_t> predict_labels(const CnnModel& model, const std::vector<double>& input) {
    auto pred = forward(model, input);
    std::vector<std::uint8_t> labels(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) labels[i] = pred[i] > 0.5 ? 1 : 0;
    return labels;
}

std::vector<std::vector<double>*> parameter_tensors(CnnModel& model) {
    return {&model.conv1.kernels, &model.conv1.biases, &model.conv2.kernels, &model.conv2.biases,
            &model.conv3.kernels, &model.conv3.biases, &model.dense1.weights, &model.dense1.bias,
            &model.dense2.weights, &model.dense2.bias};
}

std::vector<const std::vector<double>*> parameter_tensors(const CnnModel& model) {
    return {&model.conv1.kernels, &model.conv1.biases, &model.conv2.kernels, &model.conv2.biases,
            &model.conv3.kernels, &model.conv3.biases, &model.dense1.weights, &model.dense1.bias,
            &model.dense2.weights, &model.dense2.bias};
}

std::vector<std::vector<double>*> parameter_tensors(ModelGrads& grads) {
    return {&grads.conv1.kernels, &grads.conv1.biases, &grads.conv2.kernels, &grads.conv2.biases,
            &grads.conv3.kernels, &grads.conv3.biases, &grads.dense1.weights, &grads.dense1.bias,
            &grads.dense2.weights, &grads.dense2.bias};
}

std::vector<const std::vector<double>*> parameter_tensors(const ModelGrads& grads) {
    return {&grads.conv1.kernels, &grads.conv1.biases, &grads.conv2.kernels, &grads.conv2.biases,
            &grads.conv3.kernels, &grads.conv3.biases, &grads.dense1.weights, &grads.dense1.bias,
            &grads.dense2.weights, &grads.dense2.bias};
}

}  // namespace vhcm
