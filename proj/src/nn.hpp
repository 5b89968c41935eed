// Dependency-free 1D convolutional network: forward/backward passes for
// convolution, max pooling and dense layers, binary cross entropy, Adam and
// the early-stopping training loop.
#pragma once

#include <cstdint>
#include <vector>

#include "labeling.hpp"
#include "rng.hpp"

namespace vhcm {

/// Length x channels feature map, row-major in position.
struct Tensor2D {
    int length = 0;
    int channels = 0;
    std::vector<double> data;

    Tensor2D() = default;
    Tensor2D(int length_, int channels_) : length(length_), channels(channels_), data(static_cast<std::size_t>(length_) * channels_, 0.0) {}

    double& at(int p, int c) { return data[static_cast<std::size_t>(p) * channels + c]; }
    double at(int p, int c) const { return data[static_cast<std::size_t>(p) * channels + c]; }
};

enum class Activation : std::uint8_t { ReLU = 0, Sigmoid = 1, None = 2 };

/// Width-3 kernels, one bias per output channel.
struct ConvLayer {
    int in_channels = 0;
    int out_channels = 0;
    std::vector<double> kernels;  // [out][in][3]
    std::vector<double> biases;   // [out]

    static ConvLayer zeros(int in_channels, int out_channels);
    double& kernel(int out, int in, int d) { return kernels[(static_cast<std::size_t>(out) * in_channels + in) * 3 + d]; }
    double kernel(int out, int in, int d) const { return kernels[(static_cast<std::size_t>(out) * in_channels + in) * 3 + d]; }
};

struct DenseLayer {
    int in_dim = 0;
    int out_dim = 0;
    Activation activation = Activation::None;
    std::vector<double> weights;  // [out][in]
    std::vector<double> bias;     // [out]

    static DenseLayer zeros(int in_dim, int out_dim, Activation activation);
};

/// Valid (no padding) correlation with ReLU; output length = input length - 2.
/// `pre` receives the pre-activation values needed by the backward pass.
Tensor2D conv_forward(const Tensor2D& input, const ConvLayer& layer, Tensor2D* pre = nullptr);

/// Gradients of the convolution given d(loss)/d(output); `grad_layer` must be
/// zero-initialized with the layer's shape, gradients are accumulated into it.
Tensor2D conv_backward(const Tensor2D& input, const ConvLayer& layer, const Tensor2D& pre,
                       const Tensor2D& grad_out, ConvLayer& grad_layer);

/// Non-overlapping windows of two, stride two, odd trailing element dropped.
/// Ties resolve to the earlier index; `argmax` records the winning positions.
Tensor2D maxpool_forward(const Tensor2D& input, std::vector<int>* argmax = nullptr);

Tensor2D maxpool_backward(const Tensor2D& grad_out, const std::vector<int>& argmax, int input_length);

std::vector<double> dense_forward(const std::vector<double>& input, const DenseLayer& layer,
                                  std::vector<double>* pre = nullptr);

std::vector<double> dense_backward(const std::vector<double>& input, const DenseLayer& layer,
                                   const std::vector<double>& pre, const std::vector<double>& grad_out,
                                   DenseLayer& grad_layer);

/// conv(32) -> pool -> conv(64) -> pool -> conv(128) -> pool -> flatten ->
/// dense(64, ReLU) -> dense(output_size, sigmoid). The shape chain is checked
/// at build time; building fails when a layer would run out of positions.
struct CnnModel {
    int input_length = 0;
    int output_size = 0;
    ConvLayer conv1, conv2, conv3;
    DenseLayer dense1, dense2;

    static CnnModel build(int input_length, int output_size, Rng init);

    /// (length, channels) of the tensor entering the flatten step.
    std::pair<int, int> preflatten_shape() const;
    std::size_t parameter_count() const;
};

struct ForwardCache {
    Tensor2D x0;
    Tensor2D pre1, out1, pool1;
    Tensor2D pre2, out2, pool2;
    Tensor2D pre3, out3, pool3;
    std::vector<int> arg1, arg2, arg3;
    std::vector<double> flat;
    std::vector<double> dpre1, dout1;
    std::vector<double> dpre2, prediction;
};

std::vector<double> forward(const CnnModel& model, const std::vector<double>& input,
                            ForwardCache* cache = nullptr);

struct ModelGrads {
    ConvLayer conv1, conv2, conv3;
    DenseLayer dense1, dense2;

    static ModelGrads zeros(const CnnModel& model);
    void accumulate(const ModelGrads& other);
    void scale(double s);
};

ModelGrads backward(const CnnModel& model, const ForwardCache& cache, const std::vector<double>& grad_prediction);

/// Same, accumulating into an existing gradient buffer.
void backward_into(const CnnModel& model, const ForwardCache& cache, const std::vector<double>& grad_prediction,
                   ModelGrads& grads);

/// Mean binary cross entropy with probabilities clamped to [1e-7, 1 - 1e-7];
/// `grad` (if given) receives d(loss)/d(prediction).
double bce_loss(const std::vector<double>& prediction, const std::vector<std::uint8_t>& target,
                std::vector<double>* grad = nullptr);

struct TrainConfig {
    double learning_rate = 0.001;
    int batch_size = 32;
    int max_epochs = 200;
    int patience = 10;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 42;
    int threads = 2;
};

struct EpochStats {
    int epoch = 0;
    double train_loss = 0.0;
    double validation_loss = 0.0;
};

struct TrainResult {
    CnnModel model;  // parameters of the best validation epoch
    std::vector<EpochStats> history;
    int best_epoch = 0;
    double best_validation_loss = 0.0;
};

/// Adam state per parameter tensor.
class AdamOptimizer {
  public:
    AdamOptimizer(CnnModel& model, const TrainConfig& config);
    void step(CnnModel& model, const ModelGrads& grads);

  private:
    double lr_, b1_, b2_, eps_;
    long t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

/// Seeded mini-batch training with early stopping on the validation loss;
/// returns the weights of the best validation epoch. Gradients inside a batch
/// are reduced in a fixed order, so runs with the same seed and thread count
/// are bit-identical.
TrainResult train(const CnnModel& initial, const Dataset& dataset, const TrainConfig& config);

std::vector<std::uint8_t> predict_labels(const CnnModel& model, const std::vector<double>& input);

/// Access to the parameter tensors in declaration order (serialization and
/// the optimizer share this layout).
std::vector<std::vector<double>*> parameter_tensors(CnnModel& model);
std::vector<const std::vector<double>*> parameter_tensors(const CnnModel& model);
std::vector<std::vector<double>*> parameter_tensors(ModelGrads& grads);
std::vector<const std::vector<double>*> parameter_tensors(const ModelGrads& grads);

}  // namespace vhcm
