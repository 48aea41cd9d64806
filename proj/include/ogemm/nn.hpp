#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ogemm/emulator.hpp"
#include "ogemm/matrix.hpp"

namespace ogemm {

enum class Activation { linear, relu, tanh, softmax_output };

std::string_view activation_name(Activation a);
Activation activation_from_name(std::string_view name);

// Strategy for every matrix product in the network. Bias addition and
// nonlinearities stay digital.
class GemmBackend {
  public:
    virtual ~GemmBackend() = default;
    virtual Matrix multiply(const Matrix& a, const Matrix& b) = 0;
    virtual std::string_view name() const = 0;
};

class ExactBackend final : public GemmBackend {
  public:
    Matrix multiply(const Matrix& a, const Matrix& b) override {
        return multiply_exact(a, b);
    }
    std::string_view name() const override { return "exact"; }
};

// Routes products through the optical emulator. Every call consumes a
// fresh noise stream, so a fixed seed gives a reproducible training run.
class OpticalBackend final : public GemmBackend {
  public:
    OpticalBackend(LevelTable levels, EmulatorConfig cfg)
        : levels_(std::move(levels)), cfg_(cfg) {}

    Matrix multiply(const Matrix& a, const Matrix& b) override {
        return gemm_optical(a, b, levels_, cfg_, next_stream_++);
    }
    std::string_view name() const override { return "optical"; }

    void reset_stream(uint64_t value = 0) { next_stream_ = value; }
    const LevelTable& levels() const { return levels_; }
    const EmulatorConfig& config() const { return cfg_; }

  private:
    LevelTable levels_;
    EmulatorConfig cfg_;
    uint64_t next_stream_ = 0;
};

struct DenseLayer {
    Matrix weights;            // in x out
    std::vector<double> bias;  // out
    Activation activation;
};

// Minimal dense network: forward, backprop, Adam; every linear map runs
// on the injected backend. grad_out for a softmax_output layer must be
// the gradient with respect to the logits (the cross-entropy trainer
// supplies probs - onehot).
class DenseNet {
  public:
    DenseNet() = default;
    DenseNet(std::vector<size_t> dims, std::vector<Activation> activations,
             uint64_t seed);

    struct Cache {
        std::vector<Matrix> post;  // post[0] = X, post[i] = layer i output
    };

    struct Gradients {
        std::vector<Matrix> weights;
        std::vector<std::vector<double>> bias;
    };

    Matrix forward(const Matrix& x, GemmBackend& backend,
                   Cache* cache = nullptr) const;
    Gradients backward(const Cache& cache, const Matrix& grad_out,
                       GemmBackend& backend) const;

    const std::vector<size_t>& dims() const { return dims_; }
    std::vector<DenseLayer>& layers() { return layers_; }
    const std::vector<DenseLayer>& layers() const { return layers_; }

    void save(const std::string& path) const;
    static DenseNet load(const std::string& path);

  private:
    std::vector<size_t> dims_;
    std::vector<DenseLayer> layers_;
};

struct AdamState {
    double lr = 0.005;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    uint64_t step = 0;
    std::vector<Matrix> m_w, v_w;
    std::vector<std::vector<double>> m_b, v_b;
};

// Standard Adam update; throws on non-finite gradients with the layer
// index in the message.
void adam_step(DenseNet& net, const DenseNet::Gradients& grads,
               AdamState& state);

// Cross-entropy on the probabilities a softmax_output layer produced.
// Returns mean loss; the logit gradient (probs - onehot)/batch lands in
// *grad_logits, ready for backward().
double softmax_cross_entropy(const Matrix& probs,
                             const std::vector<int>& labels,
                             Matrix* grad_logits);

}  // namespace ogemm
