#include "ogemm/nn.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "ogemm/rng.hpp"

namespace ogemm {

namespace {

constexpr std::array<std::string_view, 4> kActivationNames = {
    "linear", "relu", "tanh", "softmax_output"};

void apply_activation(Matrix& z, Activation a) {
    double* p = z.data();
    const size_t n = z.rows() * z.cols();
    switch (a) {
        case Activation::linear:
            break;
        case Activation::relu:
            for (size_t i = 0; i < n; ++i) p[i] = p[i] > 0.0 ? p[i] : 0.0;
            break;
        case Activation::tanh:
            for (size_t i = 0; i < n; ++i) p[i] = std::tanh(p[i]);
            break;
        case Activation::softmax_output:
            for (size_t r = 0; r < z.rows(); ++r) {
                double* row = z.row(r);
                double max = row[0];
                for (size_t c = 1; c < z.cols(); ++c)
                    max = std::max(max, row[c]);
                double sum = 0.0;
                for (size_t c = 0; c < z.cols(); ++c) {
                    row[c] = std::exp(row[c] - max);
                    sum += row[c];
                }
                for (size_t c = 0; c < z.cols(); ++c) row[c] /= sum;
            }
            break;
    }
}

// dL/dz from dL/da using only the post-activation values.
void apply_activation_grad(Matrix& grad, const Matrix& post, Activation a) {
    double* g = grad.data();
    const double* y = post.data();
    const size_t n = grad.rows() * grad.cols();
    switch (a) {
        case Activation::linear:
        case Activation::softmax_output:  // caller passes logit gradients
            break;
        case Activation::relu:
            for (size_t i = 0; i < n; ++i)
                if (y[i] <= 0.0) g[i] = 0.0;
            break;
        case Activation::tanh:
            for (size_t i = 0; i < n; ++i) g[i] *= 1.0 - y[i] * y[i];
            break;
    }
}

}  // namespace

std::string_view activation_name(Activation a) {
    return kActivationNames[static_cast<int>(a)];
}

Activation activation_from_name(std::string_view name) {
    for (size_t i = 0; i < kActivationNames.size(); ++i)
        if (kActivationNames[i] == name) return static_cast<Activation>(i);
    throw std::invalid_argument("unknown activation '" + std::string(name) +
                                "'");
}

DenseNet::DenseNet(std::vector<size_t> dims,
                   std::vector<Activation> activations, uint64_t seed)
    : dims_(std::move(dims)) {
    if (dims_.size() < 2)
        throw std::invalid_argument("network needs at least two dims");
    if (activations.size() != dims_.size() - 1)
        throw std::invalid_argument("one activation per layer required");
    Rng rng(seed);
    for (size_t l = 0; l + 1 < dims_.size(); ++l) {
        DenseLayer layer;
        layer.activation = activations[l];
        layer.weights = Matrix(dims_[l], dims_[l + 1]);
        layer.bias.assign(dims_[l + 1], 0.0);
        // He for relu, Xavier otherwise
        const double scale = activations[l] == Activation::relu
                                 ? std::sqrt(2.0 / dims_[l])
                                 : std::sqrt(1.0 / dims_[l]);
        for (size_t i = 0; i < dims_[l]; ++i)
            for (size_t j = 0; j < dims_[l + 1]; ++j)
                layer.weights(i, j) = scale * rng.gaussian();
        layers_.push_back(std::move(layer));
    }
}

Matrix DenseNet::forward(const Matrix& x, GemmBackend& backend,
                         Cache* cache) const {
    if (x.cols() != dims_.front())
        throw std::invalid_argument("forward: input width " +
                                    std::to_string(x.cols()) + " != " +
                                    std::to_string(dims_.front()));
    if (cache) {
        cache->post.clear();
        cache->post.push_back(x);
    }
    Matrix a = x;
    for (const DenseLayer& layer : layers_) {
        Matrix z = backend.multiply(a, layer.weights);
        for (size_t r = 0; r < z.rows(); ++r) {
            double* row = z.row(r);
            for (size_t c = 0; c < z.cols(); ++c) row[c] += layer.bias[c];
        }
        apply_activation(z, layer.activation);
        if (cache) cache->post.push_back(z);
        a = std::move(z);
    }
    return a;
}

DenseNet::Gradients DenseNet::backward(const Cache& cache,
                                       const Matrix& grad_out,
                                       GemmBackend& backend) const {
    if (cache.post.size() != layers_.size() + 1)
        throw std::logic_error("backward: stale or missing forward cache");
    Gradients grads;
    grads.weights.resize(layers_.size());
    grads.bias.resize(layers_.size());

    Matrix grad = grad_out;
    for (size_t l = layers_.size(); l-- > 0;) {
        const DenseLayer& layer = layers_[l];
        apply_activation_grad(grad, cache.post[l + 1], layer.activation);

        grads.weights[l] = backend.multiply(transpose(cache.post[l]), grad);
        auto& gb = grads.bias[l];
        gb.assign(layer.bias.size(), 0.0);
        for (size_t r = 0; r < grad.rows(); ++r) {
            const double* row = grad.row(r);
            for (size_t c = 0; c < grad.cols(); ++c) gb[c] += row[c];
        }
        if (l > 0) grad = backend.multiply(grad, transpose(layer.weights));
    }
    return grads;
}

void adam_step(DenseNet& net, const DenseNet::Gradients& grads,
               AdamState& state) {
    auto& layers = net.layers();
    if (grads.weights.size() != layers.size())
        throw std::invalid_argument("adam: gradient/layer count mismatch");
    if (state.m_w.empty()) {
        for (const auto& layer : layers) {
            state.m_w.emplace_back(layer.weights.rows(), layer.weights.cols());
            state.v_w.emplace_back(layer.weights.rows(), layer.weights.cols());
            state.m_b.emplace_back(layer.bias.size(), 0.0);
            state.v_b.emplace_back(layer.bias.size(), 0.0);
        }
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(state.beta1, state.step);
    const double bc2 = 1.0 - std::pow(state.beta2, state.step);

    for (size_t l = 0; l < layers.size(); ++l) {
        if (!all_finite(grads.weights[l]))
            throw std::runtime_error("adam: non-finite gradient in layer " +
                                     std::to_string(l));
        auto update = [&](double* param, const double* g, double* m, double* v,
                          size_t n) {
            for (size_t i = 0; i < n; ++i) {
                m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
                v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
                const double mhat = m[i] / bc1;
                const double vhat = v[i] / bc2;
                param[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
            }
        };
        update(layers[l].weights.data(), grads.weights[l].data(),
               state.m_w[l].data(), state.v_w[l].data(),
               layers[l].weights.rows() * layers[l].weights.cols());
        for (double g : grads.bias[l])
            if (!std::isfinite(g))
                throw std::runtime_error(
                    "adam: non-finite bias gradient in layer " +
                    std::to_string(l));
        update(layers[l].bias.data(), grads.bias[l].data(),
               state.m_b[l].data(), state.v_b[l].data(),
               layers[l].bias.size());
    }
}

double softmax_cross_entropy(const Matrix& probs_in,
                             const std::vector<int>& labels,
                             Matrix* grad_logits) {
    if (labels.size() != probs_in.rows())
        throw std::invalid_argument("cross entropy: label count mismatch");
    const size_t batch = probs_in.rows(), classes = probs_in.cols();
    Matrix probs = probs_in;
    double loss = 0.0;
    for (size_t r = 0; r < batch; ++r)
        loss -= std::log(std::max(probs(r, labels[r]), 1e-300));
    loss /= static_cast<double>(batch);
    if (grad_logits) {
        *grad_logits = std::move(probs);
        for (size_t r = 0; r < batch; ++r) {
            double* row = grad_logits->row(r);
            for (size_t c = 0; c < classes; ++c)
                row[c] /= static_cast<double>(batch);
            row[labels[r]] -= 1.0 / static_cast<double>(batch);
        }
    }
    return loss;
}

namespace {

constexpr char kCheckpointMagic[8] = {'O', 'G', 'N', 'N', '0', '0', '0', '1'};

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
void read_pod(std::ifstream& in, T& value) {
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
}

}  // namespace

void DenseNet::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("checkpoint: cannot write '" + path + "'");
    out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
    write_pod(out, static_cast<uint64_t>(dims_.size()));
    for (size_t d : dims_) write_pod(out, static_cast<uint64_t>(d));
    for (const auto& layer : layers_) {
        write_pod(out, static_cast<uint32_t>(layer.activation));
        out.write(reinterpret_cast<const char*>(layer.weights.data()),
                  sizeof(double) * layer.weights.rows() * layer.weights.cols());
        out.write(reinterpret_cast<const char*>(layer.bias.data()),
                  sizeof(double) * layer.bias.size());
    }
}

DenseNet DenseNet::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCheckpointMagic, 8) != 0)
        throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
    uint64_t ndims = 0;
    read_pod(in, ndims);
    if (ndims < 2 || ndims > 64)
        throw std::runtime_error("checkpoint: implausible dimension count");
    DenseNet net;
    net.dims_.resize(ndims);
    for (auto& d : net.dims_) {
        uint64_t v = 0;
        read_pod(in, v);
        d = static_cast<size_t>(v);
    }
    for (size_t l = 0; l + 1 < ndims; ++l) {
        DenseLayer layer;
        uint32_t act = 0;
        read_pod(in, act);
        if (act > 3) throw std::runtime_error("checkpoint: bad activation tag");
        layer.activation = static_cast<Activation>(act);
        layer.weights = Matrix(net.dims_[l], net.dims_[l + 1]);
        in.read(reinterpret_cast<char*>(layer.weights.data()),
                sizeof(double) * net.dims_[l] * net.dims_[l + 1]);
        layer.bias.resize(net.dims_[l + 1]);
        in.read(reinterpret_cast<char*>(layer.bias.data()),
                sizeof(double) * layer.bias.size());
        if (!in) throw std::runtime_error("checkpoint: truncated file");
        net.layers_.push_back(std::move(layer));
    }
    return net;
}

}  // namespace ogemm
