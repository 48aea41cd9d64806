#include "ogemm/trainer.hpp"

#include <algorithm>
#include <iostream>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "ogemm/rng.hpp"

namespace ogemm {

std::string_view train_mode_name(TrainMode m) {
    switch (m) {
        case TrainMode::exact: return "exact";
        case TrainMode::physics_aware: return "physics-aware";
        case TrainMode::hybrid: return "hybrid";
    }
    return "?";
}

TrainMode train_mode_from_name(std::string_view name) {
    if (name == "exact") return TrainMode::exact;
    if (name == "physics-aware" || name == "physics_aware")
        return TrainMode::physics_aware;
    if (name == "hybrid") return TrainMode::hybrid;
    throw std::invalid_argument("unknown training mode '" + std::string(name) +
                                "'");
}

namespace {

Matrix gather_rows(const Matrix& src, const std::vector<size_t>& order,
                   size_t begin, size_t end) {
    Matrix out(end - begin, src.cols());
    for (size_t i = begin; i < end; ++i)
        std::copy(src.row(order[i]), src.row(order[i]) + src.cols(),
                  out.row(i - begin));
    return out;
}

double run_epoch(DenseNet& net, const LabeledDataset& train,
                 GemmBackend& backend, AdamState& adam, size_t batch_size,
                 Rng& shuffle_rng) {
    const size_t n = train.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (size_t i = n; i > 1; --i)
        std::swap(order[i - 1],
                  order[shuffle_rng.below(static_cast<uint32_t>(i))]);

    double loss_sum = 0.0;
    size_t batches = 0;
    for (size_t begin = 0; begin < n; begin += batch_size) {
        const size_t end = std::min(n, begin + batch_size);
        const Matrix x = gather_rows(train.features, order, begin, end);
        std::vector<int> labels(end - begin);
        for (size_t i = begin; i < end; ++i)
            labels[i - begin] = train.labels[order[i]];

        DenseNet::Cache cache;
        const Matrix logits = net.forward(x, backend, &cache);
        Matrix grad;
        loss_sum += softmax_cross_entropy(logits, labels, &grad);
        ++batches;
        const DenseNet::Gradients grads = net.backward(cache, grad, backend);
        adam_step(net, grads, adam);
    }
    return loss_sum / static_cast<double>(batches);
}

}  // namespace

TrainResult train_classifier(DenseNet& net, const LabeledDataset& train,
                             const LabeledDataset* test,
                             const TrainOptions& options,
                             OpticalBackend* optical) {
    if (train.size() == 0)
        throw std::invalid_argument("train_classifier: empty dataset");
    if (net.layers().back().activation != Activation::softmax_output)
        throw std::invalid_argument(
            "train_classifier: network must end in softmax_output");
    const bool needs_optical = options.mode != TrainMode::exact;
    if (needs_optical && !optical)
        throw std::invalid_argument(
            "train_classifier: physics-aware modes need an optical backend");

    ExactBackend exact;
    AdamState adam;
    adam.lr = options.lr;
    Rng shuffle_rng(options.seed, /*stream=*/1);

    struct Phase {
        GemmBackend* backend;
        int epochs;
    };
    std::vector<Phase> phases;
    switch (options.mode) {
        case TrainMode::exact:
            phases.push_back({&exact, options.epochs});
            break;
        case TrainMode::physics_aware:
            phases.push_back({optical, options.epochs});
            break;
        case TrainMode::hybrid:
            phases.push_back({&exact, options.epochs});
            phases.push_back({optical, options.finetune_epochs});
            break;
    }

    TrainResult result;
    for (const Phase& phase : phases) {
        for (int e = 0; e < phase.epochs; ++e) {
            const double loss = run_epoch(net, train, *phase.backend, adam,
                                          options.batch_size, shuffle_rng);
            result.epoch_loss.push_back(loss);
            if (test) {
                const double acc =
                    evaluate_accuracy(net, *phase.backend, *test);
                result.epoch_test_accuracy.push_back(acc);
                if (options.log_progress)
                    std::cerr << "epoch " << result.epoch_loss.size() << " ["
                              << phase.backend->name() << "] loss " << loss
                              << " test_acc " << acc << "\n";
            } else if (options.log_progress) {
                std::cerr << "epoch " << result.epoch_loss.size() << " ["
                          << phase.backend->name() << "] loss " << loss
                          << "\n";
            }
        }
    }
    return result;
}

double evaluate_accuracy(const DenseNet& net, GemmBackend& backend,
                         const LabeledDataset& data, size_t batch_size,
                         Matrix* confusion) {
    const size_t classes = net.dims().back();
    if (confusion) *confusion = Matrix(classes, classes);
    size_t correct = 0;
    for (size_t begin = 0; begin < data.size(); begin += batch_size) {
        const size_t end = std::min(data.size(), begin + batch_size);
        Matrix x(end - begin, data.dim());
        for (size_t i = begin; i < end; ++i)
            std::copy(data.features.row(i), data.features.row(i) + data.dim(),
                      x.row(i - begin));
        const Matrix out = net.forward(x, backend);
        for (size_t i = 0; i < out.rows(); ++i) {
            const double* row = out.row(i);
            size_t best = 0;
            for (size_t c = 1; c < classes; ++c)
                if (row[c] > row[best]) best = c;
            const int want = data.labels[begin + i];
            if (static_cast<int>(best) == want) ++correct;
            if (confusion) (*confusion)(want, best) += 1.0;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

void write_confusion_csv(std::ostream& os, const Matrix& confusion,
                         const std::vector<std::string>& class_names) {
    os << "true\\pred";
    for (const auto& name : class_names) os << "," << name;
    os << "\n";
    for (size_t r = 0; r < confusion.rows(); ++r) {
        os << class_names[r];
        for (size_t c = 0; c < confusion.cols(); ++c)
            os << "," << static_cast<uint64_t>(confusion(r, c));
        os << "\n";
    }
}

}  // namespace ogemm
