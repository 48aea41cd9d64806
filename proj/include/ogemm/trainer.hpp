#pragma once

#include <optional>

#include "ogemm/dataset.hpp"
#include "ogemm/nn.hpp"

namespace ogemm {

enum class TrainMode { exact, physics_aware, hybrid };

std::string_view train_mode_name(TrainMode m);
TrainMode train_mode_from_name(std::string_view name);

struct TrainOptions {
    TrainMode mode = TrainMode::exact;
    int epochs = 3;           // exact epochs (hybrid: before the swap)
    int finetune_epochs = 1;  // emulator epochs after the swap (hybrid)
    size_t batch_size = 128;
    double lr = 0.005;
    uint64_t seed = 0;
    bool log_progress = false;
};

struct TrainResult {
    std::vector<double> epoch_loss;
    std::vector<double> epoch_test_accuracy;  // empty when no test set
};

// Cross-entropy minibatch training. physics_aware runs every epoch on the
// optical backend; hybrid trains exactly, then swaps the backend in place
// and continues on the emulator.
TrainResult train_classifier(DenseNet& net, const LabeledDataset& train,
                             const LabeledDataset* test,
                             const TrainOptions& options,
                             OpticalBackend* optical);

double evaluate_accuracy(const DenseNet& net, GemmBackend& backend,
                         const LabeledDataset& data, size_t batch_size = 256,
                         Matrix* confusion = nullptr);

void write_confusion_csv(std::ostream& os, const Matrix& confusion,
                         const std::vector<std::string>& class_names);

}  // namespace ogemm
