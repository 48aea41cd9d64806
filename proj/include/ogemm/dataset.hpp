#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ogemm/matrix.hpp"

namespace ogemm {

struct LabeledDataset {
    Matrix features;  // sample x dim, scaled to [0,1]
    std::vector<int> labels;
    std::vector<std::string> class_names;
    std::string split_tag;  // "train" | "test" | ""

    size_t size() const { return labels.size(); }
    size_t dim() const { return features.cols(); }
    size_t n_classes() const { return class_names.size(); }
    void validate() const;
};

// IDX image/label pair (raw or gzipped, detected by magic bytes). Pixels
// scale by 1/255. Malformed inputs raise errors naming the file.
LabeledDataset load_idx(const std::string& images_path,
                        const std::string& labels_path);

// Materials feature CSV: header row, numeric feature columns, and a
// "label" column with NM / AFM / FM tokens. AFM and FM collapse into one
// magnetic class.
LabeledDataset load_materials_csv(const std::string& path);

// Seeded shuffle split; fractions of the sample count go to test.
std::pair<LabeledDataset, LabeledDataset> split_train_test(
    const LabeledDataset& data, double test_fraction, uint64_t seed);

// Schema-compatible synthetic stand-in for the materials-discovery task:
// one-hot structural features with a learnable magnetic rule.
LabeledDataset synth_materials_fixture(size_t rows, uint64_t seed);
void write_materials_csv(const std::string& path, const LabeledDataset& data);

}  // namespace ogemm
