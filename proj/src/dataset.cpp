#include "ogemm/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ogemm/rng.hpp"

namespace ogemm {

void LabeledDataset::validate() const {
    if (labels.empty() || features.rows() == 0)
        throw std::invalid_argument("dataset: empty split");
    if (labels.size() != features.rows())
        throw std::invalid_argument("dataset: feature/label count mismatch");
    const int classes = static_cast<int>(n_classes());
    for (int label : labels)
        if (label < 0 || label >= classes)
            throw std::invalid_argument("dataset: label outside class range");
    const double* p = features.data();
    for (size_t i = 0; i < features.rows() * features.cols(); ++i)
        if (!(p[i] >= 0.0 && p[i] <= 1.0))
            throw std::invalid_argument("dataset: feature outside [0,1]");
}

namespace {

std::vector<uint8_t> read_file_maybe_gzip(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("dataset: cannot open '" + path + "'");
    std::vector<uint8_t> raw((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
    if (raw.size() >= 2 && raw[0] == 0x1f && raw[1] == 0x8b) {
        // gzip payload; inflate in chunks
        std::vector<uint8_t> out;
        out.reserve(raw.size() * 4);
        z_stream zs{};
        if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
            throw std::runtime_error("dataset: zlib init failed for '" + path +
                                     "'");
        zs.next_in = raw.data();
        zs.avail_in = static_cast<uInt>(raw.size());
        std::vector<uint8_t> chunk(1 << 20);
        int rc = Z_OK;
        while (rc != Z_STREAM_END) {
            zs.next_out = chunk.data();
            zs.avail_out = static_cast<uInt>(chunk.size());
            rc = inflate(&zs, Z_NO_FLUSH);
            if (rc != Z_OK && rc != Z_STREAM_END) {
                inflateEnd(&zs);
                throw std::runtime_error("dataset: corrupt gzip stream in '" +
                                         path + "'");
            }
            out.insert(out.end(), chunk.data(),
                       chunk.data() + (chunk.size() - zs.avail_out));
        }
        inflateEnd(&zs);
        return out;
    }
    return raw;
}

uint32_t read_be32(const std::vector<uint8_t>& buf, size_t off,
                   const std::string& path) {
    if (off + 4 > buf.size())
        throw std::runtime_error("dataset: truncated header in '" + path + "'");
    return (static_cast<uint32_t>(buf[off]) << 24) |
           (static_cast<uint32_t>(buf[off + 1]) << 16) |
           (static_cast<uint32_t>(buf[off + 2]) << 8) |
           static_cast<uint32_t>(buf[off + 3]);
}

}  // namespace

LabeledDataset load_idx(const std::string& images_path,
                        const std::string& labels_path) {
    const std::vector<uint8_t> img = read_file_maybe_gzip(images_path);
    const std::vector<uint8_t> lbl = read_file_maybe_gzip(labels_path);

    if (read_be32(img, 0, images_path) != 0x00000803u)
        throw std::runtime_error("dataset: bad image magic in '" +
                                 images_path + "'");
    if (read_be32(lbl, 0, labels_path) != 0x00000801u)
        throw std::runtime_error("dataset: bad label magic in '" +
                                 labels_path + "'");

    const size_t n_img = read_be32(img, 4, images_path);
    const size_t rows = read_be32(img, 8, images_path);
    const size_t cols = read_be32(img, 12, images_path);
    const size_t n_lbl = read_be32(lbl, 4, labels_path);
    if (n_img != n_lbl)
        throw std::runtime_error("dataset: image count " +
                                 std::to_string(n_img) + " in '" + images_path +
                                 "' does not match label count " +
                                 std::to_string(n_lbl) + " in '" + labels_path +
                                 "'");
    const size_t dim = rows * cols;
    if (img.size() < 16 + n_img * dim)
        throw std::runtime_error("dataset: truncated image payload in '" +
                                 images_path + "'");
    if (lbl.size() < 8 + n_lbl)
        throw std::runtime_error("dataset: truncated label payload in '" +
                                 labels_path + "'");

    LabeledDataset data;
    data.features = Matrix(n_img, dim);
    data.labels.resize(n_img);
    int max_label = 0;
    for (size_t i = 0; i < n_img; ++i) {
        double* row = data.features.row(i);
        const uint8_t* src = img.data() + 16 + i * dim;
        for (size_t j = 0; j < dim; ++j) row[j] = src[j] / 255.0;
        data.labels[i] = lbl[8 + i];
        max_label = std::max(max_label, data.labels[i]);
    }
    for (int c = 0; c <= max_label; ++c)
        data.class_names.push_back(std::to_string(c));
    data.validate();
    return data;
}

LabeledDataset load_materials_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("dataset: cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("dataset: '" + path + "' has no header row");

    auto split_csv = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss(s);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };

    const std::vector<std::string> header = split_csv(line);
    int label_col = -1;
    for (size_t c = 0; c < header.size(); ++c)
        if (header[c] == "label") label_col = static_cast<int>(c);
    if (label_col < 0)
        throw std::runtime_error("dataset: '" + path +
                                 "' header lacks a 'label' column");
    const size_t n_features = header.size() - 1;

    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv(line);
        if (cells.size() != header.size())
            throw std::runtime_error(
                "dataset: " + path + ":" + std::to_string(lineno) + ": row has " +
                std::to_string(cells.size()) + " cells, header has " +
                std::to_string(header.size()));
        std::vector<double> feat;
        feat.reserve(n_features);
        int label = -1;
        for (size_t c = 0; c < cells.size(); ++c) {
            if (static_cast<int>(c) == label_col) {
                if (cells[c] == "NM")
                    label = 0;
                else if (cells[c] == "AFM" || cells[c] == "FM")
                    label = 1;  // grouped magnetic class
                else
                    throw std::runtime_error("dataset: " + path + ":" +
                                             std::to_string(lineno) +
                                             ": unknown label token '" +
                                             cells[c] + "'");
            } else {
                try {
                    feat.push_back(std::stod(cells[c]));
                } catch (const std::exception&) {
                    throw std::runtime_error("dataset: " + path + ":" +
                                             std::to_string(lineno) +
                                             ": non-numeric feature '" +
                                             cells[c] + "'");
                }
            }
        }
        rows.push_back(std::move(feat));
        labels.push_back(label);
    }
    if (rows.empty())
        throw std::runtime_error("dataset: '" + path + "' has no data rows");

    LabeledDataset data;
    data.features = Matrix(rows.size(), n_features);
    for (size_t i = 0; i < rows.size(); ++i)
        std::copy(rows[i].begin(), rows[i].end(), data.features.row(i));
    data.labels = std::move(labels);
    data.class_names = {"NM", "AFM+FM"};
    data.validate();
    return data;
}

std::pair<LabeledDataset, LabeledDataset> split_train_test(
    const LabeledDataset& data, double test_fraction, uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("split: test fraction outside (0,1)");
    const size_t n = data.size();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    for (size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[rng.below(static_cast<uint32_t>(i))]);

    const size_t n_test = std::max<size_t>(1, static_cast<size_t>(n * test_fraction));
    const size_t n_train = n - n_test;
    if (n_train == 0) throw std::invalid_argument("split: empty train side");

    auto take = [&](size_t begin, size_t count, const std::string& tag) {
        LabeledDataset out;
        out.features = Matrix(count, data.dim());
        out.labels.resize(count);
        out.class_names = data.class_names;
        out.split_tag = tag;
        for (size_t i = 0; i < count; ++i) {
            const size_t src = order[begin + i];
            std::copy(data.features.row(src),
                      data.features.row(src) + data.dim(),
                      out.features.row(i));
            out.labels[i] = data.labels[src];
        }
        return out;
    };
    return {take(0, n_train, "train"), take(n_train, n_test, "test")};
}

LabeledDataset synth_materials_fixture(size_t rows, uint64_t seed) {
    // One-hot groups: 8 prototype structures, 6 point groups, 5 species
    // families; magnetic iff (prototype in a magnetic-prone set) xor a
    // minority flip, which a small MLP can learn well but not perfectly.
    constexpr int kProto = 8, kPoint = 6, kSpecies = 5;
    Rng rng(seed);
    LabeledDataset data;
    data.features = Matrix(rows, kProto + kPoint + kSpecies);
    data.labels.resize(rows);
    data.class_names = {"NM", "AFM+FM"};
    for (size_t i = 0; i < rows; ++i) {
        const int proto = static_cast<int>(rng.below(kProto));
        const int point = static_cast<int>(rng.below(kPoint));
        const int species = static_cast<int>(rng.below(kSpecies));
        double* row = data.features.row(i);
        row[proto] = 1.0;
        row[kProto + point] = 1.0;
        row[kProto + kPoint + species] = 1.0;
        const bool prone = (proto == 1 || proto == 4 || proto == 6);
        const bool stabilized = (species == 2 && point < 3);
        bool magnetic = prone && !stabilized;
        if (rng.uniform01() < 0.08) magnetic = !magnetic;  // label noise
        data.labels[i] = magnetic ? 1 : 0;
    }
    data.validate();
    return data;
}

void write_materials_csv(const std::string& path, const LabeledDataset& data) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("dataset: cannot write '" + path + "'");
    for (size_t c = 0; c < data.dim(); ++c) out << "f" << c << ",";
    out << "label\n";
    for (size_t i = 0; i < data.size(); ++i) {
        const double* row = data.features.row(i);
        for (size_t c = 0; c < data.dim(); ++c) out << row[c] << ",";
        out << (data.labels[i] == 0 ? "NM" : (i % 2 ? "FM" : "AFM")) << "\n";
    }
}

}  // namespace ogemm
