#include "ogemm/emulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ogemm/kernels.hpp"
#include "ogemm/parallel.hpp"
#include "ogemm/rng.hpp"

namespace ogemm {

void EmulatorConfig::validate() const {
    if (array_rows < 1 || array_cols < 1)
        throw std::invalid_argument("emulator: array dimensions must be >= 1");
    if (!(p_total_w > 0.0) || !(bandwidth_hz > 0.0) ||
        !(responsivity_a_per_w > 0.0) || !(electron_charge_c > 0.0))
        throw std::invalid_argument(
            "emulator: physical quantities must be positive");
}

LevelTable LevelTable::quantized(const TransmittanceTable& tt) {
    LevelTable lt;
    lt.levels_.assign(tt.levels.begin(), tt.levels.end());
    std::sort(lt.levels_.begin(), lt.levels_.end());
    lt.midpoints_.resize(lt.levels_.size() - 1);
    for (size_t i = 0; i + 1 < lt.levels_.size(); ++i)
        lt.midpoints_[i] = 0.5 * (lt.levels_[i] + lt.levels_[i + 1]);
    lt.t_min_ = lt.levels_.front();
    lt.t_max_ = lt.levels_.back();
    lt.t_diff_ = lt.t_max_ - lt.t_min_;
    lt.continuous_ = false;
    return lt;
}

LevelTable LevelTable::continuous(double t_min, double t_max) {
    if (!(t_max >= t_min))
        throw std::invalid_argument("level table: t_max below t_min");
    LevelTable lt;
    lt.t_min_ = t_min;
    lt.t_max_ = t_max;
    lt.t_diff_ = t_max - t_min;
    lt.continuous_ = true;
    return lt;
}

LevelTable LevelTable::continuous_from(const TransmittanceTable& tt) {
    return continuous(tt.t_min, tt.t_max);
}

double LevelTable::realize(double w01) const {
    const double target = t_min_ + w01 * t_diff_;
    if (continuous_) return target;
    size_t idx = 0;
    for (double m : midpoints_) idx += (m < target) ? 1 : 0;
    return levels_[idx];
}

void LevelTable::realize_many(std::span<const double> w01,
                              std::span<double> out) const {
    if (continuous_) {
        for (size_t i = 0; i < w01.size(); ++i)
            out[i] = t_min_ + w01[i] * t_diff_;
        return;
    }
    // nearest_level works on targets, so encode first.
    std::vector<double> targets(w01.size());
    for (size_t i = 0; i < w01.size(); ++i)
        targets[i] = t_min_ + w01[i] * t_diff_;
    kernels::active().nearest_level(targets.data(), targets.size(),
                                    levels_.data(), midpoints_.data(),
                                    levels_.size(), out.data());
}

double LevelTable::max_gap() const {
    if (continuous_) return 0.0;
    double gap = 0.0;
    for (size_t i = 0; i + 1 < levels_.size(); ++i)
        gap = std::max(gap, levels_[i + 1] - levels_[i]);
    return gap;
}

namespace {

struct SplitMatrix {
    Matrix plus, minus;
    double scale;
};

SplitMatrix split_signed(const Matrix& x) {
    SplitMatrix s{Matrix(x.rows(), x.cols()), Matrix(x.rows(), x.cols()),
                  std::max(1.0, max_abs(x))};
    const size_t n = x.rows() * x.cols();
    const double inv = 1.0 / s.scale;
    const double* src = x.data();
    double* plus = s.plus.data();
    double* minus = s.minus.data();
    for (size_t i = 0; i < n; ++i) {
        plus[i] = src[i] > 0.0 ? src[i] * inv : 0.0;
        minus[i] = src[i] < 0.0 ? -src[i] * inv : 0.0;
    }
    return s;
}

void check_unit_range(std::span<const double> v, const char* what) {
    for (double x : v)
        if (!(x >= 0.0 && x <= 1.0))
            throw std::invalid_argument(std::string("mvm_optical: ") + what +
                                        " entry outside [0,1]");
}

Matrix realize_matrix(const Matrix& w01, const LevelTable& levels) {
    Matrix t(w01.rows(), w01.cols());
    levels.realize_many({w01.data(), w01.rows() * w01.cols()},
                        {t.data(), t.rows() * t.cols()});
    return t;
}

}  // namespace

EncodedMVM decompose(std::span<const double> v, const Matrix& w) {
    EncodedMVM enc;
    double vmax = 0.0;
    for (double x : v) vmax = std::max(vmax, std::fabs(x));
    enc.scale_v = std::max(1.0, vmax);
    enc.v_plus.resize(v.size());
    enc.v_minus.resize(v.size());
    const double inv = 1.0 / enc.scale_v;
    for (size_t i = 0; i < v.size(); ++i) {
        enc.v_plus[i] = v[i] > 0.0 ? v[i] * inv : 0.0;
        enc.v_minus[i] = v[i] < 0.0 ? -v[i] * inv : 0.0;
    }
    SplitMatrix sw = split_signed(w);
    enc.w_plus = std::move(sw.plus);
    enc.w_minus = std::move(sw.minus);
    enc.scale_w = sw.scale;
    return enc;
}

std::vector<double> mvm_optical(std::span<const double> v01, const Matrix& w01,
                                const LevelTable& levels,
                                const EmulatorConfig& cfg,
                                uint64_t noise_stream) {
    cfg.validate();
    if (v01.size() != static_cast<size_t>(cfg.array_cols))
        throw std::invalid_argument("mvm_optical: vector length != array_cols");
    if (w01.rows() != static_cast<size_t>(cfg.array_rows) ||
        w01.cols() != static_cast<size_t>(cfg.array_cols))
        throw std::invalid_argument("mvm_optical: weight shape != array");
    check_unit_range(v01, "vector");
    check_unit_range({w01.data(), w01.rows() * w01.cols()}, "weight");
    if (levels.degenerate(1e-12))
        throw std::domain_error("mvm_optical: degenerate device (t_diff = 0)");

    const auto& ops = kernels::active();
    const double p_ch = cfg.per_channel_power_w();
    const double resp = cfg.responsivity_a_per_w;
    const double sum_v = ops.sum(v01.data(), v01.size());
    const Matrix realized = realize_matrix(w01, levels);
    const PhiloxKey key = philox_key(cfg.rng_seed);

    std::vector<double> decoded(w01.rows());
    for (size_t i = 0; i < w01.rows(); ++i) {
        const double mean_current =
            resp * p_ch * ops.dot(v01.data(), realized.row(i), v01.size());
        double current = mean_current;
        if (cfg.noise_enabled) {
            const double sigma = std::sqrt(2.0 * cfg.electron_charge_c *
                                           mean_current * cfg.bandwidth_hz);
            current += sigma * gaussian_at(key, noise_stream, i);
        }
        decoded[i] =
            (current / (resp * p_ch) - levels.t_min() * sum_v) / levels.t_diff();
    }
    return decoded;
}

Matrix gemm_optical(const Matrix& a, const Matrix& b, const LevelTable& levels,
                    const EmulatorConfig& cfg, uint64_t noise_stream_base) {
    cfg.validate();
    if (a.cols() != b.rows())
        throw std::invalid_argument("gemm_optical: inner dimensions differ");
    if (levels.degenerate(1e-12))
        throw std::domain_error("gemm_optical: degenerate device (t_diff = 0)");

    const size_t m = a.rows(), k = a.cols(), n = b.cols();
    const SplitMatrix wa = split_signed(a);
    const SplitMatrix vb = split_signed(b);

    // Weight transmittances are programmed once per call and shared by
    // every tile and column.
    const Matrix t_plus = realize_matrix(wa.plus, levels);
    const Matrix t_minus = realize_matrix(wa.minus, levels);

    std::vector<double> colsum_plus(n, 0.0), colsum_minus(n, 0.0);
    for (size_t r = 0; r < k; ++r) {
        const double* rp = vb.plus.row(r);
        const double* rm = vb.minus.row(r);
        for (size_t j = 0; j < n; ++j) {
            colsum_plus[j] += rp[j];
            colsum_minus[j] += rm[j];
        }
    }

    // Deterministic photocurrents of the four sign passes, every tile
    // accumulated. Detector noise enters per output element and pass with
    // the variance summed over that element's k-tiles, which equals the
    // shot-noise variance of the summed photocurrent.
    const Matrix s_pp = multiply_exact(t_plus, vb.plus);
    const Matrix s_mm = multiply_exact(t_minus, vb.minus);
    const Matrix s_mp = multiply_exact(t_minus, vb.plus);
    const Matrix s_pm = multiply_exact(t_plus, vb.minus);

    const double p_ch = cfg.per_channel_power_w();
    const double resp = cfg.responsivity_a_per_w;
    const double noise_scale = cfg.noise_enabled
        ? std::sqrt(2.0 * cfg.electron_charge_c * cfg.bandwidth_hz /
                    (resp * p_ch))
        : 0.0;
    const double t_min = levels.t_min();
    const double inv_t_diff = 1.0 / levels.t_diff();
    const double rescale = wa.scale * vb.scale;
    const PhiloxKey key = philox_key(cfg.rng_seed);

    Matrix out(m, n);
    parallel_for(m, [&](size_t r0, size_t r1) {
        auto decode = [&](const Matrix& s, const std::vector<double>& colsum,
                          int pass, size_t i, size_t j) {
            double normalized = s(i, j);
            if (noise_scale != 0.0) {
                const uint64_t stream = noise_stream_base * 4 + pass;
                normalized += noise_scale * std::sqrt(s(i, j)) *
                              gaussian_at(key, stream, i * n + j);
            }
            return (normalized - t_min * colsum[j]) * inv_t_diff;
        };
        for (size_t i = r0; i < r1; ++i) {
            for (size_t j = 0; j < n; ++j) {
                const double positive = decode(s_pp, colsum_plus, 0, i, j) +
                                        decode(s_mm, colsum_minus, 1, i, j);
                const double negative = decode(s_mp, colsum_plus, 2, i, j) +
                                        decode(s_pm, colsum_minus, 3, i, j);
                out(i, j) = rescale * (positive - negative);
            }
        }
    });
    return out;
}

}  // namespace ogemm
