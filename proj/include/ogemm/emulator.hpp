#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ogemm/device.hpp"
#include "ogemm/matrix.hpp"

namespace ogemm {

// Physical and sampling parameters of the accelerator.
struct EmulatorConfig {
    int array_rows = 4;
    int array_cols = 4;
    double p_total_w = 0.1;
    double bandwidth_hz = 1e9;
    double responsivity_a_per_w = 1.0;
    double electron_charge_c = 1.602176634e-19;
    bool noise_enabled = true;
    uint64_t rng_seed = 0;

    double per_channel_power_w() const { return p_total_w / array_cols; }
    void validate() const;
};

// Realizable transmittances of the weight encoder: either the device's 30
// discrete levels or the dense continuous limit (test hook).
class LevelTable {
  public:
    static LevelTable quantized(const TransmittanceTable& tt);
    static LevelTable continuous(double t_min, double t_max);
    static LevelTable continuous_from(const TransmittanceTable& tt);

    // Encodes w in [0,1] as the target t_min + w*t_diff and returns the
    // nearest realizable transmittance (exact in continuous mode).
    double realize(double w01) const;
    void realize_many(std::span<const double> w01, std::span<double> out) const;

    double t_min() const { return t_min_; }
    double t_max() const { return t_max_; }
    double t_diff() const { return t_diff_; }
    bool is_continuous() const { return continuous_; }
    bool degenerate(double eps = 1e-6) const { return t_diff_ < eps; }
    // Largest spacing between adjacent levels; 0 in continuous mode.
    // Bounds the per-weight encoding error by max_gap()/2.
    double max_gap() const;

  private:
    std::vector<double> levels_;     // ascending
    std::vector<double> midpoints_;  // adjacent means
    double t_min_ = 0.0, t_max_ = 0.0, t_diff_ = 0.0;
    bool continuous_ = false;
};

// Signed decomposition of one operand: x = scale * (plus - minus) with
// plus, minus in [0,1] and elementwise min(plus, minus) = 0.
struct EncodedMVM {
    std::vector<double> v_plus, v_minus;
    Matrix w_plus, w_minus;
    double scale_v = 1.0;
    double scale_w = 1.0;
};

EncodedMVM decompose(std::span<const double> v, const Matrix& w);

// One physical MVM on the SRA: weight quantization to the level table,
// uniform per-channel fan-out, photodetection with optional shot noise,
// digital decode. v01 length must equal array_cols and w01 must be
// array_rows x array_cols, entries in [0,1].
std::vector<double> mvm_optical(std::span<const double> v01, const Matrix& w01,
                                const LevelTable& levels,
                                const EmulatorConfig& cfg,
                                uint64_t noise_stream = 0);

// GEMM through block multiplications: signed decomposition, tiling into
// array_rows x array_cols blocks with zero padding, four MVM passes (one
// per sign combination), digital recombination of signs and scales.
// Deterministic given (cfg.rng_seed, noise_stream_base).
Matrix gemm_optical(const Matrix& a, const Matrix& b, const LevelTable& levels,
                    const EmulatorConfig& cfg, uint64_t noise_stream_base = 0);

}  // namespace ogemm
