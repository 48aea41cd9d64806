#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ogemm/device.hpp"
#include "ogemm/emulator.hpp"

namespace ogemm {

// Reward of devices whose decode is undefined (t_diff below 1e-6);
// optimizers receive this finite penalty instead of an exception.
inline constexpr double kRewardFloor = -10.0;
inline constexpr double kDegenerateTdiff = 1e-6;
inline constexpr int kHistogramBins = 50;

struct HistogramBin {
    double center;
    uint64_t count;
};

// Error statistics of the benchmark GEMM stream: reward = 1 - 10*std.
struct RewardReport {
    size_t n_pairs = 0;
    std::vector<double> errors;
    double std_error = 0.0;
    double reward = 0.0;
    std::vector<HistogramBin> histogram;
    bool degenerate = false;
};

// Statistics/reward from a raw error sample (also the injection hook for
// tests that bypass the optics).
RewardReport report_from_errors(std::vector<double> errors);

// n_pairs random mat_dim x mat_dim pairs with elements in [-1,1]; the
// error of output element (0,0) against the exact product feeds the
// reward. Pair p draws from stream p of cfg.rng_seed, so results are
// identical for any thread count.
RewardReport evaluate_reward(const LevelTable& levels,
                             const EmulatorConfig& cfg,
                             size_t n_pairs = 10000, int mat_dim = 4);

RewardReport evaluate_reward(const DeviceGenome& genome,
                             const MaterialsTable& materials,
                             const EmulatorConfig& cfg,
                             size_t n_pairs = 10000, int mat_dim = 4);

void print_report(std::ostream& os, const RewardReport& report);
void write_histogram_csv(std::ostream& os, const RewardReport& report);

}  // namespace ogemm
