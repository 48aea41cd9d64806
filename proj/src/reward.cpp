#include "ogemm/reward.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ogemm/matrix.hpp"
#include "ogemm/parallel.hpp"
#include "ogemm/rng.hpp"

namespace ogemm {

RewardReport report_from_errors(std::vector<double> errors) {
    RewardReport report;
    report.n_pairs = errors.size();
    report.errors = std::move(errors);
    if (report.errors.empty()) {
        report.std_error = 0.0;
        report.reward = 1.0;
        return report;
    }
    double mean = 0.0;
    for (double e : report.errors) mean += e;
    mean /= static_cast<double>(report.errors.size());
    double var = 0.0;
    for (double e : report.errors) var += (e - mean) * (e - mean);
    var /= static_cast<double>(report.errors.size());
    report.std_error = std::sqrt(var);
    report.reward = 1.0 - 10.0 * report.std_error;

    const auto [lo_it, hi_it] =
        std::minmax_element(report.errors.begin(), report.errors.end());
    const double lo = *lo_it, hi = *hi_it;
    const double width =
        (hi > lo) ? (hi - lo) / kHistogramBins
                  : 1.0;  // all-equal sample collapses into bin 0
    report.histogram.resize(kHistogramBins);
    for (int b = 0; b < kHistogramBins; ++b)
        report.histogram[b] = {lo + (b + 0.5) * width, 0};
    for (double e : report.errors) {
        int b = static_cast<int>((e - lo) / width);
        b = std::clamp(b, 0, kHistogramBins - 1);
        ++report.histogram[b].count;
    }
    return report;
}

RewardReport evaluate_reward(const LevelTable& levels,
                             const EmulatorConfig& cfg, size_t n_pairs,
                             int mat_dim) {
    if (levels.degenerate(kDegenerateTdiff)) {
        RewardReport report;
        report.n_pairs = n_pairs;
        report.std_error = std::numeric_limits<double>::infinity();
        report.reward = kRewardFloor;
        report.degenerate = true;
        return report;
    }
    std::vector<double> errors(n_pairs);
    const size_t dim = static_cast<size_t>(mat_dim);
    parallel_for(n_pairs, [&](size_t p0, size_t p1) {
        for (size_t p = p0; p < p1; ++p) {
            Rng rng(cfg.rng_seed, p);
            Matrix a(dim, dim), b(dim, dim);
            for (size_t r = 0; r < dim; ++r)
                for (size_t c = 0; c < dim; ++c) a(r, c) = rng.uniform(-1.0, 1.0);
            for (size_t r = 0; r < dim; ++r)
                for (size_t c = 0; c < dim; ++c) b(r, c) = rng.uniform(-1.0, 1.0);
            const Matrix approx = gemm_optical(a, b, levels, cfg, p);
            const Matrix exact = multiply_exact(a, b);
            errors[p] = approx(0, 0) - exact(0, 0);
        }
    });
    return report_from_errors(std::move(errors));
}

RewardReport evaluate_reward(const DeviceGenome& genome,
                             const MaterialsTable& materials,
                             const EmulatorConfig& cfg, size_t n_pairs,
                             int mat_dim) {
    const TransmittanceTable tt = transmittance_table(genome, materials);
    return evaluate_reward(LevelTable::quantized(tt), cfg, n_pairs, mat_dim);
}

void print_report(std::ostream& os, const RewardReport& report) {
    os.precision(std::numeric_limits<double>::max_digits10);
    os << "n_pairs " << report.n_pairs << "\n";
    os << "std_error " << report.std_error << "\n";
    os << "reward " << report.reward << "\n";
    if (report.degenerate) os << "degenerate true\n";
}

void write_histogram_csv(std::ostream& os, const RewardReport& report) {
    os << "bin_center,count\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& bin : report.histogram)
        os << bin.center << "," << bin.count << "\n";
}

}  // namespace ogemm
