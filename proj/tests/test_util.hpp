#pragma once

#include "ogemm/device.hpp"
#include "ogemm/emulator.hpp"
#include "ogemm/matrix.hpp"
#include "ogemm/rng.hpp"

namespace ogemm::testutil {

// Synthetic 30-level table with evenly spaced levels over [t_min, t_max].
inline TransmittanceTable linear_table(double t_min, double t_max) {
    TransmittanceTable tt;
    for (int k = 0; k < kLevelCount; ++k)
        tt.levels[k] = t_min + (t_max - t_min) * k / (kLevelCount - 1);
    tt.t_min = t_min;
    tt.t_max = t_max;
    tt.t_diff = t_max - t_min;
    tt.total_thickness_nm = 60.0;
    return tt;
}

inline Matrix random_matrix01(size_t r, size_t c, Rng& rng) {
    Matrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = rng.uniform01();
    return m;
}

inline Matrix random_matrix(size_t r, size_t c, Rng& rng, double lo = -1.0,
                            double hi = 1.0) {
    Matrix m(r, c);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < c; ++j) m(i, j) = rng.uniform(lo, hi);
    return m;
}

// A structurally reasonable all-dielectric device for tests that need a
// real genome.
inline DeviceGenome good_genome() {
    DeviceGenome g;
    g.gst_block_start = 0;
    g.ito_top_nm = 20;
    g.gst_nm = 10;
    g.ito_bottom_nm = 15;
    g.passive = {{{2, 15}, {0, 10}, {2, 15}}};
    return g;
}

}  // namespace ogemm::testutil
