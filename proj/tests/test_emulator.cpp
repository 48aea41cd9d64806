#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "ogemm/emulator.hpp"
#include "ogemm/matrix.hpp"
#include "ogemm/rng.hpp"
#include "test_util.hpp"

using namespace ogemm;
using namespace ogemm::testutil;

TEST_CASE("decompose splits signs and scales by the max") {
    SUBCASE("vector sign split, scale 1") {
        const std::vector<double> v = {-0.5, 0.2};
        const auto enc = decompose(v, Matrix(1, 2));
        CHECK(enc.scale_v == doctest::Approx(1.0));
        CHECK(enc.v_plus == std::vector<double>{0.0, 0.2});
        CHECK(enc.v_minus == std::vector<double>{0.5, 0.0});
    }
    SUBCASE("all-positive matrix scales down") {
        Matrix w(2, 2);
        w(0, 0) = 2.0;
        w(0, 1) = 1.0;
        w(1, 0) = 0.5;
        w(1, 1) = 1.5;
        const auto enc = decompose(std::vector<double>{0.0, 0.0}, w);
        CHECK(enc.scale_w == doctest::Approx(2.0));
        CHECK(max_abs(enc.w_minus) == 0.0);
        CHECK(enc.w_plus(0, 0) == doctest::Approx(1.0));
        CHECK(enc.w_plus(1, 1) == doctest::Approx(0.75));
    }
    SUBCASE("reconstruction round trip") {
        Rng rng(20);
        for (int trial = 0; trial < 10000; ++trial) {
            const size_t n = 1 + rng.below(6);
            std::vector<double> v(n);
            for (auto& x : v) x = rng.uniform(-8.0, 8.0);
            Matrix w(2, n);
            for (size_t i = 0; i < 2; ++i)
                for (size_t j = 0; j < n; ++j) w(i, j) = rng.uniform(-8.0, 8.0);
            const auto enc = decompose(v, w);
            for (size_t j = 0; j < n; ++j) {
                CHECK(std::fabs(enc.scale_v * (enc.v_plus[j] - enc.v_minus[j]) -
                                v[j]) < 1e-12);
                CHECK(std::min(enc.v_plus[j], enc.v_minus[j]) == 0.0);
                CHECK(enc.v_plus[j] <= 1.0);
                CHECK(enc.v_minus[j] <= 1.0);
            }
            for (size_t i = 0; i < 2; ++i)
                for (size_t j = 0; j < n; ++j) {
                    const double back =
                        enc.scale_w * (enc.w_plus(i, j) - enc.w_minus(i, j));
                    CHECK(std::fabs(back - w(i, j)) < 1e-12);
                    CHECK(std::min(enc.w_plus(i, j), enc.w_minus(i, j)) == 0.0);
                }
        }
    }
}

TEST_CASE("level table realizes the nearest level") {
    const TransmittanceTable tt = linear_table(0.2, 0.78);
    const LevelTable quant = LevelTable::quantized(tt);
    CHECK(quant.t_min() == doctest::Approx(0.2));
    CHECK(quant.t_max() == doctest::Approx(0.78));
    CHECK(quant.max_gap() == doctest::Approx(0.58 / 29));
    // w=0 and w=1 land exactly on the endpoint levels
    CHECK(quant.realize(0.0) == doctest::Approx(0.2));
    CHECK(quant.realize(1.0) == doctest::Approx(0.78));
    // interior targets are within half a gap
    Rng rng(21);
    for (int i = 0; i < 1000; ++i) {
        const double w = rng.uniform01();
        const double target = 0.2 + w * 0.58;
        CHECK(std::fabs(quant.realize(w) - target) <=
              quant.max_gap() / 2 + 1e-12);
    }
    const LevelTable cont = LevelTable::continuous_from(tt);
    CHECK(cont.realize(0.37) == doctest::Approx(0.2 + 0.37 * 0.58));
    CHECK(cont.max_gap() == 0.0);
}

TEST_CASE("mvm decode inverts encode in the continuous noiseless limit") {
    EmulatorConfig cfg;
    cfg.noise_enabled = false;
    const LevelTable cont = LevelTable::continuous(0.2, 0.8);

    SUBCASE("all ones sums to the width") {
        const std::vector<double> v(4, 1.0);
        const Matrix w(4, 4, 1.0);
        const auto y = mvm_optical(v, w, cont, cfg);
        for (double yi : y) CHECK(yi == doctest::Approx(4.0).epsilon(1e-9));
    }
    SUBCASE("zero input returns zero regardless of weights") {
        const std::vector<double> v(4, 0.0);
        Rng rng(22);
        const Matrix w = random_matrix01(4, 4, rng);
        for (double yi : mvm_optical(v, w, cont, cfg))
            CHECK(yi == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("random cases match the exact product") {
        Rng rng(23);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> v(4);
            for (auto& x : v) x = rng.uniform01();
            const Matrix w = random_matrix01(4, 4, rng);
            const auto y = mvm_optical(v, w, cont, cfg);
            for (int i = 0; i < 4; ++i) {
                double exact = 0.0;
                for (int j = 0; j < 4; ++j) exact += w(i, j) * v[j];
                CHECK(std::fabs(y[i] - exact) < 1e-9);
            }
        }
    }
}

TEST_CASE("mvm quantization error is bounded by the table gap") {
    EmulatorConfig cfg;
    cfg.noise_enabled = false;
    const TransmittanceTable tt = linear_table(0.15, 0.7);
    const LevelTable quant = LevelTable::quantized(tt);
    const double bound = 4.0 * quant.max_gap() / quant.t_diff();
    Rng rng(24);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> v(4);
        for (auto& x : v) x = rng.uniform01();
        const Matrix w = random_matrix01(4, 4, rng);
        const auto y = mvm_optical(v, w, quant, cfg);
        for (int i = 0; i < 4; ++i) {
            double exact = 0.0;
            for (int j = 0; j < 4; ++j) exact += w(i, j) * v[j];
            worst = std::max(worst, std::fabs(y[i] - exact));
        }
    }
    CHECK(worst <= bound);
    CHECK(worst > 0.0);  // quantization is actually happening
}

TEST_CASE("mvm shot noise matches the closed-form sigma") {
    EmulatorConfig cfg;
    cfg.noise_enabled = true;
    cfg.rng_seed = 7;
    const LevelTable cont = LevelTable::continuous(0.25, 0.75);
    const std::vector<double> v = {0.9, 0.4, 0.6, 0.8};
    Rng wrng(25);
    const Matrix w = random_matrix01(4, 4, wrng);

    // closed-form sigma of the decoded output, row 0
    const double p_ch = cfg.per_channel_power_w();
    double mean_current = 0.0;
    for (int j = 0; j < 4; ++j)
        mean_current +=
            cfg.responsivity_a_per_w * p_ch * v[j] * cont.realize(w(0, j));
    const double sigma_current = std::sqrt(
        2.0 * cfg.electron_charge_c * mean_current * cfg.bandwidth_hz);
    const double sigma_decoded =
        sigma_current / (cfg.responsivity_a_per_w * p_ch * cont.t_diff());

    const int reps = 100000;
    double sum = 0.0, sq = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto y = mvm_optical(v, w, cont, cfg, /*noise_stream=*/r);
        sum += y[0];
        sq += y[0] * y[0];
    }
    const double mean = sum / reps;
    const double sample_sigma = std::sqrt(sq / reps - mean * mean);
    CHECK(sample_sigma ==
          doctest::Approx(sigma_decoded).epsilon(0.05));
}

TEST_CASE("mvm validates inputs") {
    EmulatorConfig cfg;
    const LevelTable cont = LevelTable::continuous(0.2, 0.8);
    CHECK_THROWS_AS(
        mvm_optical(std::vector<double>(3, 0.5), Matrix(4, 4, 0.5), cont, cfg),
        std::invalid_argument);
    CHECK_THROWS_AS(
        mvm_optical(std::vector<double>(4, 1.5), Matrix(4, 4, 0.5), cont, cfg),
        std::invalid_argument);
    const LevelTable flat = LevelTable::continuous(0.4, 0.4);
    CHECK_THROWS_AS(
        mvm_optical(std::vector<double>(4, 0.5), Matrix(4, 4, 0.5), flat, cfg),
        std::domain_error);
}

TEST_CASE("gemm equals the exact oracle in the ideal limit") {
    EmulatorConfig cfg;
    cfg.noise_enabled = false;
    const LevelTable cont = LevelTable::continuous(0.2, 0.8);
    Rng rng(26);
    SUBCASE("signed rectangular case") {
        const Matrix a = random_matrix(8, 6, rng, -3.0, 3.0);
        const Matrix b = random_matrix(6, 5, rng, -3.0, 3.0);
        const Matrix approx = gemm_optical(a, b, cont, cfg);
        const Matrix exact = multiply_exact(a, b);
        for (size_t i = 0; i < 8; ++i)
            for (size_t j = 0; j < 5; ++j)
                CHECK(std::fabs(approx(i, j) - exact(i, j)) < 1e-9);
    }
    SUBCASE("zero operands give a zero matrix") {
        const Matrix a(3, 4);
        const Matrix b = random_matrix(4, 2, rng);
        const Matrix z = gemm_optical(a, b, cont, cfg);
        CHECK(max_abs(z) == 0.0);
    }
    SUBCASE("many shapes up to 16x16") {
        for (int trial = 0; trial < 40; ++trial) {
            const size_t m = 1 + rng.below(16);
            const size_t k = 1 + rng.below(16);
            const size_t n = 1 + rng.below(16);
            const Matrix a = random_matrix(m, k, rng);
            const Matrix b = random_matrix(k, n, rng);
            const Matrix approx = gemm_optical(a, b, cont, cfg);
            const Matrix exact = multiply_exact(a, b);
            for (size_t i = 0; i < m; ++i)
                for (size_t j = 0; j < n; ++j)
                    CHECK(std::fabs(approx(i, j) - exact(i, j)) < 1e-9);
        }
    }
}

TEST_CASE("1x1 gemm quantization bound") {
    EmulatorConfig cfg;
    cfg.noise_enabled = false;
    const TransmittanceTable tt = linear_table(0.2, 0.7);
    const LevelTable quant = LevelTable::quantized(tt);
    const double bound = quant.max_gap() / quant.t_diff();
    Rng rng(27);
    for (int trial = 0; trial < 5000; ++trial) {
        Matrix a(1, 1), b(1, 1);
        a(0, 0) = rng.uniform(-1.0, 1.0);
        b(0, 0) = rng.uniform(-1.0, 1.0);
        const double got = gemm_optical(a, b, quant, cfg)(0, 0);
        const double exact = a(0, 0) * b(0, 0);
        CHECK(std::fabs(got - exact) <= bound + 1e-12);
    }
}

TEST_CASE("gemm noise draws are stream-addressed and reproducible") {
    EmulatorConfig cfg;
    cfg.noise_enabled = true;
    cfg.rng_seed = 99;
    const LevelTable cont = LevelTable::continuous(0.2, 0.8);
    Rng rng(28);
    const Matrix a = random_matrix(5, 7, rng);
    const Matrix b = random_matrix(7, 3, rng);
    const Matrix c1 = gemm_optical(a, b, cont, cfg, 42);
    const Matrix c2 = gemm_optical(a, b, cont, cfg, 42);
    const Matrix c3 = gemm_optical(a, b, cont, cfg, 43);
    CHECK(c1 == c2);
    CHECK(!(c1 == c3));
}
