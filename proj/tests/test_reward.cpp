#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "ogemm/reward.hpp"
#include "ogemm/rng.hpp"
#include "test_util.hpp"

using namespace ogemm;
using namespace ogemm::testutil;

TEST_CASE("reward formula on injected gaussian errors") {
    Rng rng(30);
    std::vector<double> errors(10000);
    for (auto& e : errors) e = 0.1 * rng.gaussian();
    const RewardReport report = report_from_errors(errors);
    CHECK(report.n_pairs == 10000);
    CHECK(report.std_error == doctest::Approx(0.1).epsilon(0.05));
    CHECK(std::fabs(report.reward - 0.0) < 0.02);
    CHECK(report.reward == doctest::Approx(1.0 - 10.0 * report.std_error));

    uint64_t total = 0;
    REQUIRE(report.histogram.size() == kHistogramBins);
    for (const auto& bin : report.histogram) total += bin.count;
    CHECK(total == 10000);
}

TEST_CASE("ideal device scores reward 1") {
    EmulatorConfig cfg;
    cfg.noise_enabled = false;
    const LevelTable cont = LevelTable::continuous(0.2, 0.8);
    const RewardReport report = evaluate_reward(cont, cfg, 2000, 4);
    CHECK(std::fabs(report.reward - 1.0) < 1e-3);
    CHECK(report.std_error < 1e-4);
}

TEST_CASE("degenerate device reports the floor reward") {
    EmulatorConfig cfg;
    const LevelTable flat = LevelTable::continuous(0.4, 0.4 + 1e-9);
    const RewardReport report = evaluate_reward(flat, cfg, 100, 4);
    CHECK(report.reward == kRewardFloor);
    CHECK(report.degenerate);
}

TEST_CASE("shot-noise scaling of the error std") {
    EmulatorConfig base;
    base.noise_enabled = true;
    base.rng_seed = 5;
    const LevelTable cont = LevelTable::continuous(0.25, 0.75);
    const size_t pairs = 4000;

    const double std0 = evaluate_reward(cont, base, pairs, 4).std_error;

    SUBCASE("doubling the bandwidth raises std by sqrt(2)") {
        EmulatorConfig cfg = base;
        cfg.bandwidth_hz *= 2.0;
        const double std2 = evaluate_reward(cont, cfg, pairs, 4).std_error;
        CHECK(std2 / std0 == doctest::Approx(std::sqrt(2.0)).epsilon(0.10));
    }
    SUBCASE("a decade of bandwidth raises std by sqrt(10)") {
        EmulatorConfig cfg = base;
        cfg.bandwidth_hz *= 10.0;
        const double std10 = evaluate_reward(cont, cfg, pairs, 4).std_error;
        CHECK(std10 / std0 == doctest::Approx(std::sqrt(10.0)).epsilon(0.10));
    }
    SUBCASE("a decade of power lowers std by sqrt(10)") {
        EmulatorConfig cfg = base;
        cfg.p_total_w *= 10.0;
        const double stdp = evaluate_reward(cont, cfg, pairs, 4).std_error;
        CHECK(std0 / stdp == doctest::Approx(std::sqrt(10.0)).epsilon(0.10));
    }
}

TEST_CASE("larger modulation range never hurts the reward") {
    // Noise-dominated regime; with uniform 30-level tables the relative
    // quantization error is scale-free, so t_diff shows up through the
    // detector-noise term.
    EmulatorConfig cfg;
    cfg.noise_enabled = true;
    cfg.bandwidth_hz = 3e11;
    int wins = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        cfg.rng_seed = seed;
        const LevelTable wide = LevelTable::quantized(linear_table(0.2, 0.8));
        const LevelTable narrow =
            LevelTable::quantized(linear_table(0.2, 0.35));
        const double r_wide = evaluate_reward(wide, cfg, 800, 4).reward;
        const double r_narrow = evaluate_reward(narrow, cfg, 800, 4).reward;
        if (r_wide >= r_narrow) ++wins;
    }
    CHECK(wins == 20);
}

TEST_CASE("reward of a real device is reproducible bitwise") {
    const MaterialsTable mats = MaterialsTable::defaults();
    const DeviceGenome g = good_genome();
    EmulatorConfig cfg;
    cfg.rng_seed = 11;
    const RewardReport a = evaluate_reward(g, mats, cfg, 500, 4);
    const RewardReport b = evaluate_reward(g, mats, cfg, 500, 4);
    CHECK(a.errors == b.errors);
    CHECK(a.reward == b.reward);
    CHECK(a.reward > -10.0);

    // thread count must not change a single bit
    setenv("OGEMM_THREADS", "1", 1);
    const RewardReport t1 = evaluate_reward(g, mats, cfg, 500, 4);
    setenv("OGEMM_THREADS", "5", 1);
    const RewardReport t5 = evaluate_reward(g, mats, cfg, 500, 4);
    unsetenv("OGEMM_THREADS");
    CHECK(t1.errors == t5.errors);
    CHECK(t1.errors == a.errors);
}

TEST_CASE("report printing and histogram export") {
    Rng rng(31);
    std::vector<double> errors(1000);
    for (auto& e : errors) e = 0.05 * rng.gaussian();
    const RewardReport report = report_from_errors(errors);
    std::ostringstream text, csv;
    print_report(text, report);
    CHECK(text.str().find("reward") != std::string::npos);
    write_histogram_csv(csv, report);
    CHECK(csv.str().substr(0, 17) == "bin_center,count\n");
}
