#include <doctest.h>

#include <stdexcept>

#include <array>
#include <cmath>
#include <cstdio>
#include <set>

#include "ogemm/device.hpp"

using namespace ogemm;

namespace {

void check_decoded_invariants(const DeviceGenome& g) {
    const LayerStack s = decode(g);
    REQUIRE(s.layers.size() == 6);
    int gst_count = 0, gst_pos = -1;
    for (int i = 0; i < 6; ++i) {
        const auto& layer = s.layers[i];
        REQUIRE(layer.thickness_nm >= kMinThicknessNm);
        REQUIRE(layer.thickness_nm <= kMaxThicknessNm);
        if (layer.material == Material::gst) {
            ++gst_count;
            gst_pos = i;
            REQUIRE(layer.gst_state.has_value());
        } else {
            REQUIRE(!layer.gst_state.has_value());
        }
    }
    REQUIRE(gst_count == 1);
    REQUIRE(gst_pos >= 1);
    REQUIRE(gst_pos <= 4);
    REQUIRE(s.layers[gst_pos - 1].material == Material::ito);
    REQUIRE(s.layers[gst_pos + 1].material == Material::ito);
}

}  // namespace

TEST_CASE("decode places the block and passives in order") {
    DeviceGenome g;
    g.gst_block_start = 0;
    g.ito_top_nm = 20;
    g.gst_nm = 10;
    g.ito_bottom_nm = 15;
    g.passive = {{{2, 30}, {0, 25}, {2, 40}}};  // SiO2, Si3N4, SiO2
    const LayerStack s = decode(g);
    CHECK(s.layers[0].material == Material::ito);
    CHECK(s.layers[1].material == Material::gst);
    CHECK(s.layers[2].material == Material::ito);
    CHECK(s.layers[3].material == Material::sio2);
    CHECK(s.layers[4].material == Material::si3n4);
    CHECK(s.layers[5].material == Material::sio2);
    CHECK(s.layers[3].thickness_nm == doctest::Approx(30));
    CHECK(s.layers[4].thickness_nm == doctest::Approx(25));

    g.gst_block_start = 3;
    const LayerStack tail = decode(g);
    CHECK(tail.layers[0].material == Material::sio2);
    CHECK(tail.layers[1].material == Material::si3n4);
    CHECK(tail.layers[2].material == Material::sio2);
    CHECK(tail.layers[3].material == Material::ito);
    CHECK(tail.layers[4].material == Material::gst);
    CHECK(tail.layers[5].material == Material::ito);
}

TEST_CASE("decode rejects out-of-range fields") {
    DeviceGenome g;
    g.gst_block_start = 4;
    CHECK_THROWS_AS(decode(g), std::invalid_argument);
    g.gst_block_start = 0;
    g.gst_nm = 3.0;
    CHECK_THROWS_AS(decode(g), std::invalid_argument);
    g.gst_nm = 10.0;
    g.passive[1].material = 5;
    CHECK_THROWS_AS(decode(g), std::invalid_argument);
}

TEST_CASE("random genomes always decode legally") {
    Rng rng(5);
    std::set<int> starts;
    for (int i = 0; i < 100000; ++i) {
        const DeviceGenome g = random_genome(rng);
        g.validate();
        starts.insert(g.gst_block_start);
        if (i < 2000) check_decoded_invariants(g);
    }
    CHECK(starts.size() == 4);  // every block position observed
}

TEST_CASE("random genome is deterministic per seed") {
    Rng a(9), b(9);
    for (int i = 0; i < 100; ++i) {
        CHECK(random_genome(a) == random_genome(b));
    }
}

TEST_CASE("actions step one dimension and clamp at bounds") {
    DeviceGenome g;
    g.gst_block_start = 2;
    g.ito_top_nm = 50;
    g.gst_nm = 10;
    g.ito_bottom_nm = 15;
    g.passive = {{{2, 30}, {0, 25}, {4, 40}}};

    // +5 nm on a 50 nm thickness stays clamped
    const DeviceGenome clamped = apply_action(g, 2);  // dim 1, +
    CHECK(clamped.ito_top_nm == doctest::Approx(50.0));
    CHECK(clamped == g);

    // block position -1
    const DeviceGenome moved = apply_action(g, 1);  // dim 0, -
    CHECK(moved.gst_block_start == 1);
    CHECK(moved.ito_top_nm == doctest::Approx(g.ito_top_nm));

    CHECK_THROWS_AS(apply_action(g, 20), std::invalid_argument);
    CHECK_THROWS_AS(apply_action(g, -1), std::invalid_argument);
}

TEST_CASE("action closure: every (genome, action) stays legal") {
    Rng rng(6);
    for (int i = 0; i < 10000; ++i) {
        const DeviceGenome g = random_genome(rng);
        const int a = static_cast<int>(rng.below(kActionCount));
        const DeviceGenome next = apply_action(g, a);
        next.validate();
        if (i < 1000) check_decoded_invariants(next);
        // exactly one dimension may differ
        const auto before = g.as_vector(), after = next.as_vector();
        int changed = 0;
        for (int d = 0; d < kGenomeDims; ++d)
            if (before[d] != after[d]) ++changed;
        CHECK(changed <= 1);
    }
}

TEST_CASE("thickness actions move total thickness by one step unless clamped") {
    Rng rng(61);
    for (int i = 0; i < 2000; ++i) {
        const DeviceGenome g = random_genome(rng);
        const int dim = std::array<int, 6>{1, 2, 3, 5, 7, 9}[rng.below(6)];
        const DeviceGenome up = apply_action(g, 2 * dim);
        const double delta = up.total_thickness_nm() - g.total_thickness_nm();
        const auto v = g.as_vector();
        if (v[dim] + kThicknessStepNm <= kMaxThicknessNm) {
            CHECK(delta == doctest::Approx(kThicknessStepNm));
        } else {
            CHECK(delta <= kThicknessStepNm);
        }
    }
}

TEST_CASE("transmittance table has 30 levels and consistent metrics") {
    const MaterialsTable mats = MaterialsTable::defaults();
    Rng rng(7);
    for (int i = 0; i < 20; ++i) {
        const DeviceGenome g = random_genome(rng);
        const TransmittanceTable tt = transmittance_table(g, mats);
        double lo = 1e9, hi = -1e9;
        for (double level : tt.levels) {
            CHECK(level >= 0.0);
            CHECK(level <= 1.0);
            lo = std::min(lo, level);
            hi = std::max(hi, level);
        }
        CHECK(tt.t_min == lo);
        CHECK(tt.t_max == hi);
        CHECK(tt.t_diff == hi - lo);
        CHECK(tt.t_diff > 0.0);  // GST endpoints differ
        CHECK(tt.total_thickness_nm >= 30.0);
        CHECK(tt.total_thickness_nm <= 300.0);
        CHECK(tt.total_thickness_nm ==
              doctest::Approx(g.total_thickness_nm()));
    }
}

TEST_CASE("low-loss passives beat a gold passive of equal thickness") {
    const MaterialsTable mats = MaterialsTable::defaults();
    DeviceGenome dielectric;
    dielectric.gst_block_start = 0;
    dielectric.ito_top_nm = 20;
    dielectric.gst_nm = 10;
    dielectric.ito_bottom_nm = 15;
    dielectric.passive = {{{2, 30}, {0, 20}, {2, 30}}};
    DeviceGenome gold = dielectric;
    gold.passive[1] = {3, 20};  // Au instead of Si3N4, same thickness
    const TransmittanceTable a = transmittance_table(dielectric, mats);
    const TransmittanceTable b = transmittance_table(gold, mats);
    CHECK(a.t_max > b.t_max);
}

TEST_CASE("normalized round trip and rounding") {
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        DeviceGenome g = random_genome(rng);
        // integer-thickness genome survives the normalize/denormalize trip
        g.ito_top_nm = std::round(g.ito_top_nm);
        g.gst_nm = std::round(g.gst_nm);
        g.ito_bottom_nm = std::round(g.ito_bottom_nm);
        for (auto& p : g.passive) p.thickness_nm = std::round(p.thickness_nm);
        const DeviceGenome back = DeviceGenome::from_normalized(g.normalized());
        CHECK(back == g);
    }
    // out-of-box coordinates clamp to legal values
    const DeviceGenome lo = DeviceGenome::from_normalized(
        {-1, -1, -1, -1, -1, -1, -1, -1, -1, -1});
    lo.validate();
    CHECK(lo.gst_block_start == 0);
    CHECK(lo.ito_top_nm == doctest::Approx(kMinThicknessNm));
    const DeviceGenome hi =
        DeviceGenome::from_normalized({2, 2, 2, 2, 2, 2, 2, 2, 2, 2});
    hi.validate();
    CHECK(hi.gst_block_start == 3);
    CHECK(hi.passive[2].material == 4);
    CHECK(hi.passive[2].thickness_nm == doctest::Approx(kMaxThicknessNm));
}

TEST_CASE("device file round trip") {
    Rng rng(10);
    DeviceGenome g = random_genome(rng);
    const std::string path = "device_roundtrip_test.cfg";
    const MaterialsTable mats = MaterialsTable::defaults();
    save_device(path, g, &mats);
    const DeviceGenome back = load_device(path);
    CHECK(back == g);
    std::remove(path.c_str());
    CHECK_THROWS(load_device("does_not_exist.cfg"));
}
