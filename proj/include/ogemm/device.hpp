#pragma once

#include <array>
#include <string>

#include "ogemm/materials.hpp"
#include "ogemm/rng.hpp"
#include "ogemm/tmm.hpp"

namespace ogemm {

inline constexpr int kGenomeDims = 10;
inline constexpr int kActionCount = 20;
inline constexpr int kLevelCount = 30;
inline constexpr int kStackLayers = 6;
inline constexpr int kPassiveMaterials = 5;  // Si3N4, Al, SiO2, Au, ITO
inline constexpr double kMinThicknessNm = 5.0;
inline constexpr double kMaxThicknessNm = 50.0;
inline constexpr double kThicknessStepNm = 5.0;

struct PassiveLayer {
    int material;  // 0..4 over {Si3N4, Al, SiO2, Au, ITO}
    double thickness_nm;

    bool operator==(const PassiveLayer&) const = default;
};

// The 10-dimensional searchable encoding of a legal 6-layer stack: the
// ITO/GST/ITO block position and thicknesses, plus three passive layers
// filling the remaining slots in order. Legality holds by construction.
struct DeviceGenome {
    int gst_block_start = 0;  // 0..3
    double ito_top_nm = kMinThicknessNm;
    double gst_nm = kMinThicknessNm;
    double ito_bottom_nm = kMinThicknessNm;
    std::array<PassiveLayer, 3> passive{};

    std::array<double, kGenomeDims> as_vector() const;
    std::array<double, kGenomeDims> normalized() const;  // unit box

    // Continuous unit-box point -> legal genome. Thicknesses round to the
    // nearest integer nanometer, integer dimensions to the nearest legal
    // value; everything clamps to bounds.
    static DeviceGenome from_normalized(const std::array<double, kGenomeDims>& x);

    void validate() const;
    double total_thickness_nm() const;

    bool operator==(const DeviceGenome&) const = default;
};

// Discrete step along one genome dimension: +-1 for the integer
// dimensions, +-5 nm for thicknesses, clamped at the bounds.
struct Action {
    int dimension;  // 0..9
    int direction;  // +1 or -1
};

// action index a = 2*dimension + (direction < 0)
Action action_from_index(int action_index);

DeviceGenome apply_action(const DeviceGenome& g, int action_index);

DeviceGenome random_genome(Rng& rng);

// Genome -> 6-layer stack with ITO above and below the GST layer and the
// passive layers filling remaining positions in ascending order.
LayerStack decode(const DeviceGenome& g);

// The 30 realizable transmittances T_k at crystalline fractions k/29.
struct TransmittanceTable {
    std::array<double, kLevelCount> levels{};
    double t_max = 0.0;
    double t_min = 0.0;
    double t_diff = 0.0;
    double total_thickness_nm = 0.0;
};

TransmittanceTable transmittance_table(const DeviceGenome& g,
                                       const MaterialsTable& table);

// Human-readable device file (the 10 named fields; derived listing and
// metrics are written as comments).
void save_device(const std::string& path, const DeviceGenome& g,
                 const MaterialsTable* metrics_table = nullptr);
DeviceGenome load_device(const std::string& path);

}  // namespace ogemm
