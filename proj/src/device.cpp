#include "ogemm/device.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ogemm {

namespace {

constexpr std::array<Material, kPassiveMaterials> kPassiveChoices = {
    Material::si3n4, Material::al, Material::sio2, Material::au,
    Material::ito};

double clamp_thickness(double t) {
    return std::clamp(t, kMinThicknessNm, kMaxThicknessNm);
}

void check_thickness(double t, const char* what) {
    if (!(t >= kMinThicknessNm && t <= kMaxThicknessNm))
        throw std::invalid_argument(std::string("genome: ") + what +
                                    " thickness " + std::to_string(t) +
                                    " outside [5,50] nm");
}

}  // namespace

std::array<double, kGenomeDims> DeviceGenome::as_vector() const {
    return {static_cast<double>(gst_block_start),
            ito_top_nm,
            gst_nm,
            ito_bottom_nm,
            static_cast<double>(passive[0].material),
            passive[0].thickness_nm,
            static_cast<double>(passive[1].material),
            passive[1].thickness_nm,
            static_cast<double>(passive[2].material),
            passive[2].thickness_nm};
}

std::array<double, kGenomeDims> DeviceGenome::normalized() const {
    const auto v = as_vector();
    auto nt = [](double t) {
        return (t - kMinThicknessNm) / (kMaxThicknessNm - kMinThicknessNm);
    };
    return {v[0] / 3.0, nt(v[1]), nt(v[2]), nt(v[3]), v[4] / 4.0,
            nt(v[5]),   v[6] / 4.0, nt(v[7]), v[8] / 4.0, nt(v[9])};
}

DeviceGenome DeviceGenome::from_normalized(
    const std::array<double, kGenomeDims>& x) {
    auto unit = [](double u) { return std::clamp(u, 0.0, 1.0); };
    auto to_int = [&](double u, int hi) {
        return std::clamp(static_cast<int>(std::lround(unit(u) * hi)), 0, hi);
    };
    auto to_thickness = [&](double u) {
        const double t = kMinThicknessNm +
                         unit(u) * (kMaxThicknessNm - kMinThicknessNm);
        return clamp_thickness(std::round(t));
    };
    DeviceGenome g;
    g.gst_block_start = to_int(x[0], 3);
    g.ito_top_nm = to_thickness(x[1]);
    g.gst_nm = to_thickness(x[2]);
    g.ito_bottom_nm = to_thickness(x[3]);
    for (int i = 0; i < 3; ++i) {
        g.passive[i].material = to_int(x[4 + 2 * i], kPassiveMaterials - 1);
        g.passive[i].thickness_nm = to_thickness(x[5 + 2 * i]);
    }
    return g;
}

void DeviceGenome::validate() const {
    if (gst_block_start < 0 || gst_block_start > 3)
        throw std::invalid_argument("genome: gst_block_start outside 0..3");
    check_thickness(ito_top_nm, "ito_top");
    check_thickness(gst_nm, "gst");
    check_thickness(ito_bottom_nm, "ito_bottom");
    for (const auto& p : passive) {
        if (p.material < 0 || p.material >= kPassiveMaterials)
            throw std::invalid_argument("genome: passive material outside 0..4");
        check_thickness(p.thickness_nm, "passive");
    }
}

double DeviceGenome::total_thickness_nm() const {
    return ito_top_nm + gst_nm + ito_bottom_nm + passive[0].thickness_nm +
           passive[1].thickness_nm + passive[2].thickness_nm;
}

Action action_from_index(int action_index) {
    if (action_index < 0 || action_index >= kActionCount)
        throw std::invalid_argument("action index outside 0..19");
    return {action_index / 2, (action_index % 2 == 0) ? +1 : -1};
}

DeviceGenome apply_action(const DeviceGenome& g, int action_index) {
    const Action a = action_from_index(action_index);
    g.validate();
    DeviceGenome out = g;
    const double dir = static_cast<double>(a.direction);
    switch (a.dimension) {
        case 0:
            out.gst_block_start =
                std::clamp(g.gst_block_start + a.direction, 0, 3);
            break;
        case 1:
            out.ito_top_nm =
                clamp_thickness(g.ito_top_nm + dir * kThicknessStepNm);
            break;
        case 2:
            out.gst_nm = clamp_thickness(g.gst_nm + dir * kThicknessStepNm);
            break;
        case 3:
            out.ito_bottom_nm =
                clamp_thickness(g.ito_bottom_nm + dir * kThicknessStepNm);
            break;
        case 4:
        case 6:
        case 8: {
            auto& p = out.passive[(a.dimension - 4) / 2];
            p.material =
                std::clamp(p.material + a.direction, 0, kPassiveMaterials - 1);
            break;
        }
        default: {
            auto& p = out.passive[(a.dimension - 5) / 2];
            p.thickness_nm =
                clamp_thickness(p.thickness_nm + dir * kThicknessStepNm);
            break;
        }
    }
    return out;
}

DeviceGenome random_genome(Rng& rng) {
    DeviceGenome g;
    g.gst_block_start = static_cast<int>(rng.below(4));
    g.ito_top_nm = rng.uniform(kMinThicknessNm, kMaxThicknessNm);
    g.gst_nm = rng.uniform(kMinThicknessNm, kMaxThicknessNm);
    g.ito_bottom_nm = rng.uniform(kMinThicknessNm, kMaxThicknessNm);
    for (auto& p : g.passive) {
        p.material = static_cast<int>(rng.below(kPassiveMaterials));
        p.thickness_nm = rng.uniform(kMinThicknessNm, kMaxThicknessNm);
    }
    return g;
}

LayerStack decode(const DeviceGenome& g) {
    g.validate();
    const int p = g.gst_block_start;
    LayerStack stack;
    stack.layers.resize(kStackLayers);
    stack.layers[p] = {Material::ito, g.ito_top_nm, std::nullopt};
    stack.layers[p + 1] = {Material::gst, g.gst_nm, 0.0};
    stack.layers[p + 2] = {Material::ito, g.ito_bottom_nm, std::nullopt};
    int slot = 0;
    for (int pos = 0; pos < kStackLayers; ++pos) {
        if (pos >= p && pos <= p + 2) continue;
        const auto& pl = g.passive[slot++];
        stack.layers[pos] = {kPassiveChoices[pl.material], pl.thickness_nm,
                             std::nullopt};
    }
    return stack;
}

TransmittanceTable transmittance_table(const DeviceGenome& g,
                                       const MaterialsTable& table) {
    LayerStack stack = decode(g);
    Layer* gst_layer = nullptr;
    for (auto& layer : stack.layers)
        if (layer.material == Material::gst) gst_layer = &layer;

    TransmittanceTable out;
    out.total_thickness_nm = g.total_thickness_nm();
    out.t_min = std::numeric_limits<double>::infinity();
    out.t_max = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kLevelCount; ++k) {
        gst_layer->gst_state = static_cast<double>(k) / (kLevelCount - 1);
        const TmmResult r = tmm_transmittance(stack, table);
        out.levels[k] = r.transmittance;
        out.t_min = std::min(out.t_min, r.transmittance);
        out.t_max = std::max(out.t_max, r.transmittance);
    }
    out.t_diff = out.t_max - out.t_min;
    return out;
}

void save_device(const std::string& path, const DeviceGenome& g,
                 const MaterialsTable* metrics_table) {
    g.validate();
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("device: cannot write '" + path + "'");
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "gst_block_start " << g.gst_block_start << "\n";
    out << "ito_top_nm " << g.ito_top_nm << "\n";
    out << "gst_nm " << g.gst_nm << "\n";
    out << "ito_bottom_nm " << g.ito_bottom_nm << "\n";
    for (int i = 0; i < 3; ++i) {
        out << "passive" << i << "_material "
            << material_name(kPassiveChoices[g.passive[i].material]) << "\n";
        out << "passive" << i << "_nm " << g.passive[i].thickness_nm << "\n";
    }
    const LayerStack stack = decode(g);
    out << "# layers (ambient side first):\n";
    for (size_t i = 0; i < stack.layers.size(); ++i)
        out << "#   layer" << i << " "
            << material_name(stack.layers[i].material) << " "
            << stack.layers[i].thickness_nm << " nm\n";
    if (metrics_table) {
        const TransmittanceTable tt = transmittance_table(g, *metrics_table);
        out << "# t_max " << tt.t_max << "\n";
        out << "# t_min " << tt.t_min << "\n";
        out << "# t_diff " << tt.t_diff << "\n";
        out << "# total_thickness_nm " << tt.total_thickness_nm << "\n";
    }
}

DeviceGenome load_device(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("device: cannot open '" + path + "'");
    DeviceGenome g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string keyword;
        if (!(ss >> keyword)) continue;
        auto fail = [&](const std::string& why) {
            throw std::runtime_error("device: " + path + ":" +
                                     std::to_string(lineno) + ": " + why);
        };
        auto read_double = [&](double& dst) {
            if (!(ss >> dst)) fail("expected a number after " + keyword);
        };
        if (keyword == "gst_block_start") {
            if (!(ss >> g.gst_block_start)) fail("expected an integer");
        } else if (keyword == "ito_top_nm") {
            read_double(g.ito_top_nm);
        } else if (keyword == "gst_nm") {
            read_double(g.gst_nm);
        } else if (keyword == "ito_bottom_nm") {
            read_double(g.ito_bottom_nm);
        } else if (keyword.starts_with("passive")) {
            const int slot = keyword[7] - '0';
            if (slot < 0 || slot > 2) fail("bad passive slot");
            if (keyword.ends_with("_material")) {
                std::string name;
                if (!(ss >> name)) fail("expected a material name");
                const auto m = material_from_name(name);
                if (!m || *m == Material::gst)
                    fail("'" + name + "' is not a passive material");
                g.passive[slot].material = static_cast<int>(*m);
            } else if (keyword.ends_with("_nm")) {
                read_double(g.passive[slot].thickness_nm);
            } else {
                fail("unknown field '" + keyword + "'");
            }
        } else {
            fail("unknown field '" + keyword + "'");
        }
    }
    g.validate();
    return g;
}

}  // namespace ogemm
