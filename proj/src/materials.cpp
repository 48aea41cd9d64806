#include "ogemm/materials.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ogemm {

namespace {

constexpr std::array<std::string_view, kMaterialCount> kNames = {
    "Si3N4", "Al", "SiO2", "Au", "ITO", "GST"};

}  // namespace

std::string_view material_name(Material m) {
    return kNames[static_cast<int>(m)];
}

std::optional<Material> material_from_name(std::string_view name) {
    for (int i = 0; i < kMaterialCount; ++i)
        if (kNames[i] == name) return static_cast<Material>(i);
    return std::nullopt;
}

Complex MaterialsTable::gst_index(double s) const {
    if (!(s >= 0.0 && s <= 1.0))
        throw std::invalid_argument("gst_index: crystalline fraction " +
                                    std::to_string(s) + " outside [0,1]");
    return (1.0 - s) * gst_amorphous + s * gst_crystalline;
}

void MaterialsTable::validate() const {
    if (!(lambda_nm > 0.0))
        throw std::invalid_argument("materials: lambda_nm must be positive");
    if (!(ambient_index > 0.0) || !(substrate_index > 0.0))
        throw std::invalid_argument("materials: bounding indices must be positive");
    auto check = [](Complex v, std::string_view what) {
        if (!(v.real() > 0.0))
            throw std::invalid_argument("materials: " + std::string(what) +
                                        " has non-positive n");
        if (v.imag() < 0.0)
            throw std::invalid_argument("materials: " + std::string(what) +
                                        " has negative k (gain medium)");
    };
    for (int i = 0; i < kMaterialCount; ++i) check(index[i], kNames[i]);
    check(gst_amorphous, "GST_amorphous");
    check(gst_crystalline, "GST_crystalline");
}

MaterialsTable MaterialsTable::defaults() {
    MaterialsTable t;
    t.lambda_nm = 1310.0;
    t.ambient_index = 1.0;
    t.substrate_index = 1.0;
    // n_SiO2 = 1.5 and n_Si3N4 = 3.0 are the design values of the stack;
    // the remaining entries are near-IR tabulations: ITO (sputtered film,
    // Ozcariz-type dispersion), Au (Johnson & Christy), Al (Rakic), and
    // GST-225 phase endpoints from PCM ellipsometry literature. All are
    // overridable through the materials config file.
    t.index[static_cast<int>(Material::si3n4)] = {3.0, 0.0};
    t.index[static_cast<int>(Material::al)] = {1.30, 13.0};
    t.index[static_cast<int>(Material::sio2)] = {1.5, 0.0};
    t.index[static_cast<int>(Material::au)] = {0.40, 8.9};
    t.index[static_cast<int>(Material::ito)] = {1.70, 0.04};
    t.gst_amorphous = {4.2, 0.18};
    t.gst_crystalline = {6.9, 1.90};
    t.index[static_cast<int>(Material::gst)] = t.gst_amorphous;
    return t;
}

MaterialsTable MaterialsTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("materials: cannot open '" + path + "'");
    MaterialsTable t = defaults();
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
            throw std::runtime_error("materials: " + path + ":" +
                                     std::to_string(lineno) + ": " + why);
        };
        if (keyword == "lambda_nm") {
            if (!(ss >> t.lambda_nm)) fail("expected wavelength value");
        } else if (keyword == "ambient") {
            if (!(ss >> t.ambient_index)) fail("expected ambient index");
        } else if (keyword == "substrate") {
            if (!(ss >> t.substrate_index)) fail("expected substrate index");
        } else {
            double n = 0.0, k = 0.0;
            if (!(ss >> n >> k)) fail("expected 'name n k'");
            if (keyword == "GST_amorphous") {
                t.gst_amorphous = {n, k};
            } else if (keyword == "GST_crystalline") {
                t.gst_crystalline = {n, k};
            } else if (auto m = material_from_name(keyword)) {
                t.index[static_cast<int>(*m)] = {n, k};
            } else {
                fail("unknown material '" + keyword + "'");
            }
        }
    }
    t.index[static_cast<int>(Material::gst)] = t.gst_amorphous;
    t.validate();
    return t;
}

void MaterialsTable::print(std::ostream& os) const {
    os << "lambda_nm " << lambda_nm << "\n";
    os << "ambient " << ambient_index << "\n";
    os << "substrate " << substrate_index << "\n";
    os << std::setprecision(6);
    for (int i = 0; i < kMaterialCount; ++i) {
        if (static_cast<Material>(i) == Material::gst) continue;
        os << kNames[i] << " " << index[i].real() << " " << index[i].imag()
           << "\n";
    }
    os << "GST_amorphous " << gst_amorphous.real() << " "
       << gst_amorphous.imag() << "\n";
    os << "GST_crystalline " << gst_crystalline.real() << " "
       << gst_crystalline.imag() << "\n";
}

}  // namespace ogemm
