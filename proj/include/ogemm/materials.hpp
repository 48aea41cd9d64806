#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace ogemm {

using Complex = std::complex<double>;

// Selectable layer materials, in this fixed index order.
enum class Material : int {
    si3n4 = 0,
    al = 1,
    sio2 = 2,
    au = 3,
    ito = 4,
    gst = 5,
};

inline constexpr int kMaterialCount = 6;

std::string_view material_name(Material m);
std::optional<Material> material_from_name(std::string_view name);

// Complex refractive indices (n + ik) at the operating wavelength, plus
// the two GST phase endpoints and the semi-infinite bounding media.
// Immutable after load; shareable across threads.
struct MaterialsTable {
    double lambda_nm = 1310.0;
    double ambient_index = 1.0;
    double substrate_index = 1.0;
    std::array<Complex, kMaterialCount> index{};  // GST slot = amorphous
    Complex gst_amorphous;
    Complex gst_crystalline;

    // Linear interpolation of the complex index in crystalline fraction s.
    Complex gst_index(double s) const;

    Complex index_of(Material m) const { return index[static_cast<int>(m)]; }

    void validate() const;  // k >= 0, n > 0, lambda > 0

    static MaterialsTable defaults();  // built-in 1310 nm table
    static MaterialsTable load(const std::string& path);
    void print(std::ostream& os) const;
};

}  // namespace ogemm
