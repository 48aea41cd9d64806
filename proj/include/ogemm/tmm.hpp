#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "ogemm/materials.hpp"

namespace ogemm {

struct Layer {
    Material material;
    double thickness_nm;
    // Crystalline fraction; present exactly for GST layers.
    std::optional<double> gst_state;
};

struct LayerStack {
    std::vector<Layer> layers;
};

struct TmmResult {
    double transmittance;
    double reflectance;
};

// Characteristic-matrix transfer-matrix method at normal incidence,
// coherent throughout, semi-infinite lossless bounding media. T and R are
// intensity coefficients including the substrate/ambient admittance
// factor. Pure function; thread-safe.
TmmResult tmm_transmittance(const LayerStack& stack,
                            const MaterialsTable& table);

// Core entry on resolved per-layer indices (unit tests and spectra).
TmmResult tmm_compute(std::span<const Complex> indices,
                      std::span<const double> thicknesses_nm,
                      double lambda_nm, double ambient_index,
                      double substrate_index);

struct SpectrumPoint {
    double wavelength_nm;
    double transmittance;
    double reflectance;
};

// One (T, R) pair per grid point; `table_at` supplies the per-wavelength
// index table. The grid must be strictly increasing and non-empty.
std::vector<SpectrumPoint> tmm_spectrum(
    const LayerStack& stack, std::span<const double> wavelengths_nm,
    const std::function<MaterialsTable(double)>& table_at);

// CSV with header wavelength_nm,T,R
void write_spectrum_csv(std::ostream& os,
                        std::span<const SpectrumPoint> points);

}  // namespace ogemm
