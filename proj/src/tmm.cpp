#include "ogemm/tmm.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace ogemm {

TmmResult tmm_compute(std::span<const Complex> indices,
                      std::span<const double> thicknesses_nm,
                      double lambda_nm, double ambient_index,
                      double substrate_index) {
    if (indices.size() != thicknesses_nm.size())
        throw std::invalid_argument("tmm: index/thickness count mismatch");
    if (!(lambda_nm > 0.0))
        throw std::invalid_argument("tmm: wavelength must be positive");
    for (double d : thicknesses_nm)
        if (!(d > 0.0))
            throw std::invalid_argument("tmm: layer thickness must be positive");

    // Normal incidence: admittance proportional to the refractive index;
    // the free-space factor cancels in r and t.
    const Complex eta_in(ambient_index, 0.0);
    const Complex eta_out(substrate_index, 0.0);
    const Complex imag_unit(0.0, 1.0);
    const double wavenumber = 2.0 * std::numbers::pi / lambda_nm;

    // Characteristic matrix product over the layers, ambient side first.
    Complex m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;
    for (size_t j = 0; j < indices.size(); ++j) {
        const Complex nj = indices[j];
        const Complex delta = wavenumber * nj * thicknesses_nm[j];
        const Complex cd = std::cos(delta);
        const Complex sd = std::sin(delta);
        // n + ik convention: the off-diagonals carry -i so that a thick
        // absorber degenerates to its front-interface reflection.
        const Complex a11 = cd, a12 = -imag_unit * sd / nj;
        const Complex a21 = -imag_unit * nj * sd, a22 = cd;
        const Complex t11 = m11 * a11 + m12 * a21;
        const Complex t12 = m11 * a12 + m12 * a22;
        const Complex t21 = m21 * a11 + m22 * a21;
        const Complex t22 = m21 * a12 + m22 * a22;
        m11 = t11;
        m12 = t12;
        m21 = t21;
        m22 = t22;
    }

    const Complex b = m11 + m12 * eta_out;
    const Complex c = m21 + m22 * eta_out;
    const Complex denom = eta_in * b + c;
    const Complex r = (eta_in * b - c) / denom;
    const Complex t = 2.0 * eta_in / denom;

    TmmResult res;
    res.reflectance = std::norm(r);
    res.transmittance = (eta_out.real() / eta_in.real()) * std::norm(t);
    return res;
}

TmmResult tmm_transmittance(const LayerStack& stack,
                            const MaterialsTable& table) {
    std::vector<Complex> indices;
    std::vector<double> thicknesses;
    indices.reserve(stack.layers.size());
    thicknesses.reserve(stack.layers.size());
    for (const Layer& layer : stack.layers) {
        if (layer.material == Material::gst) {
            if (!layer.gst_state)
                throw std::invalid_argument("tmm: GST layer lacks a state");
            indices.push_back(table.gst_index(*layer.gst_state));
        } else {
            if (layer.gst_state)
                throw std::invalid_argument(
                    "tmm: non-GST layer carries a GST state");
            indices.push_back(table.index_of(layer.material));
        }
        thicknesses.push_back(layer.thickness_nm);
    }
    return tmm_compute(indices, thicknesses, table.lambda_nm,
                       table.ambient_index, table.substrate_index);
}

std::vector<SpectrumPoint> tmm_spectrum(
    const LayerStack& stack, std::span<const double> wavelengths_nm,
    const std::function<MaterialsTable(double)>& table_at) {
    if (wavelengths_nm.empty())
        throw std::invalid_argument("tmm_spectrum: empty wavelength grid");
    for (size_t i = 1; i < wavelengths_nm.size(); ++i)
        if (!(wavelengths_nm[i] > wavelengths_nm[i - 1]))
            throw std::invalid_argument(
                "tmm_spectrum: grid must be strictly increasing");
    std::vector<SpectrumPoint> points;
    points.reserve(wavelengths_nm.size());
    for (double wl : wavelengths_nm) {
        MaterialsTable t = table_at(wl);
        t.lambda_nm = wl;
        const TmmResult r = tmm_transmittance(stack, t);
        points.push_back({wl, r.transmittance, r.reflectance});
    }
    return points;
}

void write_spectrum_csv(std::ostream& os,
                        std::span<const SpectrumPoint> points) {
    os << "wavelength_nm,T,R\n";
    os.precision(std::numeric_limits<double>::max_digits10);
    for (const auto& p : points)
        os << p.wavelength_nm << "," << p.transmittance << ","
           << p.reflectance << "\n";
}

}  // namespace ogemm
