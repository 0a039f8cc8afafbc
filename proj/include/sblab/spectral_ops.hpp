#pragma once

#include <array>
#include <complex>
#include <vector>

#include "sblab/field.hpp"
#include "sblab/grid.hpp"

namespace sblab {

/// Fourier coefficients of a scalar field (layout matches Grid::index).
struct ScalarSpectrum {
    Grid grid;
    std::vector<std::complex<double>> values;
    explicit ScalarSpectrum(const Grid& g) : grid(g), values(g.node_count()) {}
};

/// Fourier coefficients of a vector field.
struct VectorSpectrum {
    Grid grid;
    std::array<std::vector<std::complex<double>>, 3> comp;
    explicit VectorSpectrum(const Grid& g) : grid(g) {
        for (auto& c : comp) c.assign(g.node_count(), std::complex<double>(0.0, 0.0));
    }
};

ScalarSpectrum to_spectrum(const ScalarField& f);
VectorSpectrum to_spectrum(const VectorField& v);
ScalarField to_physical(const ScalarSpectrum& s);
VectorField to_physical(const VectorSpectrum& s);

/// Wavenumber vector of spectral bin n; odd-derivative components are zeroed
/// at the Nyquist mode (standard de-aliasing hygiene for first derivatives).
Vec3 deriv_wavenumber(const Grid& g, std::size_t n);
/// Wavenumber vector including the Nyquist mode (used for |k|^2 weights).
Vec3 full_wavenumber(const Grid& g, std::size_t n);

// Spectral differential operators; exact for resolved trigonometric polynomials.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField curl(const VectorField& v);
VectorField laplacian(const VectorField& v);

/// D(v)_ij = (d_j v_i + d_i v_j) / 2, symmetric at every node.
SymmetricTensorField deformation_tensor(const VectorField& v);

/// L^2-orthogonal projection onto divergence-free fields. Keeps the mean mode.
VectorField leray_project(const VectorField& v);

// In-place spectrum operations used by the time stepper.
void project_solenoidal(VectorSpectrum& s);
void apply_heat(VectorSpectrum& s, double nu_dt);          // multiply by exp(-nu_dt |k|^2)
void truncate_two_thirds(VectorSpectrum& s);               // zero modes with |m_i| > N/3
void curl_spectrum(const VectorSpectrum& in, VectorSpectrum& out);
void divergence_spectrum(const VectorSpectrum& in, ScalarSpectrum& out);

/// Mean of each component (the k=0 coefficient).
Vec3 mean(const VectorField& v);
double mean(const ScalarField& f);

}  // namespace sblab
