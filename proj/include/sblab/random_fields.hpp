#pragma once

#include <cstdint>

#include "sblab/field.hpp"

namespace sblab {

/// Divergence-free, zero-mean random field with modes |m_i| <= kmax, scaled to
/// unit H^2 norm. Coefficients come from a seeded generator with a fixed draw
/// order, so the field is reproducible bit for bit for a given (grid, kmax, seed).
VectorField random_solenoidal(const Grid& grid, int kmax, std::uint64_t seed);

/// Zero-mean random band-limited scalar field with unit L^2 norm.
ScalarField random_scalar(const Grid& grid, int kmax, std::uint64_t seed);

}  // namespace sblab
