#pragma once

#include <optional>

#include "sblab/field.hpp"
#include "sblab/spectral_ops.hpp"

namespace sblab {

/// Restriction of a norm to the periodic ball B(center, radius).
struct BallRegion {
    Vec3 center;
    double radius = 0.0;
};

/// Discrete L^q norm by node quadrature (rectangle rule on the periodic grid).
/// q may be infinity. For vector fields the pointwise Euclidean magnitude is used.
/// A region restricts the quadrature to nodes within periodic distance <= radius;
/// the radius must be < L/2.
double lebesgue_norm(const ScalarField& f, double q, std::optional<BallRegion> region = {});
double lebesgue_norm(const VectorField& v, double q, std::optional<BallRegion> region = {});

/// Spectral Sobolev norm ||v||_{H^s}^2 = L^3 sum_k (1+|k|^2)^s |v_hat(k)|^2
/// for integer s in {-3,...,2}. H^0 coincides with the L^2 norm.
double sobolev_norm(const VectorField& v, int s);
double sobolev_norm(const ScalarField& f, int s);
double sobolev_norm(const VectorSpectrum& s_hat, int s);

/// ||grad v||_{H^s} computed spectrally as L^3 sum |k|^2 (1+|k|^2)^s |v_hat|^2.
double grad_sobolev_norm(const VectorField& v, int s);

}  // namespace sblab
