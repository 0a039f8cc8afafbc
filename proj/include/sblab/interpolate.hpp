#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sblab/field.hpp"
#include "sblab/spectral_ops.hpp"

namespace sblab {

/// Trilinear interpolation with periodic wrap; exact for fields affine per cell.
double trilinear(const Grid& g, std::span<const double> values, const Vec3& x);
double trilinear(const ScalarField& f, const Vec3& x);
Vec3 trilinear(const VectorField& v, const Vec3& x);

/// Point evaluator for band-limited vector fields: stores the non-negligible
/// Fourier modes once and evaluates the trigonometric interpolant (and its
/// gradient) exactly at arbitrary points. Used where an off-grid value must
/// not carry interpolation error, e.g. the stream function at the body center
/// inside scaling measurements.
class BandLimitedEvaluator {
public:
    explicit BandLimitedEvaluator(const VectorField& v, double drop_tol = 1e-14);

    Vec3 value(const Vec3& x) const;
    /// grad[a][b] = d_a v_b, following the (grad u)_{ij} = d u_j / d x_i convention.
    void gradient(const Vec3& x, double grad[3][3]) const;
    std::size_t mode_count() const { return modes_.size(); }

private:
    struct Mode {
        Vec3 k;
        std::complex<double> c[3];
    };
    Vec3 origin_;  // node (0,0,0); FFT phases are relative to it
    std::vector<Mode> modes_;
};

}  // namespace sblab
