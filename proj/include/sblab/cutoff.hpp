#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "sblab/field.hpp"
#include "sblab/mat3.hpp"

namespace sblab {

/// Radial cut-off profile: 0 on [0, 3/2], 1 on [2, inf), monotone polynomial
/// smoothstep (degree 9, C^4 at the junctions) across the transition annulus.
class CutoffProfile {
public:
    double value(double r) const;
    double deriv(double r) const;
    double second(double r) const;

    // recorded derivative bounds: sup |eta'| and sup |eta''| over the annulus
    double max_abs_deriv() const { return 4.921875; }
    double max_abs_second() const { return 37.4959; }
};

/// The moving cut-off eta_eps(t, x) = eta((x - h(t)) / eps) on a periodic grid.
struct CutoffFamily {
    CutoffProfile profile;
    double epsilon = 0.0;
    std::function<Vec3(double)> center;
    Grid grid;

    CutoffFamily(double eps, std::function<Vec3(double)> center_trajectory, const Grid& g);

    /// Strictest notion: the transition annulus spans at least two cells, as
    /// required when the cut-off enters spectral differentiation.
    bool field_resolvable() const { return epsilon >= 4.0 * grid.spacing(); }
    /// Weakest notion: the annulus geometry is at least visible to the grid.
    /// Analytic nodal sampling (scaling measurements, functionals) uses this.
    bool sample_resolvable() const { return epsilon >= grid.spacing(); }
};

/// Nodal evaluation of eta_eps(t, .). Requires field resolvability
/// (eps >= 4 spacings); throws "cutoff under-resolved" otherwise.
ScalarField evaluate_cutoff(const CutoffFamily& fam, double t);

// Exact nodal samples of the cut-off and its analytic derivatives. These only
// require sample resolvability, which is what lets the scaling measurements
// reach eps down to one grid spacing.
ScalarField cutoff_nodal(const CutoffFamily& fam, double t);
VectorField cutoff_gradient_nodal(const CutoffFamily& fam, double t);
SymmetricTensorField cutoff_hessian_nodal(const CutoffFamily& fam, double t);

/// phi_eps = curl(eta_eps psi_eps) evaluated spectrally (hence exactly
/// divergence-free). phi must be zero-mean and solenoidal; the family must be
/// field-resolvable at t.
VectorField make_test_function(const VectorField& phi, const CutoffFamily& fam, double t);

/// Relative L^2 mismatch between the two evaluation routes
/// curl(eta_eps psi_eps) vs eta_eps phi + grad eta_eps x psi_eps.
double test_function_identity_error(const VectorField& phi, const CutoffFamily& fam, double t);

/// Exact nodal values of eta_eps Phi + grad eta_eps x (Psi - Psi(h)), scaled by g.
/// Valid at any sample-resolvable eps; this is the evaluation the functional
/// diagnostics use when the cut-off is too small for the spectral route.
VectorField test_function_nodal(const VectorField& Phi, const VectorField& Psi, const Vec3& Psi_at_h,
                                const CutoffFamily& fam, double t, double g = 1.0);

/// Exact nodal time derivative of the moving test function for
/// phi(t,x) = g(t) Phi(x): combines the profile motion (h'), the anchor motion
/// and the amplitude factor.
VectorField test_function_dt_nodal(const VectorField& Phi, const VectorField& Psi, const Vec3& Psi_at_h,
                                   const Mat3& grad_Psi_at_h, const CutoffFamily& fam, double t,
                                   double g, double gdot, const Vec3& hdot);

struct ScalingEntry {
    std::string quantity;
    double q = 0.0;
    double slope = 0.0;
    double stderr_ = 0.0;
    double theory = 0.0;
};

struct ScalingReport {
    std::vector<ScalingEntry> entries;
    void write(std::ostream& os) const;  // quantity=<name> q=... slope=... stderr=... theory=...
};

/// Fit the Lemma-3.1-style exponents: log-log slopes of ||eta_eps - 1||_{L^q},
/// ||grad eta_eps||_{L^q}, ||hess eta_eps||_{L^q} over a geometric eps schedule
/// (>= 4 values, all sample-resolvable), against the theory exponents
/// 3/q, (3-q)/q, (3-2q)/q.
ScalingReport measure_cutoff_scalings(const CutoffProfile& profile, const Grid& grid, const Vec3& center,
                                      std::span<const double> epsilons, std::span<const double> qs);

struct TestFnReport {
    ScalingReport scaling;          // testfn_l2_error (theory 3/2), testfn_h1_error (theory 1/2)
    std::vector<double> h1_ratio;   // ||phi_eps||_{H^1} / ||phi||_{H^2} per eps
    double ratio_spread() const;    // max/min of h1_ratio
    void write(std::ostream& os) const;
};

/// Convergence rates of phi_eps -> phi over an eps schedule for a band-limited phi.
TestFnReport measure_testfn_convergence(const VectorField& phi, const Grid& grid, const Vec3& center,
                                        std::span<const double> epsilons);

}  // namespace sblab
