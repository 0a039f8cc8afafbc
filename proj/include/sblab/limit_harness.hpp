#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "sblab/cutoff.hpp"
#include "sblab/norms.hpp"
#include "sblab/regression.hpp"
#include "sblab/solver.hpp"

namespace sblab {

/// Sweep over the shrinking-body schedule: heavy-body density rho0 eps^-alpha,
/// comparison against the obstacle-free reference on a fixed ball K.
struct SweepPlan {
    SimulationConfig base;
    std::vector<double> epsilons;  // decreasing, >= 4 values
    BallRegion comparison;         // K
    int n_probes = 5;              // test-function set for the Xi diagnostic
    int probe_kmax = 3;

    void validate() const;
};

struct SweepRecord {
    double epsilon = 0.0;
    bool failed = false;
    double distance = 0.0;             // d(eps) = max_t ||u_eps - u_ref||_{L^2(K)}
    double slip = 0.0;                 // max_t ||chi (u - u_b)||_{L^2}
    double sup_speed = 0.0;            // sup_t |h'_eps|
    double eps32_sup_speed = 0.0;      // eps^{3/2} sup_t |h'_eps|
    double sup_displacement = 0.0;     // sup_t |h(t) - h(0)|
    double max_momentum_defect = 0.0;  // per-step conservation audit
    double energy_initial = 0.0;
    double energy_max_ratio = 0.0;     // max_t total(t) / total(0)
    double holder_sup = 0.0;           // sup M(s,t)/(t-s)^{1/4}
    double xi_bound = 0.0;             // sup_t max_j |<Xi, phi_j>| / ||phi_j||_{H^2}
};

struct SweepReport {
    std::vector<SweepRecord> records;  // ordered by decreasing epsilon
    double d_slope = 0.0;
    double d_slope_stderr = 0.0;
    bool d_monotone = false;
    double holder_sup = 0.0;  // max over records

    void write(std::ostream& os) const;
};

/// Runs the reference once and one coupled run per epsilon; failed runs are
/// recorded and excluded from the rate fit. jobs > 1 runs the per-epsilon
/// branches concurrently (report assembly stays ordered by epsilon).
SweepReport run_sweep(const SweepPlan& plan, int jobs = 1);

/// phi(t, x) = g(t) Phi(x); g must vanish at the horizon so the weak form has
/// no boundary term at T.
struct TestField {
    VectorField spatial;  // band-limited, solenoidal, zero-mean
    std::function<double(double)> amplitude;
    std::function<double(double)> amplitude_dt;
};

/// Signed pieces of the weak Navier-Stokes identity tested against phi_eps;
/// the residual is |time + viscous + advective - initial| normalized by
/// sup_t ||phi(t)||_{H^2}.
struct WeakResidual {
    double time_term = 0.0;      // -int int v . dphi_eps/dt
    double viscous_term = 0.0;   // nu int int grad v : grad phi_eps
    double advective_term = 0.0; // int int (v . grad v) . phi_eps
    double initial_term = 0.0;   // int v(0) . phi_eps(0)
    double normalization = 1.0;
    double value() const;
};

/// fam == nullopt tests the plain phi (reference runs); otherwise phi_eps is
/// rebuilt per snapshot around the trajectory's body path.
WeakResidual weak_residual(const Trajectory& traj, const TestField& phi,
                           const std::optional<CutoffFamily>& fam, double nu);

/// Temporal-Holder diagnostic of the functionals <Xi(t), phi_j> = int v . phi_{j,eps}.
struct XiReport {
    double holder_sup = 0.0;  // sup_{s != t} M(s,t) / (t-s)^{1/4}
    double bound_sup = 0.0;   // sup_t max_j |<Xi(t), phi_j>| / ||phi_j||_{H^2}
};

XiReport xi_diagnostic(const Trajectory& traj, std::span<const VectorField> probes,
                       const CutoffFamily& fam);

/// Both evaluation routes of <Xi(t), phi>: nodal quadrature and the spectral
/// (Parseval) inner product of the same fields.
std::pair<double, double> xi_inner_product_paths(const VectorField& v, const VectorField& phi_eps);

/// Piecewise-linear body path from a trajectory's snapshots.
CutoffFamily family_from_trajectory(const Trajectory& traj, double epsilon, const Grid& grid);

}  // namespace sblab
