#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sblab/field.hpp"
#include "sblab/rigid_body.hpp"
#include "sblab/spectral_ops.hpp"

namespace sblab {

/// Everything one coupled (or reference) run needs. Parsed from `key = value`
/// text by the config module; field names double as config keys.
struct SimulationConfig {
    double nu = 0.05;           // viscosity
    double L = 2.0 * 3.14159265358979323846;
    int N = 64;                 // nodes per axis
    double dt = 0.01;
    double T = 1.0;
    double epsilon = 0.5;       // body scale
    double alpha = 2.0;         // density exponent: rho_eps = rho0 * eps^-alpha
    double rho0 = 1.0;
    double lambda = 0.01;       // penalization relaxation time (<= dt)
    std::string initial_field_id = "taylor_green";
    Vec3 l0;                    // initial body velocity
    Vec3 omega0;                // initial body angular velocity
    std::uint64_t seed = 1;
    double output_interval = 0.1;
    double smoothing_width = 2.0;  // indicator shell, in grid spacings

    Grid grid() const { return Grid(L, N); }
    double body_density() const;
    void validate() const;  // throws naming the offending field
};

/// One energy-balance row, in the convention of the coupled energy estimate
/// (squared norms, no 1/2 factors).
struct EnergyRecord {
    double t = 0.0;
    double fluid_kinetic = 0.0;        // ||u||^2_{L^2} weighted by (1 - chi)
    double body_translational = 0.0;   // m |h'|^2
    double body_rotational = 0.0;      // (J omega) . omega
    double dissipation_integral = 0.0; // 4 nu int_0^t ||D(u)||^2
    double total() const {
        return fluid_kinetic + body_translational + body_rotational + dissipation_integral;
    }
};

/// Per-step solver diagnostics (conservation audit and slip monitor).
struct StepDiagnostics {
    double t = 0.0;
    double momentum_rel_defect = 0.0;  // |fluid momentum change + m dl| / scale
    double slip_l2 = 0.0;              // ||chi (u - u_body)||_{L^2}
    double max_abs_u = 0.0;
};

struct Trajectory {
    std::vector<double> times;               // snapshot times
    std::vector<VectorField> snapshots;      // velocity at snapshot times
    std::vector<RigidBodyState> bodies;      // body state at snapshot times
    std::vector<EnergyRecord> energy;        // one record per step (including t = 0)
    std::vector<StepDiagnostics> step_diags; // one per step
    bool has_body = false;
    bool failed = false;
    double failure_time = 0.0;
};

/// Global initial datum: the named base field blended to the rigid field across
/// the indicator shell, then re-projected (divergence-free, zero mean).
std::pair<VectorField, RigidBodyState> make_initial_data(const SimulationConfig& config);

/// The base field alone (what the reference run starts from).
VectorField make_base_field(const SimulationConfig& config);

// Localized solenoidal fields backing the named initial data; also used as
// compact sources in the stream-function checks.
VectorField gaussian_vortex_blob(const Grid& grid, const Vec3& center, double sigma, double amplitude);
VectorField gaussian_vortex_ring(const Grid& grid, const Vec3& center, double ring_radius, double sigma,
                                 double amplitude);

/// Time stepper: pseudo-spectral advection (RK2, 2/3 de-aliased), exact
/// spectral diffusion, implicit volume penalization with conservative momentum
/// exchange, Leray projection, then the rigid-body update.
class CoupledSolver {
public:
    /// with_body = false gives the obstacle-free reference numerics (chi == 0).
    CoupledSolver(const SimulationConfig& config, bool with_body);
    ~CoupledSolver();
    CoupledSolver(const CoupledSolver&) = delete;
    CoupledSolver& operator=(const CoupledSolver&) = delete;

    void step();

    /// Replace the evolving state (velocity is re-read as-is; callers are
    /// responsible for divergence-free data).
    void set_state(const VectorField& u, const RigidBodyState& body);

    double time() const;
    const RigidBodyState& body() const;
    bool has_body() const;
    VectorField velocity() const;
    const SimulationConfig& config() const;
    EnergyRecord energy_record() const;
    const StepDiagnostics& last_diagnostics() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One step of the coupled system as a pure function (convenience wrapper).
std::pair<VectorField, RigidBodyState> step(const VectorField& u, const RigidBodyState& body,
                                            const SimulationConfig& config);

/// Full coupled run over [0, T] with snapshots every output_interval.
/// A non-finite value aborts the run; the trajectory keeps what was recorded
/// and is marked failed.
Trajectory run(const SimulationConfig& config);

/// Identical numerics with the body removed and the un-blended initial datum.
Trajectory reference_run(const SimulationConfig& config);

std::vector<EnergyRecord> energy_report(const Trajectory& traj);

void write_energy_records(std::ostream& os, const std::vector<EnergyRecord>& records);
void write_trajectory_log(std::ostream& os, const Trajectory& traj);

}  // namespace sblab
