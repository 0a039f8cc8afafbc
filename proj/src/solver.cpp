#include "sblab/solver.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "sblab/fft.hpp"
#include "sblab/field_io.hpp"
#include "sblab/kernels.hpp"
#include "sblab/norms.hpp"
#include "sblab/random_fields.hpp"

namespace sblab {

double SimulationConfig::body_density() const { return rho0 * std::pow(epsilon, -alpha); }

void SimulationConfig::validate() const {
    if (!(nu > 0.0)) throw std::invalid_argument("config: nu must be positive");
    if (!(L > 0.0)) throw std::invalid_argument("config: L must be positive");
    if (N < 8 || N % 2 != 0) throw std::invalid_argument("config: N must be even and >= 8");
    if (!(dt > 0.0)) throw std::invalid_argument("config: dt must be positive");
    if (!(T >= 0.0)) throw std::invalid_argument("config: T must be non-negative");
    if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("config: alpha must be non-negative");
    if (!(rho0 > 0.0)) throw std::invalid_argument("config: rho0 must be positive");
    if (!(lambda > 0.0)) throw std::invalid_argument("config: lambda must be positive");
    if (lambda > dt + 1e-15 * dt)
        throw std::invalid_argument("config: lambda must not exceed dt (stiff enforcement)");
    if (!(smoothing_width >= 1.0 && smoothing_width <= 3.0))
        throw std::invalid_argument("config: smoothing_width must be in [1, 3]");
    if (!(output_interval > 0.0))
        throw std::invalid_argument("config: output_interval must be positive");
    const double stride = output_interval / dt;
    if (std::abs(stride - std::round(stride)) > 1e-9 * stride)
        throw std::invalid_argument("config: output_interval must be a multiple of dt");
    if (initial_field_id != "taylor_green" && initial_field_id != "taylor_green_bump" &&
        initial_field_id != "gaussian_vortex_ring" && initial_field_id != "random_band_limited")
        throw std::invalid_argument("config: unknown initial_field_id '" + initial_field_id + "'");
}

namespace {

void clean_spectrum(VectorSpectrum& s) {
    truncate_two_thirds(s);
    project_solenoidal(s);
}

VectorField taylor_green(const Grid& g, double amplitude) {
    VectorField u(g);
    const double kk = 2.0 * std::numbers::pi / g.length();
    const int N = g.n();
    kernels::parallel_nodes(g.node_count(), [&](std::size_t n) {
        const int i = static_cast<int>(n % static_cast<std::size_t>(N));
        const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
        const Vec3 x = g.node(i, j, 0);
        u.comp[0][n] = amplitude * std::sin(kk * x.x) * std::cos(kk * x.y);
        u.comp[1][n] = -amplitude * std::cos(kk * x.x) * std::sin(kk * x.y);
    });
    return u;
}

}  // namespace

// curl of a Gaussian-blob vector potential A = (0, 0, a exp(-|x-c|^2 / 2 sigma^2))
VectorField gaussian_vortex_blob(const Grid& g, const Vec3& c, double sigma, double amplitude) {
    ScalarField az(g);
    const int N = g.n();
    kernels::parallel_nodes(g.node_count(), [&](std::size_t n) {
        const int i = static_cast<int>(n % static_cast<std::size_t>(N));
        const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
        const int k = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
        const Vec3 d = g.min_image(g.node(i, j, k) - c);
        az.values[n] = amplitude * std::exp(-dot(d, d) / (2.0 * sigma * sigma));
    });
    // u = curl(0, 0, az) = (d_y az, -d_x az, 0)
    VectorField a(g);
    a.comp[2] = az.values;
    return curl(a);
}

// poloidal vortex ring: vector potential a exp(-((s-R0)^2+z^2)/2 sigma^2) e_phi
VectorField gaussian_vortex_ring(const Grid& g, const Vec3& c, double ring_radius, double sigma,
                                 double amplitude) {
    VectorField a(g);
    const int N = g.n();
    kernels::parallel_nodes(g.node_count(), [&](std::size_t n) {
        const int i = static_cast<int>(n % static_cast<std::size_t>(N));
        const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
        const int k = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
        const Vec3 d = g.min_image(g.node(i, j, k) - c);
        const double s = std::sqrt(d.x * d.x + d.y * d.y);
        const double arg = ((s - ring_radius) * (s - ring_radius) + d.z * d.z) / (2.0 * sigma * sigma);
        const double mag = amplitude * std::exp(-arg);
        if (s > 1e-12) {
            a.comp[0][n] = -mag * d.y / s;
            a.comp[1][n] = mag * d.x / s;
        }
    });
    return curl(a);
}

VectorField make_base_field(const SimulationConfig& config) {
    const Grid g = config.grid();
    VectorField u(g);
    if (config.initial_field_id == "taylor_green") {
        u = taylor_green(g, 1.0);
    } else if (config.initial_field_id == "taylor_green_bump") {
        u = taylor_green(g, 1.0);
        const Vec3 c{-0.25 * g.length(), 0.15 * g.length(), 0.1 * g.length()};
        VectorField bump = gaussian_vortex_blob(g, c, g.length() / 16.0, 0.5);
        for (int d = 0; d < 3; ++d)
            kernels::axpy(1.0, bump.comp[d], u.comp[d]);
    } else if (config.initial_field_id == "gaussian_vortex_ring") {
        u = gaussian_vortex_ring(g, Vec3{}, g.length() / 6.0, g.length() / 24.0, 1.0);
    } else if (config.initial_field_id == "random_band_limited") {
        u = random_solenoidal(g, 4, config.seed);
        const double sup = lebesgue_norm(u, std::numeric_limits<double>::infinity());
        if (sup > 0.0)
            for (auto& c : u.comp)
                kernels::scale(1.0 / sup, c);
    } else {
        throw std::invalid_argument("config: unknown initial_field_id '" + config.initial_field_id + "'");
    }
    VectorSpectrum s = to_spectrum(u);
    for (int d = 0; d < 3; ++d) s.comp[d][0] = 0.0;  // zero mean
    clean_spectrum(s);
    return to_physical(s);
}

std::pair<VectorField, RigidBodyState> make_initial_data(const SimulationConfig& config) {
    config.validate();
    const Grid g = config.grid();
    VectorField base = make_base_field(config);
    RigidBodyState body =
        make_body(Shape::sphere(config.epsilon), config.body_density(), Vec3{}, config.l0, config.omega0);
    const ScalarField chi = indicator(body.shape, body, g, config.smoothing_width);
    const VectorField rigid = body_velocity_field(body, g);
    VectorField blended(g);
    for (int d = 0; d < 3; ++d)
        kernels::parallel_nodes(g.node_count(), [&](std::size_t n) {
            const double c = chi.values[n];
            blended.comp[d][n] = (1.0 - c) * base.comp[d][n] + c * rigid.comp[d][n];
        });
    VectorSpectrum s = to_spectrum(blended);
    for (int d = 0; d < 3; ++d) s.comp[d][0] = 0.0;
    clean_spectrum(s);
    return {to_physical(s), body};
}

// ---------------------------------------------------------------------------
// time stepper
// ---------------------------------------------------------------------------

struct CoupledSolver::Impl {
    SimulationConfig cfg;
    Grid grid;
    bool with_body;
    const Fft& fft;
    double t = 0.0;

    VectorSpectrum u_hat;
    VectorField u_phys;          // kept in sync with u_hat after every step
    RigidBodyState body_state;
    double dissipation = 0.0;    // accumulated 4 nu int ||D||^2
    StepDiagnostics diag;

    Impl(const SimulationConfig& c, bool wb)
        : cfg(c), grid(c.grid()), with_body(wb), fft(fft_for(grid)), u_hat(grid), u_phys(grid) {
        cfg.validate();
        if (with_body) {
            auto [u0, b0] = make_initial_data(cfg);
            u_phys = u0;
            body_state = b0;
        } else {
            u_phys = make_base_field(cfg);
            body_state = make_body(Shape::sphere(cfg.epsilon), cfg.body_density(), Vec3{}, Vec3{}, Vec3{});
        }
        u_hat = to_spectrum(u_phys);
        const double sup = lebesgue_norm(u_phys, std::numeric_limits<double>::infinity());
        if (sup > 0.0 && cfg.dt > 0.5 * grid.spacing() / sup)
            throw std::invalid_argument("config: dt violates the stability bound 0.5*spacing/max|u|");
    }

    // -(u . grad) u, de-aliased, zero-mean
    VectorSpectrum advection(const VectorSpectrum& w_hat) const {
        const std::size_t count = grid.node_count();
        VectorField w = to_physical(w_hat);
        VectorField adv(grid);
        std::vector<std::complex<double>> dwork(count);
        std::vector<double> dphys(count);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                // d_a w_b
                kernels::parallel_nodes(count, [&](std::size_t n) {
                    const Vec3 k = deriv_wavenumber(grid, n);
                    dwork[n] = std::complex<double>(0.0, 1.0) * k[a] * w_hat.comp[b][n];
                });
                fft.inverse(dwork, dphys);
                kernels::parallel_nodes(count, [&](std::size_t n) {
                    adv.comp[b][n] -= w.comp[a][n] * dphys[n];
                });
            }
        }
        VectorSpectrum adv_hat = to_spectrum(adv);
        truncate_two_thirds(adv_hat);
        for (int d = 0; d < 3; ++d) adv_hat.comp[d][0] = 0.0;
        return adv_hat;
    }

    void check_finite(const VectorField& v) const {
        if (!v.all_finite())
            throw std::runtime_error("blow-up at t=" + format_full(t));
    }

    void step() {
        const std::size_t count = grid.node_count();
        const double dt = cfg.dt;

        // (a) explicit advection, Heun RK2, projected after each substep
        VectorSpectrum n1 = advection(u_hat);
        VectorSpectrum stage(grid);
        for (int d = 0; d < 3; ++d)
            kernels::parallel_nodes(count, [&](std::size_t n) {
                stage.comp[d][n] = u_hat.comp[d][n] + dt * n1.comp[d][n];
            });
        project_solenoidal(stage);
        VectorSpectrum n2 = advection(stage);
        for (int d = 0; d < 3; ++d)
            kernels::parallel_nodes(count, [&](std::size_t n) {
                u_hat.comp[d][n] += 0.5 * dt * (n1.comp[d][n] + n2.comp[d][n]);
            });
        project_solenoidal(u_hat);

        // (b) exact spectral diffusion
        apply_heat(u_hat, cfg.nu * dt);

        // (c) implicit nodewise penalization + momentum exchange bookkeeping
        Vec3 force{}, torque{};
        double slip_sq = 0.0;
        diag.momentum_rel_defect = 0.0;
        if (with_body) {
            VectorField u = to_physical(u_hat);
            const ScalarField chi = indicator(body_state.shape, body_state, grid, cfg.smoothing_width);
            const VectorField ub = body_velocity_field(body_state, grid);
            const double c = dt / cfg.lambda;
            const double cell = grid.spacing() * grid.spacing() * grid.spacing();

            Vec3 mom_before{}, mom_after{};
            for (int d = 0; d < 3; ++d) mom_before[d] = kernels::reduce_sum(u.comp[d]) * cell;

            // u_new = (u + c chi u_b) / (1 + c chi), then S = chi (u_new - u_b)
            const int N = grid.n();
            const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
            std::vector<double> pf(nblocks * 3, 0.0), pt(nblocks * 3, 0.0), ps(nblocks, 0.0);
            kernels::parallel_nodes(nblocks, [&](std::size_t bk) {
                const std::size_t lo = bk * kernels::kReduceBlock;
                const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
                Vec3 f{}, tq{};
                double s2 = 0.0;
                for (std::size_t n = lo; n < hi; ++n) {
                    const double x = chi.values[n];
                    if (x == 0.0) continue;
                    const Vec3 un{u.comp[0][n], u.comp[1][n], u.comp[2][n]};
                    const Vec3 bn{ub.comp[0][n], ub.comp[1][n], ub.comp[2][n]};
                    const Vec3 unew = (un + (c * x) * bn) / (1.0 + c * x);
                    u.comp[0][n] = unew.x;
                    u.comp[1][n] = unew.y;
                    u.comp[2][n] = unew.z;
                    const Vec3 sl = x * (unew - bn);
                    f += sl;
                    const int i = static_cast<int>(n % static_cast<std::size_t>(N));
                    const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
                    const int kk = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
                    const Vec3 r = grid.min_image(grid.node(i, j, kk) - body_state.h);
                    tq += cross(r, sl);
                    s2 += dot(sl, sl);
                }
                for (int d = 0; d < 3; ++d) {
                    pf[bk * 3 + d] = f[d];
                    pt[bk * 3 + d] = tq[d];
                }
                ps[bk] = s2;
            });
            for (std::size_t bk = 0; bk < nblocks; ++bk) {
                for (int d = 0; d < 3; ++d) {
                    force[d] += pf[bk * 3 + d];
                    torque[d] += pt[bk * 3 + d];
                }
                slip_sq += ps[bk];
            }
            force *= cell / cfg.lambda;
            torque *= cell / cfg.lambda;
            slip_sq *= cell;

            for (int d = 0; d < 3; ++d) mom_after[d] = kernels::reduce_sum(u.comp[d]) * cell;

            // (e) body update with the opposite of the fluid's momentum change
            const RigidBodyState next = advance_body(body_state, force, torque, dt);
            const Vec3 fluid_dp = mom_after - mom_before;
            const Vec3 body_dp = next.mass * (next.l - body_state.l);
            const double scale =
                norm(fluid_dp) + norm(body_dp) + norm(mom_before) + 1e-300;
            diag.momentum_rel_defect = norm(fluid_dp + body_dp) / scale;
            body_state = next;

            u_hat = to_spectrum(u);
        }

        // (d) Leray projection
        project_solenoidal(u_hat);
        u_phys = to_physical(u_hat);
        check_finite(u_phys);

        t += dt;
        diag.t = t;
        diag.slip_l2 = std::sqrt(slip_sq);
        diag.max_abs_u = lebesgue_norm(u_phys, std::numeric_limits<double>::infinity());

        // accumulate 4 nu ||D(u)||^2 dt = 2 nu ||grad u||^2 dt (u solenoidal)
        dissipation += 2.0 * cfg.nu * dt * grad_l2_sq();
    }

    double grad_l2_sq() const {
        const double g = grad_sobolev_norm_from_spectrum();
        return g;
    }

    double grad_sobolev_norm_from_spectrum() const {
        const std::size_t count = grid.node_count();
        const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
        std::vector<double> partial(nblocks, 0.0);
        kernels::parallel_nodes(nblocks, [&](std::size_t b) {
            const std::size_t lo = b * kernels::kReduceBlock;
            const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
            double s = 0.0;
            for (std::size_t n = lo; n < hi; ++n) {
                const Vec3 k = full_wavenumber(grid, n);
                const double k2 = dot(k, k);
                for (int d = 0; d < 3; ++d) s += k2 * std::norm(u_hat.comp[d][n]);
            }
            partial[b] = s;
        });
        double sum = 0.0;
        for (double p : partial) sum += p;
        const double L3 = grid.length() * grid.length() * grid.length();
        return L3 * sum;
    }

    EnergyRecord energy() const {
        EnergyRecord rec;
        rec.t = t;
        rec.dissipation_integral = dissipation;
        const double cell = grid.spacing() * grid.spacing() * grid.spacing();
        if (with_body) {
            const ScalarField chi = indicator(body_state.shape, body_state, grid, cfg.smoothing_width);
            const std::size_t count = grid.node_count();
            const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
            std::vector<double> partial(nblocks, 0.0);
            kernels::parallel_nodes(nblocks, [&](std::size_t b) {
                const std::size_t lo = b * kernels::kReduceBlock;
                const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
                double s = 0.0;
                for (std::size_t n = lo; n < hi; ++n) {
                    const double w = 1.0 - chi.values[n];
                    if (w <= 0.0) continue;
                    double m2 = 0.0;
                    for (int d = 0; d < 3; ++d) m2 += u_phys.comp[d][n] * u_phys.comp[d][n];
                    s += w * m2;
                }
                partial[b] = s;
            });
            double sum = 0.0;
            for (double p : partial) sum += p;
            rec.fluid_kinetic = sum * cell;
            rec.body_translational = body_state.mass * dot(body_state.l, body_state.l);
            rec.body_rotational = body_state.angular_energy();
        } else {
            double sum = 0.0;
            for (int d = 0; d < 3; ++d) sum += kernels::reduce_dot(u_phys.comp[d], u_phys.comp[d]);
            rec.fluid_kinetic = sum * cell;
        }
        return rec;
    }
};

CoupledSolver::CoupledSolver(const SimulationConfig& config, bool with_body)
    : impl_(std::make_unique<Impl>(config, with_body)) {}
CoupledSolver::~CoupledSolver() = default;

void CoupledSolver::step() { impl_->step(); }
double CoupledSolver::time() const { return impl_->t; }
const RigidBodyState& CoupledSolver::body() const { return impl_->body_state; }
bool CoupledSolver::has_body() const { return impl_->with_body; }
VectorField CoupledSolver::velocity() const { return impl_->u_phys; }
const SimulationConfig& CoupledSolver::config() const { return impl_->cfg; }
EnergyRecord CoupledSolver::energy_record() const { return impl_->energy(); }
const StepDiagnostics& CoupledSolver::last_diagnostics() const { return impl_->diag; }

void CoupledSolver::set_state(const VectorField& u, const RigidBodyState& body) {
    require_same_grid(u.grid, impl_->grid);
    impl_->u_phys = u;
    impl_->u_hat = to_spectrum(u);
    impl_->body_state = body;
}

std::pair<VectorField, RigidBodyState> step(const VectorField& u, const RigidBodyState& body,
                                            const SimulationConfig& config) {
    CoupledSolver solver(config, true);
    solver.set_state(u, body);
    solver.step();
    return {solver.velocity(), solver.body()};
}

namespace {

Trajectory run_impl(const SimulationConfig& config, bool with_body) {
    config.validate();
    Trajectory traj;
    traj.has_body = with_body;
    CoupledSolver solver(config, with_body);

    const long long nsteps = std::llround(config.T / config.dt);
    const long long stride = std::max<long long>(1, std::llround(config.output_interval / config.dt));

    traj.times.push_back(0.0);
    traj.snapshots.push_back(solver.velocity());
    traj.bodies.push_back(solver.body());
    traj.energy.push_back(solver.energy_record());

    for (long long s = 1; s <= nsteps; ++s) {
        try {
            solver.step();
        } catch (const std::runtime_error&) {
            traj.failed = true;
            traj.failure_time = solver.time();
            return traj;
        }
        traj.energy.push_back(solver.energy_record());
        traj.step_diags.push_back(solver.last_diagnostics());
        if (s % stride == 0 || s == nsteps) {
            traj.times.push_back(solver.time());
            traj.snapshots.push_back(solver.velocity());
            traj.bodies.push_back(solver.body());
        }
    }
    return traj;
}

}  // namespace

Trajectory run(const SimulationConfig& config) { return run_impl(config, true); }
Trajectory reference_run(const SimulationConfig& config) { return run_impl(config, false); }

std::vector<EnergyRecord> energy_report(const Trajectory& traj) { return traj.energy; }

void write_energy_records(std::ostream& os, const std::vector<EnergyRecord>& records) {
    os << "# t total fluid body_trans body_rot dissipation\n";
    for (const auto& r : records)
        os << format_full(r.t) << " " << format_full(r.total()) << " " << format_full(r.fluid_kinetic)
           << " " << format_full(r.body_translational) << " " << format_full(r.body_rotational) << " "
           << format_full(r.dissipation_integral) << "\n";
}

void write_trajectory_log(std::ostream& os, const Trajectory& traj) {
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        os << trajectory_record(traj.times[i], traj.bodies[i]) << "\n";
}

}  // namespace sblab
