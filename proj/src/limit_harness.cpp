#include "sblab/limit_harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>
#include <stdexcept>

#include "sblab/ball.hpp"
#include "sblab/fft.hpp"
#include "sblab/field_io.hpp"
#include "sblab/interpolate.hpp"
#include "sblab/kernels.hpp"
#include "sblab/random_fields.hpp"
#include "sblab/stream_function.hpp"

namespace sblab {

FitResult fit_rate(std::span<const std::pair<double, double>> pairs) {
    std::vector<std::pair<double, double>> usable;
    int excluded = 0;
    for (const auto& [eps, value] : pairs) {
        if (!(eps > 0.0)) throw std::invalid_argument("fit_rate: epsilon must be positive");
        if (value == 0.0) {
            ++excluded;
            continue;
        }
        if (!(value > 0.0)) throw std::invalid_argument("fit_rate: values must be non-negative");
        usable.emplace_back(std::log(eps), std::log(value));
    }
    if (usable.size() < 4) throw std::invalid_argument("fit_rate: need at least 4 usable pairs");

    const double n = static_cast<double>(usable.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : usable) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (const auto& [x, y] : usable) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.used = static_cast<int>(usable.size());
    fit.excluded = excluded;
    if (usable.size() > 2) {
        double ss_res = 0.0;
        const double intercept = my - fit.slope * mx;
        for (const auto& [x, y] : usable) {
            const double r = y - (intercept + fit.slope * x);
            ss_res += r * r;
        }
        fit.stderr_ = std::sqrt(ss_res / (n - 2.0) / sxx);
    }
    return fit;
}

// ---------------------------------------------------------------------------
// weak residual
// ---------------------------------------------------------------------------

double WeakResidual::value() const {
    return std::abs(time_term + viscous_term + advective_term - initial_term) / normalization;
}

namespace {

// h'(t_s) by centered differences over the snapshot times
Vec3 body_velocity_fd(const Trajectory& traj, std::size_t s) {
    const auto& t = traj.times;
    const auto& b = traj.bodies;
    if (t.size() < 2) return {};
    if (s == 0) return (b[1].h - b[0].h) / (t[1] - t[0]);
    if (s + 1 == t.size()) return (b[s].h - b[s - 1].h) / (t[s] - t[s - 1]);
    return (b[s + 1].h - b[s - 1].h) / (t[s + 1] - t[s - 1]);
}

struct SnapshotIntegrals {
    double time = 0.0;      // int v . dphi_eps/dt
    double viscous = 0.0;   // int grad v : grad phi_eps
    double advective = 0.0; // int (v . grad v) . phi_eps
};

// gradient rows d_a v_b of a snapshot, via its spectrum
std::array<VectorField, 3> gradient_rows(const VectorField& v) {
    VectorSpectrum vh = to_spectrum(v);
    const Grid& g = v.grid;
    const std::size_t count = g.node_count();
    std::array<VectorField, 3> rows{VectorField(g), VectorField(g), VectorField(g)};
    std::vector<std::complex<double>> work(count);
    const Fft& fft = fft_for(g);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            kernels::parallel_nodes(count, [&](std::size_t n) {
                const Vec3 k = deriv_wavenumber(g, n);
                work[n] = std::complex<double>(0.0, 1.0) * k[a] * vh.comp[b][n];
            });
            fft.inverse(work, rows[a].comp[b]);
        }
    return rows;
}

}  // namespace

WeakResidual weak_residual(const Trajectory& traj, const TestField& phi,
                           const std::optional<CutoffFamily>& fam, double nu) {
    if (traj.snapshots.size() < 2) throw std::invalid_argument("weak_residual: need >= 2 snapshots");
    const Grid& grid = traj.snapshots.front().grid;
    require_same_grid(phi.spatial.grid, grid);
    const double T = traj.times.back();
    if (std::abs(phi.amplitude(T)) > 1e-12)
        throw std::invalid_argument("weak_residual: amplitude must vanish at the horizon");

    const VectorField& Phi = phi.spatial;
    const VectorField Psi = fam ? stream_function(Phi) : VectorField(grid);
    std::optional<BandLimitedEvaluator> psi_eval;
    if (fam) psi_eval.emplace(Psi);
    const std::array<VectorField, 3> grad_Phi = gradient_rows(Phi);

    const double phi_h2 = sobolev_norm(Phi, 2);
    double max_g = 0.0;
    for (double t : traj.times) max_g = std::max(max_g, std::abs(phi.amplitude(t)));

    const double cell = grid.spacing() * grid.spacing() * grid.spacing();
    const std::size_t count = grid.node_count();

    std::vector<SnapshotIntegrals> per_snapshot(traj.times.size());
    VectorField phi_eps0(grid);

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double t = traj.times[s];
        const double g = phi.amplitude(t);
        const double gdot = phi.amplitude_dt(t);
        const VectorField& v = traj.snapshots[s];

        VectorField phi_eps(grid), dphi_eps(grid);
        std::array<VectorField, 3> grad_phi_eps{VectorField(grid), VectorField(grid), VectorField(grid)};
        if (fam) {
            const Vec3 h = fam->center(t);
            const Vec3 psi_h = psi_eval->value(h);
            double gp[3][3];
            psi_eval->gradient(h, gp);
            Mat3 grad_psi_h;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) grad_psi_h.m[a][b] = gp[a][b];
            phi_eps = test_function_nodal(Phi, Psi, psi_h, *fam, t, g);
            dphi_eps = test_function_dt_nodal(Phi, Psi, psi_h, grad_psi_h, *fam, t, g, gdot,
                                              body_velocity_fd(traj, s));
            // grad phi_eps: g * grad Phi outside the cut-off ball, expansion inside
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    kernels::parallel_nodes(count, [&](std::size_t n) {
                        grad_phi_eps[a].comp[b][n] = g * grad_Phi[a].comp[b][n];
                    });
            BandLimitedEvaluator phi_eval(Phi);
            const CutoffProfile& prof = fam->profile;
            const double eps = fam->epsilon;
            for_each_ball_node(grid, h, 2.0 * eps, [&](std::size_t n, const Vec3& d, double r) {
                const double eta = prof.value(r / eps);
                Vec3 ge{};
                if (r > 0.0) {
                    const double dp = prof.deriv(r / eps);
                    if (dp != 0.0) ge = (dp / (eps * r)) * d;
                }
                // hessian of eta_eps in radial form
                double ha = 0.0, hb = 0.0;
                Vec3 rhat{};
                if (r > 0.0) {
                    const double rho = r / eps;
                    ha = prof.second(rho) / (eps * eps);
                    hb = prof.deriv(rho) / (eps * r);
                    rhat = d / r;
                }
                const int N = grid.n();
                const int i = static_cast<int>(n % static_cast<std::size_t>(N));
                const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
                const int kk = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
                const Vec3 x = grid.node(i, j, kk);
                const Vec3 phi_n{Phi.comp[0][n], Phi.comp[1][n], Phi.comp[2][n]};
                const Vec3 psi_eps_n = Vec3{Psi.comp[0][n], Psi.comp[1][n], Psi.comp[2][n]} - psi_h;
                double gpsi[3][3];
                psi_eval->gradient(x, gpsi);
                for (int a = 0; a < 3; ++a) {
                    const double rra = rhat[a];
                    const Vec3 hess_row{ha * rra * rhat.x + hb * ((a == 0) - rra * rhat.x),
                                        ha * rra * rhat.y + hb * ((a == 1) - rra * rhat.y),
                                        ha * rra * rhat.z + hb * ((a == 2) - rra * rhat.z)};
                    const Vec3 dpsi_a{gpsi[a][0], gpsi[a][1], gpsi[a][2]};
                    const Vec3 dphi_a{grad_Phi[a].comp[0][n], grad_Phi[a].comp[1][n],
                                      grad_Phi[a].comp[2][n]};
                    const Vec3 row = g * (eta * dphi_a + ge[a] * phi_n + cross(hess_row, psi_eps_n) +
                                          cross(ge, dpsi_a));
                    grad_phi_eps[a].comp[0][n] = row.x;
                    grad_phi_eps[a].comp[1][n] = row.y;
                    grad_phi_eps[a].comp[2][n] = row.z;
                }
            });
        } else {
            for (int b = 0; b < 3; ++b)
                kernels::parallel_nodes(count, [&](std::size_t n) {
                    phi_eps.comp[b][n] = g * Phi.comp[b][n];
                    dphi_eps.comp[b][n] = gdot * Phi.comp[b][n];
                });
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    kernels::parallel_nodes(count, [&](std::size_t n) {
                        grad_phi_eps[a].comp[b][n] = g * grad_Phi[a].comp[b][n];
                    });
        }
        if (s == 0) phi_eps0 = phi_eps;

        const std::array<VectorField, 3> grad_v = gradient_rows(v);
        const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
        std::vector<double> p_time(nblocks, 0.0), p_visc(nblocks, 0.0), p_adv(nblocks, 0.0);
        kernels::parallel_nodes(nblocks, [&](std::size_t bk) {
            const std::size_t lo = bk * kernels::kReduceBlock;
            const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
            double at = 0.0, av = 0.0, aa = 0.0;
            for (std::size_t n = lo; n < hi; ++n) {
                const Vec3 vn{v.comp[0][n], v.comp[1][n], v.comp[2][n]};
                const Vec3 pe{phi_eps.comp[0][n], phi_eps.comp[1][n], phi_eps.comp[2][n]};
                const Vec3 dpe{dphi_eps.comp[0][n], dphi_eps.comp[1][n], dphi_eps.comp[2][n]};
                at += dot(vn, dpe);
                Vec3 conv{};
                for (int a = 0; a < 3; ++a) {
                    const Vec3 gva{grad_v[a].comp[0][n], grad_v[a].comp[1][n], grad_v[a].comp[2][n]};
                    const Vec3 gpa{grad_phi_eps[a].comp[0][n], grad_phi_eps[a].comp[1][n],
                                   grad_phi_eps[a].comp[2][n]};
                    av += dot(gva, gpa);
                    conv += vn[a] * gva;  // (v . grad) v
                }
                aa += dot(conv, pe);
            }
            p_time[bk] = at;
            p_visc[bk] = av;
            p_adv[bk] = aa;
        });
        SnapshotIntegrals si;
        for (std::size_t bk = 0; bk < nblocks; ++bk) {
            si.time += p_time[bk];
            si.viscous += p_visc[bk];
            si.advective += p_adv[bk];
        }
        si.time *= cell;
        si.viscous *= cell;
        si.advective *= cell;
        per_snapshot[s] = si;
    }

    // trapezoid in time
    WeakResidual res;
    for (std::size_t s = 0; s + 1 < traj.times.size(); ++s) {
        const double w = 0.5 * (traj.times[s + 1] - traj.times[s]);
        res.time_term += -w * (per_snapshot[s].time + per_snapshot[s + 1].time);
        res.viscous_term += nu * w * (per_snapshot[s].viscous + per_snapshot[s + 1].viscous);
        res.advective_term += w * (per_snapshot[s].advective + per_snapshot[s + 1].advective);
    }
    // int v(0) . phi_eps(0)
    {
        const VectorField& v0 = traj.snapshots.front();
        double s0 = 0.0;
        for (int b = 0; b < 3; ++b) s0 += kernels::reduce_dot(v0.comp[b], phi_eps0.comp[b]);
        res.initial_term = s0 * cell;
    }
    res.normalization = std::max(phi_h2 * max_g, 1e-300);
    return res;
}

// ---------------------------------------------------------------------------
// Xi diagnostic
// ---------------------------------------------------------------------------

std::pair<double, double> xi_inner_product_paths(const VectorField& v, const VectorField& phi_eps) {
    require_same_grid(v.grid, phi_eps.grid);
    const double cell = v.grid.spacing() * v.grid.spacing() * v.grid.spacing();
    double nodal = 0.0;
    for (int c = 0; c < 3; ++c) nodal += kernels::reduce_dot(v.comp[c], phi_eps.comp[c]);
    nodal *= cell;

    const VectorSpectrum vh = to_spectrum(v);
    const VectorSpectrum ph = to_spectrum(phi_eps);
    const double L3 = v.grid.length() * v.grid.length() * v.grid.length();
    double spectral = 0.0;
    const std::size_t count = v.grid.node_count();
    for (std::size_t n = 0; n < count; ++n)
        for (int c = 0; c < 3; ++c)
            spectral += (std::conj(vh.comp[c][n]) * ph.comp[c][n]).real();
    spectral *= L3;
    return {nodal, spectral};
}

XiReport xi_diagnostic(const Trajectory& traj, std::span<const VectorField> probes,
                       const CutoffFamily& fam) {
    if (traj.times.size() < 8) throw std::invalid_argument("xi_diagnostic: need >= 8 snapshot times");
    if (probes.size() < 5) throw std::invalid_argument("xi_diagnostic: need >= 5 probe fields");
    const Grid& grid = traj.snapshots.front().grid;
    const double cell = grid.spacing() * grid.spacing() * grid.spacing();

    std::vector<double> h2(probes.size());
    std::vector<VectorField> psis;
    std::vector<BandLimitedEvaluator> evals;
    psis.reserve(probes.size());
    for (std::size_t j = 0; j < probes.size(); ++j) {
        h2[j] = sobolev_norm(probes[j], 2);
        if (!(h2[j] > 0.0)) throw std::invalid_argument("xi_diagnostic: probe has zero H^2 norm");
        psis.push_back(stream_function(probes[j]));
        evals.emplace_back(psis.back());
    }

    // P[s][j] = <Xi(t_s), phi_j>
    std::vector<std::vector<double>> P(traj.times.size(), std::vector<double>(probes.size(), 0.0));
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const double t = traj.times[s];
        const Vec3 h = fam.center(t);
        for (std::size_t j = 0; j < probes.size(); ++j) {
            const VectorField phi_eps =
                test_function_nodal(probes[j], psis[j], evals[j].value(h), fam, t);
            double ip = 0.0;
            for (int c = 0; c < 3; ++c)
                ip += kernels::reduce_dot(traj.snapshots[s].comp[c], phi_eps.comp[c]);
            P[s][j] = ip * cell;
        }
    }

    XiReport rep;
    for (std::size_t s = 0; s < traj.times.size(); ++s)
        for (std::size_t j = 0; j < probes.size(); ++j)
            rep.bound_sup = std::max(rep.bound_sup, std::abs(P[s][j]) / h2[j]);
    for (std::size_t s = 0; s < traj.times.size(); ++s)
        for (std::size_t t = s + 1; t < traj.times.size(); ++t) {
            double m = 0.0;
            for (std::size_t j = 0; j < probes.size(); ++j)
                m = std::max(m, std::abs(P[t][j] - P[s][j]) / h2[j]);
            const double dt4 = std::pow(traj.times[t] - traj.times[s], 0.25);
            rep.holder_sup = std::max(rep.holder_sup, m / dt4);
        }
    return rep;
}

CutoffFamily family_from_trajectory(const Trajectory& traj, double epsilon, const Grid& grid) {
    std::vector<double> times = traj.times;
    std::vector<Vec3> centers;
    centers.reserve(traj.bodies.size());
    for (const auto& b : traj.bodies) centers.push_back(b.h);
    auto center = [times, centers](double t) -> Vec3 {
        if (times.empty()) return {};
        if (t <= times.front()) return centers.front();
        if (t >= times.back()) return centers.back();
        auto it = std::upper_bound(times.begin(), times.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - times.begin());
        const std::size_t lo = hi - 1;
        const double w = (t - times[lo]) / (times[hi] - times[lo]);
        return (1.0 - w) * centers[lo] + w * centers[hi];
    };
    return CutoffFamily(epsilon, center, grid);
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

void SweepPlan::validate() const {
    base.validate();
    if (epsilons.size() < 4) throw std::invalid_argument("sweep: need >= 4 epsilon values");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw std::invalid_argument("sweep: epsilon schedule must decrease");
    const Grid g = base.grid();
    for (double e : epsilons)
        if (e < 2.0 * g.spacing())
            throw std::invalid_argument("sweep: epsilon under-resolved on the base grid");
    if (!(comparison.radius > 0.0) || !(comparison.radius < 0.5 * base.L))
        throw std::invalid_argument("sweep: comparison radius must be in (0, L/2)");
    // K must keep a margin from the body's initial position (origin)
    const double clearance = norm(g.min_image(comparison.center)) - comparison.radius;
    if (!(clearance > 2.0 * epsilons.front()))
        throw std::invalid_argument("sweep: comparison ball overlaps the body region");
    if (n_probes < 5) throw std::invalid_argument("sweep: need >= 5 probe fields");
}

namespace {

SweepRecord sweep_one(const SweepPlan& plan, double eps, const Trajectory& ref,
                      const std::vector<VectorField>& probes) {
    SweepRecord rec;
    rec.epsilon = eps;
    SimulationConfig cfg = plan.base;
    cfg.epsilon = eps;
    Trajectory traj = run(cfg);
    if (traj.failed || traj.times.size() != ref.times.size()) {
        rec.failed = true;
        return rec;
    }

    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        VectorField diff(traj.snapshots[s].grid);
        for (int c = 0; c < 3; ++c)
            kernels::parallel_nodes(diff.comp[c].size(), [&](std::size_t n) {
                diff.comp[c][n] = traj.snapshots[s].comp[c][n] - ref.snapshots[s].comp[c][n];
            });
        rec.distance = std::max(rec.distance, lebesgue_norm(diff, 2.0, plan.comparison));
    }
    for (const auto& d : traj.step_diags) {
        rec.slip = std::max(rec.slip, d.slip_l2);
        rec.max_momentum_defect = std::max(rec.max_momentum_defect, d.momentum_rel_defect);
    }
    for (const auto& b : traj.bodies) {
        rec.sup_speed = std::max(rec.sup_speed, norm(b.l));
        rec.sup_displacement =
            std::max(rec.sup_displacement, norm(b.h - traj.bodies.front().h));
    }
    rec.eps32_sup_speed = std::pow(eps, 1.5) * rec.sup_speed;
    rec.energy_initial = traj.energy.front().total();
    for (const auto& e : traj.energy)
        rec.energy_max_ratio = std::max(rec.energy_max_ratio,
                                        e.total() / std::max(rec.energy_initial, 1e-300));

    const CutoffFamily fam = family_from_trajectory(traj, eps, plan.base.grid());
    const XiReport xi = xi_diagnostic(traj, probes, fam);
    rec.holder_sup = xi.holder_sup;
    rec.xi_bound = xi.bound_sup;
    return rec;
}

}  // namespace

SweepReport run_sweep(const SweepPlan& plan, int jobs) {
    plan.validate();
    const Grid grid = plan.base.grid();

    std::vector<VectorField> probes;
    for (int j = 0; j < plan.n_probes; ++j)
        probes.push_back(random_solenoidal(grid, plan.probe_kmax, plan.base.seed + 1000 + j));

    Trajectory ref = reference_run(plan.base);
    if (ref.failed) throw std::runtime_error("sweep: reference run blew up");

    SweepReport report;
    report.records.resize(plan.epsilons.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < plan.epsilons.size(); ++i)
            report.records[i] = sweep_one(plan, plan.epsilons[i], ref, probes);
    } else {
        std::vector<std::future<SweepRecord>> futures;
        for (std::size_t i = 0; i < plan.epsilons.size(); ++i)
            futures.push_back(std::async(std::launch::async, [&, i] {
                return sweep_one(plan, plan.epsilons[i], ref, probes);
            }));
        for (std::size_t i = 0; i < plan.epsilons.size(); ++i) report.records[i] = futures[i].get();
    }

    std::vector<std::pair<double, double>> pairs;
    report.d_monotone = true;
    double prev = -1.0;
    for (const auto& r : report.records) {
        if (r.failed) continue;
        pairs.emplace_back(r.epsilon, r.distance);
        if (prev >= 0.0 && !(r.distance < prev)) report.d_monotone = false;
        prev = r.distance;
        report.holder_sup = std::max(report.holder_sup, r.holder_sup);
    }
    if (pairs.size() >= 4) {
        const FitResult fit = fit_rate(pairs);
        report.d_slope = fit.slope;
        report.d_slope_stderr = fit.stderr_;
    }
    return report;
}

void SweepReport::write(std::ostream& os) const {
    for (const auto& r : records) {
        os << "[epsilon=" << format_full(r.epsilon) << "]\n";
        if (r.failed) {
            os << "failed=true\n";
            continue;
        }
        os << "d=" << format_full(r.distance) << "\n"
           << "slip=" << format_full(r.slip) << "\n"
           << "sup_speed=" << format_full(r.sup_speed) << "\n"
           << "eps32_sup_speed=" << format_full(r.eps32_sup_speed) << "\n"
           << "sup_displacement=" << format_full(r.sup_displacement) << "\n"
           << "max_momentum_defect=" << format_full(r.max_momentum_defect) << "\n"
           << "energy_initial=" << format_full(r.energy_initial) << "\n"
           << "energy_max_ratio=" << format_full(r.energy_max_ratio) << "\n"
           << "holder_sup=" << format_full(r.holder_sup) << "\n"
           << "xi_bound=" << format_full(r.xi_bound) << "\n";
    }
    os << "d_slope=" << format_full(d_slope) << " d_monotone=" << (d_monotone ? "true" : "false")
       << " holder_sup=" << format_full(holder_sup) << "\n";
}

}  // namespace sblab
