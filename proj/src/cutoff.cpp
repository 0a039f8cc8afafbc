#include "sblab/cutoff.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sblab/ball.hpp"
#include "sblab/field_io.hpp"
#include "sblab/interpolate.hpp"
#include "sblab/kernels.hpp"
#include "sblab/norms.hpp"
#include "sblab/regression.hpp"
#include "sblab/spectral_ops.hpp"
#include "sblab/stream_function.hpp"

namespace sblab {

namespace {

// degree-9 smoothstep and derivatives on [0, 1]
inline double smooth9(double t) {
    return ((((70.0 * t - 315.0) * t + 540.0) * t - 420.0) * t + 126.0) * t * t * t * t * t;
}
inline double smooth9_d(double t) {
    const double u = t * (1.0 - t);
    return 630.0 * u * u * u * u;
}
inline double smooth9_dd(double t) {
    const double u = t * (1.0 - t);
    return 2520.0 * u * u * u * (1.0 - 2.0 * t);
}

void require_resolved(bool ok) {
    if (!ok) throw std::invalid_argument("cutoff under-resolved");
}

Vec3 node_of(const Grid& g, std::size_t n) {
    const int N = g.n();
    const int i = static_cast<int>(n % static_cast<std::size_t>(N));
    const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
    const int k = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
    return g.node(i, j, k);
}

}  // namespace

double CutoffProfile::value(double r) const {
    if (r <= 1.5) return 0.0;
    if (r >= 2.0) return 1.0;
    return smooth9(2.0 * (r - 1.5));
}

double CutoffProfile::deriv(double r) const {
    if (r <= 1.5 || r >= 2.0) return 0.0;
    return 2.0 * smooth9_d(2.0 * (r - 1.5));
}

double CutoffProfile::second(double r) const {
    if (r <= 1.5 || r >= 2.0) return 0.0;
    return 4.0 * smooth9_dd(2.0 * (r - 1.5));
}

CutoffFamily::CutoffFamily(double eps, std::function<Vec3(double)> center_trajectory, const Grid& g)
    : epsilon(eps), center(std::move(center_trajectory)), grid(g) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("cutoff: epsilon must be positive");
    if (!(epsilon <= g.length() / 8.0)) throw std::invalid_argument("cutoff: epsilon must be <= L/8");
    if (!center) throw std::invalid_argument("cutoff: missing center trajectory");
}

namespace {

ScalarField eval_values(const CutoffFamily& fam, double t) {
    ScalarField out(fam.grid);
    const Vec3 h = fam.center(t);
    const double eps = fam.epsilon;
    kernels::parallel_nodes(out.values.size(), [&](std::size_t n) {
        const double r = fam.grid.periodic_distance(node_of(fam.grid, n), h);
        out.values[n] = fam.profile.value(r / eps);
    });
    return out;
}

// analytic grad eta_eps at displacement d from the center
inline Vec3 grad_eta_at(const CutoffProfile& p, double eps, const Vec3& d, double r) {
    if (r == 0.0) return {};
    const double dp = p.deriv(r / eps);
    if (dp == 0.0) return {};
    return (dp / (eps * r)) * d;
}

// analytic hessian of eta_eps; returns row a applied later via symmetric form
struct HessEta {
    double a = 0.0;  // P'' / eps^2
    double b = 0.0;  // P' / (eps * r)
    Vec3 rhat;
    bool zero = true;

    static HessEta at(const CutoffProfile& p, double eps, const Vec3& d, double r) {
        HessEta h;
        if (r == 0.0) return h;
        const double rho = r / eps;
        const double dp = p.deriv(rho);
        const double ddp = p.second(rho);
        if (dp == 0.0 && ddp == 0.0) return h;
        h.a = ddp / (eps * eps);
        h.b = dp / (eps * r);
        h.rhat = d / r;
        h.zero = false;
        return h;
    }

    double entry(int i, int j) const {
        if (zero) return 0.0;
        const double rr = rhat[i] * rhat[j];
        return a * rr + b * ((i == j ? 1.0 : 0.0) - rr);
    }

    Vec3 apply(const Vec3& v) const {
        if (zero) return {};
        const double rv = dot(rhat, v);
        return a * rv * rhat + b * (v - rv * rhat);
    }

    double frobenius() const {
        if (zero) return 0.0;
        // eigenvalues a (radial) and b (twice, tangential)
        return std::sqrt(a * a + 2.0 * b * b);
    }
};

}  // namespace

ScalarField evaluate_cutoff(const CutoffFamily& fam, double t) {
    require_resolved(fam.field_resolvable());
    return eval_values(fam, t);
}

ScalarField cutoff_nodal(const CutoffFamily& fam, double t) {
    require_resolved(fam.sample_resolvable());
    return eval_values(fam, t);
}

VectorField cutoff_gradient_nodal(const CutoffFamily& fam, double t) {
    require_resolved(fam.sample_resolvable());
    VectorField out(fam.grid);
    const Vec3 h = fam.center(t);
    for_each_ball_node(fam.grid, h, 2.0 * fam.epsilon, [&](std::size_t n, const Vec3& d, double r) {
        const Vec3 g = grad_eta_at(fam.profile, fam.epsilon, d, r);
        out.comp[0][n] = g.x;
        out.comp[1][n] = g.y;
        out.comp[2][n] = g.z;
    });
    return out;
}

SymmetricTensorField cutoff_hessian_nodal(const CutoffFamily& fam, double t) {
    require_resolved(fam.sample_resolvable());
    SymmetricTensorField out(fam.grid);
    const Vec3 h = fam.center(t);
    for_each_ball_node(fam.grid, h, 2.0 * fam.epsilon, [&](std::size_t n, const Vec3& d, double r) {
        const HessEta he = HessEta::at(fam.profile, fam.epsilon, d, r);
        out.comp[SymmetricTensorField::XX][n] = he.entry(0, 0);
        out.comp[SymmetricTensorField::YY][n] = he.entry(1, 1);
        out.comp[SymmetricTensorField::ZZ][n] = he.entry(2, 2);
        out.comp[SymmetricTensorField::XY][n] = he.entry(0, 1);
        out.comp[SymmetricTensorField::XZ][n] = he.entry(0, 2);
        out.comp[SymmetricTensorField::YZ][n] = he.entry(1, 2);
    });
    return out;
}

VectorField make_test_function(const VectorField& phi, const CutoffFamily& fam, double t) {
    require_same_grid(phi.grid, fam.grid);
    require_resolved(fam.field_resolvable());
    const VectorField psi = stream_function(phi);
    const VectorField psi_eps = modified_stream_function(psi, fam.center(t));
    const ScalarField eta = eval_values(fam, t);
    VectorField product(fam.grid);
    for (int c = 0; c < 3; ++c)
        kernels::parallel_nodes(product.comp[c].size(), [&](std::size_t n) {
            product.comp[c][n] = eta.values[n] * psi_eps.comp[c][n];
        });
    return curl(product);
}

VectorField test_function_nodal(const VectorField& Phi, const VectorField& Psi, const Vec3& Psi_at_h,
                                const CutoffFamily& fam, double t, double g) {
    require_same_grid(Phi.grid, fam.grid);
    require_resolved(fam.sample_resolvable());
    const Vec3 h = fam.center(t);
    const double eps = fam.epsilon;
    VectorField out(fam.grid);
    // outside B(h, 2eps): eta = 1, grad eta = 0 -> phi_eps = g * Phi
    for (int c = 0; c < 3; ++c)
        kernels::parallel_nodes(out.comp[c].size(),
                                [&](std::size_t n) { out.comp[c][n] = g * Phi.comp[c][n]; });
    for_each_ball_node(fam.grid, h, 2.0 * eps, [&](std::size_t n, const Vec3& d, double r) {
        const double eta = fam.profile.value(r / eps);
        const Vec3 ge = grad_eta_at(fam.profile, eps, d, r);
        const Vec3 phi_n{Phi.comp[0][n], Phi.comp[1][n], Phi.comp[2][n]};
        const Vec3 psi_eps_n = Vec3{Psi.comp[0][n], Psi.comp[1][n], Psi.comp[2][n]} - Psi_at_h;
        const Vec3 v = g * (eta * phi_n + cross(ge, psi_eps_n));
        out.comp[0][n] = v.x;
        out.comp[1][n] = v.y;
        out.comp[2][n] = v.z;
    });
    return out;
}

VectorField test_function_dt_nodal(const VectorField& Phi, const VectorField& Psi, const Vec3& Psi_at_h,
                                   const Mat3& grad_Psi_at_h, const CutoffFamily& fam, double t,
                                   double g, double gdot, const Vec3& hdot) {
    require_same_grid(Phi.grid, fam.grid);
    require_resolved(fam.sample_resolvable());
    const Vec3 h = fam.center(t);
    const double eps = fam.epsilon;
    // d/dt Psi(h(t)) with (grad)_{ab} = d_a Psi_b
    const Vec3 dPsih = grad_Psi_at_h.transpose() * hdot;

    VectorField out(fam.grid);
    for (int c = 0; c < 3; ++c)
        kernels::parallel_nodes(out.comp[c].size(),
                                [&](std::size_t n) { out.comp[c][n] = gdot * Phi.comp[c][n]; });
    for_each_ball_node(fam.grid, h, 2.0 * eps, [&](std::size_t n, const Vec3& d, double r) {
        const double eta = fam.profile.value(r / eps);
        const Vec3 ge = grad_eta_at(fam.profile, eps, d, r);
        const HessEta he = HessEta::at(fam.profile, eps, d, r);
        const Vec3 phi_n{Phi.comp[0][n], Phi.comp[1][n], Phi.comp[2][n]};
        const Vec3 psi_eps_n = Vec3{Psi.comp[0][n], Psi.comp[1][n], Psi.comp[2][n]} - Psi_at_h;
        const double eta_dot = -dot(ge, hdot);
        const Vec3 grad_eta_dot = -he.apply(hdot);
        const Vec3 v = gdot * (eta * phi_n + cross(ge, psi_eps_n)) +
                       g * (eta_dot * phi_n + cross(grad_eta_dot, psi_eps_n) - cross(ge, dPsih));
        out.comp[0][n] = v.x;
        out.comp[1][n] = v.y;
        out.comp[2][n] = v.z;
    });
    return out;
}

double test_function_identity_error(const VectorField& phi, const CutoffFamily& fam, double t) {
    const VectorField curl_route = make_test_function(phi, fam, t);
    const VectorField psi = stream_function(phi);
    BandLimitedEvaluator psi_eval(psi);
    const VectorField expansion = test_function_nodal(phi, psi, psi_eval.value(fam.center(t)), fam, t);
    VectorField diff(phi.grid);
    for (int c = 0; c < 3; ++c)
        kernels::parallel_nodes(diff.comp[c].size(), [&](std::size_t n) {
            diff.comp[c][n] = curl_route.comp[c][n] - expansion.comp[c][n];
        });
    const double base = lebesgue_norm(expansion, 2.0);
    return base > 0.0 ? lebesgue_norm(diff, 2.0) / base : lebesgue_norm(diff, 2.0);
}

namespace {

void check_schedule(const Grid& grid, std::span<const double> epsilons) {
    if (epsilons.size() < 4)
        throw std::invalid_argument("scaling measurement: need at least 4 epsilon values");
    for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
        if (!(epsilons[i] > epsilons[i + 1]))
            throw std::invalid_argument("scaling measurement: epsilon schedule must decrease");
    for (double e : epsilons) {
        if (!(e <= grid.length() / 8.0))
            throw std::invalid_argument("scaling measurement: epsilon must be <= L/8");
        require_resolved(e >= grid.spacing());
    }
}

}  // namespace

ScalingReport measure_cutoff_scalings(const CutoffProfile& profile, const Grid& grid, const Vec3& center,
                                      std::span<const double> epsilons, std::span<const double> qs) {
    check_schedule(grid, epsilons);
    const double cell = grid.spacing() * grid.spacing() * grid.spacing();

    struct Norms {
        std::vector<double> eta_minus_one, grad, hess;
    };
    std::vector<Norms> per_q(qs.size());
    for (auto& n : per_q) {
        n.eta_minus_one.resize(epsilons.size());
        n.grad.resize(epsilons.size());
        n.hess.resize(epsilons.size());
    }

    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const double eps = epsilons[e];
        std::vector<double> sum_eta(qs.size(), 0.0), sum_grad(qs.size(), 0.0), sum_hess(qs.size(), 0.0);
        for_each_ball_node(grid, center, 2.0 * eps, [&](std::size_t, const Vec3& d, double r) {
            const double one_minus_eta = 1.0 - profile.value(r / eps);
            const double grad_mag = norm(grad_eta_at(profile, eps, d, r));
            const double hess_mag = HessEta::at(profile, eps, d, r).frobenius();
            for (std::size_t iq = 0; iq < qs.size(); ++iq) {
                const double q = qs[iq];
                if (one_minus_eta > 0.0) sum_eta[iq] += std::pow(one_minus_eta, q);
                if (grad_mag > 0.0) sum_grad[iq] += std::pow(grad_mag, q);
                if (hess_mag > 0.0) sum_hess[iq] += std::pow(hess_mag, q);
            }
        });
        for (std::size_t iq = 0; iq < qs.size(); ++iq) {
            const double q = qs[iq];
            per_q[iq].eta_minus_one[e] = std::pow(sum_eta[iq] * cell, 1.0 / q);
            per_q[iq].grad[e] = std::pow(sum_grad[iq] * cell, 1.0 / q);
            per_q[iq].hess[e] = std::pow(sum_hess[iq] * cell, 1.0 / q);
        }
    }

    ScalingReport report;
    auto add_fit = [&](const std::string& name, double q, const std::vector<double>& norms,
                       double theory) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t e = 0; e < epsilons.size(); ++e) pairs.emplace_back(epsilons[e], norms[e]);
        const FitResult fit = fit_rate(pairs);
        report.entries.push_back({name, q, fit.slope, fit.stderr_, theory});
    };
    for (std::size_t iq = 0; iq < qs.size(); ++iq) {
        const double q = qs[iq];
        add_fit("eta_minus_one", q, per_q[iq].eta_minus_one, 3.0 / q);
        add_fit("grad_eta", q, per_q[iq].grad, (3.0 - q) / q);
        add_fit("hess_eta", q, per_q[iq].hess, (3.0 - 2.0 * q) / q);
    }
    return report;
}

TestFnReport measure_testfn_convergence(const VectorField& phi, const Grid& grid, const Vec3& center,
                                        std::span<const double> epsilons) {
    require_same_grid(phi.grid, grid);
    check_schedule(grid, epsilons);

    const VectorField psi = stream_function(phi);
    BandLimitedEvaluator phi_eval(phi);
    BandLimitedEvaluator psi_eval(psi);
    const Vec3 psi_h = psi_eval.value(center);

    const double phi_h2 = sobolev_norm(phi, 2);
    const double phi_l2_sq = lebesgue_norm(phi, 2.0);
    const double grad_phi_sq = grad_sobolev_norm(phi, 0);  // ||grad phi||_{L^2}
    const double cell = grid.spacing() * grid.spacing() * grid.spacing();

    std::vector<double> l2_err(epsilons.size()), h1_err(epsilons.size());
    TestFnReport report;
    report.h1_ratio.resize(epsilons.size());

    const CutoffProfile profile;
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
        const double eps = epsilons[e];
        double s_diff2 = 0.0;      // int |phi_eps - phi|^2
        double s_gdiff2 = 0.0;     // int |grad(phi_eps - phi)|^2
        double s_cross = 0.0;      // int phi . diff
        double s_gcross = 0.0;     // int grad phi : grad diff
        for_each_ball_node(grid, center, 2.0 * eps, [&](std::size_t n, const Vec3& d, double r) {
            const double eta = profile.value(r / eps);
            const Vec3 ge = grad_eta_at(profile, eps, d, r);
            const HessEta he = HessEta::at(profile, eps, d, r);
            const Vec3 x = node_of(grid, n);
            const Vec3 phi_n{phi.comp[0][n], phi.comp[1][n], phi.comp[2][n]};
            const Vec3 psi_eps_n = Vec3{psi.comp[0][n], psi.comp[1][n], psi.comp[2][n]} - psi_h;
            const Vec3 diff = (eta - 1.0) * phi_n + cross(ge, psi_eps_n);
            s_diff2 += dot(diff, diff);
            s_cross += dot(phi_n, diff);

            double gphi[3][3], gpsi[3][3];
            phi_eval.gradient(x, gphi);
            psi_eval.gradient(x, gpsi);
            for (int a = 0; a < 3; ++a) {
                const Vec3 hess_row{he.entry(a, 0), he.entry(a, 1), he.entry(a, 2)};
                const Vec3 dpsi_a{gpsi[a][0], gpsi[a][1], gpsi[a][2]};
                const Vec3 dphi_a{gphi[a][0], gphi[a][1], gphi[a][2]};
                const Vec3 gdiff_a =
                    (eta - 1.0) * dphi_a + ge[a] * phi_n + cross(hess_row, psi_eps_n) + cross(ge, dpsi_a);
                s_gdiff2 += dot(gdiff_a, gdiff_a);
                s_gcross += dot(dphi_a, gdiff_a);
            }
        });
        s_diff2 *= cell;
        s_gdiff2 *= cell;
        s_cross *= cell;
        s_gcross *= cell;

        l2_err[e] = std::sqrt(s_diff2);
        h1_err[e] = std::sqrt(s_diff2 + s_gdiff2);
        const double phieps_h1_sq = phi_l2_sq * phi_l2_sq + 2.0 * s_cross + s_diff2 +
                                    grad_phi_sq * grad_phi_sq + 2.0 * s_gcross + s_gdiff2;
        report.h1_ratio[e] = std::sqrt(std::max(0.0, phieps_h1_sq)) / phi_h2;
    }

    auto fit_of = [&](const std::vector<double>& vals) {
        std::vector<std::pair<double, double>> pairs;
        for (std::size_t e = 0; e < epsilons.size(); ++e) pairs.emplace_back(epsilons[e], vals[e]);
        return fit_rate(pairs);
    };
    const FitResult fl2 = fit_of(l2_err);
    const FitResult fh1 = fit_of(h1_err);
    report.scaling.entries.push_back({"testfn_l2_error", 2.0, fl2.slope, fl2.stderr_, 1.5});
    report.scaling.entries.push_back({"testfn_h1_error", 2.0, fh1.slope, fh1.stderr_, 0.5});
    return report;
}

double TestFnReport::ratio_spread() const {
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < h1_ratio.size(); ++i) {
        if (i == 0) {
            lo = hi = h1_ratio[i];
        } else {
            lo = std::min(lo, h1_ratio[i]);
            hi = std::max(hi, h1_ratio[i]);
        }
    }
    return lo > 0.0 ? hi / lo : 0.0;
}

void ScalingReport::write(std::ostream& os) const {
    for (const auto& e : entries)
        os << "quantity=" << e.quantity << " q=" << format_full(e.q) << " slope=" << format_full(e.slope)
           << " stderr=" << format_full(e.stderr_) << " theory=" << format_full(e.theory) << "\n";
}

void TestFnReport::write(std::ostream& os) const {
    scaling.write(os);
    for (double r : h1_ratio) os << "h1_ratio=" << format_full(r) << "\n";
    os << "h1_ratio_spread=" << format_full(ratio_spread()) << "\n";
}

}  // namespace sblab
