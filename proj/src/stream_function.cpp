#include "sblab/stream_function.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sblab/field_io.hpp"
#include "sblab/interpolate.hpp"
#include "sblab/kernels.hpp"
#include "sblab/norms.hpp"
#include "sblab/spectral_ops.hpp"

namespace sblab {

VectorField stream_function(const VectorField& phi) {
    const double phi_l2 = lebesgue_norm(phi, 2.0);
    if (phi_l2 > 0.0) {
        const double div_l2 = lebesgue_norm(divergence(phi), 2.0);
        if (div_l2 > 1e-8 * phi_l2) throw std::invalid_argument("stream_function: source not solenoidal");
        const Vec3 m = mean(phi);
        if (norm(m) > 1e-12 * phi_l2)
            throw std::invalid_argument("stream_function: source has nonzero mean");
    }

    VectorSpectrum ph = to_spectrum(phi);
    VectorSpectrum psih(phi.grid);
    const std::size_t n = phi.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = deriv_wavenumber(phi.grid, m);
        const double k2 = dot(full_wavenumber(phi.grid, m), full_wavenumber(phi.grid, m));
        if (k2 == 0.0) return;  // psi_hat(0) = 0
        const std::complex<double> iu(0.0, 1.0);
        const std::complex<double> px = ph.comp[0][m], py = ph.comp[1][m], pz = ph.comp[2][m];
        psih.comp[0][m] = iu * (k.y * pz - k.z * py) / k2;
        psih.comp[1][m] = iu * (k.z * px - k.x * pz) / k2;
        psih.comp[2][m] = iu * (k.x * py - k.y * px) / k2;
    });
    return to_physical(psih);
}

VectorField modified_stream_function(const VectorField& psi, const Vec3& h) {
    const Vec3 shift = trilinear(psi, h);
    VectorField out = psi;
    for (int c = 0; c < 3; ++c)
        kernels::parallel_nodes(out.comp[c].size(), [&](std::size_t i) { out.comp[c][i] -= shift[c]; });
    return out;
}

StreamPair StreamPair::make(const VectorField& phi, const Vec3& anchor) {
    VectorField psi = stream_function(phi);
    VectorField psi_eps = modified_stream_function(psi, anchor);
    return StreamPair{std::move(psi), std::move(psi_eps), anchor, phi};
}

StreamBoundReport verify_lemma21(const VectorField& phi, const Vec3& h, std::span<const double> radii,
                                 double cap) {
    for (std::size_t i = 0; i + 1 < radii.size(); ++i)
        if (!(radii[i] < radii[i + 1]))
            throw std::invalid_argument("verify_lemma21: radii must be ascending");
    if (!radii.empty() && !(radii.back() < 0.25 * phi.grid.length()))
        throw std::invalid_argument("verify_lemma21: radius too large (max must be < L/4)");

    const VectorField psi = stream_function(phi);
    const VectorField psi_eps = modified_stream_function(psi, h);
    const double phi_h2 = sobolev_norm(phi, 2);

    StreamBoundReport report;
    report.cap = cap;
    for (double R : radii) {
        const double sup = lebesgue_norm(psi_eps, std::numeric_limits<double>::infinity(),
                                         BallRegion{h, R});
        const double denom = R * phi_h2;
        report.entries.push_back({R, denom > 0.0 ? sup / denom : 0.0});
    }
    report.global_grad_ratio = phi_h2 > 0.0 ? grad_sobolev_norm(psi, 2) / phi_h2 : 0.0;
    report.pass = report.global_grad_ratio <= cap;
    for (const auto& e : report.entries)
        if (e.ratio > cap) report.pass = false;
    return report;
}

void StreamBoundReport::write(std::ostream& os) const {
    for (const auto& e : entries)
        os << "R=" << format_full(e.radius) << " ratio=" << format_full(e.ratio) << "\n";
    os << "global_grad_ratio=" << format_full(global_grad_ratio) << "\n";
}

}  // namespace sblab
