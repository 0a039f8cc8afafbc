#pragma once

// Brute-force reference implementations used only by tests. Each one is an
// independent route to a quantity the library computes spectrally or
// analytically, kept deliberately naive.

#include <complex>
#include <vector>

#include "sblab/field.hpp"
#include "sblab/mat3.hpp"
#include "sblab/rigid_body.hpp"

namespace sblab::test {

/// O(N^6) discrete Fourier transform with the library's normalization.
inline std::vector<std::complex<double>> naive_dft(const Grid& g, const std::vector<double>& values) {
    const int N = g.n();
    std::vector<std::complex<double>> out(g.node_count());
    const double two_pi = 2.0 * std::numbers::pi;
    for (int mk = 0; mk < N; ++mk)
        for (int mj = 0; mj < N; ++mj)
            for (int mi = 0; mi < N; ++mi) {
                std::complex<double> acc(0.0, 0.0);
                for (int k = 0; k < N; ++k)
                    for (int j = 0; j < N; ++j)
                        for (int i = 0; i < N; ++i) {
                            const double phase =
                                -two_pi * (static_cast<double>(mi) * i + static_cast<double>(mj) * j +
                                           static_cast<double>(mk) * k) /
                                static_cast<double>(N);
                            acc += values[g.index(i, j, k)] *
                                   std::complex<double>(std::cos(phase), std::sin(phase));
                        }
                out[g.index(mi, mj, mk)] = acc / static_cast<double>(g.node_count());
            }
    return out;
}

/// Voxel quadrature of the inertia integral rho int (a x r).(b x r) over the shape.
inline Mat3 voxel_inertia(const Shape& shape, double rho, int resolution) {
    const double R = shape.bounding_radius();
    const double h = 2.0 * R / resolution;
    Mat3 J;
    for (int k = 0; k < resolution; ++k)
        for (int j = 0; j < resolution; ++j)
            for (int i = 0; i < resolution; ++i) {
                const Vec3 p{-R + (i + 0.5) * h, -R + (j + 0.5) * h, -R + (k + 0.5) * h};
                const double f = p.x * p.x / (shape.a * shape.a) + p.y * p.y / (shape.b * shape.b) +
                                 p.z * p.z / (shape.c * shape.c);
                if (f > 1.0) continue;
                // (J a) . b with J_ab = rho int (|r|^2 delta_ab - r_a r_b)
                const double r2 = dot(p, p);
                for (int a = 0; a < 3; ++a)
                    for (int b = 0; b < 3; ++b)
                        J.m[a][b] += ((a == b ? r2 : 0.0) - p[a] * p[b]);
            }
    const double cell = h * h * h;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) J.m[a][b] *= rho * cell;
    return J;
}

/// Free-space Biot-Savart kernel quadrature:
/// psi(x) = -sum_y (x - y) / (4 pi |x-y|^3) x phi(y) h^3 over the support.
inline Vec3 biot_savart_kernel(const VectorField& phi, const Vec3& x, double support_tol = 1e-12) {
    const Grid& g = phi.grid;
    const double cell = g.spacing() * g.spacing() * g.spacing();
    double max_mag = 0.0;
    const std::size_t count = g.node_count();
    for (std::size_t n = 0; n < count; ++n) {
        const double m = std::abs(phi.comp[0][n]) + std::abs(phi.comp[1][n]) + std::abs(phi.comp[2][n]);
        if (m > max_mag) max_mag = m;
    }
    const double cut = support_tol * max_mag;
    Vec3 psi;
    const int N = g.n();
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const std::size_t n = g.index(i, j, k);
                const Vec3 phin{phi.comp[0][n], phi.comp[1][n], phi.comp[2][n]};
                if (std::abs(phin.x) + std::abs(phin.y) + std::abs(phin.z) <= cut) continue;
                const Vec3 y = g.node(i, j, k);
                const Vec3 d = x - y;  // free-space kernel: no periodic wrap
                const double r = norm(d);
                if (r < 0.5 * g.spacing()) continue;  // skip the singular voxel
                psi -= cross(d / (4.0 * std::numbers::pi * r * r * r), phin) * cell;
            }
    return psi;
}

}  // namespace sblab::test
