#include "sblab/interpolate.hpp"

#include <cmath>

namespace sblab {

double trilinear(const Grid& g, std::span<const double> values, const Vec3& x) {
    const int N = g.n();
    const double h = g.spacing();
    // fractional node coordinates of the wrapped point
    double fc[3];
    const Vec3 w = g.wrap(x);
    fc[0] = (w.x + 0.5 * g.length()) / h;
    fc[1] = (w.y + 0.5 * g.length()) / h;
    fc[2] = (w.z + 0.5 * g.length()) / h;

    int base[3];
    double t[3];
    for (int d = 0; d < 3; ++d) {
        const double fl = std::floor(fc[d]);
        base[d] = static_cast<int>(fl) % N;
        if (base[d] < 0) base[d] += N;
        t[d] = fc[d] - fl;
    }
    const int i1 = (base[0] + 1) % N, j1 = (base[1] + 1) % N, k1 = (base[2] + 1) % N;

    auto v = [&](int i, int j, int k) { return values[g.index(i, j, k)]; };
    const double c00 = v(base[0], base[1], base[2]) * (1 - t[0]) + v(i1, base[1], base[2]) * t[0];
    const double c10 = v(base[0], j1, base[2]) * (1 - t[0]) + v(i1, j1, base[2]) * t[0];
    const double c01 = v(base[0], base[1], k1) * (1 - t[0]) + v(i1, base[1], k1) * t[0];
    const double c11 = v(base[0], j1, k1) * (1 - t[0]) + v(i1, j1, k1) * t[0];
    const double c0 = c00 * (1 - t[1]) + c10 * t[1];
    const double c1 = c01 * (1 - t[1]) + c11 * t[1];
    return c0 * (1 - t[2]) + c1 * t[2];
}

double trilinear(const ScalarField& f, const Vec3& x) { return trilinear(f.grid, f.values, x); }

Vec3 trilinear(const VectorField& v, const Vec3& x) {
    return {trilinear(v.grid, v.comp[0], x), trilinear(v.grid, v.comp[1], x),
            trilinear(v.grid, v.comp[2], x)};
}

BandLimitedEvaluator::BandLimitedEvaluator(const VectorField& v, double drop_tol) {
    origin_ = v.grid.node(0, 0, 0);
    VectorSpectrum s = to_spectrum(v);
    double max_mag = 0.0;
    const std::size_t n = s.grid.node_count();
    for (std::size_t m = 0; m < n; ++m)
        for (int c = 0; c < 3; ++c) max_mag = std::max(max_mag, std::abs(s.comp[c][m]));
    const double cut = drop_tol * max_mag;
    for (std::size_t m = 0; m < n; ++m) {
        const double mag = std::abs(s.comp[0][m]) + std::abs(s.comp[1][m]) + std::abs(s.comp[2][m]);
        if (mag <= cut) continue;
        Mode mode;
        mode.k = deriv_wavenumber(s.grid, m);
        for (int c = 0; c < 3; ++c) mode.c[c] = s.comp[c][m];
        modes_.push_back(mode);
    }
}

Vec3 BandLimitedEvaluator::value(const Vec3& x) const {
    Vec3 out;
    const Vec3 rel = x - origin_;
    for (const Mode& m : modes_) {
        const double phase = dot(m.k, rel);
        const std::complex<double> e(std::cos(phase), std::sin(phase));
        for (int c = 0; c < 3; ++c) out[c] += (m.c[c] * e).real();
    }
    return out;
}

void BandLimitedEvaluator::gradient(const Vec3& x, double grad[3][3]) const {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) grad[a][b] = 0.0;
    const Vec3 rel = x - origin_;
    for (const Mode& m : modes_) {
        const double phase = dot(m.k, rel);
        const std::complex<double> ie(-std::sin(phase), std::cos(phase));  // i * e^{i phase}
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) grad[a][b] += (m.k[a] * m.c[b] * ie).real();
    }
}

}  // namespace sblab
