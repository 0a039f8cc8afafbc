#include "sblab/spectral_ops.hpp"

#include <cmath>

#include "sblab/fft.hpp"
#include "sblab/kernels.hpp"

namespace sblab {

namespace {

// decode the x-fastest linear index into FFT bins
inline void decode(const Grid& g, std::size_t n, int& i, int& j, int& k) {
    const int N = g.n();
    i = static_cast<int>(n % static_cast<std::size_t>(N));
    j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
    k = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
}

}  // namespace

Vec3 deriv_wavenumber(const Grid& g, std::size_t n) {
    int i, j, k;
    decode(g, n, i, j, k);
    const int nyq = g.n() / 2;
    return {i == nyq ? 0.0 : g.wavenumber(i),
            j == nyq ? 0.0 : g.wavenumber(j),
            k == nyq ? 0.0 : g.wavenumber(k)};
}

Vec3 full_wavenumber(const Grid& g, std::size_t n) {
    int i, j, k;
    decode(g, n, i, j, k);
    return {g.wavenumber(i), g.wavenumber(j), g.wavenumber(k)};
}

ScalarSpectrum to_spectrum(const ScalarField& f) {
    ScalarSpectrum s(f.grid);
    fft_for(f.grid).forward(f.values, s.values);
    return s;
}

VectorSpectrum to_spectrum(const VectorField& v) {
    VectorSpectrum s(v.grid);
    const Fft& fft = fft_for(v.grid);
    for (int c = 0; c < 3; ++c) fft.forward(v.comp[c], s.comp[c]);
    return s;
}

ScalarField to_physical(const ScalarSpectrum& s) {
    ScalarField f(s.grid);
    fft_for(s.grid).inverse(s.values, f.values);
    return f;
}

VectorField to_physical(const VectorSpectrum& s) {
    VectorField v(s.grid);
    const Fft& fft = fft_for(s.grid);
    for (int c = 0; c < 3; ++c) fft.inverse(s.comp[c], v.comp[c]);
    return v;
}

VectorField gradient(const ScalarField& f) {
    ScalarSpectrum fh = to_spectrum(f);
    VectorSpectrum gh(f.grid);
    const std::size_t n = f.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = deriv_wavenumber(f.grid, m);
        const std::complex<double> iu(0.0, 1.0);
        const std::complex<double> v = fh.values[m];
        gh.comp[0][m] = iu * k.x * v;
        gh.comp[1][m] = iu * k.y * v;
        gh.comp[2][m] = iu * k.z * v;
    });
    return to_physical(gh);
}

void divergence_spectrum(const VectorSpectrum& in, ScalarSpectrum& out) {
    const std::size_t n = in.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = deriv_wavenumber(in.grid, m);
        const std::complex<double> iu(0.0, 1.0);
        out.values[m] = iu * (k.x * in.comp[0][m] + k.y * in.comp[1][m] + k.z * in.comp[2][m]);
    });
}

ScalarField divergence(const VectorField& v) {
    VectorSpectrum vh = to_spectrum(v);
    ScalarSpectrum dh(v.grid);
    divergence_spectrum(vh, dh);
    return to_physical(dh);
}

void curl_spectrum(const VectorSpectrum& in, VectorSpectrum& out) {
    const std::size_t n = in.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = deriv_wavenumber(in.grid, m);
        const std::complex<double> iu(0.0, 1.0);
        const std::complex<double> vx = in.comp[0][m], vy = in.comp[1][m], vz = in.comp[2][m];
        out.comp[0][m] = iu * (k.y * vz - k.z * vy);
        out.comp[1][m] = iu * (k.z * vx - k.x * vz);
        out.comp[2][m] = iu * (k.x * vy - k.y * vx);
    });
}

VectorField curl(const VectorField& v) {
    VectorSpectrum vh = to_spectrum(v);
    VectorSpectrum ch(v.grid);
    curl_spectrum(vh, ch);
    return to_physical(ch);
}

VectorField laplacian(const VectorField& v) {
    VectorSpectrum vh = to_spectrum(v);
    const std::size_t n = v.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = full_wavenumber(v.grid, m);
        const double k2 = dot(k, k);
        for (int c = 0; c < 3; ++c) vh.comp[c][m] *= -k2;
    });
    return to_physical(vh);
}

SymmetricTensorField deformation_tensor(const VectorField& v) {
    VectorSpectrum vh = to_spectrum(v);
    SymmetricTensorField d(v.grid);
    const Fft& fft = fft_for(v.grid);
    const std::size_t n = v.grid.node_count();
    std::vector<std::complex<double>> work(n);
    // (a, b) component pairs for the six stored entries
    static constexpr int pair_a[6] = {0, 1, 2, 0, 0, 1};
    static constexpr int pair_b[6] = {0, 1, 2, 1, 2, 2};
    for (int e = 0; e < 6; ++e) {
        const int a = pair_a[e], b = pair_b[e];
        kernels::parallel_nodes(n, [&](std::size_t m) {
            const Vec3 k = deriv_wavenumber(v.grid, m);
            const std::complex<double> iu(0.0, 1.0);
            // D_ab = (d_b v_a + d_a v_b)/2
            work[m] = 0.5 * iu * (k[b] * vh.comp[a][m] + k[a] * vh.comp[b][m]);
        });
        fft.inverse(work, d.comp[e]);
    }
    return d;
}

void project_solenoidal(VectorSpectrum& s) {
    const std::size_t n = s.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = full_wavenumber(s.grid, m);
        const double k2 = dot(k, k);
        if (k2 == 0.0) return;  // mean mode is divergence-free; keep it
        const std::complex<double> kv = k.x * s.comp[0][m] + k.y * s.comp[1][m] + k.z * s.comp[2][m];
        const std::complex<double> f = kv / k2;
        s.comp[0][m] -= k.x * f;
        s.comp[1][m] -= k.y * f;
        s.comp[2][m] -= k.z * f;
    });
}

VectorField leray_project(const VectorField& v) {
    VectorSpectrum vh = to_spectrum(v);
    project_solenoidal(vh);
    return to_physical(vh);
}

void apply_heat(VectorSpectrum& s, double nu_dt) {
    const std::size_t n = s.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        const Vec3 k = full_wavenumber(s.grid, m);
        const double f = std::exp(-nu_dt * dot(k, k));
        for (int c = 0; c < 3; ++c) s.comp[c][m] *= f;
    });
}

void truncate_two_thirds(VectorSpectrum& s) {
    const int N = s.grid.n();
    const int cut = N / 3;
    const std::size_t n = s.grid.node_count();
    kernels::parallel_nodes(n, [&](std::size_t m) {
        int i, j, k;
        decode(s.grid, m, i, j, k);
        const int mi = std::abs(s.grid.signed_mode(i));
        const int mj = std::abs(s.grid.signed_mode(j));
        const int mk = std::abs(s.grid.signed_mode(k));
        if (mi > cut || mj > cut || mk > cut)
            for (int c = 0; c < 3; ++c) s.comp[c][m] = 0.0;
    });
}

Vec3 mean(const VectorField& v) {
    const double inv = 1.0 / static_cast<double>(v.grid.node_count());
    return {kernels::reduce_sum(v.comp[0]) * inv, kernels::reduce_sum(v.comp[1]) * inv,
            kernels::reduce_sum(v.comp[2]) * inv};
}

double mean(const ScalarField& f) {
    return kernels::reduce_sum(f.values) / static_cast<double>(f.grid.node_count());
}

}  // namespace sblab
