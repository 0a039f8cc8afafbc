#include "sblab/random_fields.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "sblab/norms.hpp"
#include "sblab/spectral_ops.hpp"

namespace sblab {

namespace {

// Box-Muller over raw mt19937_64 output: identical draws on every platform,
// unlike std::normal_distribution.
class Gaussian {
public:
    explicit Gaussian(std::uint64_t seed) : rng_(seed) {}
    double operator()() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    double uniform() {
        // in (0, 1]
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }
    std::mt19937_64 rng_;
};

struct ModeIndex {
    int mi, mj, mk;
};

// conjugate-partner bin of (i,j,k)
std::size_t conj_bin(const Grid& g, int i, int j, int k) {
    const int N = g.n();
    const int ci = (N - i) % N, cj = (N - j) % N, ck = (N - k) % N;
    return g.index(ci, cj, ck);
}

}  // namespace

VectorField random_solenoidal(const Grid& grid, int kmax, std::uint64_t seed) {
    if (kmax < 1 || kmax >= grid.n() / 2) throw std::invalid_argument("random_solenoidal: bad kmax");
    VectorSpectrum s(grid);
    Gaussian gauss(seed);
    const int N = grid.n();
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const int mi = grid.signed_mode(i), mj = grid.signed_mode(j), mk = grid.signed_mode(k);
                if (std::abs(mi) > kmax || std::abs(mj) > kmax || std::abs(mk) > kmax) continue;
                if (mi == 0 && mj == 0 && mk == 0) continue;
                const std::size_t n = grid.index(i, j, k);
                const std::size_t partner = conj_bin(grid, i, j, k);
                if (partner < n) continue;  // already assigned via its partner
                std::complex<double> c[3];
                for (auto& cc : c) cc = std::complex<double>(gauss(), gauss());
                // project out the longitudinal part so the field is solenoidal
                const Vec3 kv = full_wavenumber(grid, n);
                const double k2 = dot(kv, kv);
                std::complex<double> kc = kv.x * c[0] + kv.y * c[1] + kv.z * c[2];
                for (int d = 0; d < 3; ++d) c[d] -= kv[d] * kc / k2;
                for (int d = 0; d < 3; ++d) {
                    s.comp[d][n] = c[d];
                    s.comp[d][partner] = std::conj(c[d]);
                }
            }
    VectorField v = to_physical(s);
    const double h2 = sobolev_norm(v, 2);
    if (h2 > 0.0)
        for (auto& comp : v.comp)
            for (double& x : comp) x /= h2;
    return v;
}

ScalarField random_scalar(const Grid& grid, int kmax, std::uint64_t seed) {
    if (kmax < 1 || kmax >= grid.n() / 2) throw std::invalid_argument("random_scalar: bad kmax");
    ScalarSpectrum s(grid);
    Gaussian gauss(seed);
    const int N = grid.n();
    for (int k = 0; k < N; ++k)
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const int mi = grid.signed_mode(i), mj = grid.signed_mode(j), mk = grid.signed_mode(k);
                if (std::abs(mi) > kmax || std::abs(mj) > kmax || std::abs(mk) > kmax) continue;
                if (mi == 0 && mj == 0 && mk == 0) continue;
                const std::size_t n = grid.index(i, j, k);
                const std::size_t partner = conj_bin(grid, i, j, k);
                if (partner < n) continue;
                const std::complex<double> c(gauss(), gauss());
                s.values[n] = c;
                s.values[partner] = std::conj(c);
            }
    ScalarField f = to_physical(s);
    const double l2 = lebesgue_norm(f, 2.0);
    if (l2 > 0.0)
        for (double& x : f.values) x /= l2;
    return f;
}

}  // namespace sblab
