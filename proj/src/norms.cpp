#include "sblab/norms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sblab/kernels.hpp"

namespace sblab {

namespace {

void check_q(double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("lebesgue_norm: q must be >= 1 or infinity");
}

void check_region(const Grid& g, const std::optional<BallRegion>& region) {
    if (region && !(region->radius < 0.5 * g.length()))
        throw std::invalid_argument("lebesgue_norm: region exceeds box");
}

// |f| magnitude at node n for either field type
struct ScalarMag {
    const ScalarField& f;
    double operator()(std::size_t n) const { return std::abs(f.values[n]); }
};
struct VectorMag {
    const VectorField& v;
    double operator()(std::size_t n) const {
        const double a = v.comp[0][n], b = v.comp[1][n], c = v.comp[2][n];
        return std::sqrt(a * a + b * b + c * c);
    }
};

template <class Mag>
double lq_norm(const Grid& g, Mag mag, double q, const std::optional<BallRegion>& region) {
    check_q(q);
    check_region(g, region);
    const std::size_t count = g.node_count();
    const int N = g.n();

    auto inside = [&](std::size_t n) {
        if (!region) return true;
        const int i = static_cast<int>(n % static_cast<std::size_t>(N));
        const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
        const int k = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
        return g.periodic_distance(g.node(i, j, k), region->center) <= region->radius;
    };

    if (std::isinf(q)) {
        const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
        std::vector<double> partial(nblocks, 0.0);
        kernels::parallel_nodes(nblocks, [&](std::size_t b) {
            const std::size_t lo = b * kernels::kReduceBlock;
            const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
            double m = 0.0;
            for (std::size_t n = lo; n < hi; ++n)
                if (inside(n)) m = std::max(m, mag(n));
            partial[b] = m;
        });
        double m = 0.0;
        for (double p : partial) m = std::max(m, p);
        return m;
    }

    const double cell = g.spacing() * g.spacing() * g.spacing();
    const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
    kernels::parallel_nodes(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kernels::kReduceBlock;
        const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
        double s = 0.0;
        for (std::size_t n = lo; n < hi; ++n)
            if (inside(n)) s += std::pow(mag(n), q);
        partial[b] = s;
    });
    double sum = 0.0;
    for (double p : partial) sum += p;
    return std::pow(sum * cell, 1.0 / q);
}

double sobolev_weighted(const Grid& g, const std::vector<std::complex<double>>* comps, int ncomp, int s,
                        bool grad_weight) {
    if (s < -3 || s > 2) throw std::invalid_argument("sobolev_norm: s must be an integer in [-3, 2]");
    const std::size_t count = g.node_count();
    const std::size_t nblocks = (count + kernels::kReduceBlock - 1) / kernels::kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
    kernels::parallel_nodes(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kernels::kReduceBlock;
        const std::size_t hi = std::min(lo + kernels::kReduceBlock, count);
        double acc = 0.0;
        for (std::size_t n = lo; n < hi; ++n) {
            const Vec3 k = full_wavenumber(g, n);
            const double k2 = dot(k, k);
            double w = std::pow(1.0 + k2, static_cast<double>(s));
            if (grad_weight) w *= k2;
            double mag2 = 0.0;
            for (int c = 0; c < ncomp; ++c) mag2 += std::norm(comps[c][n]);
            acc += w * mag2;
        }
        partial[b] = acc;
    });
    double sum = 0.0;
    for (double p : partial) sum += p;
    const double L3 = g.length() * g.length() * g.length();
    return std::sqrt(L3 * sum);
}

}  // namespace

double lebesgue_norm(const ScalarField& f, double q, std::optional<BallRegion> region) {
    return lq_norm(f.grid, ScalarMag{f}, q, region);
}

double lebesgue_norm(const VectorField& v, double q, std::optional<BallRegion> region) {
    return lq_norm(v.grid, VectorMag{v}, q, region);
}

double sobolev_norm(const VectorSpectrum& s_hat, int s) {
    return sobolev_weighted(s_hat.grid, s_hat.comp.data(), 3, s, false);
}

double sobolev_norm(const VectorField& v, int s) {
    return sobolev_norm(to_spectrum(v), s);
}

double sobolev_norm(const ScalarField& f, int s) {
    ScalarSpectrum fh = to_spectrum(f);
    return sobolev_weighted(f.grid, &fh.values, 1, s, false);
}

double grad_sobolev_norm(const VectorField& v, int s) {
    VectorSpectrum vh = to_spectrum(v);
    return sobolev_weighted(v.grid, vh.comp.data(), 3, s, true);
}

}  // namespace sblab
