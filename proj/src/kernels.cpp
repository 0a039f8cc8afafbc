#include "sblab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace sblab::kernels {

namespace {
int g_thread_cap = 0;  // 0 = OpenMP default
}

int thread_count() {
#if defined(_OPENMP)
    return g_thread_cap > 0 ? g_thread_cap : omp_get_max_threads();
#else
    return 1;
#endif
}

void set_thread_count(int n) {
    g_thread_cap = std::max(1, n);
#if defined(_OPENMP)
    omp_set_num_threads(g_thread_cap);
#endif
}

namespace {

template <class BlockOp>
double blocked_reduce_sum(std::size_t n, BlockOp&& block_sum) {
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        partial[static_cast<std::size_t>(b)] = block_sum(lo, hi);
    }
    double total = 0.0;
    for (double p : partial) total += p;  // fixed order, thread-count independent
    return total;
}

}  // namespace

double reduce_sum(std::span<const double> x) {
    return blocked_reduce_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        return s;
    });
}

double reduce_dot(std::span<const double> x, std::span<const double> y) {
    return blocked_reduce_sum(x.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
        return s;
    });
}

double reduce_max_abs(std::span<const double> x) {
    const std::size_t n = x.size();
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(x[i]));
        partial[static_cast<std::size_t>(b)] = m;
    }
    double m = 0.0;
    for (double p : partial) m = std::max(m, p);
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    parallel_nodes(y.size(), [&](std::size_t i) { y[i] += a * x[i]; });
}

void scale(double a, std::span<double> y) {
    parallel_nodes(y.size(), [&](std::size_t i) { y[i] *= a; });
}

namespace serial {

double reduce_sum(std::span<const double> x) {
    // same block structure as the parallel kernel so the two agree bit for bit
    const std::size_t n = x.size();
    double total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += kReduceBlock) {
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i];
        total += s;
    }
    return total;
}

double reduce_dot(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    double total = 0.0;
    for (std::size_t lo = 0; lo < n; lo += kReduceBlock) {
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += x[i] * y[i];
        total += s;
    }
    return total;
}

double reduce_max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> y) {
    for (double& v : y) v *= a;
}

}  // namespace serial

}  // namespace sblab::kernels
