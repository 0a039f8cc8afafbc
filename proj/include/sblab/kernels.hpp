#pragma once

#include <cstddef>
#include <span>

namespace sblab::kernels {

/// Number of OpenMP threads the kernels will use (1 when built without OpenMP).
int thread_count();

/// Cap the kernel thread count (clamped to at least 1).
void set_thread_count(int n);

/// Run f(i) for i in [0, n) across threads. Each index is written independently,
/// so results are identical to the serial loop for any thread count.
template <class F>
void parallel_nodes(std::size_t n, F&& f) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) f(static_cast<std::size_t>(i));
}

// Reductions accumulate fixed-size blocks and combine the block partials in
// index order. The result is independent of the thread count, which keeps
// every report byte-identical across --jobs settings.
inline constexpr std::size_t kReduceBlock = 4096;

double reduce_sum(std::span<const double> x);
double reduce_dot(std::span<const double> x, std::span<const double> y);
double reduce_max_abs(std::span<const double> x);

/// y[i] += a * x[i]
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y[i] *= a
void scale(double a, std::span<double> y);

/// Plain-loop reference implementations, kept for correctness tests and the
/// kernel benchmark. These never spawn threads.
namespace serial {
double reduce_sum(std::span<const double> x);
double reduce_dot(std::span<const double> x, std::span<const double> y);
double reduce_max_abs(std::span<const double> x);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> y);
}  // namespace serial

}  // namespace sblab::kernels
