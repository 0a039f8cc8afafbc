/// Kernel benchmark: OpenMP-parallel kernels against their serial references.
/// Prints one row per kernel with the median time of each implementation.

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "sblab/fft.hpp"
#include "sblab/kernels.hpp"
#include "sblab/norms.hpp"
#include "sblab/random_fields.hpp"
#include "sblab/spectral_ops.hpp"

using namespace sblab;

namespace {

template <class F>
double median_seconds(F&& f, int reps) {
    std::vector<double> times;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
}

void row(const std::string& name, double serial, double parallel) {
    std::printf("%-28s serial %10.4f ms   parallel %10.4f ms   speedup %5.2fx\n", name.c_str(),
                serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    int n_side = 96;
    int reps = 5;
    if (argc > 1) n_side = std::atoi(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);

    const std::size_t n = static_cast<std::size_t>(n_side) * n_side * n_side;
    std::printf("kernel benchmark: %d^3 nodes, %d reps, %d threads\n", n_side, reps,
                kernels::thread_count());

    std::mt19937_64 rng(7);
    std::vector<double> x(n), y(n), y2(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = static_cast<double>(rng()) * 0x1.0p-64;
        y[i] = static_cast<double>(rng()) * 0x1.0p-64;
    }
    y2 = y;

    volatile double sink = 0.0;
    row("reduce_sum",
        median_seconds([&] { sink = kernels::serial::reduce_sum(x); }, reps),
        median_seconds([&] { sink = kernels::reduce_sum(x); }, reps));
    row("reduce_dot",
        median_seconds([&] { sink = kernels::serial::reduce_dot(x, y); }, reps),
        median_seconds([&] { sink = kernels::reduce_dot(x, y); }, reps));
    row("reduce_max_abs",
        median_seconds([&] { sink = kernels::serial::reduce_max_abs(x); }, reps),
        median_seconds([&] { sink = kernels::reduce_max_abs(x); }, reps));
    row("axpy",
        median_seconds([&] { kernels::serial::axpy(1.0000001, x, y); }, reps),
        median_seconds([&] { kernels::axpy(1.0000001, x, y2); }, reps));
    (void)sink;

    // field-level kernels: gradient/Leray on a random band-limited field
    const Grid grid(2.0 * 3.14159265358979323846, n_side % 2 == 0 ? n_side : n_side + 1);
    VectorField v = random_solenoidal(grid, 8, 11);
    const int old_threads = kernels::thread_count();
    kernels::set_thread_count(1);
    const double leray_serial = median_seconds([&] { leray_project(v); }, reps);
    const double norm_serial = median_seconds([&] { lebesgue_norm(v, 2.0); }, reps);
    kernels::set_thread_count(old_threads);
    const double leray_par = median_seconds([&] { leray_project(v); }, reps);
    const double norm_par = median_seconds([&] { lebesgue_norm(v, 2.0); }, reps);
    row("leray_project (incl. fft)", leray_serial, leray_par);
    row("lebesgue_norm L2", norm_serial, norm_par);

    return 0;
}
