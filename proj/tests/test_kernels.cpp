/// Serial references vs OpenMP kernels: same results (bit-for-bit for the
/// blocked reductions), plus determinism across thread counts.

#include <random>
#include <vector>

#include "sblab/kernels.hpp"
#include "test_harness.hpp"

using namespace sblab;
using namespace sblab::test;

int main() {
    std::mt19937_64 rng(42);
    const std::size_t n = 1 << 20;
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = 2.0 * (static_cast<double>(rng()) * 0x1.0p-64) - 1.0;
        y[i] = 2.0 * (static_cast<double>(rng()) * 0x1.0p-64) - 1.0;
    }

    record("reduce_sum matches serial reference bit-for-bit",
           kernels::reduce_sum(x) == kernels::serial::reduce_sum(x));
    record("reduce_dot matches serial reference bit-for-bit",
           kernels::reduce_dot(x, y) == kernels::serial::reduce_dot(x, y));
    record("reduce_max_abs matches serial reference",
           kernels::reduce_max_abs(x) == kernels::serial::reduce_max_abs(x));

    {
        std::vector<double> yp = y, ys = y;
        kernels::axpy(0.37, x, yp);
        kernels::serial::axpy(0.37, x, ys);
        bool same = true;
        for (std::size_t i = 0; i < n; ++i)
            if (yp[i] != ys[i]) same = false;
        record("axpy matches serial reference bit-for-bit", same);
    }

    // thread-count independence of the blocked reduction
    {
        const double full = kernels::reduce_sum(x);
        kernels::set_thread_count(1);
        const double one = kernels::reduce_sum(x);
        kernels::set_thread_count(3);
        const double three = kernels::reduce_sum(x);
        kernels::set_thread_count(0 > 1 ? 0 : 8);
        record("reduce_sum is thread-count independent", full == one && one == three,
               num(full - one));
    }

    // odd-size tail handling
    {
        std::vector<double> small(kernels::kReduceBlock + 17, 1.0);
        record("reduce_sum handles non-multiple-of-block sizes",
               kernels::reduce_sum(small) == static_cast<double>(small.size()));
    }

    return summary("test_kernels");
}
