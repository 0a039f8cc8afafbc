#include "sblab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace sblab {

namespace {
// fftw plan creation/destruction is not thread-safe
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

struct Fft::Impl {
    fftw_complex* in = nullptr;
    fftw_complex* out = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    mutable std::mutex exec;
};

Fft::Fft(const Grid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {
    const std::size_t n = grid_.node_count();
    const int N = grid_.n();
    std::lock_guard<std::mutex> lock(planner_mutex());
    impl_->in = fftw_alloc_complex(n);
    impl_->out = fftw_alloc_complex(n);
    if (!impl_->in || !impl_->out) throw std::bad_alloc();
    // x-fastest storage means x is the last (contiguous) fftw dimension
    impl_->fwd = fftw_plan_dft_3d(N, N, N, impl_->in, impl_->out, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_3d(N, N, N, impl_->in, impl_->out, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd) throw std::runtime_error("fftw plan creation failed");
}

Fft::~Fft() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->in) fftw_free(impl_->in);
    if (impl_->out) fftw_free(impl_->out);
}

void Fft::forward(std::span<const double> physical, std::span<std::complex<double>> spectrum) const {
    const std::size_t n = grid_.node_count();
    if (physical.size() != n || spectrum.size() != n)
        throw std::invalid_argument("fft: buffer size does not match grid");
    std::lock_guard<std::mutex> lock(impl_->exec);
    for (std::size_t i = 0; i < n; ++i) {
        impl_->in[i][0] = physical[i];
        impl_->in[i][1] = 0.0;
    }
    fftw_execute(impl_->fwd);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i)
        spectrum[i] = std::complex<double>(impl_->out[i][0] * scale, impl_->out[i][1] * scale);
}

void Fft::inverse(std::span<const std::complex<double>> spectrum, std::span<double> physical) const {
    const std::size_t n = grid_.node_count();
    if (physical.size() != n || spectrum.size() != n)
        throw std::invalid_argument("fft: buffer size does not match grid");
    std::lock_guard<std::mutex> lock(impl_->exec);
    for (std::size_t i = 0; i < n; ++i) {
        impl_->in[i][0] = spectrum[i].real();
        impl_->in[i][1] = spectrum[i].imag();
    }
    fftw_execute(impl_->bwd);
    for (std::size_t i = 0; i < n; ++i) physical[i] = impl_->out[i][0];
}

const Fft& fft_for(const Grid& grid) {
    static std::mutex registry_mutex;
    static std::map<std::pair<double, int>, std::unique_ptr<Fft>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto key = std::make_pair(grid.length(), grid.n());
    auto it = registry.find(key);
    if (it == registry.end()) it = registry.emplace(key, std::make_unique<Fft>(grid)).first;
    return *it->second;
}

}  // namespace sblab
