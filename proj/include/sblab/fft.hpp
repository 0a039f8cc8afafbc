#pragma once

#include <complex>
#include <memory>
#include <span>

#include "sblab/grid.hpp"

namespace sblab {

/// 3-D complex transforms for one grid. Forward returns Fourier coefficients
/// (the 1/N^3 normalization is applied), so a single mode e^{ikx} transforms
/// to a unit coefficient and discrete Parseval reads ||f||_{L^2}^2 = L^3 sum |f_hat|^2.
///
/// Instances are safe to share between threads; each execution is serialized
/// internally. Plans use FFTW_ESTIMATE, so results are reproducible run to run.
class Fft {
public:
    explicit Fft(const Grid& grid);
    ~Fft();
    Fft(const Fft&) = delete;
    Fft& operator=(const Fft&) = delete;

    const Grid& grid() const { return grid_; }

    void forward(std::span<const double> physical, std::span<std::complex<double>> spectrum) const;
    void inverse(std::span<const std::complex<double>> spectrum, std::span<double> physical) const;

private:
    struct Impl;
    Grid grid_;
    std::unique_ptr<Impl> impl_;
};

/// Process-wide transform for the given grid (plans are built once per grid).
const Fft& fft_for(const Grid& grid);

}  // namespace sblab
