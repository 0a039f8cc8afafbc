#pragma once

#include <span>
#include <utility>
#include <vector>

namespace sblab {

struct FitResult {
    double slope = 0.0;
    double stderr_ = 0.0;
    int used = 0;      // pairs entering the fit
    int excluded = 0;  // zero-valued pairs reported and left out
};

/// Least-squares slope of log(value) against log(eps). Pairs with value == 0
/// are excluded (and counted); fewer than 4 usable pairs is an error.
FitResult fit_rate(std::span<const std::pair<double, double>> pairs);

}  // namespace sblab
