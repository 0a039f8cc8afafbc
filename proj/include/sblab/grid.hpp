#pragma once

#include <cstddef>
#include <numbers>
#include <stdexcept>

#include "sblab/vec3.hpp"

namespace sblab {

/// Uniform periodic grid on the cubic box [-L/2, L/2)^3 with N nodes per axis.
/// Nodes sit at x_i = -L/2 + i*spacing; periodic wrap is exact index arithmetic.
class Grid {
public:
    Grid(double box_length, int resolution)
        : length_(box_length), n_(resolution) {
        if (!(box_length > 0.0)) throw std::invalid_argument("grid: box length must be positive");
        if (resolution < 8) throw std::invalid_argument("grid: resolution must be >= 8");
        if (resolution % 2 != 0) throw std::invalid_argument("grid: resolution must be even");
        spacing_ = length_ / static_cast<double>(n_);
    }

    double length() const { return length_; }
    int n() const { return n_; }
    double spacing() const { return spacing_; }
    std::size_t node_count() const {
        return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
    }

    // x-fastest linearization (matches the snapshot file ordering)
    std::size_t index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(n_) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(k));
    }

    double coord(int i) const { return -0.5 * length_ + spacing_ * static_cast<double>(i); }
    Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }

    /// Signed integer mode for FFT bin m in [0, N): m for m < N/2, m - N otherwise.
    int signed_mode(int m) const { return m < n_ / 2 ? m : m - n_; }

    /// Physical wavenumber 2*pi*m_signed/L for FFT bin m.
    double wavenumber(int m) const {
        return 2.0 * std::numbers::pi * static_cast<double>(signed_mode(m)) / length_;
    }

    /// Wrap a coordinate difference to the minimum image in [-L/2, L/2).
    double min_image(double d) const {
        d = std::remainder(d, length_);
        if (d < -0.5 * length_) d += length_;
        if (d >= 0.5 * length_) d -= length_;
        return d;
    }
    Vec3 min_image(const Vec3& d) const { return {min_image(d.x), min_image(d.y), min_image(d.z)}; }

    double periodic_distance(const Vec3& a, const Vec3& b) const { return norm(min_image(a - b)); }

    /// Map an arbitrary point to its representative inside the box.
    Vec3 wrap(const Vec3& p) const { return min_image(p); }

    bool operator==(const Grid& o) const { return length_ == o.length_ && n_ == o.n_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

private:
    double length_;
    int n_;
    double spacing_;
};

}  // namespace sblab
