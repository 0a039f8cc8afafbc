#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "sblab/grid.hpp"

namespace sblab {

/// Node-centered scalar field on a periodic grid.
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    explicit ScalarField(const Grid& g) : grid(g), values(g.node_count(), 0.0) {}

    double& at(int i, int j, int k) { return values[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return values[grid.index(i, j, k)]; }

    bool all_finite() const {
        for (double v : values)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Node-centered 3-component vector field; all components share one grid.
struct VectorField {
    Grid grid;
    std::array<std::vector<double>, 3> comp;

    explicit VectorField(const Grid& g) : grid(g) {
        for (auto& c : comp) c.assign(g.node_count(), 0.0);
    }

    Vec3 at(int i, int j, int k) const {
        const std::size_t n = grid.index(i, j, k);
        return {comp[0][n], comp[1][n], comp[2][n]};
    }
    void set(int i, int j, int k, const Vec3& v) {
        const std::size_t n = grid.index(i, j, k);
        comp[0][n] = v.x;
        comp[1][n] = v.y;
        comp[2][n] = v.z;
    }

    bool all_finite() const {
        for (const auto& c : comp)
            for (double v : c)
                if (!std::isfinite(v)) return false;
        return true;
    }
};

/// Symmetric 3x3 tensor field stored as the six independent components.
struct SymmetricTensorField {
    enum Component { XX = 0, YY = 1, ZZ = 2, XY = 3, XZ = 4, YZ = 5 };

    Grid grid;
    std::array<std::vector<double>, 6> comp;

    explicit SymmetricTensorField(const Grid& g) : grid(g) {
        for (auto& c : comp) c.assign(g.node_count(), 0.0);
    }

    /// Full 3x3 entry (i,j) at linear node index n.
    double entry(int i, int j, std::size_t n) const {
        static constexpr int map[3][3] = {{XX, XY, XZ}, {XY, YY, YZ}, {XZ, YZ, ZZ}};
        return comp[map[i][j]][n];
    }

    /// Frobenius norm of the tensor at node n, counting off-diagonals twice.
    double frobenius(std::size_t n) const {
        const double d = comp[XX][n] * comp[XX][n] + comp[YY][n] * comp[YY][n] + comp[ZZ][n] * comp[ZZ][n];
        const double o = comp[XY][n] * comp[XY][n] + comp[XZ][n] * comp[XZ][n] + comp[YZ][n] * comp[YZ][n];
        return std::sqrt(d + 2.0 * o);
    }
};

inline void require_same_grid(const Grid& a, const Grid& b) {
    if (a != b) throw std::invalid_argument("fields live on different grids");
}

}  // namespace sblab
