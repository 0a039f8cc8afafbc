#pragma once

#include <cmath>
#include <cstddef>

#include "sblab/grid.hpp"

namespace sblab {

/// Visit every node within periodic distance <= radius of center (radius < L/2).
/// f receives (linear_index, displacement d = min_image(node - center), |d|).
/// Iteration order is a fixed sweep of the bounding box, so accumulations are
/// deterministic.
template <class F>
void for_each_ball_node(const Grid& g, const Vec3& center, double radius, F&& f) {
    const double h = g.spacing();
    const int N = g.n();
    const int reach = static_cast<int>(std::ceil(radius / h)) + 1;
    if (2 * reach + 1 > N)
        throw std::invalid_argument("for_each_ball_node: radius too large for the box");

    // node indices nearest the center
    int c[3];
    const Vec3 cw = g.wrap(center);
    c[0] = static_cast<int>(std::floor((cw.x + 0.5 * g.length()) / h));
    c[1] = static_cast<int>(std::floor((cw.y + 0.5 * g.length()) / h));
    c[2] = static_cast<int>(std::floor((cw.z + 0.5 * g.length()) / h));

    for (int dk = -reach; dk <= reach; ++dk)
        for (int dj = -reach; dj <= reach; ++dj)
            for (int di = -reach; di <= reach; ++di) {
                int i = (c[0] + di) % N;
                int j = (c[1] + dj) % N;
                int k = (c[2] + dk) % N;
                if (i < 0) i += N;
                if (j < 0) j += N;
                if (k < 0) k += N;
                const Vec3 d = g.min_image(g.node(i, j, k) - center);
                const double r = norm(d);
                if (r <= radius) f(g.index(i, j, k), d, r);
            }
}

}  // namespace sblab
