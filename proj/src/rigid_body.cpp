#include "sblab/rigid_body.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sblab/ball.hpp"
#include "sblab/field_io.hpp"
#include "sblab/kernels.hpp"

namespace sblab {

void Quaternion::normalize() {
    const double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (n == 0.0) throw std::runtime_error("quaternion: zero norm");
    w /= n;
    x /= n;
    y /= n;
    z /= n;
}

Mat3 Quaternion::rotation() const {
    Mat3 r;
    r.m[0][0] = 1 - 2 * (y * y + z * z);
    r.m[0][1] = 2 * (x * y - z * w);
    r.m[0][2] = 2 * (x * z + y * w);
    r.m[1][0] = 2 * (x * y + z * w);
    r.m[1][1] = 1 - 2 * (x * x + z * z);
    r.m[1][2] = 2 * (y * z - x * w);
    r.m[2][0] = 2 * (x * z - y * w);
    r.m[2][1] = 2 * (y * z + x * w);
    r.m[2][2] = 1 - 2 * (x * x + y * y);
    return r;
}

Quaternion Quaternion::increment(const Vec3& omega, double dt) {
    const double angle = norm(omega) * dt;
    if (angle == 0.0) return {};
    const Vec3 axis = omega / norm(omega);
    const double s = std::sin(0.5 * angle);
    return {std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s};
}

Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

Shape Shape::sphere(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("shape: radius must be positive");
    Shape s;
    s.kind = Kind::Sphere;
    s.a = s.b = s.c = radius;
    return s;
}

Shape Shape::ellipsoid(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
        throw std::invalid_argument("shape: semi-axes must be positive");
    Shape s;
    s.kind = Kind::Ellipsoid;
    s.a = a;
    s.b = b;
    s.c = c;
    return s;
}

double Shape::volume() const { return 4.0 / 3.0 * std::numbers::pi * a * b * c; }

Vec3 Shape::outward_normal(const Vec3& p) const {
    const Vec3 g{2.0 * p.x / (a * a), 2.0 * p.y / (b * b), 2.0 * p.z / (c * c)};
    const double n = norm(g);
    if (n == 0.0) throw std::invalid_argument("shape: normal undefined at the center");
    return g / n;
}

double Shape::signed_distance(const Vec3& p) const {
    if (kind == Kind::Sphere) return norm(p) - a;
    // first-order estimate: level-set value normalized by its gradient
    const double f = std::sqrt(p.x * p.x / (a * a) + p.y * p.y / (b * b) + p.z * p.z / (c * c));
    if (f == 0.0) return -std::min(a, std::min(b, c));
    const Vec3 g{p.x / (a * a * f), p.y / (b * b * f), p.z / (c * c * f)};
    return (f - 1.0) / std::max(norm(g), 1e-300);
}

Mat3 inertia_tensor(const Shape& shape, double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("inertia_tensor: density must be positive");
    const double m = rho * shape.volume();
    // solid ellipsoid about its principal axes
    return Mat3::diagonal(m * (shape.b * shape.b + shape.c * shape.c) / 5.0,
                          m * (shape.a * shape.a + shape.c * shape.c) / 5.0,
                          m * (shape.a * shape.a + shape.b * shape.b) / 5.0);
}

RigidBodyState make_body(const Shape& shape, double rho, const Vec3& h, const Vec3& l, const Vec3& omega) {
    RigidBodyState s;
    s.shape = shape;
    s.rho = rho;
    s.mass = rho * shape.volume();
    s.J0 = inertia_tensor(shape, rho);
    s.h = h;
    s.l = l;
    s.omega = omega;
    return s;
}

Mat3 RigidBodyState::inertia_world() const {
    const Mat3 R = rotation();
    return R * J0 * R.transpose();
}

VectorField body_velocity_field(const RigidBodyState& state, const Grid& grid) {
    VectorField out(grid);
    const int N = grid.n();
    kernels::parallel_nodes(grid.node_count(), [&](std::size_t n) {
        const int i = static_cast<int>(n % static_cast<std::size_t>(N));
        const int j = static_cast<int>((n / static_cast<std::size_t>(N)) % static_cast<std::size_t>(N));
        const int k = static_cast<int>(n / (static_cast<std::size_t>(N) * static_cast<std::size_t>(N)));
        const Vec3 d = grid.min_image(grid.node(i, j, k) - state.h);
        const Vec3 v = state.l + cross(state.omega, d);
        out.comp[0][n] = v.x;
        out.comp[1][n] = v.y;
        out.comp[2][n] = v.z;
    });
    return out;
}

ScalarField indicator(const Shape& shape, const RigidBodyState& state, const Grid& grid,
                      double smoothing_width) {
    if (!(smoothing_width >= 1.0 && smoothing_width <= 3.0))
        throw std::invalid_argument("indicator: smoothing_width must be in [1, 3] grid spacings");
    if (shape.bounding_radius() < 2.0 * grid.spacing())
        throw std::invalid_argument("indicator: body under-resolved");
    const double w = smoothing_width * grid.spacing();
    const Mat3 Rt = state.rotation().transpose();
    ScalarField chi(grid);
    const double reach = shape.bounding_radius() + w + grid.spacing();
    for_each_ball_node(grid, state.h, reach, [&](std::size_t n, const Vec3& d, double) {
        const double sd = shape.signed_distance(Rt * d);
        if (sd <= -w) {
            chi.values[n] = 1.0;
        } else if (sd < w) {
            // quintic smoothstep ramp from 1 (inside) to 0 (outside), C^2 in sd
            const double t = (sd + w) / (2.0 * w);
            const double s = t * t * t * (t * (6.0 * t - 15.0) + 10.0);
            chi.values[n] = 1.0 - s;
        }
    });
    return chi;
}

RigidBodyState advance_body(const RigidBodyState& state, const Vec3& force, const Vec3& torque, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("advance_body: dt must be positive");
    auto finite = [](const Vec3& v) {
        return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
    };
    if (!finite(force) || !finite(torque))
        throw std::runtime_error("advance_body: non-finite force or torque");

    RigidBodyState out = state;
    out.l = state.l + (dt / state.mass) * force;
    const Mat3 J = state.inertia_world();
    out.omega = J.inverse() * (J * state.omega + dt * torque);
    out.h = state.h + dt * out.l;
    out.q = Quaternion::increment(out.omega, dt) * state.q;
    out.q.normalize();
    return out;
}

std::string trajectory_record(double t, const RigidBodyState& s) {
    std::ostringstream os;
    auto v3 = [](const Vec3& v) {
        return format_full(v.x) + "," + format_full(v.y) + "," + format_full(v.z);
    };
    os << format_full(t) << " h=(" << v3(s.h) << ") l=(" << v3(s.l) << ") omega=(" << v3(s.omega)
       << ") quat=(" << format_full(s.q.w) << "," << format_full(s.q.x) << "," << format_full(s.q.y)
       << "," << format_full(s.q.z) << ")";
    return os.str();
}

}  // namespace sblab
