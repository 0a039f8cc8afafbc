#pragma once

#include <iosfwd>
#include <string>

#include "sblab/field.hpp"
#include "sblab/mat3.hpp"

namespace sblab {

/// Unit quaternion for body orientation.
struct Quaternion {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    void normalize();
    Mat3 rotation() const;
    /// Rotation by |omega| dt about omega (exact exponential map).
    static Quaternion increment(const Vec3& omega, double dt);
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b);
};

/// Body geometry in its reference frame, centered at the center of mass.
/// Spheres and ellipsoids carry analytic volume, inertia and outward normals.
struct Shape {
    enum class Kind { Sphere, Ellipsoid };
    Kind kind = Kind::Sphere;
    double a = 0.0, b = 0.0, c = 0.0;  // semi-axes; sphere: a == b == c

    static Shape sphere(double radius);
    static Shape ellipsoid(double a, double b, double c);

    double volume() const;
    double bounding_radius() const { return std::max(a, std::max(b, c)); }
    /// Outward unit normal at a boundary point given in body coordinates.
    Vec3 outward_normal(const Vec3& x_body) const;
    /// Approximate signed distance (< 0 inside); exact for spheres.
    double signed_distance(const Vec3& x_body) const;
};

struct RigidBodyState {
    Vec3 h;             // center of mass
    Quaternion q;       // orientation
    Vec3 l;             // translational velocity h'
    Vec3 omega;         // angular velocity
    double mass = 0.0;  // rho * |shape|
    Mat3 J0;            // reference inertia tensor
    double rho = 0.0;   // body density
    Shape shape;

    Mat3 rotation() const { return q.rotation(); }
    /// J(t) = R J0 R^T
    Mat3 inertia_world() const;
    double angular_energy() const { return dot(inertia_world() * omega, omega); }
};

/// (J a) . b = rho int (a x r) . (b x r) dx over the body; analytic for both shapes.
Mat3 inertia_tensor(const Shape& shape, double rho);

RigidBodyState make_body(const Shape& shape, double rho, const Vec3& h, const Vec3& l, const Vec3& omega);

/// Rigid velocity l + omega x (x - h) sampled at every node (minimum-image
/// displacement). Callers mask by the indicator.
VectorField body_velocity_field(const RigidBodyState& state, const Grid& grid);

/// Smoothed indicator of the body: 1 deeper than smoothing_width inside,
/// 0 farther than smoothing_width outside, C^2 ramp across the shell.
/// smoothing_width is given in multiples of the grid spacing (1 to 3).
/// Bodies smaller than 2 grid spacings are rejected as under-resolved.
ScalarField indicator(const Shape& shape, const RigidBodyState& state, const Grid& grid,
                      double smoothing_width);

/// Symplectic-Euler update: momentum first, then position/orientation from the
/// new velocities. The angular update advances the momentum J omega.
RigidBodyState advance_body(const RigidBodyState& state, const Vec3& force, const Vec3& torque, double dt);

/// One trajectory-log record: t h=(..) l=(..) omega=(..) quat=(..)
std::string trajectory_record(double t, const RigidBodyState& state);

}  // namespace sblab
