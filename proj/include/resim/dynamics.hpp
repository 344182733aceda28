#pragma once

#include <optional>

#include <Eigen/Core>

#include "resim/body.hpp"
#include "resim/state.hpp"

namespace resim {

// Contact activation tolerance: a vertex within this height of the ground
// plane counts as touching.
inline constexpr double kContactTolerance = 1e-4;  // m

/// Single vertex-vs-ground contact.
struct ContactInfo {
  Eigen::Vector2d point = Eigen::Vector2d::Zero();   // world frame, m
  Eigen::Vector2d normal = Eigen::Vector2d::Zero();  // unit, out of the ground
  double penetration_depth = 0.0;                    // m, -z of the vertex
  int vertex_index = -1;
};

/// World position of body vertex i at the given state.
Eigen::Vector2d vertex_world(const State& state, const BodyModel& body, int i);

/// Height of the lowest vertex above the ground plane z = 0.
double min_vertex_height(const State& state, const BodyModel& body);

/// Exact ballistic update over dt: gravity only, closed form, no integrator
/// error. Throws ValidationError on a non-finite state or dt < 0.
State integrate_free_flight(const State& state, const BodyModel& body, double dt);

/// Deepest vertex at or below z = kContactTolerance; ties broken by lower z
/// then lower world x. Empty when all vertices are above the tolerance.
std::optional<ContactInfo> detect_contact(const State& state, const BodyModel& body);

/// 2x3 contact Jacobian, rows (tangent, normal): J * v = contact-point velocity.
Eigen::Matrix<double, 2, 3> contact_jacobian(const State& state, const ContactInfo& contact);

/// Kinetic plus gravitational potential energy, joules.
double total_energy(const State& state, const BodyModel& body);

double kinetic_energy(const State& state, const BodyModel& body);

}  // namespace resim
