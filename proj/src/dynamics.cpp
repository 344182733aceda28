#include "resim/dynamics.hpp"

#include <cmath>
#include <limits>

#include "resim/errors.hpp"

namespace resim {

Eigen::Vector2d vertex_world(const State& state, const BodyModel& body, int i) {
  const double c = std::cos(state.theta());
  const double s = std::sin(state.theta());
  const Eigen::Vector2d& vb = body.vertices[static_cast<std::size_t>(i)];
  return {state.x() + c * vb.x() - s * vb.y(),
          state.z() + s * vb.x() + c * vb.y()};
}

double min_vertex_height(const State& state, const BodyModel& body) {
  double zmin = std::numeric_limits<double>::infinity();
  const double c = std::cos(state.theta());
  const double s = std::sin(state.theta());
  for (const auto& vb : body.vertices) {
    zmin = std::min(zmin, state.z() + s * vb.x() + c * vb.y());
  }
  return zmin;
}

State integrate_free_flight(const State& state, const BodyModel& body, double dt) {
  if (!state.finite()) {
    throw ValidationError("integrate_free_flight: non-finite state");
  }
  if (dt < 0.0 || !std::isfinite(dt)) {
    throw ValidationError("integrate_free_flight: dt must be non-negative");
  }
  const double g = body.gravity;
  State out = state;
  out.q[0] = state.x() + state.vx() * dt;
  out.q[1] = state.z() + state.vz() * dt - 0.5 * g * dt * dt;
  out.q[2] = state.theta() + state.omega() * dt;
  out.v[1] = state.vz() - g * dt;
  out.t = state.t + dt;
  return out;
}

std::optional<ContactInfo> detect_contact(const State& state, const BodyModel& body) {
  const double c = std::cos(state.theta());
  const double s = std::sin(state.theta());
  int best = -1;
  double best_z = std::numeric_limits<double>::infinity();
  double best_x = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < body.vertices.size(); ++i) {
    const Eigen::Vector2d& vb = body.vertices[i];
    const double wx = state.x() + c * vb.x() - s * vb.y();
    const double wz = state.z() + s * vb.x() + c * vb.y();
    // Deepest vertex wins; ties go to the smaller world x so symmetric
    // poses resolve to the same world-frame contact point.
    if (wz < best_z || (wz == best_z && wx < best_x)) {
      best_z = wz;
      best_x = wx;
      best = static_cast<int>(i);
    }
  }
  if (best < 0 || best_z > kContactTolerance) {
    return std::nullopt;
  }
  ContactInfo info;
  info.point = {best_x, best_z};
  info.normal = {0.0, 1.0};
  info.penetration_depth = -best_z;
  info.vertex_index = best;
  return info;
}

Eigen::Matrix<double, 2, 3> contact_jacobian(const State& state, const ContactInfo& contact) {
  const double rx = contact.point.x() - state.x();
  const double rz = contact.point.y() - state.z();
  Eigen::Matrix<double, 2, 3> jac;
  jac << 1.0, 0.0, -rz,
         0.0, 1.0, rx;
  return jac;
}

double kinetic_energy(const State& state, const BodyModel& body) {
  return 0.5 * body.mass * (state.vx() * state.vx() + state.vz() * state.vz()) +
         0.5 * body.inertia * state.omega() * state.omega();
}

double total_energy(const State& state, const BodyModel& body) {
  return kinetic_energy(state, body) + body.mass * body.gravity * state.z();
}

}  // namespace resim
