#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace resim {

/// Planar rigid body: mass/inertia about the COM plus a convex CCW polygon
/// (body frame, COM at the origin). Gravity acts along -z.
struct BodyModel {
  double mass = 0.0;       // kg
  double inertia = 0.0;    // kg m^2, out-of-plane axis through the COM
  std::vector<Eigen::Vector2d> vertices;  // m, counter-clockwise
  double gravity = 9.81;   // m/s^2
  double radius_of_gyration = 0.0;  // m, sqrt(inertia / mass)

  // Generalized inertia diag(m, m, I) acting on (vx, vz, omega).
  Eigen::Vector3d inertia_diag() const { return {mass, mass, inertia}; }
  Eigen::Vector3d inv_inertia_diag() const {
    return {1.0 / mass, 1.0 / mass, 1.0 / inertia};
  }

  // Throws ValidationError on non-positive mass/inertia, a non-convex or
  // clockwise polygon, a COM outside the polygon, or a stale radius of
  // gyration.
  void validate() const;
};

BodyModel make_body(double mass, double inertia, std::vector<Eigen::Vector2d> vertices,
                    double gravity = 9.81);

/// Square of side `side` with uniform-plate inertia m*side^2/6.
BodyModel make_square_body(double mass, double side, double gravity = 9.81);

/// Default experiment body: 0.05 m square, 0.049 kg.
BodyModel default_dice_body();

std::string body_to_json(const BodyModel& body);
BodyModel body_from_json(const std::string& text);

}  // namespace resim
