#pragma once

#include <vector>

#include <Eigen/Core>

namespace resim {

/// Planar state: configuration q = (x, z, theta), velocity v = (vx, vz, omega).
struct State {
  Eigen::Vector3d q = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  double t = 0.0;  // s

  double x() const { return q[0]; }
  double z() const { return q[1]; }
  double theta() const { return q[2]; }
  double vx() const { return v[0]; }
  double vz() const { return v[1]; }
  double omega() const { return v[2]; }

  bool finite() const;
};

/// Uniformly sampled sequence of states.
struct Trajectory {
  std::vector<State> states;
  double dt = 0.0;  // s

  std::size_t size() const { return states.size(); }

  // Timestamps must increase by dt within 1e-9 s.
  void validate() const;
};

}  // namespace resim
