#pragma once

#include <Eigen/Core>

#include "resim/body.hpp"
#include "resim/contact.hpp"
#include "resim/dynamics.hpp"
#include "resim/state.hpp"

namespace resim {

/// Contact-frame view of a single contact: Jacobian, effective inertia
/// M_c = (J M^-1 J^T)^-1, and contact-point velocity v_c = J v.
struct ContactFrame {
  Eigen::Matrix<double, 2, 3> jacobian;
  Eigen::Matrix2d effective_inertia;
  Eigen::Vector2d contact_velocity;
};

/// Invariant contact features (M_c00, M_c01, M_c11, v_c,t, v_c,n).
using FeatureVector = Eigen::Matrix<double, 5, 1>;

/// (J M^-1 J^T)^-1, symmetric positive definite. Throws NumericalError when
/// the projection is close to singular (condition number >= 1e12).
Eigen::Matrix2d effective_inertia(const Eigen::Matrix<double, 2, 3>& jacobian,
                                  const BodyModel& body);

ContactFrame contact_frame(const State& state, const BodyModel& body,
                           const ContactInfo& contact);

FeatureVector features(const State& state, const BodyModel& body,
                       const ContactInfo& contact);

/// Impulse minimizing || dv_c - J M^-1 f_ext dt - M_c^-1 p ||_2 over the
/// friction cone { p_n >= 0, |p_t| <= mu p_n }. Solved by closed-form
/// enumeration of the active-set candidates (interior optimum, the two cone
/// edges, and the apex); constraints hold exactly.
Impulse optimal_impulse(const Eigen::Vector2d& dv_c,
                        const Eigen::Matrix<double, 2, 3>& jacobian,
                        const BodyModel& body, const Eigen::Vector3d& f_ext_dt,
                        double mu);

}  // namespace resim
