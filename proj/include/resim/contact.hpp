#pragma once

#include <Eigen/Core>

#include "resim/body.hpp"
#include "resim/dynamics.hpp"
#include "resim/state.hpp"

namespace resim {

struct ContactParams {
  double mu = 0.0;   // Coulomb friction coefficient, >= 0
  double eps = 0.0;  // restitution, in [0, 1]

  void validate() const;
};

/// Contact-frame impulse, components (tangential, normal), N s.
struct Impulse {
  double p_t = 0.0;
  double p_n = 0.0;

  Eigen::Vector2d vec() const { return {p_t, p_n}; }
  static Impulse from_vec(const Eigen::Vector2d& p) { return {p.x(), p.y()}; }
};

/// Newton-restitution point impact with Coulomb friction. Solves the
/// bilateral sticking system first and projects onto the friction cone when
/// the tangential impulse exceeds mu * p_n (maximum dissipation). Falls back
/// to the energy-minimal cone impulse in the rare configurations where the
/// Newton law would add kinetic energy. Guarantees p_n >= 0, |p_t| <= mu p_n,
/// post-contact normal velocity >= 0, and no kinetic energy gain.
/// Throws ValidationError when the contact is not approaching (v_c,n >= 0).
Impulse resolve_contact(const State& state, const BodyModel& body,
                        const ContactInfo& contact, const ContactParams& params);

/// v_post = v_pre + M^-1 (f_ext dt + J^T p); configuration unchanged.
State apply_impulse(const State& state, const BodyModel& body,
                    const Eigen::Matrix<double, 2, 3>& jacobian, const Impulse& p,
                    const Eigen::Vector3d& f_ext_dt = Eigen::Vector3d::Zero());

}  // namespace resim
