#include "resim/contact.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "resim/errors.hpp"

namespace resim {

void ContactParams::validate() const {
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw ValidationError("contact params: mu must be >= 0");
  }
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw ValidationError("contact params: eps must lie in [0, 1]");
  }
}

namespace {

// Energy change of applying p in the contact frame:
// dKE = p . v_c + 1/2 p . A p  with A = J M^-1 J^T.
double impulse_energy_delta(const Eigen::Matrix2d& a_contact, const Eigen::Vector2d& v_c,
                            const Eigen::Vector2d& p) {
  return p.dot(v_c) + 0.5 * p.dot(a_contact * p);
}

// Minimizer of the impact energy over the friction cone. With A spd the
// unconstrained optimum -A^-1 v_c stops the contact point dead; otherwise the
// best cone-edge impulse is used. Never increases kinetic energy (p = 0 is
// feasible with zero gain).
Eigen::Vector2d max_dissipation_impulse(const Eigen::Matrix2d& a_contact,
                                        const Eigen::Vector2d& v_c, double mu) {
  const Eigen::Vector2d p_stop = -a_contact.inverse() * v_c;
  if (p_stop.y() >= 0.0 && std::abs(p_stop.x()) <= mu * p_stop.y()) {
    return p_stop;
  }
  Eigen::Vector2d best = Eigen::Vector2d::Zero();
  double best_de = 0.0;
  for (const double sign : {-1.0, 1.0}) {
    const Eigen::Vector2d dir(sign * mu, 1.0);
    const double denom = dir.dot(a_contact * dir);
    if (denom <= 0.0) continue;
    const double pn = std::max(0.0, -dir.dot(v_c) / denom);
    const Eigen::Vector2d p = pn * dir;
    const double de = impulse_energy_delta(a_contact, v_c, p);
    if (de < best_de) {
      best_de = de;
      best = p;
    }
  }
  return best;
}

}  // namespace

Impulse resolve_contact(const State& state, const BodyModel& body,
                        const ContactInfo& contact, const ContactParams& params) {
  params.validate();
  const Eigen::Matrix<double, 2, 3> jac = contact_jacobian(state, contact);
  const Eigen::Vector2d v_c = jac * state.v;
  if (!(v_c.y() < 0.0)) {
    throw ValidationError("resolve_contact: contact point is not approaching");
  }
  const Eigen::Matrix2d a_contact =
      jac * body.inv_inertia_diag().asDiagonal() * jac.transpose();

  // Sticking: v_c_post = (0, -eps v_n) exactly.
  const Eigen::Vector2d target(0.0, -params.eps * v_c.y());
  Eigen::Vector2d p = a_contact.inverse() * (target - v_c);

  if (!(p.y() >= 0.0 && std::abs(p.x()) <= params.mu * p.y())) {
    // Sliding: saturate at the cone edge opposing slip and keep the Newton
    // normal-velocity condition.
    double slip = v_c.x();
    if (slip == 0.0) {
      // Slip direction induced by a pure normal impulse.
      slip = a_contact(0, 1);
    }
    const double sign = slip > 0.0 ? -1.0 : 1.0;
    const Eigen::Vector2d dir(sign * params.mu, 1.0);
    const double denom = (a_contact * dir).y();
    double pn = denom > 0.0 ? -(1.0 + params.eps) * v_c.y() / denom : -1.0;
    if (pn < 0.0) {
      p = max_dissipation_impulse(a_contact, v_c, params.mu);
    } else {
      p = pn * dir;
    }
  }

  if (impulse_energy_delta(a_contact, v_c, p) > 0.0) {
    // Newton restitution can gain energy under strong tangential coupling;
    // fall back to the dissipative optimum.
    p = max_dissipation_impulse(a_contact, v_c, params.mu);
  }

  // A cone-edge fallback may leave the point still approaching. Top up with
  // the normal impulse that zeroes v_n; this widens the cone and dissipates.
  const double v_n_post = (v_c + a_contact * p).y();
  if (v_n_post < 0.0 && a_contact(1, 1) > 0.0) {
    p.y() += -v_n_post / a_contact(1, 1);
  }
  return Impulse::from_vec(p);
}

State apply_impulse(const State& state, const BodyModel& body,
                    const Eigen::Matrix<double, 2, 3>& jacobian, const Impulse& p,
                    const Eigen::Vector3d& f_ext_dt) {
  State out = state;
  out.v = state.v + body.inv_inertia_diag().asDiagonal() *
                        (f_ext_dt + jacobian.transpose() * p.vec());
  return out;
}

}  // namespace resim
