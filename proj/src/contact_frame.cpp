#include "resim/contact_frame.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <limits>

#include "resim/errors.hpp"

namespace resim {

Eigen::Matrix2d effective_inertia(const Eigen::Matrix<double, 2, 3>& jacobian,
                                  const BodyModel& body) {
  Eigen::Matrix2d a = jacobian * body.inv_inertia_diag().asDiagonal() * jacobian.transpose();
  a = 0.5 * (a + a.transpose().eval());

  // Condition via the closed-form 2x2 eigenvalues.
  const double tr = a.trace();
  const double det = a.determinant();
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double lo = 0.5 * tr - disc;
  const double hi = 0.5 * tr + disc;
  if (!(lo > 0.0) || hi / lo >= 1e12) {
    throw NumericalError("effective_inertia: degenerate contact projection");
  }

  Eigen::Matrix2d m_c;
  m_c << a(1, 1), -a(0, 1),
         -a(1, 0), a(0, 0);
  m_c /= det;
  return 0.5 * (m_c + m_c.transpose().eval());
}

ContactFrame contact_frame(const State& state, const BodyModel& body,
                           const ContactInfo& contact) {
  ContactFrame frame;
  frame.jacobian = contact_jacobian(state, contact);
  frame.effective_inertia = effective_inertia(frame.jacobian, body);
  frame.contact_velocity = frame.jacobian * state.v;
  return frame;
}

FeatureVector features(const State& state, const BodyModel& body,
                       const ContactInfo& contact) {
  const ContactFrame frame = contact_frame(state, body, contact);
  FeatureVector x;
  x << frame.effective_inertia(0, 0), frame.effective_inertia(0, 1),
       frame.effective_inertia(1, 1), frame.contact_velocity.x(),
       frame.contact_velocity.y();
  return x;
}

Impulse optimal_impulse(const Eigen::Vector2d& dv_c,
                        const Eigen::Matrix<double, 2, 3>& jacobian,
                        const BodyModel& body, const Eigen::Vector3d& f_ext_dt,
                        double mu) {
  if (!(mu >= 0.0) || !dv_c.allFinite() || !f_ext_dt.allFinite()) {
    throw ValidationError("optimal_impulse: invalid inputs");
  }
  const Eigen::Matrix2d a = jacobian * body.inv_inertia_diag().asDiagonal() *
                            jacobian.transpose();  // M_c^-1
  const Eigen::Vector2d c =
      dv_c - jacobian * body.inv_inertia_diag().asDiagonal() * f_ext_dt;

  const auto objective = [&](const Eigen::Vector2d& p) {
    return (c - a * p).squaredNorm();
  };
  const auto feasible = [&](const Eigen::Vector2d& p) {
    return p.y() >= 0.0 && std::abs(p.x()) <= mu * p.y();
  };

  Eigen::Vector2d best = Eigen::Vector2d::Zero();  // the apex is always feasible
  double best_obj = objective(best);

  const auto consider = [&](const Eigen::Vector2d& p) {
    if (!feasible(p)) return;
    const double obj = objective(p);
    if (obj < best_obj) {
      best_obj = obj;
      best = p;
    }
  };

  // Interior optimum A p = c, i.e. p = M_c c.
  const double det = a.determinant();
  if (det > 0.0) {
    Eigen::Vector2d p_star;
    p_star << (a(1, 1) * c.x() - a(0, 1) * c.y()) / det,
              (-a(1, 0) * c.x() + a(0, 0) * c.y()) / det;
    consider(p_star);
  }

  // Cone edges p = p_n (s mu, 1), p_n >= 0.
  for (const double sign : {-1.0, 1.0}) {
    const Eigen::Vector2d dir(sign * mu, 1.0);
    const Eigen::Vector2d ad = a * dir;
    const double denom = ad.squaredNorm();
    if (denom <= 0.0) continue;
    const double pn = std::max(0.0, ad.dot(c) / denom);
    consider(pn * dir);
  }

  return Impulse::from_vec(best);
}

}  // namespace resim
