#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "resim/body.hpp"
#include "resim/contact.hpp"
#include "resim/policy.hpp"
#include "resim/simulate.hpp"
#include "resim/state.hpp"

namespace resim {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// One weighted Gaussian over the stacked state (q, v).
struct BeliefComponent {
  double weight = 1.0;
  Vector6d mean = Vector6d::Zero();
  Matrix6d cov = Matrix6d::Zero();

  State mean_state(double t = 0.0) const;
  static BeliefComponent from_state(const State& state, const Matrix6d& cov = Matrix6d::Zero());
};

struct GaussianMixture {
  std::vector<BeliefComponent> components;

  std::size_t size() const { return components.size(); }
  // Weights positive summing to 1, covariances symmetric PSD.
  void validate() const;

  Vector6d mean() const;
  /// Total covariance including between-component spread.
  Matrix6d covariance() const;
};

struct DynamicStepResult {
  GaussianMixture belief;
  double event_time = 0.0;     // s elapsed from the input belief (weighted mean)
  int samples_discarded = 0;
  int samples_drawn = 0;
};

struct PropagateConfig {
  int m_samples = 50;
  std::uint64_t seed = 0;
  double horizon = 2.0;        // s, per dynamic step
  int max_retries = 10;        // feasibility re-draws per particle slot
  SimOptions sim;

  void validate() const;
};

/// Post-contact Gaussian for one contact: velocity mean via the impulse
/// update with p_m + dist.mean, velocity covariance (M^-1 J^T) Sigma_res
/// (M^-1 J^T)^T; configuration stays fixed with zero covariance.
std::pair<Vector6d, Matrix6d> push_impulse_uncertainty(
    const State& state_pre, const BodyModel& body,
    const Eigen::Matrix<double, 2, 3>& jacobian, const Impulse& p_m,
    const ImpulseDistribution& dist, const Eigen::Vector3d& f_ext_dt = Eigen::Vector3d::Zero());

/// True iff no vertex sits below z = -kContactTolerance and total energy does
/// not exceed pre_event_energy + 1e-9 J.
bool feasibility_filter(const State& candidate, double pre_event_energy,
                        const BodyModel& body);

/// One hybrid particle/Bayes step: resting components pass through untouched;
/// components whose mean never contacts within the horizon are pushed through
/// the affine free-flight map; the rest are propagated by m_samples particles
/// that fly to their first contact and become per-particle posterior
/// Gaussians. Particles whose posterior mean fails the feasibility filter are
/// re-drawn up to max_retries times, then dropped. Throws NumericalError when
/// every particle of the contacting mass is discarded (belief collapse).
DynamicStepResult propagate_belief(const GaussianMixture& belief, const BodyModel& body,
                                   const ContactParams& contact_params,
                                   const PolicyParams& policy, const PropagateConfig& cfg);

/// Transition to the end of the next contact event; identity when the whole
/// belief is at rest. Long-horizon prediction is a fold over dynamic steps.
DynamicStepResult dynamic_step(const GaussianMixture& belief, const BodyModel& body,
                               const ContactParams& contact_params,
                               const PolicyParams& policy, const PropagateConfig& cfg);

std::string belief_to_json(const GaussianMixture& mixture, double event_time = 0.0,
                           int samples_discarded = 0, int samples_drawn = 0);
GaussianMixture belief_from_json(const std::string& text);

}  // namespace resim
