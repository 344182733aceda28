#pragma once

#include <cstdint>

#include "resim/body.hpp"
#include "resim/contact.hpp"
#include "resim/policy.hpp"
#include "resim/simulate.hpp"
#include "resim/state.hpp"

namespace resim {

struct RolloutConfig {
  double dt = 1.0 / 250.0;  // s, must match the observed trajectory
  int horizon = 1;          // steps, upper bound for free-running rollouts
  int samples_per_loss = 4; // stochastic rollouts averaged per trajectory
  std::uint64_t seed = 0;

  void validate() const;
};

/// Estimated trajectory for the observation: starts from obs.states[0] and
/// simulates with the analytical contact model plus, when `policy` is given,
/// a residual impulse sampled once per contact event. Same length and dt as
/// obs; deterministic in cfg.seed.
Trajectory rollout(const Trajectory& obs, const PolicyParams* policy,
                   const BodyModel& body, const ContactParams& contact_params,
                   const RolloutConfig& cfg);

/// RMS over timesteps of the configuration error norm in scaled coordinates
/// (x, z, r_g * theta). Throws ValidationError on length mismatch.
double trajectory_loss(const Trajectory& est, const Trajectory& obs,
                       const BodyModel& body);

}  // namespace resim
