#include "resim/rollout.hpp"

#include <cmath>

#include "resim/errors.hpp"
#include "resim/rng.hpp"

namespace resim {

void RolloutConfig::validate() const {
  if (!(dt > 0.0)) throw ValidationError("rollout config: dt must be positive");
  if (horizon < 1) throw ValidationError("rollout config: horizon must be >= 1");
  if (samples_per_loss < 1) {
    throw ValidationError("rollout config: samples_per_loss must be >= 1");
  }
}

Trajectory rollout(const Trajectory& obs, const PolicyParams* policy,
                   const BodyModel& body, const ContactParams& contact_params,
                   const RolloutConfig& cfg) {
  cfg.validate();
  if (obs.states.empty()) {
    throw ValidationError("rollout: empty observed trajectory");
  }
  if (std::abs(obs.dt - cfg.dt) > 1e-12) {
    throw ValidationError("rollout: dt mismatch between config and observation");
  }

  TrajectorySimulator sim(body, contact_params);
  TrajectorySimulator::ResidualHook hook;
  if (policy) {
    hook = [&](const FeatureVector& x, int event_index) {
      const ImpulseDistribution dist = policy_eval(*policy, x);
      return sample_residual(dist, seed_from(cfg.seed, static_cast<std::uint64_t>(event_index)));
    };
  }

  Trajectory est;
  est.dt = obs.dt;
  est.states.reserve(obs.states.size());
  est.states.push_back(obs.states.front());
  for (std::size_t i = 1; i < obs.states.size(); ++i) {
    est.states.push_back(sim.step(est.states.back(), obs.dt, hook));
  }
  return est;
}

double trajectory_loss(const Trajectory& est, const Trajectory& obs,
                       const BodyModel& body) {
  if (est.states.size() != obs.states.size()) {
    throw ValidationError("trajectory_loss: length mismatch");
  }
  if (est.states.empty()) {
    throw ValidationError("trajectory_loss: empty trajectories");
  }
  const double r_g = body.radius_of_gyration;
  double acc = 0.0;
  for (std::size_t i = 0; i < est.states.size(); ++i) {
    const Eigen::Vector3d dq = est.states[i].q - obs.states[i].q;
    const double dx = dq[0];
    const double dz = dq[1];
    const double dth = r_g * dq[2];
    acc += dx * dx + dz * dz + dth * dth;
  }
  return std::sqrt(acc / static_cast<double>(est.states.size()));
}

}  // namespace resim
