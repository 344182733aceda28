#pragma once

#include <cstdint>

#include "resim/contact.hpp"
#include "resim/dataset.hpp"

namespace resim {

/// Ground-truth drop trajectories from a penalty-based compliant contact
/// model (spring-damper normal force, regularized Coulomb friction) at
/// cfg.substep_dt, subsampled to sample_rate. The analytical rigid model
/// cannot reproduce these exactly; the gap is the residual learner's target.
/// Throws NumericalError if the integration gains energy between bounces.
Dataset generate_oracle_dataset(const OracleConfig& cfg, const BodyModel& body,
                                double sample_rate = 250.0);

/// Drop trajectories simulated by the analytical impulse model itself
/// (deterministic, no residual); used for self-consistency checks and
/// synthetic parameter-recovery studies.
Dataset generate_analytic_dataset(const ContactParams& params, const BodyModel& body,
                                  const InitRanges& init, int n_trajectories,
                                  double duration, double sample_rate, std::uint64_t seed);

/// Single compliant-contact trajectory from a fixed initial state.
Trajectory oracle_trajectory(const OracleConfig& cfg, const BodyModel& body,
                             const State& initial, double sample_rate);

}  // namespace resim
