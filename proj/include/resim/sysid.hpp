#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "resim/body.hpp"
#include "resim/contact.hpp"
#include "resim/state.hpp"

namespace resim {

struct MhConfig {
  int n_samples = 3000;
  int burn_in = 1000;
  double proposal_sigma = 0.05;
  // Inverse temperature of the squared-error log-likelihood; the default
  // corresponds to a 2 mm per-step observation noise scale.
  double likelihood_beta = 1.0 / (2.0 * 0.002 * 0.002);
  std::uint64_t seed = 0;

  void validate() const;
};

struct MhSample {
  double mu = 0.0;
  double eps = 0.0;
  double log_likelihood = 0.0;
  bool accepted = false;
};

struct ParamChain {
  std::vector<MhSample> samples;  // post burn-in
  double acceptance_rate = 0.0;
};

// Parameter bounds enforced by proposal rejection.
inline constexpr double kMuMin = 0.0;
inline constexpr double kMuMax = 2.0;
inline constexpr double kEpsMin = 0.0;
inline constexpr double kEpsMax = 1.0;

/// -beta * sum over trajectories of trajectory_loss(analytic rollout, obs)^2.
/// The rollout is deterministic (residual branch disabled).
double sysid_log_likelihood(const ContactParams& params,
                            const std::vector<Trajectory>& dataset, const BodyModel& body,
                            double likelihood_beta);

/// Random-walk Metropolis-Hastings over (mu, eps) with a symmetric Gaussian
/// proposal N(current, proposal_sigma^2 I); out-of-bounds proposals are
/// rejected. Returns the post-burn-in chain.
ParamChain metropolis_hastings(const std::vector<Trajectory>& dataset, const BodyModel& body,
                               const MhConfig& cfg);

/// Generic MH driver over an arbitrary log-density; exposed so the sampler
/// can be validated against analytic posteriors.
ParamChain run_mh_chain(const std::function<double(double, double)>& log_density,
                        const MhConfig& cfg);

/// Per-coordinate median (midpoint convention for even counts).
ContactParams chain_point_estimate(const ParamChain& chain);

/// CSV rows "mu,eps,logL,accepted".
std::string chain_to_csv(const ParamChain& chain);

/// Summary JSON with medians and acceptance rate.
std::string chain_summary_json(const ParamChain& chain);

}  // namespace resim
