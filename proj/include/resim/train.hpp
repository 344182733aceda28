#pragma once

#include <cstdint>
#include <vector>

#include "resim/body.hpp"
#include "resim/contact.hpp"
#include "resim/policy.hpp"
#include "resim/rollout.hpp"
#include "resim/state.hpp"

namespace resim {

enum class Optimizer { cma_es, one_plus_one_es };

struct TrainConfig {
  int max_iter = 100;
  int population = 0;        // candidates per generation; 0 = CMA default
  double init_sigma = 0.1;   // parameter init scale and initial search step
  Optimizer optimizer = Optimizer::cma_es;
  std::uint64_t seed = 0;
  unsigned n_threads = 0;    // 0 = hardware concurrency

  void validate() const;
};

struct TrainResult {
  PolicyParams params;
  std::vector<double> history;  // best-seen fitness per generation
  double best_fitness = 0.0;
};

/// Fitness of one parameter vector: mean over dataset trajectories of the
/// mean over cfg.samples_per_loss stochastic rollouts of trajectory_loss.
double policy_fitness(const PolicyParams& params, const std::vector<Trajectory>& dataset,
                      const BodyModel& body, const ContactParams& contact_params,
                      const RolloutConfig& cfg);

/// Per-dimension mean/std of the contact features seen by the analytical
/// simulator on the dataset; falls back to identity when no events occur.
FeatureNorm compute_feature_norm(const std::vector<Trajectory>& dataset,
                                 const BodyModel& body, const ContactParams& contact_params);

/// Self-supervised residual training: gradient-free search over the policy
/// parameters against the whole-trajectory loss. Candidates within one
/// generation share rollout seeds (common random numbers) and are evaluated
/// concurrently.
TrainResult train(const std::vector<Trajectory>& dataset, const BodyModel& body,
                  const ContactParams& contact_params, const RolloutConfig& rollout_cfg,
                  const TrainConfig& train_cfg);

}  // namespace resim
