#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "resim/contact.hpp"
#include "resim/dataset.hpp"
#include "resim/policy.hpp"
#include "resim/rollout.hpp"
#include "resim/train.hpp"

namespace resim {

struct EvalResult {
  double mean_rmse = 0.0;
  double std_rmse = 0.0;
  std::vector<double> losses;  // one per (trajectory, rollout)
};

/// Rolls out from each trajectory's first state (residual branch used when a
/// policy is given, with n_eval_rollouts stochastic repeats) and reports the
/// trajectory losses.
EvalResult evaluate(const PolicyParams* policy, const Dataset& dataset,
                    const ContactParams& contact_params, int n_eval_rollouts = 1,
                    std::uint64_t seed = 0, unsigned n_threads = 0);

struct SweepRow {
  int n_train = 0;
  std::string model_tag;  // "analytical" or "residual"
  double mean_rmse = 0.0;
  double std_rmse = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  int events_per_trajectory = 0;  // mean contact events, rounded

  void validate() const;
};

struct SweepConfig {
  std::vector<int> train_n_list = {0, 2, 5, 10, 20};
  int test_count = 40;
  int n_eval_rollouts = 4;
  RolloutConfig rollout;
  TrainConfig train;
  std::uint64_t seed = 0;
};

/// RMSE-vs-training-size experiment: the test set is the last test_count
/// trajectories, the training pool everything before it. For each n a fresh
/// policy is trained on n pool trajectories (sampled without replacement)
/// and both the uncorrected and the residual-corrected simulator are scored
/// on the test set. n = 0 reports the analytical baseline for both tags.
SweepResult sweep(const Dataset& dataset, const ContactParams& contact_params,
                  const SweepConfig& cfg);

/// Mean over per-seed sweeps; std_rmse becomes the across-seed deviation.
SweepResult sweep_multi_seed(const Dataset& dataset, const ContactParams& contact_params,
                             const SweepConfig& cfg, const std::vector<std::uint64_t>& seeds);

std::string sweep_to_csv(const SweepResult& result);

/// Minimal polyline SVG of RMSE against training-set size.
std::string sweep_to_svg(const SweepResult& result);

}  // namespace resim
