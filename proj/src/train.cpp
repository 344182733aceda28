#include "resim/train.hpp"

#include <cmath>

#include "resim/cma.hpp"
#include "resim/errors.hpp"
#include "resim/parallel.hpp"
#include "resim/rng.hpp"

namespace resim {

void TrainConfig::validate() const {
  if (max_iter < 0) throw ValidationError("train config: max_iter must be >= 0");
  if (population < 0) throw ValidationError("train config: population must be >= 0");
  if (!(init_sigma > 0.0)) throw ValidationError("train config: init_sigma must be > 0");
}

namespace {

double fitness_with_seeds(const PolicyParams& params, const std::vector<Trajectory>& dataset,
                          const BodyModel& body, const ContactParams& contact_params,
                          const RolloutConfig& cfg, std::uint64_t base_seed) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    double traj_acc = 0.0;
    for (int s = 0; s < cfg.samples_per_loss; ++s) {
      RolloutConfig one = cfg;
      one.seed = seed_from(base_seed, i, static_cast<std::uint64_t>(s));
      traj_acc += trajectory_loss(rollout(dataset[i], &params, body, contact_params, one),
                                  dataset[i], body);
    }
    acc += traj_acc / cfg.samples_per_loss;
  }
  return acc / static_cast<double>(dataset.size());
}

}  // namespace

double policy_fitness(const PolicyParams& params, const std::vector<Trajectory>& dataset,
                      const BodyModel& body, const ContactParams& contact_params,
                      const RolloutConfig& cfg) {
  if (dataset.empty()) throw ValidationError("policy_fitness: empty dataset");
  return fitness_with_seeds(params, dataset, body, contact_params, cfg, cfg.seed);
}

FeatureNorm compute_feature_norm(const std::vector<Trajectory>& dataset,
                                 const BodyModel& body, const ContactParams& contact_params) {
  Eigen::Matrix<double, 5, 1> sum = Eigen::Matrix<double, 5, 1>::Zero();
  Eigen::Matrix<double, 5, 1> sum_sq = Eigen::Matrix<double, 5, 1>::Zero();
  std::size_t count = 0;

  for (const Trajectory& obs : dataset) {
    TrajectorySimulator sim(body, contact_params);
    auto recorder = [&](const FeatureVector& x, int) {
      sum += x;
      sum_sq += x.cwiseProduct(x);
      ++count;
      return Impulse{0.0, 0.0};
    };
    State s = obs.states.front();
    for (std::size_t i = 1; i < obs.states.size(); ++i) {
      s = sim.step(s, obs.dt, recorder);
    }
  }

  FeatureNorm norm;
  if (count == 0) return norm;
  norm.shift = sum / static_cast<double>(count);
  const Eigen::Matrix<double, 5, 1> var =
      (sum_sq / static_cast<double>(count) - norm.shift.cwiseProduct(norm.shift))
          .cwiseMax(0.0);
  for (int d = 0; d < 5; ++d) {
    const double sd = std::sqrt(var[d]);
    norm.scale[d] = sd > 1e-12 ? sd : 1.0;
  }
  return norm;
}

TrainResult train(const std::vector<Trajectory>& dataset, const BodyModel& body,
                  const ContactParams& contact_params, const RolloutConfig& rollout_cfg,
                  const TrainConfig& train_cfg) {
  if (dataset.empty()) throw ValidationError("train: empty dataset");
  rollout_cfg.validate();
  train_cfg.validate();
  for (const Trajectory& obs : dataset) obs.validate();

  PolicyParams proto = zero_policy();
  proto.feature_norm = compute_feature_norm(dataset, body, contact_params);

  // Alg. init: theta ~ N(0, init_sigma).
  Rng init_rng(seed_from(train_cfg.seed, 0x696e6974ULL));
  Eigen::VectorXd theta0(proto.theta.size());
  for (Eigen::Index i = 0; i < theta0.size(); ++i) {
    theta0[i] = train_cfg.init_sigma * init_rng.normal();
  }

  const auto objective = [&](int gen, const std::vector<Eigen::VectorXd>& candidates) {
    // One seed block per generation, shared by every candidate.
    const std::uint64_t gen_seed = seed_from(train_cfg.seed, 0x67656eULL,
                                             static_cast<std::uint64_t>(gen));
    std::vector<double> fitness(candidates.size());
    parallel_for(
        candidates.size(),
        [&](std::size_t k) {
          PolicyParams params = proto;
          params.theta = candidates[k];
          fitness[k] = fitness_with_seeds(params, dataset, body, contact_params,
                                          rollout_cfg, gen_seed);
        },
        train_cfg.n_threads);
    return fitness;
  };

  EsOptions opts;
  opts.max_iter = train_cfg.max_iter;
  opts.lambda = train_cfg.population;
  opts.sigma0 = train_cfg.init_sigma;
  opts.seed = train_cfg.seed;

  const EsResult es = train_cfg.optimizer == Optimizer::cma_es
                          ? cma_es_minimize(theta0, opts, objective)
                          : one_plus_one_es_minimize(theta0, opts, objective);

  TrainResult result;
  result.params = proto;
  result.params.theta = es.best_x;
  result.history = es.history;
  result.best_fitness = es.best_f;
  return result;
}

}  // namespace resim
