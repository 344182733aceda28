#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace resim {

/// Batch objective: fitness values for one generation of candidates. The
/// generation index lets callers share random numbers across candidates.
using BatchObjective =
    std::function<std::vector<double>(int generation, const std::vector<Eigen::VectorXd>&)>;

struct EsOptions {
  int max_iter = 100;
  int lambda = 0;       // population; 0 = 4 + floor(3 ln n)
  double sigma0 = 0.1;
  std::uint64_t seed = 0;
};

struct EsResult {
  Eigen::VectorXd best_x;
  double best_f = 0.0;
  std::vector<double> history;  // best-seen fitness per generation, non-increasing
};

int default_population(int dim);

/// (mu/mu_w, lambda)-CMA-ES minimizer (Hansen's standard parameterization,
/// non-negative recombination weights, cumulative step-size adaptation).
EsResult cma_es_minimize(const Eigen::VectorXd& x0, const EsOptions& opts,
                         const BatchObjective& objective);

/// (1+1)-ES with a smoothed 1/5th success rule.
EsResult one_plus_one_es_minimize(const Eigen::VectorXd& x0, const EsOptions& opts,
                                  const BatchObjective& objective);

}  // namespace resim
