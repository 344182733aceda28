#include "resim/cma.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "resim/errors.hpp"
#include "resim/rng.hpp"

namespace resim {

int default_population(int dim) {
  return 4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dim))));
}

EsResult cma_es_minimize(const Eigen::VectorXd& x0, const EsOptions& opts,
                         const BatchObjective& objective) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw ValidationError("cma: empty parameter vector");
  const int lambda = opts.lambda > 0 ? opts.lambda : default_population(n);
  if (lambda < 2) throw ValidationError("cma: population must be >= 2");
  const int mu = lambda / 2;

  // Recombination weights and strategy constants (Hansen's defaults).
  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) {
    weights[i] = std::log(0.5 * (lambda + 1)) - std::log(i + 1.0);
  }
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();
  const double nd = n;
  const double c_sigma = (mu_eff + 2.0) / (nd + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (nd + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / nd) / (nd + 4.0 + 2.0 * mu_eff / nd);
  const double c_1 = 2.0 / ((nd + 1.3) * (nd + 1.3) + mu_eff);
  const double c_mu = std::min(
      1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((nd + 2.0) * (nd + 2.0) + mu_eff));
  const double chi_n = std::sqrt(nd) * (1.0 - 1.0 / (4.0 * nd) + 1.0 / (21.0 * nd * nd));
  const int eig_interval =
      std::max(1, static_cast<int>(1.0 / (10.0 * nd * (c_1 + c_mu)) / lambda));

  Eigen::VectorXd mean = x0;
  double sigma = opts.sigma0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd eig_basis = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd eig_sqrt = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd path_sigma = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd path_c = Eigen::VectorXd::Zero(n);
  int last_eig_gen = 0;

  Rng rng(seed_from(opts.seed, 0x636d616573ULL));

  EsResult result;
  result.best_x = x0;
  result.best_f = std::numeric_limits<double>::infinity();
  result.history.reserve(static_cast<std::size_t>(std::max(0, opts.max_iter)));

  std::vector<Eigen::VectorXd> zs(static_cast<std::size_t>(lambda));
  std::vector<Eigen::VectorXd> ys(static_cast<std::size_t>(lambda));
  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(lambda));

  for (int gen = 0; gen < opts.max_iter; ++gen) {
    if (gen == 0 || gen - last_eig_gen >= eig_interval) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
      eig_basis = solver.eigenvectors();
      eig_sqrt = solver.eigenvalues().cwiseMax(1e-30).cwiseSqrt();
      last_eig_gen = gen;
    }

    for (int k = 0; k < lambda; ++k) {
      Eigen::VectorXd z(n);
      for (int i = 0; i < n; ++i) z[i] = rng.normal();
      zs[static_cast<std::size_t>(k)] = z;
      ys[static_cast<std::size_t>(k)] = eig_basis * eig_sqrt.cwiseProduct(z);
      xs[static_cast<std::size_t>(k)] = mean + sigma * ys[static_cast<std::size_t>(k)];
    }

    const std::vector<double> fitness = objective(gen, xs);
    if (fitness.size() != static_cast<std::size_t>(lambda)) {
      throw ValidationError("cma: objective returned wrong batch size");
    }

    std::vector<int> order(static_cast<std::size_t>(lambda));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return fitness[static_cast<std::size_t>(a)] < fitness[static_cast<std::size_t>(b)];
    });

    const int best_k = order.front();
    if (fitness[static_cast<std::size_t>(best_k)] < result.best_f) {
      result.best_f = fitness[static_cast<std::size_t>(best_k)];
      result.best_x = xs[static_cast<std::size_t>(best_k)];
    }
    result.history.push_back(result.best_f);

    Eigen::VectorXd y_w = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd z_w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < mu; ++i) {
      y_w += weights[i] * ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      z_w += weights[i] * zs[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }
    mean += sigma * y_w;

    // C^(-1/2) y_w == B z_w with the sampled factorization.
    path_sigma = (1.0 - c_sigma) * path_sigma +
                 std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * (eig_basis * z_w);
    const double ps_norm = path_sigma.norm();
    const double expected_decay =
        std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (gen + 1)));
    const bool h_sigma = ps_norm / expected_decay < (1.4 + 2.0 / (nd + 1.0)) * chi_n;

    path_c = (1.0 - c_c) * path_c;
    if (h_sigma) {
      path_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * y_w;
    }

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < mu; ++i) {
      const Eigen::VectorXd& y = ys[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      rank_mu.noalias() += weights[i] * y * y.transpose();
    }
    const double h_adjust = h_sigma ? 0.0 : c_c * (2.0 - c_c);
    cov = (1.0 - c_1 - c_mu) * cov +
          c_1 * (path_c * path_c.transpose() + h_adjust * cov) + c_mu * rank_mu;
    cov = 0.5 * (cov + cov.transpose().eval());

    sigma *= std::exp((c_sigma / d_sigma) * (ps_norm / chi_n - 1.0));
  }
  return result;
}

EsResult one_plus_one_es_minimize(const Eigen::VectorXd& x0, const EsOptions& opts,
                                  const BatchObjective& objective) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw ValidationError("es: empty parameter vector");

  Rng rng(seed_from(opts.seed, 0x312b31ULL));
  Eigen::VectorXd parent = x0;
  double parent_f = std::numeric_limits<double>::infinity();
  double sigma = opts.sigma0;
  const double damp = std::sqrt(n + 1.0);

  EsResult result;
  result.best_x = x0;
  result.best_f = parent_f;

  for (int gen = 0; gen < opts.max_iter; ++gen) {
    Eigen::VectorXd candidate(n);
    for (int i = 0; i < n; ++i) candidate[i] = parent[i] + sigma * rng.normal();

    // Re-evaluate the parent each generation so the comparison uses common
    // random numbers.
    const std::vector<double> fs = objective(gen, {candidate, parent});
    parent_f = fs[1];

    const bool success = fs[0] <= parent_f;
    if (success) {
      parent = candidate;
      parent_f = fs[0];
    }
    // Smoothed 1/5th success rule.
    sigma *= std::exp(((success ? 1.0 : 0.0) - 0.2) / damp);

    if (parent_f < result.best_f) {
      result.best_f = parent_f;
      result.best_x = parent;
    }
    result.history.push_back(result.best_f);
  }
  return result;
}

}  // namespace resim
