#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "resim/contact.hpp"
#include "resim/contact_frame.hpp"

namespace resim {

// Output scale of the predicted standard deviations (N s): sigma = exp(o) * scale.
inline constexpr double kPolicySigmaScale = 1e-2;
// Per-axis covariance eigenvalue floor is kPolicySigmaMin^2.
inline constexpr double kPolicySigmaMin = 1e-4;

/// Bivariate Gaussian over corrective contact-frame impulses.
struct ImpulseDistribution {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();     // N s
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity();  // N^2 s^2
};

/// Per-dimension affine input normalization, x_norm = (x - shift) / scale.
struct FeatureNorm {
  Eigen::Matrix<double, 5, 1> shift = Eigen::Matrix<double, 5, 1>::Zero();
  Eigen::Matrix<double, 5, 1> scale = Eigen::Matrix<double, 5, 1>::Ones();
};

/// Density-network parameters as one flat vector, plus the architecture and
/// the input normalization captured at training time.
struct PolicyParams {
  std::vector<int> layer_sizes = {5, 16, 16, 5};
  Eigen::VectorXd theta;
  FeatureNorm feature_norm;

  void validate() const;
};

/// Number of weights and biases implied by layer_sizes.
int policy_param_count(const std::vector<int>& layer_sizes);

/// Zero-initialized policy: zero mean, sigma = kPolicySigmaScale, rho = 0.
PolicyParams zero_policy();

/// theta ~ N(0, init_sigma), deterministic in the seed.
PolicyParams random_policy(std::uint64_t seed, double init_sigma = 0.1);

/// Deterministic forward pass: tanh MLP mapping normalized features to
/// (mean_t, mean_n, log sigma_t, log sigma_n, rho_raw); the covariance is
/// assembled with rho = 0.99 tanh(rho_raw) and floored at kPolicySigmaMin^2
/// per eigenvalue.
ImpulseDistribution policy_eval(const PolicyParams& params, const FeatureVector& x);

/// mean + L z with L the Cholesky factor of cov and z two seeded standard
/// normals. Throws ValidationError if cov is below the eigenvalue floor.
Impulse sample_residual(const ImpulseDistribution& dist, std::uint64_t rng_seed);

std::string policy_to_json(const PolicyParams& params);
PolicyParams policy_from_json(const std::string& text);

void save_policy(const PolicyParams& params, const std::string& path);
PolicyParams load_policy(const std::string& path);

}  // namespace resim
