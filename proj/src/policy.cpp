#include "resim/policy.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "resim/errors.hpp"
#include "resim/rng.hpp"

namespace resim {

int policy_param_count(const std::vector<int>& layer_sizes) {
  int count = 0;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    count += layer_sizes[l + 1] * (layer_sizes[l] + 1);
  }
  return count;
}

void PolicyParams::validate() const {
  if (layer_sizes.size() < 2 || layer_sizes.front() != 5 || layer_sizes.back() != 5) {
    throw ValidationError("policy: layer_sizes must map 5 features to 5 outputs");
  }
  for (int n : layer_sizes) {
    if (n <= 0) throw ValidationError("policy: layer sizes must be positive");
  }
  if (theta.size() != policy_param_count(layer_sizes)) {
    throw ValidationError("policy: theta length does not match the architecture");
  }
  if (!theta.allFinite()) {
    throw ValidationError("policy: non-finite parameters");
  }
  for (int i = 0; i < 5; ++i) {
    if (!(feature_norm.scale[i] > 0.0)) {
      throw ValidationError("policy: feature scales must be positive");
    }
  }
}

PolicyParams zero_policy() {
  PolicyParams params;
  params.theta = Eigen::VectorXd::Zero(policy_param_count(params.layer_sizes));
  return params;
}

PolicyParams random_policy(std::uint64_t seed, double init_sigma) {
  PolicyParams params = zero_policy();
  Rng rng(seed);
  for (Eigen::Index i = 0; i < params.theta.size(); ++i) {
    params.theta[i] = init_sigma * rng.normal();
  }
  return params;
}

ImpulseDistribution policy_eval(const PolicyParams& params, const FeatureVector& x) {
  params.validate();
  if (!x.allFinite()) {
    throw ValidationError("policy_eval: non-finite features");
  }

  Eigen::VectorXd h =
      (x - params.feature_norm.shift).cwiseQuotient(params.feature_norm.scale);

  const auto& sizes = params.layer_sizes;
  Eigen::Index offset = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    Eigen::VectorXd next(out);
    // Row-major weights followed by biases.
    for (int r = 0; r < out; ++r) {
      double acc = params.theta[offset + static_cast<Eigen::Index>(out) * in + r];  // bias
      for (int cidx = 0; cidx < in; ++cidx) {
        acc += params.theta[offset + static_cast<Eigen::Index>(r) * in + cidx] * h[cidx];
      }
      next[r] = acc;
    }
    offset += static_cast<Eigen::Index>(out) * (in + 1);
    if (l + 2 < sizes.size()) {
      next = next.array().tanh().matrix();
    }
    h = std::move(next);
  }

  ImpulseDistribution dist;
  dist.mean = {h[0], h[1]};
  const double sigma_t = std::exp(h[2]) * kPolicySigmaScale;
  const double sigma_n = std::exp(h[3]) * kPolicySigmaScale;
  const double rho = 0.99 * std::tanh(h[4]);
  Eigen::Matrix2d cov;
  cov << sigma_t * sigma_t, rho * sigma_t * sigma_n,
         rho * sigma_t * sigma_n, sigma_n * sigma_n;

  // Eigenvalue floor: reconstruct with eigenvalues clamped at sigma_min^2.
  const double floor = kPolicySigmaMin * kPolicySigmaMin;
  const double tr = cov.trace();
  const double det = cov.determinant();
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double lo = 0.5 * tr - disc;
  if (lo < floor) {
    const double hi = 0.5 * tr + disc;
    // Eigenvector for the low eigenvalue of a symmetric 2x2.
    Eigen::Vector2d u;
    if (std::abs(cov(0, 1)) > 1e-300) {
      u = Eigen::Vector2d(lo - cov(1, 1), cov(0, 1)).normalized();
    } else {
      u = cov(0, 0) <= cov(1, 1) ? Eigen::Vector2d(1, 0) : Eigen::Vector2d(0, 1);
    }
    const Eigen::Vector2d w(-u.y(), u.x());
    cov = floor * u * u.transpose() + std::max(hi, floor) * w * w.transpose();
    cov = 0.5 * (cov + cov.transpose().eval());
  }
  dist.cov = cov;
  return dist;
}

Impulse sample_residual(const ImpulseDistribution& dist, std::uint64_t rng_seed) {
  const Eigen::Matrix2d& cov = dist.cov;
  const double floor = kPolicySigmaMin * kPolicySigmaMin;
  const double tr = cov.trace();
  const double det = cov.determinant();
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  if (0.5 * tr - disc < floor * (1.0 - 1e-9) || cov(0, 0) <= 0.0) {
    throw ValidationError("sample_residual: covariance below the positive-definite floor");
  }
  // Lower Cholesky of a 2x2.
  const double l00 = std::sqrt(cov(0, 0));
  const double l10 = cov(1, 0) / l00;
  const double l11 = std::sqrt(std::max(0.0, cov(1, 1) - l10 * l10));

  Rng rng(rng_seed);
  const double z0 = rng.normal();
  const double z1 = rng.normal();
  return Impulse{dist.mean.x() + l00 * z0, dist.mean.y() + l10 * z0 + l11 * z1};
}

std::string policy_to_json(const PolicyParams& params) {
  nlohmann::json j;
  j["version"] = 1;
  j["layer_sizes"] = params.layer_sizes;
  j["theta"] = std::vector<double>(params.theta.data(), params.theta.data() + params.theta.size());
  j["feature_norm"] = {
      {"shift", std::vector<double>(params.feature_norm.shift.data(),
                                    params.feature_norm.shift.data() + 5)},
      {"scale", std::vector<double>(params.feature_norm.scale.data(),
                                    params.feature_norm.scale.data() + 5)}};
  return j.dump();
}

PolicyParams policy_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("policy: bad JSON: ") + e.what());
  }
  PolicyParams params;
  try {
    params.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
    const auto theta = j.at("theta").get<std::vector<double>>();
    params.theta = Eigen::Map<const Eigen::VectorXd>(theta.data(),
                                                     static_cast<Eigen::Index>(theta.size()));
    const auto shift = j.at("feature_norm").at("shift").get<std::vector<double>>();
    const auto scale = j.at("feature_norm").at("scale").get<std::vector<double>>();
    if (shift.size() != 5 || scale.size() != 5) {
      throw ValidationError("policy: feature_norm must have 5 entries per side");
    }
    for (int i = 0; i < 5; ++i) {
      params.feature_norm.shift[i] = shift[static_cast<std::size_t>(i)];
      params.feature_norm.scale[i] = scale[static_cast<std::size_t>(i)];
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("policy: missing or malformed field: ") + e.what());
  }
  params.validate();
  return params;
}

void save_policy(const PolicyParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << policy_to_json(params) << '\n';
}

PolicyParams load_policy(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return policy_from_json(buf.str());
}

}  // namespace resim
