#include "resim/belief.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "resim/contact_frame.hpp"
#include "resim/dynamics.hpp"
#include "resim/errors.hpp"
#include "resim/rng.hpp"

namespace resim {

State BeliefComponent::mean_state(double t) const {
  State s;
  s.q = mean.head<3>();
  s.v = mean.tail<3>();
  s.t = t;
  return s;
}

BeliefComponent BeliefComponent::from_state(const State& state, const Matrix6d& cov_in) {
  BeliefComponent c;
  c.mean.head<3>() = state.q;
  c.mean.tail<3>() = state.v;
  c.cov = cov_in;
  return c;
}

void GaussianMixture::validate() const {
  if (components.empty()) {
    throw ValidationError("mixture: no components");
  }
  double total = 0.0;
  for (const BeliefComponent& c : components) {
    if (!(c.weight > 0.0)) throw ValidationError("mixture: weights must be positive");
    total += c.weight;
    if (!c.mean.allFinite() || !c.cov.allFinite()) {
      throw ValidationError("mixture: non-finite component");
    }
    if ((c.cov - c.cov.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
      throw ValidationError("mixture: covariance not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Matrix6d> eig(c.cov);
    if (eig.eigenvalues().minCoeff() < -1e-12) {
      throw ValidationError("mixture: covariance not positive semi-definite");
    }
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw ValidationError("mixture: weights must sum to 1");
  }
}

Vector6d GaussianMixture::mean() const {
  Vector6d m = Vector6d::Zero();
  for (const BeliefComponent& c : components) m += c.weight * c.mean;
  return m;
}

Matrix6d GaussianMixture::covariance() const {
  const Vector6d m = mean();
  Matrix6d cov = Matrix6d::Zero();
  for (const BeliefComponent& c : components) {
    const Vector6d d = c.mean - m;
    cov += c.weight * (c.cov + d * d.transpose());
  }
  return 0.5 * (cov + cov.transpose().eval());
}

void PropagateConfig::validate() const {
  if (m_samples < 1) throw ValidationError("propagate config: m_samples must be >= 1");
  if (!(horizon > 0.0)) throw ValidationError("propagate config: horizon must be > 0");
  if (max_retries < 0) throw ValidationError("propagate config: max_retries must be >= 0");
}

std::pair<Vector6d, Matrix6d> push_impulse_uncertainty(
    const State& state_pre, const BodyModel& body,
    const Eigen::Matrix<double, 2, 3>& jacobian, const Impulse& p_m,
    const ImpulseDistribution& dist, const Eigen::Vector3d& f_ext_dt) {
  const Eigen::Vector3d minv = body.inv_inertia_diag();
  const Eigen::Vector2d mu_w = p_m.vec() + dist.mean;

  Vector6d mean;
  mean.head<3>() = state_pre.q;
  mean.tail<3>() =
      state_pre.v + minv.asDiagonal() * (f_ext_dt + jacobian.transpose() * mu_w);

  // (M^-1 J^T) Sigma_res (M^-1 J^T)^T
  const Eigen::Matrix<double, 3, 2> push = minv.asDiagonal() * jacobian.transpose();
  Matrix6d cov = Matrix6d::Zero();
  cov.bottomRightCorner<3, 3>() = push * dist.cov * push.transpose();
  return {mean, cov};
}

bool feasibility_filter(const State& candidate, double pre_event_energy,
                        const BodyModel& body) {
  if (!candidate.finite()) return false;
  if (min_vertex_height(candidate, body) < -kContactTolerance) return false;
  return total_energy(candidate, body) <= pre_event_energy + 1e-9;
}

namespace {

// Affine free-flight pushforward over t: linear part A = [[I, tI], [0, I]].
BeliefComponent free_flight_pushforward(const BeliefComponent& c, const BodyModel& body,
                                        double t) {
  BeliefComponent out = c;
  const State s1 = integrate_free_flight(c.mean_state(), body, t);
  out.mean.head<3>() = s1.q;
  out.mean.tail<3>() = s1.v;
  Matrix6d a = Matrix6d::Identity();
  a.topRightCorner<3, 3>() = t * Eigen::Matrix3d::Identity();
  out.cov = a * c.cov * a.transpose();
  out.cov = 0.5 * (out.cov + out.cov.transpose().eval());
  return out;
}

struct ComponentSampler {
  Vector6d mean;
  Matrix6d sqrt_cov;  // B sqrt(max(lambda, 0))

  explicit ComponentSampler(const BeliefComponent& c) : mean(c.mean) {
    Eigen::SelfAdjointEigenSolver<Matrix6d> eig(c.cov);
    sqrt_cov = eig.eigenvectors() *
               eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }

  State draw(Rng& rng) const {
    Vector6d z;
    for (int i = 0; i < 6; ++i) z[i] = rng.normal();
    const Vector6d x = mean + sqrt_cov * z;
    State s;
    s.q = x.head<3>();
    s.v = x.tail<3>();
    return s;
  }
};

}  // namespace

DynamicStepResult propagate_belief(const GaussianMixture& belief, const BodyModel& body,
                                   const ContactParams& contact_params,
                                   const PolicyParams& policy, const PropagateConfig& cfg) {
  belief.validate();
  cfg.validate();
  policy.validate();
  contact_params.validate();

  DynamicStepResult result;
  double time_weight_acc = 0.0;

  // Mean-path classification: resting components pass through, contact-free
  // components get the analytic affine pushforward, the rest are sampled.
  std::vector<std::size_t> contacting;
  double contact_mass = 0.0;
  for (std::size_t i = 0; i < belief.components.size(); ++i) {
    const BeliefComponent& c = belief.components[i];
    const State mean_state = c.mean_state();
    if (is_resting(mean_state, body, cfg.sim)) {
      result.belief.components.push_back(c);
      time_weight_acc += c.weight * cfg.horizon;
      continue;
    }
    if (!integrate_to_contact(mean_state, body, cfg.horizon, cfg.sim)) {
      result.belief.components.push_back(free_flight_pushforward(c, body, cfg.horizon));
      time_weight_acc += c.weight * cfg.horizon;
      continue;
    }
    contacting.push_back(i);
    contact_mass += c.weight;
  }

  if (!contacting.empty()) {
    // Systematic (low variance) allocation of the m particle slots.
    std::vector<ComponentSampler> samplers;
    samplers.reserve(contacting.size());
    for (std::size_t idx : contacting) {
      samplers.emplace_back(belief.components[idx]);
    }
    Rng alloc_rng(seed_from(cfg.seed, 0x616c6c6fULL));
    const double u0 = alloc_rng.uniform();
    std::vector<std::size_t> slot_parent(static_cast<std::size_t>(cfg.m_samples));
    {
      std::size_t parent = 0;
      double cum = belief.components[contacting[0]].weight / contact_mass;
      for (int j = 0; j < cfg.m_samples; ++j) {
        const double u = (j + u0) / cfg.m_samples;
        while (u > cum && parent + 1 < contacting.size()) {
          ++parent;
          cum += belief.components[contacting[parent]].weight / contact_mass;
        }
        slot_parent[static_cast<std::size_t>(j)] = parent;
      }
    }

    int survivors = 0;
    const double slot_weight = contact_mass / cfg.m_samples;
    for (int j = 0; j < cfg.m_samples; ++j) {
      bool accepted = false;
      for (int attempt = 0; attempt <= cfg.max_retries && !accepted; ++attempt) {
        Rng draw_rng(seed_from(cfg.seed, static_cast<std::uint64_t>(j),
                               static_cast<std::uint64_t>(attempt)));
        const State particle =
            samplers[slot_parent[static_cast<std::size_t>(j)]].draw(draw_rng);
        ++result.samples_drawn;
        if (!particle.finite()) {
          ++result.samples_discarded;
          continue;
        }

        const auto hit = integrate_to_contact(particle, body, cfg.horizon, cfg.sim);
        if (!hit) {
          // This sample never reaches contact: keep it as a point mass at its
          // free-flight endpoint.
          const State end = integrate_free_flight(particle, body, cfg.horizon);
          BeliefComponent out = BeliefComponent::from_state(end);
          out.weight = slot_weight;
          result.belief.components.push_back(out);
          time_weight_acc += slot_weight * cfg.horizon;
          accepted = true;
          ++survivors;
          break;
        }

        const auto& [impact_state, contact] = *hit;
        const double pre_energy = total_energy(impact_state, body);
        const Impulse p_m = resolve_contact(impact_state, body, contact, contact_params);
        const ImpulseDistribution dist =
            policy_eval(policy, features(impact_state, body, contact));
        const Eigen::Matrix<double, 2, 3> jac = contact_jacobian(impact_state, contact);
        auto [mean, cov] = push_impulse_uncertainty(impact_state, body, jac, p_m, dist);

        BeliefComponent out;
        out.weight = slot_weight;
        out.mean = mean;
        out.cov = cov;
        if (!feasibility_filter(out.mean_state(), pre_energy, body)) {
          ++result.samples_discarded;
          continue;
        }
        result.belief.components.push_back(out);
        time_weight_acc += slot_weight * (impact_state.t - particle.t);
        accepted = true;
        ++survivors;
      }
    }
    if (survivors == 0) {
      throw NumericalError(
          "propagate_belief: belief collapse, every particle was infeasible");
    }
  }

  // Renormalize: discarded particles hand their mass to the survivors.
  double total = 0.0;
  for (const BeliefComponent& c : result.belief.components) total += c.weight;
  if (total <= 0.0) {
    throw NumericalError("propagate_belief: empty output belief");
  }
  for (BeliefComponent& c : result.belief.components) c.weight /= total;
  result.event_time = time_weight_acc / total;
  result.belief.validate();
  return result;
}

DynamicStepResult dynamic_step(const GaussianMixture& belief, const BodyModel& body,
                               const ContactParams& contact_params,
                               const PolicyParams& policy, const PropagateConfig& cfg) {
  belief.validate();
  bool all_resting = true;
  for (const BeliefComponent& c : belief.components) {
    if (!is_resting(c.mean_state(), body, cfg.sim)) {
      all_resting = false;
      break;
    }
  }
  if (all_resting) {
    DynamicStepResult result;
    result.belief = belief;
    result.event_time = cfg.horizon;
    return result;
  }
  return propagate_belief(belief, body, contact_params, policy, cfg);
}

std::string belief_to_json(const GaussianMixture& mixture, double event_time,
                           int samples_discarded, int samples_drawn) {
  nlohmann::json j;
  j["event_time"] = event_time;
  j["samples_discarded"] = samples_discarded;
  j["samples_drawn"] = samples_drawn;
  auto comps = nlohmann::json::array();
  for (const BeliefComponent& c : mixture.components) {
    nlohmann::json jc;
    jc["weight"] = c.weight;
    jc["mean"] = std::vector<double>(c.mean.data(), c.mean.data() + 6);
    auto rows = nlohmann::json::array();
    for (int r = 0; r < 6; ++r) {
      rows.push_back(std::vector<double>{c.cov(r, 0), c.cov(r, 1), c.cov(r, 2), c.cov(r, 3),
                                         c.cov(r, 4), c.cov(r, 5)});
    }
    jc["cov"] = std::move(rows);
    comps.push_back(std::move(jc));
  }
  j["components"] = std::move(comps);
  return j.dump();
}

GaussianMixture belief_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("belief: bad JSON: ") + e.what());
  }
  GaussianMixture mixture;
  try {
    for (const auto& jc : j.at("components")) {
      BeliefComponent c;
      c.weight = jc.at("weight").get<double>();
      const auto mean = jc.at("mean").get<std::vector<double>>();
      if (mean.size() != 6) throw ValidationError("belief: mean must have 6 entries");
      c.mean = Eigen::Map<const Vector6d>(mean.data());
      const auto& rows = jc.at("cov");
      for (int r = 0; r < 6; ++r) {
        for (int col = 0; col < 6; ++col) {
          c.cov(r, col) = rows.at(r).at(col).get<double>();
        }
      }
      mixture.components.push_back(std::move(c));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("belief: missing or malformed field: ") + e.what());
  }
  mixture.validate();
  return mixture;
}

}  // namespace resim
