#include "resim/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "resim/errors.hpp"
#include "resim/rng.hpp"
#include "resim/rollout.hpp"

namespace resim {

void MhConfig::validate() const {
  if (n_samples < 1) throw ValidationError("mh config: n_samples must be >= 1");
  if (burn_in < 0 || burn_in >= n_samples) {
    throw ValidationError("mh config: burn_in must lie in [0, n_samples)");
  }
  if (!(proposal_sigma > 0.0)) {
    throw ValidationError("mh config: proposal_sigma must be > 0");
  }
  if (!(likelihood_beta >= 0.0)) {
    throw ValidationError("mh config: likelihood_beta must be >= 0");
  }
}

double sysid_log_likelihood(const ContactParams& params,
                            const std::vector<Trajectory>& dataset, const BodyModel& body,
                            double likelihood_beta) {
  if (dataset.empty()) throw ValidationError("sysid: empty dataset");
  double acc = 0.0;
  for (const Trajectory& obs : dataset) {
    RolloutConfig cfg;
    cfg.dt = obs.dt;
    const double loss = trajectory_loss(rollout(obs, nullptr, body, params, cfg), obs, body);
    acc += loss * loss;
  }
  return -likelihood_beta * acc;
}

ParamChain run_mh_chain(const std::function<double(double, double)>& log_density,
                        const MhConfig& cfg) {
  cfg.validate();
  Rng rng(seed_from(cfg.seed, 0x6d68ULL));

  double mu = 0.5;
  double eps = 0.5;
  double log_l = log_density(mu, eps);
  int accepted_count = 0;

  ParamChain chain;
  chain.samples.reserve(static_cast<std::size_t>(cfg.n_samples - cfg.burn_in));
  for (int i = 0; i < cfg.n_samples; ++i) {
    const double mu_prop = mu + cfg.proposal_sigma * rng.normal();
    const double eps_prop = eps + cfg.proposal_sigma * rng.normal();
    bool accept = false;
    double log_l_prop = log_l;
    if (mu_prop >= kMuMin && mu_prop <= kMuMax && eps_prop >= kEpsMin && eps_prop <= kEpsMax) {
      log_l_prop = log_density(mu_prop, eps_prop);
      accept = std::log(std::max(rng.uniform(), 1e-300)) < log_l_prop - log_l;
    }
    if (accept) {
      mu = mu_prop;
      eps = eps_prop;
      log_l = log_l_prop;
      ++accepted_count;
    }
    if (i >= cfg.burn_in) {
      chain.samples.push_back({mu, eps, log_l, accept});
    }
  }
  chain.acceptance_rate = static_cast<double>(accepted_count) / cfg.n_samples;
  return chain;
}

ParamChain metropolis_hastings(const std::vector<Trajectory>& dataset, const BodyModel& body,
                               const MhConfig& cfg) {
  return run_mh_chain(
      [&](double mu, double eps) {
        return sysid_log_likelihood({mu, eps}, dataset, body, cfg.likelihood_beta);
      },
      cfg);
}

namespace {
double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}
}  // namespace

ContactParams chain_point_estimate(const ParamChain& chain) {
  if (chain.samples.empty()) {
    throw ValidationError("chain_point_estimate: empty chain");
  }
  std::vector<double> mus;
  std::vector<double> epss;
  mus.reserve(chain.samples.size());
  epss.reserve(chain.samples.size());
  for (const MhSample& s : chain.samples) {
    mus.push_back(s.mu);
    epss.push_back(s.eps);
  }
  return {median_of(std::move(mus)), median_of(std::move(epss))};
}

std::string chain_to_csv(const ParamChain& chain) {
  std::ostringstream out;
  out << "mu,eps,logL,accepted\n";
  out.precision(17);
  for (const MhSample& s : chain.samples) {
    out << s.mu << ',' << s.eps << ',' << s.log_likelihood << ','
        << (s.accepted ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string chain_summary_json(const ParamChain& chain) {
  const ContactParams median = chain_point_estimate(chain);
  nlohmann::json j;
  j["median_mu"] = median.mu;
  j["median_eps"] = median.eps;
  j["acceptance_rate"] = chain.acceptance_rate;
  j["n_samples"] = chain.samples.size();
  return j.dump();
}

}  // namespace resim
