#include "resim/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "resim/dynamics.hpp"
#include "resim/errors.hpp"
#include "resim/parallel.hpp"
#include "resim/rng.hpp"
#include "resim/simulate.hpp"

namespace resim {

namespace {

// Tangential velocity below which regularized Coulomb friction ramps linearly.
constexpr double kFrictionVelEps = 1e-3;  // m/s

State sample_initial_state(const InitRanges& init, Rng& rng) {
  State s;
  s.q = {rng.uniform(init.x_min, init.x_max), rng.uniform(init.z_min, init.z_max),
         rng.uniform(init.theta_min, init.theta_max)};
  s.v = {rng.uniform(init.vx_min, init.vx_max), rng.uniform(init.vz_min, init.vz_max),
         rng.uniform(init.omega_min, init.omega_max)};
  return s;
}

}  // namespace

Trajectory oracle_trajectory(const OracleConfig& cfg, const BodyModel& body,
                             const State& initial, double sample_rate) {
  cfg.validate();
  const double dt = 1.0 / sample_rate;
  const int substeps_per_sample =
      std::max(1, static_cast<int>(std::llround(dt / cfg.substep_dt)));
  const double h = dt / substeps_per_sample;
  const int n_samples = std::max(2, static_cast<int>(std::llround(cfg.duration / dt)) + 1);

  Trajectory traj;
  traj.dt = dt;
  traj.states.reserve(static_cast<std::size_t>(n_samples));

  State s = initial;
  traj.states.push_back(s);

  double prev_free_energy = total_energy(s, body);
  bool have_free_energy = min_vertex_height(s, body) > kContactTolerance;

  for (int sample = 1; sample < n_samples; ++sample) {
    for (int sub = 0; sub < substeps_per_sample; ++sub) {
      const double c = std::cos(s.theta());
      const double sn = std::sin(s.theta());
      double fx = 0.0;
      double fz = -body.mass * body.gravity;
      double torque = 0.0;
      for (const auto& vb : body.vertices) {
        const double rx = c * vb.x() - sn * vb.y();
        const double rz = sn * vb.x() + c * vb.y();
        const double z_v = s.z() + rz;
        if (z_v >= 0.0) continue;
        const double vx_v = s.vx() - s.omega() * rz;
        const double vz_v = s.vz() + s.omega() * rx;
        const double f_n = std::max(0.0, -cfg.stiffness * z_v - cfg.damping * vz_v);
        const double slip = std::clamp(vx_v / kFrictionVelEps, -1.0, 1.0);
        const double f_t = -cfg.mu_true * f_n * slip;
        fx += f_t;
        fz += f_n;
        torque += rx * f_n - rz * f_t;
      }
      // Semi-implicit Euler.
      s.v[0] += h * fx / body.mass;
      s.v[1] += h * fz / body.mass;
      s.v[2] += h * torque / body.inertia;
      s.q += h * s.v;
      s.t += h;
    }
    traj.states.push_back(s);

    if (min_vertex_height(s, body) > kContactTolerance) {
      const double energy = total_energy(s, body);
      if (have_free_energy && energy > prev_free_energy * 1.01 + 1e-9) {
        throw NumericalError(
            "oracle: energy grew between bounces; reduce substep_dt or damping");
      }
      prev_free_energy = energy;
      have_free_energy = true;
    }
  }
  return traj;
}

Dataset generate_oracle_dataset(const OracleConfig& cfg, const BodyModel& body,
                                double sample_rate) {
  cfg.validate();
  body.validate();
  if (!(sample_rate > 0.0) || cfg.substep_dt > 1.0 / sample_rate) {
    throw ValidationError("oracle: substep_dt must be much smaller than 1/sample_rate");
  }

  Dataset dataset;
  dataset.body = body;
  dataset.sample_rate = sample_rate;
  dataset.provenance = Provenance::oracle;
  dataset.oracle_params = cfg;
  dataset.trajectories.resize(static_cast<std::size_t>(cfg.n_trajectories));

  std::vector<std::string> errors(static_cast<std::size_t>(cfg.n_trajectories));
  parallel_for(static_cast<std::size_t>(cfg.n_trajectories), [&](std::size_t i) {
    try {
      Rng rng(seed_from(cfg.seed, 0x6f7261636cULL, i));
      const State initial = sample_initial_state(cfg.init, rng);
      dataset.trajectories[i] = oracle_trajectory(cfg, body, initial, sample_rate);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (const std::string& error : errors) {
    if (!error.empty()) throw NumericalError(error);
  }

  dataset.validate();
  return dataset;
}

Dataset generate_analytic_dataset(const ContactParams& params, const BodyModel& body,
                                  const InitRanges& init, int n_trajectories,
                                  double duration, double sample_rate, std::uint64_t seed) {
  body.validate();
  params.validate();
  if (n_trajectories < 1) throw ValidationError("analytic dataset: need n >= 1");

  const double dt = 1.0 / sample_rate;
  const int n_samples = std::max(2, static_cast<int>(std::llround(duration / dt)) + 1);

  Dataset dataset;
  dataset.body = body;
  dataset.sample_rate = sample_rate;
  dataset.provenance = Provenance::analytical;
  dataset.trajectories.resize(static_cast<std::size_t>(n_trajectories));

  parallel_for(static_cast<std::size_t>(n_trajectories), [&](std::size_t i) {
    Rng rng(seed_from(seed, 0x616e61ULL, i));
    TrajectorySimulator sim(body, params);
    Trajectory traj;
    traj.dt = dt;
    traj.states.push_back(sample_initial_state(init, rng));
    for (int k = 1; k < n_samples; ++k) {
      traj.states.push_back(sim.step(traj.states.back(), dt));
    }
    dataset.trajectories[i] = std::move(traj);
  });

  dataset.validate();
  return dataset;
}

}  // namespace resim
