#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resim/body.hpp"
#include "resim/state.hpp"

namespace resim {

/// Uniform sampling ranges for drop initial conditions.
struct InitRanges {
  double x_min = 0.0, x_max = 0.0;
  double z_min = 0.15, z_max = 0.5;
  double theta_min = -3.141592653589793, theta_max = 3.141592653589793;
  double vx_min = -0.5, vx_max = 0.5;
  double vz_min = -0.5, vz_max = 0.0;
  double omega_min = -10.0, omega_max = 10.0;
};

/// Settings of the compliant-contact ground-truth generator. Restitution is
/// not a parameter here: it emerges from the stiffness/damping pair.
struct OracleConfig {
  double stiffness = 1.0e4;   // N/m
  double damping = 7.0;       // N s/m
  double mu_true = 0.3;
  double substep_dt = 1.0e-5; // s
  InitRanges init;
  int n_trajectories = 100;
  double duration = 1.2;      // s per trajectory
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Provenance { oracle, analytical, external };

std::string provenance_name(Provenance p);
Provenance provenance_from_name(const std::string& name);

struct Dataset {
  std::vector<Trajectory> trajectories;
  BodyModel body;
  double sample_rate = 250.0;  // Hz
  Provenance provenance = Provenance::external;
  std::optional<OracleConfig> oracle_params;

  double dt() const { return 1.0 / sample_rate; }
  // Non-empty, all trajectories sharing dt = 1/sample_rate.
  void validate() const;
};

/// JSON-lines file: a metadata header line (body, sample rate, provenance,
/// generator settings) followed by one trajectory object per line. Floats
/// round-trip bit-exactly.
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

}  // namespace resim
