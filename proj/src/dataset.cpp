#include "resim/dataset.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "resim/errors.hpp"

namespace resim {

void OracleConfig::validate() const {
  if (!(stiffness > 0.0)) throw ValidationError("oracle config: stiffness must be > 0");
  if (!(damping > 0.0)) throw ValidationError("oracle config: damping must be > 0");
  if (!(mu_true >= 0.0)) throw ValidationError("oracle config: mu_true must be >= 0");
  if (!(substep_dt > 0.0)) throw ValidationError("oracle config: substep_dt must be > 0");
  if (n_trajectories < 1) {
    throw ValidationError("oracle config: n_trajectories must be >= 1");
  }
  if (!(duration > 0.0)) throw ValidationError("oracle config: duration must be > 0");
}

std::string provenance_name(Provenance p) {
  switch (p) {
    case Provenance::oracle: return "oracle";
    case Provenance::analytical: return "analytical";
    case Provenance::external: return "external";
  }
  return "external";
}

Provenance provenance_from_name(const std::string& name) {
  if (name == "oracle") return Provenance::oracle;
  if (name == "analytical") return Provenance::analytical;
  if (name == "external") return Provenance::external;
  throw ValidationError("dataset: unknown provenance '" + name + "'");
}

void Dataset::validate() const {
  body.validate();
  if (!(sample_rate > 0.0)) {
    throw ValidationError("dataset: sample_rate must be > 0");
  }
  if (trajectories.empty()) {
    throw ValidationError("dataset: no trajectories");
  }
  const double expected_dt = dt();
  for (const Trajectory& traj : trajectories) {
    traj.validate();
    if (std::abs(traj.dt - expected_dt) > 1e-12) {
      throw ValidationError("dataset: trajectory dt inconsistent with sample_rate");
    }
  }
}

namespace {

nlohmann::json init_to_json(const InitRanges& r) {
  return {{"x", {r.x_min, r.x_max}},         {"z", {r.z_min, r.z_max}},
          {"theta", {r.theta_min, r.theta_max}}, {"vx", {r.vx_min, r.vx_max}},
          {"vz", {r.vz_min, r.vz_max}},      {"omega", {r.omega_min, r.omega_max}}};
}

InitRanges init_from_json(const nlohmann::json& j) {
  InitRanges r;
  const auto pair = [&](const char* key, double& lo, double& hi) {
    lo = j.at(key).at(0).get<double>();
    hi = j.at(key).at(1).get<double>();
  };
  pair("x", r.x_min, r.x_max);
  pair("z", r.z_min, r.z_max);
  pair("theta", r.theta_min, r.theta_max);
  pair("vx", r.vx_min, r.vx_max);
  pair("vz", r.vz_min, r.vz_max);
  pair("omega", r.omega_min, r.omega_max);
  return r;
}

nlohmann::json oracle_to_json(const OracleConfig& cfg) {
  return {{"stiffness", cfg.stiffness},   {"damping", cfg.damping},
          {"mu_true", cfg.mu_true},       {"substep_dt", cfg.substep_dt},
          {"init", init_to_json(cfg.init)}, {"n_trajectories", cfg.n_trajectories},
          {"duration", cfg.duration},     {"seed", cfg.seed}};
}

OracleConfig oracle_from_json(const nlohmann::json& j) {
  OracleConfig cfg;
  cfg.stiffness = j.at("stiffness").get<double>();
  cfg.damping = j.at("damping").get<double>();
  cfg.mu_true = j.at("mu_true").get<double>();
  cfg.substep_dt = j.at("substep_dt").get<double>();
  cfg.init = init_from_json(j.at("init"));
  cfg.n_trajectories = j.at("n_trajectories").get<int>();
  cfg.duration = j.at("duration").get<double>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

}  // namespace

void save_dataset(const Dataset& dataset, const std::string& path) {
  dataset.validate();
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);

  nlohmann::json header;
  header["body"] = nlohmann::json::parse(body_to_json(dataset.body));
  header["sample_rate"] = dataset.sample_rate;
  header["provenance"] = provenance_name(dataset.provenance);
  header["oracle_params"] =
      dataset.oracle_params ? oracle_to_json(*dataset.oracle_params) : nlohmann::json();
  out << header.dump() << '\n';

  for (const Trajectory& traj : dataset.trajectories) {
    nlohmann::json line;
    line["dt"] = traj.dt;
    auto states = nlohmann::json::array();
    for (const State& s : traj.states) {
      states.push_back({s.t, s.x(), s.z(), s.theta(), s.vx(), s.vz(), s.omega()});
    }
    line["states"] = std::move(states);
    out << line.dump() << '\n';
  }
}

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);

  Dataset dataset;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": malformed JSON line: " + e.what());
    }
    try {
      if (line_no == 1) {
        dataset.body = body_from_json(j.at("body").dump());
        dataset.sample_rate = j.at("sample_rate").get<double>();
        dataset.provenance = provenance_from_name(j.at("provenance").get<std::string>());
        if (j.contains("oracle_params") && !j.at("oracle_params").is_null()) {
          dataset.oracle_params = oracle_from_json(j.at("oracle_params"));
        }
        continue;
      }
      Trajectory traj;
      traj.dt = j.at("dt").get<double>();
      for (const auto& row : j.at("states")) {
        if (row.size() != 7) {
          throw ValidationError(path + ":" + std::to_string(line_no) +
                                ": state rows must have 7 entries");
        }
        State s;
        s.t = row.at(0).get<double>();
        s.q = {row.at(1).get<double>(), row.at(2).get<double>(), row.at(3).get<double>()};
        s.v = {row.at(4).get<double>(), row.at(5).get<double>(), row.at(6).get<double>()};
        traj.states.push_back(s);
      }
      dataset.trajectories.push_back(std::move(traj));
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": missing or malformed field: " + e.what());
    }
  }
  if (line_no == 0) {
    throw ValidationError(path + ": empty dataset file");
  }
  dataset.validate();
  return dataset;
}

}  // namespace resim
