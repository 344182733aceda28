// resim command-line driver: dataset generation, system identification,
// residual training, evaluation, the training-size sweep, and belief
// propagation. Every subcommand reads a single JSON config; --seed and --out
// override the config's seed and re-root output paths.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "resim/belief.hpp"
#include "resim/errors.hpp"
#include "resim/evaluate.hpp"
#include "resim/oracle.hpp"
#include "resim/policy.hpp"
#include "resim/rng.hpp"
#include "resim/sysid.hpp"
#include "resim/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  bool quiet = false;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw resim::ValidationError("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw resim::ValidationError("config " + path + ": " + e.what());
  }
  return j;
}

std::string resolve_out(const GlobalArgs& args, const std::string& path) {
  if (!args.out_dir) return path;
  fs::create_directories(*args.out_dir);
  return (fs::path(*args.out_dir) / fs::path(path).filename()).string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw resim::ValidationError("cannot open for writing: " + path);
  out << content;
}

resim::BodyModel body_from_config(const json& cfg) {
  if (cfg.contains("body")) return resim::body_from_json(cfg.at("body").dump());
  return resim::default_dice_body();
}

resim::ContactParams contact_from_config(const json& cfg) {
  resim::ContactParams params{0.11, 0.48};
  if (cfg.contains("contact")) {
    const json& c = cfg.at("contact");
    params.mu = c.value("mu", params.mu);
    params.eps = c.value("eps", params.eps);
  }
  params.validate();
  return params;
}

resim::InitRanges init_from_config(const json& j) {
  resim::InitRanges r;
  const auto pair = [&](const char* key, double& lo, double& hi) {
    if (j.contains(key)) {
      lo = j.at(key).at(0).get<double>();
      hi = j.at(key).at(1).get<double>();
    }
  };
  pair("x", r.x_min, r.x_max);
  pair("z", r.z_min, r.z_max);
  pair("theta", r.theta_min, r.theta_max);
  pair("vx", r.vx_min, r.vx_max);
  pair("vz", r.vz_min, r.vz_max);
  pair("omega", r.omega_min, r.omega_max);
  return r;
}

resim::RolloutConfig rollout_from_config(const json& cfg, double dt) {
  resim::RolloutConfig rc;
  rc.dt = dt;
  if (cfg.contains("rollout")) {
    const json& j = cfg.at("rollout");
    rc.samples_per_loss = j.value("samples_per_loss", rc.samples_per_loss);
    rc.horizon = j.value("horizon", rc.horizon);
    rc.seed = j.value("seed", rc.seed);
  }
  return rc;
}

resim::TrainConfig train_from_config(const json& cfg) {
  resim::TrainConfig tc;
  if (cfg.contains("train")) {
    const json& j = cfg.at("train");
    tc.max_iter = j.value("max_iter", tc.max_iter);
    tc.population = j.value("population", tc.population);
    tc.init_sigma = j.value("init_sigma", tc.init_sigma);
    tc.seed = j.value("seed", tc.seed);
    tc.n_threads = j.value("n_threads", tc.n_threads);
    const std::string opt = j.value("optimizer", std::string("cma_es"));
    if (opt == "cma_es") {
      tc.optimizer = resim::Optimizer::cma_es;
    } else if (opt == "one_plus_one_es") {
      tc.optimizer = resim::Optimizer::one_plus_one_es;
    } else {
      throw resim::ValidationError("train config: unknown optimizer '" + opt + "'");
    }
  }
  return tc;
}

int run_gen_data(const GlobalArgs& args) {
  const json cfg = load_config(args.config_path);
  const resim::BodyModel body = body_from_config(cfg);
  const double sample_rate = cfg.value("sample_rate", 250.0);
  const std::string generator = cfg.value("generator", std::string("oracle"));
  const std::string out_path = resolve_out(args, cfg.value("output", std::string("dataset.jsonl")));

  resim::Dataset dataset;
  if (generator == "oracle") {
    resim::OracleConfig oc;
    if (cfg.contains("oracle")) {
      const json& j = cfg.at("oracle");
      oc.stiffness = j.value("stiffness", oc.stiffness);
      oc.damping = j.value("damping", oc.damping);
      oc.mu_true = j.value("mu_true", oc.mu_true);
      oc.substep_dt = j.value("substep_dt", oc.substep_dt);
      oc.n_trajectories = j.value("n_trajectories", oc.n_trajectories);
      oc.duration = j.value("duration", oc.duration);
      oc.seed = j.value("seed", oc.seed);
      if (j.contains("init")) oc.init = init_from_config(j.at("init"));
    }
    if (args.seed) oc.seed = *args.seed;
    dataset = resim::generate_oracle_dataset(oc, body, sample_rate);
  } else if (generator == "analytical") {
    const resim::ContactParams params = contact_from_config(cfg);
    resim::InitRanges init;
    if (cfg.contains("init")) init = init_from_config(cfg.at("init"));
    const int n = cfg.value("n_trajectories", 100);
    const double duration = cfg.value("duration", 1.2);
    std::uint64_t seed = cfg.value("seed", 0ULL);
    if (args.seed) seed = *args.seed;
    dataset = resim::generate_analytic_dataset(params, body, init, n, duration,
                                               sample_rate, seed);
  } else {
    throw resim::ValidationError("gen-data: unknown generator '" + generator + "'");
  }

  resim::save_dataset(dataset, out_path);
  if (!args.quiet) {
    std::cout << "wrote " << dataset.trajectories.size() << " trajectories to "
              << out_path << '\n';
  }
  return 0;
}

int run_sysid(const GlobalArgs& args) {
  const json cfg = load_config(args.config_path);
  const resim::Dataset dataset = resim::load_dataset(cfg.at("dataset").get<std::string>());

  resim::MhConfig mh;
  if (cfg.contains("mh")) {
    const json& j = cfg.at("mh");
    mh.n_samples = j.value("n_samples", mh.n_samples);
    mh.burn_in = j.value("burn_in", mh.burn_in);
    mh.proposal_sigma = j.value("proposal_sigma", mh.proposal_sigma);
    mh.likelihood_beta = j.value("likelihood_beta", mh.likelihood_beta);
    mh.seed = j.value("seed", mh.seed);
  }
  if (args.seed) mh.seed = *args.seed;

  const resim::ParamChain chain =
      resim::metropolis_hastings(dataset.trajectories, dataset.body, mh);
  const std::string chain_path =
      resolve_out(args, cfg.value("chain_output", std::string("chain.csv")));
  const std::string summary_path =
      resolve_out(args, cfg.value("summary_output", std::string("sysid_summary.json")));
  write_file(chain_path, resim::chain_to_csv(chain));
  write_file(summary_path, resim::chain_summary_json(chain));
  if (!args.quiet) {
    const resim::ContactParams median = resim::chain_point_estimate(chain);
    std::cout << "median mu=" << median.mu << " eps=" << median.eps
              << " acceptance=" << chain.acceptance_rate << '\n';
  }
  return 0;
}

int run_train(const GlobalArgs& args) {
  const json cfg = load_config(args.config_path);
  const resim::Dataset dataset = resim::load_dataset(cfg.at("dataset").get<std::string>());
  const resim::ContactParams params = contact_from_config(cfg);

  std::vector<resim::Trajectory> train_set = dataset.trajectories;
  if (cfg.contains("n_train")) {
    const int n = cfg.at("n_train").get<int>();
    if (n < 1 || n > static_cast<int>(train_set.size())) {
      throw resim::ValidationError("train: n_train out of range");
    }
    train_set.resize(static_cast<std::size_t>(n));
  }

  resim::RolloutConfig rc = rollout_from_config(cfg, dataset.dt());
  resim::TrainConfig tc = train_from_config(cfg);
  if (args.seed) {
    tc.seed = *args.seed;
    rc.seed = *args.seed;
  }

  const resim::TrainResult result =
      resim::train(train_set, dataset.body, params, rc, tc);

  // Checkpoint: the policy document plus training metadata.
  json checkpoint = json::parse(resim::policy_to_json(result.params));
  checkpoint["training"] = {{"generations", result.history.size()},
                            {"best_fitness", result.best_fitness},
                            {"seed", tc.seed},
                            {"fitness_history", result.history}};
  const std::string out_path =
      resolve_out(args, cfg.value("policy_output", std::string("policy.json")));
  write_file(out_path, checkpoint.dump() + "\n");
  if (!args.quiet) {
    std::cout << "trained " << result.history.size() << " generations, best fitness "
              << result.best_fitness << ", wrote " << out_path << '\n';
  }
  return 0;
}

int run_eval(const GlobalArgs& args) {
  const json cfg = load_config(args.config_path);
  const resim::Dataset dataset = resim::load_dataset(cfg.at("dataset").get<std::string>());
  const resim::ContactParams params = contact_from_config(cfg);

  std::optional<resim::PolicyParams> policy;
  if (cfg.contains("policy") && !cfg.at("policy").is_null()) {
    policy = resim::load_policy(cfg.at("policy").get<std::string>());
  }
  std::uint64_t seed = cfg.value("seed", 0ULL);
  if (args.seed) seed = *args.seed;

  const resim::EvalResult result =
      resim::evaluate(policy ? &*policy : nullptr, dataset, params,
                      cfg.value("n_eval_rollouts", 4), seed);
  json out;
  out["mean_rmse"] = result.mean_rmse;
  out["std_rmse"] = result.std_rmse;
  out["n_losses"] = result.losses.size();
  out["model"] = policy ? "residual" : "analytical";
  const std::string out_path =
      resolve_out(args, cfg.value("output", std::string("eval.json")));
  write_file(out_path, out.dump() + "\n");
  if (!args.quiet) {
    std::cout << (policy ? "residual" : "analytical") << " RMSE " << result.mean_rmse
              << " +/- " << result.std_rmse << '\n';
  }
  return 0;
}

int run_sweep(const GlobalArgs& args) {
  const json cfg = load_config(args.config_path);
  const resim::Dataset dataset = resim::load_dataset(cfg.at("dataset").get<std::string>());
  const resim::ContactParams params = contact_from_config(cfg);

  resim::SweepConfig sc;
  sc.rollout = rollout_from_config(cfg, dataset.dt());
  sc.train = train_from_config(cfg);
  if (cfg.contains("train_n_list")) {
    sc.train_n_list = cfg.at("train_n_list").get<std::vector<int>>();
  }
  sc.test_count = cfg.value("test_count", sc.test_count);
  sc.n_eval_rollouts = cfg.value("n_eval_rollouts", sc.n_eval_rollouts);

  std::vector<std::uint64_t> seeds = {0};
  if (cfg.contains("seeds")) seeds = cfg.at("seeds").get<std::vector<std::uint64_t>>();
  if (args.seed) seeds = {*args.seed};

  const resim::SweepResult result = resim::sweep_multi_seed(dataset, params, sc, seeds);
  const std::string csv_path =
      resolve_out(args, cfg.value("csv_output", std::string("sweep.csv")));
  const std::string svg_path =
      resolve_out(args, cfg.value("svg_output", std::string("sweep.svg")));
  write_file(csv_path, resim::sweep_to_csv(result));
  write_file(svg_path, resim::sweep_to_svg(result));
  if (!args.quiet) {
    std::cout << resim::sweep_to_csv(result);
  }
  return 0;
}

int run_propagate(const GlobalArgs& args) {
  const json cfg = load_config(args.config_path);
  const resim::BodyModel body = body_from_config(cfg);
  const resim::ContactParams params = contact_from_config(cfg);

  resim::PolicyParams policy = resim::zero_policy();
  if (cfg.contains("policy") && !cfg.at("policy").is_null()) {
    policy = resim::load_policy(cfg.at("policy").get<std::string>());
  }

  resim::BeliefComponent component;
  const json& init = cfg.at("initial");
  const auto mean = init.at("mean").get<std::vector<double>>();
  if (mean.size() != 6) {
    throw resim::ValidationError("propagate: initial.mean must have 6 entries");
  }
  component.mean = Eigen::Map<const resim::Vector6d>(mean.data());
  if (init.contains("cov_diag")) {
    const auto diag = init.at("cov_diag").get<std::vector<double>>();
    if (diag.size() != 6) {
      throw resim::ValidationError("propagate: initial.cov_diag must have 6 entries");
    }
    component.cov = Eigen::Map<const resim::Vector6d>(diag.data()).asDiagonal();
  }
  resim::GaussianMixture belief;
  belief.components.push_back(component);

  resim::PropagateConfig pc;
  pc.m_samples = cfg.value("m_samples", pc.m_samples);
  pc.horizon = cfg.value("horizon", pc.horizon);
  pc.seed = cfg.value("seed", pc.seed);
  if (args.seed) pc.seed = *args.seed;
  const int n_events = cfg.value("n_events", 5);
  const std::string prefix = cfg.value("output_prefix", std::string("belief"));

  double elapsed = 0.0;
  for (int event = 0; event < n_events; ++event) {
    resim::PropagateConfig step_cfg = pc;
    step_cfg.seed = resim::seed_from(pc.seed, static_cast<std::uint64_t>(event));
    const resim::DynamicStepResult result =
        resim::dynamic_step(belief, body, params, policy, step_cfg);
    elapsed += result.event_time;
    char name[64];
    std::snprintf(name, sizeof(name), "%s_event_%03d.json", prefix.c_str(), event);
    write_file(resolve_out(args, name),
               resim::belief_to_json(result.belief, elapsed, result.samples_discarded,
                                     result.samples_drawn) +
                   "\n");
    if (!args.quiet) {
      std::cout << "event " << event << ": K=" << result.belief.size() << " t=" << elapsed
                << " discarded=" << result.samples_discarded << "/"
                << result.samples_drawn << '\n';
    }
    belief = result.belief;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar contact simulation with learned stochastic residuals"};
  app.require_subcommand(1);

  GlobalArgs args;
  std::uint64_t seed_arg = 0;
  std::string out_arg;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config file")->required();
    sub->add_option("--seed", seed_arg, "override the config seed")
        ->each([&](const std::string&) { args.seed = seed_arg; });
    sub->add_option("--out", out_arg, "directory for output files")
        ->each([&](const std::string&) { args.out_dir = out_arg; });
    sub->add_flag("--quiet", args.quiet, "suppress progress output");
  };

  CLI::App* gen = app.add_subcommand("gen-data", "generate a drop-trajectory dataset");
  CLI::App* sysid = app.add_subcommand("sysid", "infer contact parameters via MCMC");
  CLI::App* train = app.add_subcommand("train", "train the residual policy");
  CLI::App* eval = app.add_subcommand("eval", "score a policy against a dataset");
  CLI::App* sweep = app.add_subcommand("sweep", "RMSE vs training-set size experiment");
  CLI::App* propagate = app.add_subcommand("propagate", "propagate a belief through contacts");
  for (CLI::App* sub : {gen, sysid, train, eval, sweep, propagate}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen_data(args);
    if (sysid->parsed()) return run_sysid(args);
    if (train->parsed()) return run_train(args);
    if (eval->parsed()) return run_eval(args);
    if (sweep->parsed()) return run_sweep(args);
    if (propagate->parsed()) return run_propagate(args);
  } catch (const resim::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const resim::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
