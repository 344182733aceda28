// Python bindings for the core simulation, policy, training, belief, and
// harness operations.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "resim/belief.hpp"
#include "resim/contact.hpp"
#include "resim/contact_frame.hpp"
#include "resim/dynamics.hpp"
#include "resim/errors.hpp"
#include "resim/evaluate.hpp"
#include "resim/oracle.hpp"
#include "resim/policy.hpp"
#include "resim/rollout.hpp"
#include "resim/simulate.hpp"
#include "resim/sysid.hpp"
#include "resim/train.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

PYBIND11_MODULE(_resim, m) {
  m.doc() = "planar rigid-body contact simulation with learned stochastic residuals";

  py::register_exception<resim::ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<resim::NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<resim::BodyModel>(m, "BodyModel")
      .def(py::init<>())
      .def_readwrite("mass", &resim::BodyModel::mass)
      .def_readwrite("inertia", &resim::BodyModel::inertia)
      .def_readwrite("vertices", &resim::BodyModel::vertices)
      .def_readwrite("gravity", &resim::BodyModel::gravity)
      .def_readwrite("radius_of_gyration", &resim::BodyModel::radius_of_gyration)
      .def("validate", &resim::BodyModel::validate);
  m.def("make_body", &resim::make_body, "mass"_a, "inertia"_a, "vertices"_a,
        "gravity"_a = 9.81);
  m.def("make_square_body", &resim::make_square_body, "mass"_a, "side"_a,
        "gravity"_a = 9.81);
  m.def("default_dice_body", &resim::default_dice_body);
  m.def("body_to_json", &resim::body_to_json);
  m.def("body_from_json", &resim::body_from_json);

  py::class_<resim::State>(m, "State")
      .def(py::init<>())
      .def(py::init([](const Eigen::Vector3d& q, const Eigen::Vector3d& v, double t) {
             resim::State s;
             s.q = q;
             s.v = v;
             s.t = t;
             return s;
           }),
           "q"_a, "v"_a, "t"_a = 0.0)
      .def_readwrite("q", &resim::State::q)
      .def_readwrite("v", &resim::State::v)
      .def_readwrite("t", &resim::State::t)
      .def("__repr__", [](const resim::State& s) {
        return "State(q=[" + std::to_string(s.x()) + ", " + std::to_string(s.z()) + ", " +
               std::to_string(s.theta()) + "], t=" + std::to_string(s.t) + ")";
      });

  py::class_<resim::Trajectory>(m, "Trajectory")
      .def(py::init<>())
      .def_readwrite("states", &resim::Trajectory::states)
      .def_readwrite("dt", &resim::Trajectory::dt)
      .def("__len__", &resim::Trajectory::size)
      .def("validate", &resim::Trajectory::validate);

  py::class_<resim::ContactInfo>(m, "ContactInfo")
      .def_readonly("point", &resim::ContactInfo::point)
      .def_readonly("normal", &resim::ContactInfo::normal)
      .def_readonly("penetration_depth", &resim::ContactInfo::penetration_depth)
      .def_readonly("vertex_index", &resim::ContactInfo::vertex_index);

  m.def("integrate_free_flight", &resim::integrate_free_flight, "state"_a, "body"_a, "dt"_a);
  m.def("detect_contact", &resim::detect_contact, "state"_a, "body"_a);
  m.def("contact_jacobian", &resim::contact_jacobian, "state"_a, "contact"_a);
  m.def("total_energy", &resim::total_energy, "state"_a, "body"_a);
  m.def("kinetic_energy", &resim::kinetic_energy, "state"_a, "body"_a);

  py::class_<resim::ContactParams>(m, "ContactParams")
      .def(py::init<double, double>(), "mu"_a = 0.0, "eps"_a = 0.0)
      .def_readwrite("mu", &resim::ContactParams::mu)
      .def_readwrite("eps", &resim::ContactParams::eps);

  py::class_<resim::Impulse>(m, "Impulse")
      .def(py::init<double, double>(), "p_t"_a = 0.0, "p_n"_a = 0.0)
      .def_readwrite("p_t", &resim::Impulse::p_t)
      .def_readwrite("p_n", &resim::Impulse::p_n);

  m.def("resolve_contact", &resim::resolve_contact, "state"_a, "body"_a, "contact"_a,
        "params"_a);
  m.def("apply_impulse", &resim::apply_impulse, "state"_a, "body"_a, "jacobian"_a, "p"_a,
        "f_ext_dt"_a = Eigen::Vector3d::Zero().eval());

  m.def("effective_inertia", &resim::effective_inertia, "jacobian"_a, "body"_a);
  m.def("features", &resim::features, "state"_a, "body"_a, "contact"_a);
  m.def("optimal_impulse", &resim::optimal_impulse, "dv_c"_a, "jacobian"_a, "body"_a,
        "f_ext_dt"_a, "mu"_a);

  py::class_<resim::ImpulseDistribution>(m, "ImpulseDistribution")
      .def(py::init<>())
      .def_readwrite("mean", &resim::ImpulseDistribution::mean)
      .def_readwrite("cov", &resim::ImpulseDistribution::cov);

  py::class_<resim::FeatureNorm>(m, "FeatureNorm")
      .def(py::init<>())
      .def_readwrite("shift", &resim::FeatureNorm::shift)
      .def_readwrite("scale", &resim::FeatureNorm::scale);

  py::class_<resim::PolicyParams>(m, "PolicyParams")
      .def(py::init<>())
      .def_readwrite("layer_sizes", &resim::PolicyParams::layer_sizes)
      .def_readwrite("theta", &resim::PolicyParams::theta)
      .def_readwrite("feature_norm", &resim::PolicyParams::feature_norm)
      .def("validate", &resim::PolicyParams::validate);

  m.def("policy_param_count", &resim::policy_param_count);
  m.def("zero_policy", &resim::zero_policy);
  m.def("random_policy", &resim::random_policy, "seed"_a, "init_sigma"_a = 0.1);
  m.def("policy_eval", &resim::policy_eval, "params"_a, "x"_a);
  m.def("sample_residual", &resim::sample_residual, "dist"_a, "rng_seed"_a);
  m.def("policy_to_json", &resim::policy_to_json);
  m.def("policy_from_json", &resim::policy_from_json);
  m.def("save_policy", &resim::save_policy, "params"_a, "path"_a);
  m.def("load_policy", &resim::load_policy, "path"_a);

  py::class_<resim::RolloutConfig>(m, "RolloutConfig")
      .def(py::init<>())
      .def_readwrite("dt", &resim::RolloutConfig::dt)
      .def_readwrite("horizon", &resim::RolloutConfig::horizon)
      .def_readwrite("samples_per_loss", &resim::RolloutConfig::samples_per_loss)
      .def_readwrite("seed", &resim::RolloutConfig::seed);

  m.def(
      "rollout",
      [](const resim::Trajectory& obs, const std::optional<resim::PolicyParams>& policy,
         const resim::BodyModel& body, const resim::ContactParams& params,
         const resim::RolloutConfig& cfg) {
        return resim::rollout(obs, policy ? &*policy : nullptr, body, params, cfg);
      },
      "obs"_a, "policy"_a, "body"_a, "contact_params"_a, "cfg"_a);
  m.def("trajectory_loss", &resim::trajectory_loss, "est"_a, "obs"_a, "body"_a);

  py::enum_<resim::Optimizer>(m, "Optimizer")
      .value("cma_es", resim::Optimizer::cma_es)
      .value("one_plus_one_es", resim::Optimizer::one_plus_one_es);

  py::class_<resim::TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("max_iter", &resim::TrainConfig::max_iter)
      .def_readwrite("population", &resim::TrainConfig::population)
      .def_readwrite("init_sigma", &resim::TrainConfig::init_sigma)
      .def_readwrite("optimizer", &resim::TrainConfig::optimizer)
      .def_readwrite("seed", &resim::TrainConfig::seed)
      .def_readwrite("n_threads", &resim::TrainConfig::n_threads);

  py::class_<resim::TrainResult>(m, "TrainResult")
      .def_readonly("params", &resim::TrainResult::params)
      .def_readonly("history", &resim::TrainResult::history)
      .def_readonly("best_fitness", &resim::TrainResult::best_fitness);

  m.def("train", &resim::train, "dataset"_a, "body"_a, "contact_params"_a,
        "rollout_cfg"_a, "train_cfg"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("policy_fitness", &resim::policy_fitness, "params"_a, "dataset"_a, "body"_a,
        "contact_params"_a, "cfg"_a);

  py::class_<resim::BeliefComponent>(m, "BeliefComponent")
      .def(py::init<>())
      .def_readwrite("weight", &resim::BeliefComponent::weight)
      .def_readwrite("mean", &resim::BeliefComponent::mean)
      .def_readwrite("cov", &resim::BeliefComponent::cov)
      .def("mean_state", &resim::BeliefComponent::mean_state, "t"_a = 0.0)
      .def_static("from_state", &resim::BeliefComponent::from_state, "state"_a,
                  "cov"_a = resim::Matrix6d::Zero().eval());

  py::class_<resim::GaussianMixture>(m, "GaussianMixture")
      .def(py::init<>())
      .def_readwrite("components", &resim::GaussianMixture::components)
      .def("__len__", &resim::GaussianMixture::size)
      .def("validate", &resim::GaussianMixture::validate)
      .def("mean", &resim::GaussianMixture::mean)
      .def("covariance", &resim::GaussianMixture::covariance);

  py::class_<resim::DynamicStepResult>(m, "DynamicStepResult")
      .def_readonly("belief", &resim::DynamicStepResult::belief)
      .def_readonly("event_time", &resim::DynamicStepResult::event_time)
      .def_readonly("samples_discarded", &resim::DynamicStepResult::samples_discarded)
      .def_readonly("samples_drawn", &resim::DynamicStepResult::samples_drawn);

  py::class_<resim::PropagateConfig>(m, "PropagateConfig")
      .def(py::init<>())
      .def_readwrite("m_samples", &resim::PropagateConfig::m_samples)
      .def_readwrite("seed", &resim::PropagateConfig::seed)
      .def_readwrite("horizon", &resim::PropagateConfig::horizon)
      .def_readwrite("max_retries", &resim::PropagateConfig::max_retries);

  m.def("push_impulse_uncertainty", &resim::push_impulse_uncertainty, "state_pre"_a,
        "body"_a, "jacobian"_a, "p_m"_a, "dist"_a,
        "f_ext_dt"_a = Eigen::Vector3d::Zero().eval());
  m.def("feasibility_filter", &resim::feasibility_filter, "candidate"_a,
        "pre_event_energy"_a, "body"_a);
  m.def("propagate_belief", &resim::propagate_belief, "belief"_a, "body"_a,
        "contact_params"_a, "policy"_a, "cfg"_a);
  m.def("dynamic_step", &resim::dynamic_step, "belief"_a, "body"_a, "contact_params"_a,
        "policy"_a, "cfg"_a);
  m.def("belief_to_json", &resim::belief_to_json, "mixture"_a, "event_time"_a = 0.0,
        "samples_discarded"_a = 0, "samples_drawn"_a = 0);
  m.def("belief_from_json", &resim::belief_from_json);

  py::class_<resim::MhConfig>(m, "MhConfig")
      .def(py::init<>())
      .def_readwrite("n_samples", &resim::MhConfig::n_samples)
      .def_readwrite("burn_in", &resim::MhConfig::burn_in)
      .def_readwrite("proposal_sigma", &resim::MhConfig::proposal_sigma)
      .def_readwrite("likelihood_beta", &resim::MhConfig::likelihood_beta)
      .def_readwrite("seed", &resim::MhConfig::seed);

  py::class_<resim::MhSample>(m, "MhSample")
      .def_readonly("mu", &resim::MhSample::mu)
      .def_readonly("eps", &resim::MhSample::eps)
      .def_readonly("log_likelihood", &resim::MhSample::log_likelihood)
      .def_readonly("accepted", &resim::MhSample::accepted);

  py::class_<resim::ParamChain>(m, "ParamChain")
      .def_readonly("samples", &resim::ParamChain::samples)
      .def_readonly("acceptance_rate", &resim::ParamChain::acceptance_rate);

  m.def("sysid_log_likelihood", &resim::sysid_log_likelihood, "params"_a, "dataset"_a,
        "body"_a, "likelihood_beta"_a);
  m.def("metropolis_hastings", &resim::metropolis_hastings, "dataset"_a, "body"_a, "cfg"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("chain_point_estimate", &resim::chain_point_estimate, "chain"_a);

  py::enum_<resim::Provenance>(m, "Provenance")
      .value("oracle", resim::Provenance::oracle)
      .value("analytical", resim::Provenance::analytical)
      .value("external", resim::Provenance::external);

  py::class_<resim::InitRanges>(m, "InitRanges")
      .def(py::init<>())
      .def_readwrite("x_min", &resim::InitRanges::x_min)
      .def_readwrite("x_max", &resim::InitRanges::x_max)
      .def_readwrite("z_min", &resim::InitRanges::z_min)
      .def_readwrite("z_max", &resim::InitRanges::z_max)
      .def_readwrite("theta_min", &resim::InitRanges::theta_min)
      .def_readwrite("theta_max", &resim::InitRanges::theta_max)
      .def_readwrite("vx_min", &resim::InitRanges::vx_min)
      .def_readwrite("vx_max", &resim::InitRanges::vx_max)
      .def_readwrite("vz_min", &resim::InitRanges::vz_min)
      .def_readwrite("vz_max", &resim::InitRanges::vz_max)
      .def_readwrite("omega_min", &resim::InitRanges::omega_min)
      .def_readwrite("omega_max", &resim::InitRanges::omega_max);

  py::class_<resim::OracleConfig>(m, "OracleConfig")
      .def(py::init<>())
      .def_readwrite("stiffness", &resim::OracleConfig::stiffness)
      .def_readwrite("damping", &resim::OracleConfig::damping)
      .def_readwrite("mu_true", &resim::OracleConfig::mu_true)
      .def_readwrite("substep_dt", &resim::OracleConfig::substep_dt)
      .def_readwrite("init", &resim::OracleConfig::init)
      .def_readwrite("n_trajectories", &resim::OracleConfig::n_trajectories)
      .def_readwrite("duration", &resim::OracleConfig::duration)
      .def_readwrite("seed", &resim::OracleConfig::seed);

  py::class_<resim::Dataset>(m, "Dataset")
      .def(py::init<>())
      .def_readwrite("trajectories", &resim::Dataset::trajectories)
      .def_readwrite("body", &resim::Dataset::body)
      .def_readwrite("sample_rate", &resim::Dataset::sample_rate)
      .def_readwrite("provenance", &resim::Dataset::provenance)
      .def("dt", &resim::Dataset::dt)
      .def("validate", &resim::Dataset::validate);

  m.def("generate_oracle_dataset", &resim::generate_oracle_dataset, "cfg"_a, "body"_a,
        "sample_rate"_a = 250.0, py::call_guard<py::gil_scoped_release>());
  m.def("generate_analytic_dataset", &resim::generate_analytic_dataset, "params"_a,
        "body"_a, "init"_a, "n_trajectories"_a, "duration"_a, "sample_rate"_a, "seed"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("save_dataset", &resim::save_dataset, "dataset"_a, "path"_a);
  m.def("load_dataset", &resim::load_dataset, "path"_a);

  py::class_<resim::EvalResult>(m, "EvalResult")
      .def_readonly("mean_rmse", &resim::EvalResult::mean_rmse)
      .def_readonly("std_rmse", &resim::EvalResult::std_rmse)
      .def_readonly("losses", &resim::EvalResult::losses);

  m.def(
      "evaluate",
      [](const std::optional<resim::PolicyParams>& policy, const resim::Dataset& dataset,
         const resim::ContactParams& params, int n_eval_rollouts, std::uint64_t seed) {
        return resim::evaluate(policy ? &*policy : nullptr, dataset, params,
                               n_eval_rollouts, seed);
      },
      "policy"_a, "dataset"_a, "contact_params"_a, "n_eval_rollouts"_a = 1, "seed"_a = 0,
      py::call_guard<py::gil_scoped_release>());

  py::class_<resim::SweepRow>(m, "SweepRow")
      .def_readonly("n_train", &resim::SweepRow::n_train)
      .def_readonly("model_tag", &resim::SweepRow::model_tag)
      .def_readonly("mean_rmse", &resim::SweepRow::mean_rmse)
      .def_readonly("std_rmse", &resim::SweepRow::std_rmse);

  py::class_<resim::SweepResult>(m, "SweepResult")
      .def_readonly("rows", &resim::SweepResult::rows)
      .def_readonly("events_per_trajectory", &resim::SweepResult::events_per_trajectory);

  py::class_<resim::SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_readwrite("train_n_list", &resim::SweepConfig::train_n_list)
      .def_readwrite("test_count", &resim::SweepConfig::test_count)
      .def_readwrite("n_eval_rollouts", &resim::SweepConfig::n_eval_rollouts)
      .def_readwrite("rollout", &resim::SweepConfig::rollout)
      .def_readwrite("train", &resim::SweepConfig::train)
      .def_readwrite("seed", &resim::SweepConfig::seed);

  m.def("sweep", &resim::sweep, "dataset"_a, "contact_params"_a, "cfg"_a,
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep_multi_seed", &resim::sweep_multi_seed, "dataset"_a, "contact_params"_a,
        "cfg"_a, "seeds"_a, py::call_guard<py::gil_scoped_release>());
  m.def("sweep_to_csv", &resim::sweep_to_csv);
  m.def("sweep_to_svg", &resim::sweep_to_svg);
}
