#include "resim/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "resim/errors.hpp"
#include "resim/parallel.hpp"
#include "resim/rng.hpp"
#include "resim/simulate.hpp"

namespace resim {

EvalResult evaluate(const PolicyParams* policy, const Dataset& dataset,
                    const ContactParams& contact_params, int n_eval_rollouts,
                    std::uint64_t seed, unsigned n_threads) {
  dataset.validate();
  if (n_eval_rollouts < 1) {
    throw ValidationError("evaluate: n_eval_rollouts must be >= 1");
  }
  const int repeats = policy ? n_eval_rollouts : 1;
  const std::size_t n_traj = dataset.trajectories.size();

  EvalResult result;
  result.losses.assign(n_traj * static_cast<std::size_t>(repeats), 0.0);
  parallel_for(
      n_traj * static_cast<std::size_t>(repeats),
      [&](std::size_t job) {
        const std::size_t ti = job / static_cast<std::size_t>(repeats);
        const std::size_t r = job % static_cast<std::size_t>(repeats);
        RolloutConfig cfg;
        cfg.dt = dataset.dt();
        cfg.seed = seed_from(seed, ti, r);
        const Trajectory est =
            rollout(dataset.trajectories[ti], policy, dataset.body, contact_params, cfg);
        result.losses[job] = trajectory_loss(est, dataset.trajectories[ti], dataset.body);
      },
      n_threads);

  const double n = static_cast<double>(result.losses.size());
  result.mean_rmse = std::accumulate(result.losses.begin(), result.losses.end(), 0.0) / n;
  double var = 0.0;
  for (double loss : result.losses) {
    var += (loss - result.mean_rmse) * (loss - result.mean_rmse);
  }
  result.std_rmse = result.losses.size() > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return result;
}

void SweepResult::validate() const {
  std::map<std::string, int> last_n;
  for (const SweepRow& row : rows) {
    if (row.mean_rmse < 0.0 || row.std_rmse < 0.0) {
      throw ValidationError("sweep: negative RMSE");
    }
    auto it = last_n.find(row.model_tag);
    if (it != last_n.end() && row.n_train <= it->second) {
      throw ValidationError("sweep: training sizes must be strictly increasing");
    }
    last_n[row.model_tag] = row.n_train;
  }
}

namespace {

int count_events(const Dataset& dataset, const ContactParams& contact_params) {
  if (dataset.trajectories.empty()) return 0;
  long total = 0;
  for (const Trajectory& obs : dataset.trajectories) {
    TrajectorySimulator sim(dataset.body, contact_params);
    State s = obs.states.front();
    for (std::size_t i = 1; i < obs.states.size(); ++i) s = sim.step(s, obs.dt);
    total += sim.event_count();
  }
  return static_cast<int>(std::llround(
      static_cast<double>(total) / static_cast<double>(dataset.trajectories.size())));
}

}  // namespace

SweepResult sweep(const Dataset& dataset, const ContactParams& contact_params,
                  const SweepConfig& cfg) {
  dataset.validate();
  const int total = static_cast<int>(dataset.trajectories.size());
  if (cfg.test_count < 1 || cfg.test_count >= total) {
    throw ValidationError("sweep: test_count must leave a non-empty training pool");
  }
  const int pool_size = total - cfg.test_count;
  for (int n : cfg.train_n_list) {
    if (n < 0 || n > pool_size) {
      throw ValidationError("sweep: train sizes must fit the training pool");
    }
  }

  Dataset test;
  test.body = dataset.body;
  test.sample_rate = dataset.sample_rate;
  test.provenance = dataset.provenance;
  test.trajectories.assign(dataset.trajectories.end() - cfg.test_count,
                           dataset.trajectories.end());

  const EvalResult baseline =
      evaluate(nullptr, test, contact_params, 1, cfg.seed, cfg.train.n_threads);

  std::vector<int> order(static_cast<std::size_t>(pool_size));
  std::iota(order.begin(), order.end(), 0);

  SweepResult result;
  result.events_per_trajectory = count_events(test, contact_params);
  std::vector<SweepRow> residual_rows;
  for (int n : cfg.train_n_list) {
    result.rows.push_back({n, "analytical", baseline.mean_rmse, baseline.std_rmse});
    if (n == 0) {
      // Nothing to train on: the untrained model is the baseline.
      residual_rows.push_back({n, "residual", baseline.mean_rmse, baseline.std_rmse});
      continue;
    }
    // Random training subset, fresh per n.
    std::vector<int> pick = order;
    Rng rng(seed_from(cfg.seed, 0x737773ULL, static_cast<std::uint64_t>(n)));
    for (std::size_t i = pick.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
      std::swap(pick[i - 1], pick[j]);
    }
    std::vector<Trajectory> train_set;
    train_set.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      train_set.push_back(dataset.trajectories[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])]);
    }

    RolloutConfig rollout_cfg = cfg.rollout;
    rollout_cfg.dt = dataset.dt();
    TrainConfig train_cfg = cfg.train;
    train_cfg.seed = seed_from(cfg.seed, 0x7472ULL, static_cast<std::uint64_t>(n));
    const TrainResult trained =
        train(train_set, dataset.body, contact_params, rollout_cfg, train_cfg);

    const EvalResult scored = evaluate(&trained.params, test, contact_params,
                                       cfg.n_eval_rollouts, cfg.seed, cfg.train.n_threads);
    residual_rows.push_back({n, "residual", scored.mean_rmse, scored.std_rmse});
  }
  result.rows.insert(result.rows.end(), residual_rows.begin(), residual_rows.end());

  // Interleaved rows break the per-tag ordering check; regroup by tag.
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.model_tag < b.model_tag; });
  result.validate();
  return result;
}

SweepResult sweep_multi_seed(const Dataset& dataset, const ContactParams& contact_params,
                             const SweepConfig& cfg, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ValidationError("sweep: need at least one seed");
  std::vector<SweepResult> per_seed;
  per_seed.reserve(seeds.size());
  for (std::uint64_t s : seeds) {
    SweepConfig one = cfg;
    one.seed = s;
    per_seed.push_back(sweep(dataset, contact_params, one));
  }

  SweepResult merged;
  merged.events_per_trajectory = per_seed.front().events_per_trajectory;
  const std::size_t n_rows = per_seed.front().rows.size();
  for (std::size_t r = 0; r < n_rows; ++r) {
    SweepRow row = per_seed.front().rows[r];
    double mean = 0.0;
    for (const SweepResult& sr : per_seed) mean += sr.rows[r].mean_rmse;
    mean /= static_cast<double>(per_seed.size());
    double var = 0.0;
    for (const SweepResult& sr : per_seed) {
      var += (sr.rows[r].mean_rmse - mean) * (sr.rows[r].mean_rmse - mean);
    }
    row.mean_rmse = mean;
    row.std_rmse = per_seed.size() > 1
                       ? std::sqrt(var / static_cast<double>(per_seed.size() - 1))
                       : 0.0;
    merged.rows.push_back(row);
  }
  merged.validate();
  return merged;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "n_training_trajectories,model_tag,mean_rmse,std_rmse\n";
  for (const SweepRow& row : result.rows) {
    out << row.n_train << ',' << row.model_tag << ',' << row.mean_rmse << ','
        << row.std_rmse << '\n';
  }
  return out.str();
}

std::string sweep_to_svg(const SweepResult& result) {
  // Layout constants for a 640x420 canvas with a fixed margin.
  const double width = 640.0, height = 420.0, margin = 60.0;
  double x_max = 1.0, y_max = 1e-12;
  for (const SweepRow& row : result.rows) {
    x_max = std::max(x_max, static_cast<double>(row.n_train));
    y_max = std::max(y_max, row.mean_rmse + row.std_rmse);
  }
  y_max *= 1.1;
  const auto px = [&](double n) {
    return margin + (width - 2 * margin) * (n / x_max);
  };
  const auto py = [&](double rmse) {
    return height - margin - (height - 2 * margin) * (rmse / y_max);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
      << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-size=\"13\">training trajectories</text>\n";
  svg << "<text x=\"18\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 "
      << height / 2 << ")\">test RMSE (m)</text>\n";

  // Axis ticks.
  for (int i = 0; i <= 4; ++i) {
    const double yv = y_max * i / 4.0;
    svg << "<text x=\"" << margin - 8 << "\" y=\"" << py(yv) + 4
        << "\" text-anchor=\"end\" font-size=\"11\">" << yv << "</text>\n";
    const double xv = x_max * i / 4.0;
    svg << "<text x=\"" << px(xv) << "\" y=\"" << height - margin + 16
        << "\" text-anchor=\"middle\" font-size=\"11\">" << xv << "</text>\n";
  }

  const std::vector<std::pair<std::string, std::string>> tags = {
      {"analytical", "#1f77b4"}, {"residual", "#2ca02c"}};
  double legend_y = margin + 6.0;
  for (const auto& [tag, color] : tags) {
    std::ostringstream points;
    for (const SweepRow& row : result.rows) {
      if (row.model_tag != tag) continue;
      points << px(row.n_train) << ',' << py(row.mean_rmse) << ' ';
    }
    const std::string pts = points.str();
    if (pts.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\""
        << pts << "\"/>\n";
    for (const SweepRow& row : result.rows) {
      if (row.model_tag != tag) continue;
      svg << "<circle cx=\"" << px(row.n_train) << "\" cy=\"" << py(row.mean_rmse)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    svg << "<text x=\"" << width - margin - 120 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" fill=\"" << color << "\">" << tag << "</text>\n";
    legend_y += 16.0;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace resim
