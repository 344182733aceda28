#pragma once

#include <functional>
#include <optional>

#include "resim/body.hpp"
#include "resim/contact.hpp"
#include "resim/contact_frame.hpp"
#include "resim/dynamics.hpp"
#include "resim/state.hpp"

namespace resim {

struct SimOptions {
  double toi_tolerance = 1e-7;   // s, time-of-impact bisection width
  int max_impacts_per_step = 64;
  double rest_speed = 1e-3;      // m/s, resting declaration threshold
  double march_dt = 2e-3;        // s, penetration scan increment for long flights
};

/// Event-driven stepper: exact ballistic flight between impacts, bisected
/// time of impact, impulsive resolution. A contact event is a maximal run of
/// consecutive contact-active steps; the residual hook fires once per event,
/// at its first impact, and its impulse is added to the analytical one.
class TrajectorySimulator {
 public:
  // Hook(features, event_index) -> corrective impulse for a new contact event.
  using ResidualHook = std::function<Impulse(const FeatureVector&, int)>;

  TrajectorySimulator(const BodyModel& body, const ContactParams& params,
                      SimOptions opts = {});

  /// Advance by dt, resolving any impacts inside the step.
  State step(const State& state, double dt, const ResidualHook& residual = nullptr);

  bool resting() const { return resting_; }
  int event_count() const { return event_count_; }
  void reset();

 private:
  BodyModel body_;
  ContactParams params_;
  SimOptions opts_;
  bool prev_step_active_ = false;
  bool resting_ = false;
  int event_count_ = 0;
};

/// Ballistic flight to the first impact (deepest vertex reaching the ground
/// while approaching) within `horizon` seconds. Returns the pre-impulse state
/// at the impact instant and its contact, or nullopt if no impact occurs.
std::optional<std::pair<State, ContactInfo>> integrate_to_contact(
    const State& state, const BodyModel& body, double horizon,
    const SimOptions& opts = {});

/// Resting test used across the pipeline: touching the ground with contact
/// normal speed and COM speed both below opts.rest_speed.
bool is_resting(const State& state, const BodyModel& body, const SimOptions& opts = {});

}  // namespace resim
