#include "resim/simulate.hpp"

#include <cmath>

#include "resim/errors.hpp"

namespace resim {

namespace {

bool penetrated(const State& state, const BodyModel& body) {
  return min_vertex_height(state, body) < 0.0;
}

// Last non-penetrating time in [0, horizon], given penetration at horizon.
double bisect_toi(const State& state, const BodyModel& body, double horizon,
                  double tol) {
  double lo = 0.0;
  double hi = horizon;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (penetrated(integrate_free_flight(state, body, mid), body)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

double contact_normal_speed(const State& state, const ContactInfo& contact) {
  return (contact_jacobian(state, contact) * state.v).y();
}

}  // namespace

bool is_resting(const State& state, const BodyModel& body, const SimOptions& opts) {
  const auto contact = detect_contact(state, body);
  if (!contact) return false;
  if (state.v.head<2>().norm() >= opts.rest_speed) return false;
  return std::abs(contact_normal_speed(state, *contact)) < opts.rest_speed;
}

TrajectorySimulator::TrajectorySimulator(const BodyModel& body, const ContactParams& params,
                                         SimOptions opts)
    : body_(body), params_(params), opts_(opts) {
  body_.validate();
  params_.validate();
}

void TrajectorySimulator::reset() {
  prev_step_active_ = false;
  resting_ = false;
  event_count_ = 0;
}

State TrajectorySimulator::step(const State& state, double dt, const ResidualHook& residual) {
  if (!state.finite()) {
    throw ValidationError("simulator step: non-finite state");
  }
  if (resting_) {
    State held = state;
    held.v.setZero();
    held.t = state.t + dt;
    return held;
  }

  State s = state;
  double remaining = dt;
  int impacts = 0;
  bool new_event_pending = !prev_step_active_;
  int guard = 0;

  while (guard++ < 4 * opts_.max_impacts_per_step) {
    const auto contact = detect_contact(s, body_);
    if (contact && contact_normal_speed(s, *contact) < 0.0 &&
        impacts < opts_.max_impacts_per_step) {
      const Eigen::Matrix<double, 2, 3> jac = contact_jacobian(s, *contact);
      const Impulse p_m = resolve_contact(s, body_, *contact, params_);
      Impulse combined = p_m;
      if (residual && new_event_pending) {
        const Impulse p_res = residual(features(s, body_, *contact), event_count_);
        combined.p_t += p_res.p_t;
        combined.p_n += p_res.p_n;
      }
      if (new_event_pending) {
        ++event_count_;
        new_event_pending = false;
      }
      s = apply_impulse(s, body_, jac, combined);
      ++impacts;
      continue;
    }
    if (remaining <= 0.0) break;

    const State target = integrate_free_flight(s, body_, remaining);
    if (!penetrated(target, body_)) {
      s = target;
      remaining = 0.0;
      break;
    }
    if (penetrated(s, body_)) {
      // Already below ground but separating; let it fly out.
      s = target;
      remaining = 0.0;
      break;
    }
    const double toi = bisect_toi(s, body_, remaining, opts_.toi_tolerance);
    s = integrate_free_flight(s, body_, toi);
    remaining -= toi;
  }

  if (remaining > 0.0) {
    // Impact budget exhausted (rocking/chattering cascade). Hold the pose and
    // let the clock advance; the following steps finish the settling.
    s.t = state.t + dt;
  }

  if (impacts > 0 && is_resting(s, body_, opts_)) {
    resting_ = true;
    s.v.setZero();
  }
  prev_step_active_ = impacts > 0;
  return s;
}

std::optional<std::pair<State, ContactInfo>> integrate_to_contact(
    const State& state, const BodyModel& body, double horizon, const SimOptions& opts) {
  State s = state;
  double remaining = horizon;
  while (true) {
    const auto contact = detect_contact(s, body);
    if (contact && contact_normal_speed(s, *contact) < 0.0) {
      return std::make_pair(s, *contact);
    }
    if (remaining <= 0.0) return std::nullopt;

    const double leap = std::min(remaining, opts.march_dt);
    const State target = integrate_free_flight(s, body, leap);
    if (!penetrated(target, body) || penetrated(s, body)) {
      s = target;
      remaining -= leap;
      continue;
    }
    const double toi = bisect_toi(s, body, leap, opts.toi_tolerance);
    s = integrate_free_flight(s, body, toi);
    remaining -= toi;
    // Loop re-checks approach at the crossing; a grazing boundary just
    // continues the flight.
    if (toi <= 0.0) {
      s = integrate_free_flight(s, body, std::min(remaining, opts.toi_tolerance));
      remaining -= std::min(remaining, opts.toi_tolerance);
    }
  }
}

}  // namespace resim
