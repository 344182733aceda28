#include "resim/state.hpp"

#include <cmath>

#include "resim/errors.hpp"

namespace resim {

bool State::finite() const {
  return q.allFinite() && v.allFinite() && std::isfinite(t);
}

void Trajectory::validate() const {
  if (!(dt > 0.0)) {
    throw ValidationError("trajectory: dt must be positive");
  }
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!states[i].finite()) {
      throw ValidationError("trajectory: non-finite state");
    }
    if (i > 0 && std::abs(states[i].t - states[i - 1].t - dt) > 1e-9) {
      throw ValidationError("trajectory: timestamps not uniformly spaced by dt");
    }
  }
}

}  // namespace resim
