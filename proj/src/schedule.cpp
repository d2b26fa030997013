#include "tessera/schedule.hpp"

#include <string>

namespace tessera {

NoiseSchedule NoiseSchedule::linear(int steps, double beta_start, double beta_end) {
    if (steps < 1)
        throw ConfigError("schedule needs at least 1 step, got " + std::to_string(steps));
    if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0))
        throw ConfigError("schedule betas must satisfy 0 < beta_start <= beta_end < 1, got [" +
                          std::to_string(beta_start) + ", " + std::to_string(beta_end) + "]");

    NoiseSchedule s;
    s.beta_.resize(steps + 1, 0.0);
    s.alpha_.resize(steps + 1, 1.0);
    s.alpha_bar_.resize(steps + 1, 1.0);
    s.beta_tilde_.resize(steps + 1, 0.0);
    for (int t = 1; t <= steps; ++t) {
        const double frac = steps == 1 ? 0.0 : static_cast<double>(t - 1) / (steps - 1);
        s.beta_[t] = beta_start + (beta_end - beta_start) * frac;
        s.alpha_[t] = 1.0 - s.beta_[t];
        s.alpha_bar_[t] = s.alpha_bar_[t - 1] * s.alpha_[t];
        s.beta_tilde_[t] = (1.0 - s.alpha_bar_[t - 1]) / (1.0 - s.alpha_bar_[t]) * s.beta_[t];
    }
    return s;
}

} // namespace tessera
