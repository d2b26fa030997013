#pragma once

#include <vector>

#include "tessera/errors.hpp"

namespace tessera {

/// Variance schedule of the noising process and the tables derived from it.
/// Tables are indexed by step t in [1, T]; alpha_bar additionally defines
/// alpha_bar(0) == 1 (empty product). Immutable after construction.
class NoiseSchedule {
public:
    /// beta interpolated linearly from beta_start (t=1) to beta_end (t=T).
    static NoiseSchedule linear(int steps, double beta_start, double beta_end);

    int steps() const { return static_cast<int>(beta_.size()) - 1; }

    double beta(int t) const { return beta_[check_step(t)]; }
    double alpha(int t) const { return alpha_[check_step(t)]; }
    double beta_tilde(int t) const { return beta_tilde_[check_step(t)]; }

    /// Valid for t in [0, T]; alpha_bar(0) == 1.
    double alpha_bar(int t) const {
        if (t < 0 || t >= static_cast<int>(alpha_bar_.size()))
            throw StepError("alpha_bar: step " + std::to_string(t) + " outside [0, " +
                            std::to_string(steps()) + "]");
        return alpha_bar_[t];
    }

private:
    NoiseSchedule() = default;

    int check_step(int t) const {
        if (t < 1 || t > steps())
            throw StepError("schedule step " + std::to_string(t) + " outside [1, " +
                            std::to_string(steps()) + "]");
        return t;
    }

    // index 0 is a placeholder so tables read naturally as table[t]
    std::vector<double> beta_;
    std::vector<double> alpha_;
    std::vector<double> alpha_bar_;
    std::vector<double> beta_tilde_;
};

inline NoiseSchedule make_linear_schedule(int steps, double beta_start, double beta_end) {
    return NoiseSchedule::linear(steps, beta_start, beta_end);
}

} // namespace tessera
