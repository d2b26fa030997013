#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tessera/rng.hpp"
#include "tessera/schedule.hpp"
#include "tessera/tensor.hpp"

namespace tessera {

/// Conditioning token. The empty string is the reserved unconditioned token.
using PromptId = std::string;
inline const PromptId kUnconditioned{};

/// Parameterized mean-image generator for analytic targets. Patterns are
/// evaluated in the local coordinates of whatever slice the predictor sees,
/// identically across channels.
struct Pattern {
    enum class Kind { flat, hgradient, checkerboard };

    Kind kind = Kind::flat;
    double a = 0.0; // flat value / gradient start / first checker value
    double b = 0.0; // gradient end / second checker value
    int cell = 1;   // checkerboard cell size in pixels

    static Pattern flat(double value) { return {Kind::flat, value, 0.0, 1}; }
    static Pattern hgradient(double from, double to) { return {Kind::hgradient, from, to, 1}; }
    static Pattern checkerboard(double v0, double v1, int cell) {
        return {Kind::checkerboard, v0, v1, cell};
    }

    double value_at(int row, int col, int height, int width) const;
    ImageTensor render(int height, int width, int channels) const;

    /// Throws ConfigError unless all generated values lie in [-1, 1].
    void validate(const std::string& what) const;
};

/// Per-prompt Gaussian image distribution: x0 ~ N(mu_y, sigma0^2 I) with
/// mu_y generated by a Pattern. The unconditioned prompt gets its own mean
/// and (wider) deviation, standing in for a model that covers all prompts.
struct AnalyticTarget {
    std::map<PromptId, Pattern> means;
    double sigma0 = 1.0;
    Pattern uncond_mean = Pattern::flat(0.0);
    double uncond_sigma0 = 1.0;

    const Pattern& mean_for(const PromptId& prompt) const;
    double sigma_for(const PromptId& prompt) const {
        return prompt.empty() ? uncond_sigma0 : sigma0;
    }
    void validate() const;
};

/// Noise-prediction function eps(x, t, y). Implementations must be
/// deterministic in their inputs and preserve the input shape.
class NoisePredictor {
public:
    virtual ~NoisePredictor() = default;
    virtual ImageTensor predict(const ImageTensor& x, int t, const PromptId& prompt) const = 0;
};

/// Posterior mean E[x0 | xt] for the analytic Gaussian target:
///   (sqrt(abar_t) sigma^2 xt + (1-abar_t) mu_y) / (abar_t sigma^2 + (1-abar_t))
ImageTensor analytic_posterior_x0(const ImageTensor& xt, int t, const AnalyticTarget& target,
                                  const PromptId& prompt, const NoiseSchedule& sched);

/// The exactly optimal noise prediction for the analytic Gaussian target:
///   sqrt(1-abar_t) (xt - sqrt(abar_t) mu_y) / (abar_t sigma^2 + (1-abar_t))
ImageTensor analytic_eps(const ImageTensor& xt, int t, const AnalyticTarget& target,
                         const PromptId& prompt, const NoiseSchedule& sched);

class AnalyticGaussianPredictor final : public NoisePredictor {
public:
    AnalyticGaussianPredictor(AnalyticTarget target, NoiseSchedule sched)
        : target_(std::move(target)), sched_(std::move(sched)) {}

    ImageTensor predict(const ImageTensor& x, int t, const PromptId& prompt) const override {
        return analytic_eps(x, t, target_, prompt, sched_);
    }

    const AnalyticTarget& target() const { return target_; }
    const NoiseSchedule& schedule() const { return sched_; }

private:
    AnalyticTarget target_;
    NoiseSchedule sched_;
};

struct BatchItem {
    ImageTensor x;
    int t = 1;
    PromptId prompt;
};

/// Maps the predictor over the items; outputs are bit-identical to
/// sequential single calls, in input order. Per-item errors are rethrown
/// with the item index prepended.
std::vector<ImageTensor> batch_predict(const NoisePredictor& predictor,
                                       const std::vector<BatchItem>& items);

/// Parallel variant; identical outputs for any thread count.
std::vector<ImageTensor> batch_predict(const NoisePredictor& predictor,
                                       const std::vector<BatchItem>& items, int threads);

/// Draws (x0, prompt) pairs for loss estimation.
using TargetSampler = std::function<std::pair<ImageTensor, PromptId>(SeededRng&)>;

/// TargetSampler drawing x0 = mu_prompt + sigma * z from the analytic target.
TargetSampler make_target_sampler(AnalyticTarget target, PromptId prompt, Shape shape);

} // namespace tessera
