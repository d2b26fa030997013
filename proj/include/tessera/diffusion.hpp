#pragma once

#include "tessera/predictors.hpp"
#include "tessera/rng.hpp"
#include "tessera/schedule.hpp"
#include "tessera/tensor.hpp"

namespace tessera {

/// Noising jump straight from x0 to step t:
///   sqrt(abar_t) x0 + sqrt(1-abar_t) eps
ImageTensor forward_jump(const ImageTensor& x0, const ImageTensor& eps, int t,
                         const NoiseSchedule& sched);

/// Single noising step: sqrt(1-beta_t) x_prev + sqrt(beta_t) z, z ~ N(0, I).
ImageTensor forward_step(const ImageTensor& x_prev, int t, SeededRng& rng,
                         const NoiseSchedule& sched);

struct PosteriorParams {
    ImageTensor mean;
    double variance = 0.0;
};

/// Gaussian parameters of x_{t-1} given (x0, xt):
///   mean = sqrt(abar_{t-1}) beta_t / (1-abar_t) x0
///        + sqrt(alpha_t) (1-abar_{t-1}) / (1-abar_t) xt
///   variance = beta_tilde_t
PosteriorParams posterior_params(const ImageTensor& x0, const ImageTensor& xt, int t,
                                 const NoiseSchedule& sched);

/// The same posterior mean expressed through a noise estimate:
///   (xt - (1-alpha_t)/sqrt(1-abar_t) eps_hat) / sqrt(alpha_t)
ImageTensor posterior_mean_from_eps(const ImageTensor& xt, const ImageTensor& eps_hat, int t,
                                    const NoiseSchedule& sched);

/// One reverse sampling step: the posterior mean plus sqrt(beta_tilde_t)
/// noise for t > 1; the bare mean at t = 1.
ImageTensor ddpm_step(const ImageTensor& xt, const ImageTensor& eps_hat, int t, SeededRng& rng,
                      const NoiseSchedule& sched);

/// Guided prediction: (1-s) eps_uncond + s eps_cond. Endpoints s=0 and s=1
/// reproduce the inputs exactly.
ImageTensor cfg_combine(const ImageTensor& eps_uncond, const ImageTensor& eps_cond, double s);

/// Monte-Carlo estimate of E || eps - predictor(sqrt(abar_t) x0 +
/// sqrt(1-abar_t) eps, t, y) ||^2 with x0 drawn from the target sampler,
/// t uniform in [1, T] and eps standard normal. Draw order per sample is
/// fixed: x0, then t, then eps.
double simple_loss(const NoisePredictor& predictor, const TargetSampler& target,
                   const NoiseSchedule& sched, int n_samples, SeededRng& rng);

} // namespace tessera
