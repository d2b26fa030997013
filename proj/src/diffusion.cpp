#include "tessera/diffusion.hpp"

#include <cmath>

#include "tessera/kernels.hpp"

namespace tessera {

ImageTensor forward_jump(const ImageTensor& x0, const ImageTensor& eps, int t,
                         const NoiseSchedule& sched) {
    require_same_shape(x0, eps, "forward_jump");
    const double abar = sched.alpha_bar(t);
    if (t < 1) throw StepError("forward_jump: step must be >= 1");
    ImageTensor out(x0.shape());
    kernels::active_backend().axpby(std::sqrt(abar), x0.data(), std::sqrt(1.0 - abar),
                                    eps.data(), out.data(), out.size());
    return out;
}

ImageTensor forward_step(const ImageTensor& x_prev, int t, SeededRng& rng,
                         const NoiseSchedule& sched) {
    const double beta = sched.beta(t);
    ImageTensor z(x_prev.shape());
    rng.fill_normal(z.data(), z.size());
    ImageTensor out(x_prev.shape());
    kernels::active_backend().axpby(std::sqrt(1.0 - beta), x_prev.data(), std::sqrt(beta),
                                    z.data(), out.data(), out.size());
    return out;
}

PosteriorParams posterior_params(const ImageTensor& x0, const ImageTensor& xt, int t,
                                 const NoiseSchedule& sched) {
    require_same_shape(x0, xt, "posterior_params");
    const double beta = sched.beta(t); // also validates t in [1, T]
    const double abar_prev = sched.alpha_bar(t - 1);
    const double abar = sched.alpha_bar(t);
    const double coeff_x0 = std::sqrt(abar_prev) * beta / (1.0 - abar);
    const double coeff_xt = std::sqrt(sched.alpha(t)) * (1.0 - abar_prev) / (1.0 - abar);
    PosteriorParams p{ImageTensor(x0.shape()), sched.beta_tilde(t)};
    kernels::active_backend().axpby(coeff_x0, x0.data(), coeff_xt, xt.data(), p.mean.data(),
                                    p.mean.size());
    return p;
}

ImageTensor posterior_mean_from_eps(const ImageTensor& xt, const ImageTensor& eps_hat, int t,
                                    const NoiseSchedule& sched) {
    require_same_shape(xt, eps_hat, "posterior_mean_from_eps");
    const double alpha = sched.alpha(t);
    const double eps_coeff = (1.0 - alpha) / std::sqrt(1.0 - sched.alpha_bar(t));
    ImageTensor out(xt.shape());
    kernels::active_backend().sub_scaled_div(xt.data(), eps_coeff, eps_hat.data(),
                                             std::sqrt(alpha), out.data(), out.size());
    return out;
}

ImageTensor ddpm_step(const ImageTensor& xt, const ImageTensor& eps_hat, int t, SeededRng& rng,
                      const NoiseSchedule& sched) {
    ImageTensor out = posterior_mean_from_eps(xt, eps_hat, t, sched);
    if (t > 1) {
        const double sigma = std::sqrt(sched.beta_tilde(t));
        ImageTensor z(out.shape());
        rng.fill_normal(z.data(), z.size());
        kernels::active_backend().axpby(1.0, out.data(), sigma, z.data(), out.data(),
                                        out.size());
    }
    return out;
}

ImageTensor cfg_combine(const ImageTensor& eps_uncond, const ImageTensor& eps_cond, double s) {
    require_same_shape(eps_uncond, eps_cond, "cfg_combine");
    ImageTensor out(eps_uncond.shape());
    kernels::active_backend().axpby(1.0 - s, eps_uncond.data(), s, eps_cond.data(), out.data(),
                                    out.size());
    return out;
}

double simple_loss(const NoisePredictor& predictor, const TargetSampler& target,
                   const NoiseSchedule& sched, int n_samples, SeededRng& rng) {
    if (n_samples < 1) throw ConfigError("simple_loss: n_samples must be >= 1");
    double total = 0.0;
    for (int k = 0; k < n_samples; ++k) {
        auto [x0, prompt] = target(rng);
        const int t = rng.uniform_step(sched.steps());
        ImageTensor eps(x0.shape());
        rng.fill_normal(eps.data(), eps.size());
        const ImageTensor xt = forward_jump(x0, eps, t, sched);
        const ImageTensor eps_hat = predictor.predict(xt, t, prompt);
        require_same_shape(eps, eps_hat, "simple_loss predictor output");
        double norm = 0.0;
        const double* e = eps.data();
        const double* eh = eps_hat.data();
        for (std::size_t i = 0; i < eps.size(); ++i) {
            const double d = e[i] - eh[i];
            norm += d * d;
        }
        total += norm;
    }
    return total / n_samples;
}

} // namespace tessera
