#include "tessera/guides.hpp"

#include <cmath>

#include "tessera/kernels.hpp"

namespace tessera {

int override_threshold(double strength, int steps) {
    if (!(strength >= 0.0 && strength <= 1.0))
        throw ConfigError("guide strength must be in [0, 1], got " + std::to_string(strength));
    return static_cast<int>(std::lround((1.0 - strength) * steps));
}

ImageTensor noisy_guide(const ImageTensor& x_g, int t, const ImageTensor& xT_slice,
                        const NoiseSchedule& sched, double noise_exponent) {
    require_same_shape(x_g, xT_slice, "noisy_guide");
    if (noise_exponent != 0.5 && noise_exponent != 1.0)
        throw ConfigError("guide noise_exponent must be 0.5 or 1");
    const double abar = sched.alpha_bar(t);
    const double noise_coeff =
        noise_exponent == 0.5 ? std::sqrt(1.0 - abar) : (1.0 - abar);
    ImageTensor out(x_g.shape());
    kernels::active_backend().axpby(std::sqrt(abar), x_g.data(), noise_coeff, xT_slice.data(),
                                    out.data(), out.size());
    return out;
}

void apply_guides(ImageTensor& x, int t, const std::vector<GuideSpec>& guides,
                  const ImageTensor& xT, const NoiseSchedule& sched) {
    for (const GuideSpec& guide : guides) {
        if (t < override_threshold(guide.strength, sched.steps())) continue;
        const ImageTensor xT_slice = slice_region(xT, guide.placement);
        const ImageTensor noised =
            noisy_guide(guide.image, t, xT_slice, sched, guide.noise_exponent);
        paste_region(x, guide.placement, noised);
    }
}

} // namespace tessera
