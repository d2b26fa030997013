#pragma once

#include <vector>

#include "tessera/geometry.hpp"
#include "tessera/schedule.hpp"
#include "tessera/tensor.hpp"

namespace tessera {

/// Guide-image conditioning: image re-injected at its placement with
/// schedule-consistent noise while the override is active.
struct GuideSpec {
    ImageTensor image;
    Region placement;
    /// Fraction of the schedule during which the override stays active.
    double strength = 1.0;
    /// Exponent on the (1 - abar_t) coefficient of the initial-noise term:
    /// 0.5 is the statistically consistent default, 1.0 the literal
    /// alternative. Nothing else is accepted.
    double noise_exponent = 0.5;
};

/// First step (counting down from T) at which a guide of the given strength
/// stops being applied: t_g = round((1-g) T), active at levels t >= t_g.
int override_threshold(double strength, int steps);

/// Noised guide for level t in [0, T]:
///   sqrt(abar_t) x_g + (1-abar_t)^e xT_slice
/// with abar_0 = 1, so level 0 returns x_g exactly.
ImageTensor noisy_guide(const ImageTensor& x_g, int t, const ImageTensor& xT_slice,
                        const NoiseSchedule& sched, double noise_exponent = 0.5);

/// Applies every active guide to x (level t) in declaration order; later
/// guides overwrite earlier ones where placements overlap. xT is the
/// initialization noise that seeds the overrides.
void apply_guides(ImageTensor& x, int t, const std::vector<GuideSpec>& guides,
                  const ImageTensor& xT, const NoiseSchedule& sched);

} // namespace tessera
