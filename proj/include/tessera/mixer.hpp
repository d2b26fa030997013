#pragma once

#include <vector>

#include "tessera/diffusion.hpp"
#include "tessera/geometry.hpp"
#include "tessera/predictors.hpp"
#include "tessera/tensor.hpp"

namespace tessera {

enum class MaskKind { constant, gaussian };

/// One diffusion region: where it acts, what conditions it, how strongly,
/// and how its contribution is feathered.
struct RegionSpec {
    Region region;
    PromptId prompt;
    double guidance_strength = 1.0;
    MaskKind mask_kind = MaskKind::gaussian;
};

/// Per-pixel mixing weights over a region's extent (implicitly 0 outside).
/// values has shape rows x cols x 1.
struct WeightMask {
    Region region;
    ImageTensor values;
};

/// constant: all ones. gaussian: bivariate normal density with covariance
/// 0.01*I at the pixel-center offset from the region center, each axis
/// normalized by the region extent, so the density argument spans
/// [-0.5, 0.5] regardless of region size.
WeightMask build_weight_mask(const RegionSpec& spec);

/// Canvas-shaped tensor holding x at the indices of r and 0 elsewhere.
ImageTensor pad_into(const ImageTensor& x, const Region& r, const Shape& canvas);

/// Per-pixel sum of the padded masks (height x width x 1).
ImageTensor sum_masks(const std::vector<WeightMask>& masks, const Shape& canvas);

/// Per-pixel reciprocal of the summed padded masks. Throws CoverageError
/// naming the first (row-major) pixel with zero summed weight.
ImageTensor normalizer(const std::vector<WeightMask>& masks, const Shape& canvas);

/// Reciprocal of an already-summed mask tensor, with the same coverage check.
ImageTensor normalizer_from_sum(const ImageTensor& summed, const Shape& canvas);

/// Weighted mixture of the per-region noise predictions:
///   Z ⊙ Σ_i w_i ⊙ pad(eps_i)
/// summed in ascending region-index order. z has shape H x W x 1; one
/// prediction per mask, each shaped like its region.
ImageTensor mix_noise(const std::vector<ImageTensor>& region_preds,
                      const std::vector<WeightMask>& masks, const ImageTensor& z,
                      const Shape& canvas);

/// Slices x_t to the region and applies guidance:
///   cfg_combine(predict(slice, t, ∅), predict(slice, t, y), s)
ImageTensor region_guided_predict(const NoisePredictor& predictor, const ImageTensor& x_t,
                                  int t, const RegionSpec& spec);

// Streaming pieces used by the sampler so that only one region's working
// set is alive at a time in sequential mode.

/// acc(region) += w ⊙ values, where w is per-pixel and values per-element.
void accumulate_weighted(ImageTensor& acc, const WeightMask& mask, const ImageTensor& values);

/// x(p, ch) *= z(p) for every pixel p and channel.
void apply_pixel_scale(ImageTensor& x, const ImageTensor& z);

} // namespace tessera
