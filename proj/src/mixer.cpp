#include "tessera/mixer.hpp"

#include <cmath>
#include <numbers>

#include "tessera/kernels.hpp"

namespace tessera {

namespace {

constexpr double kMaskVariance = 0.01;

void check_mask_pred(const WeightMask& mask, const ImageTensor& pred, std::size_t index) {
    if (pred.height() != mask.region.rows() || pred.width() != mask.region.cols())
        throw DimensionError("mix_noise: prediction " + std::to_string(index) + " is " +
                             to_string(pred.shape()) + " but region " +
                             to_string(mask.region) + " expects " +
                             std::to_string(mask.region.rows()) + "x" +
                             std::to_string(mask.region.cols()));
}

} // namespace

WeightMask build_weight_mask(const RegionSpec& spec) {
    const Region& r = spec.region;
    if (r.rows() < 1 || r.cols() < 1)
        throw ConfigError("build_weight_mask: empty region " + to_string(r));
    WeightMask mask{r, ImageTensor(r.rows(), r.cols(), 1)};
    if (spec.mask_kind == MaskKind::constant) {
        double* v = mask.values.data();
        for (std::size_t i = 0; i < mask.values.size(); ++i) v[i] = 1.0;
        return mask;
    }
    const double row_center = 0.5 * (r.row_start + r.row_end);
    const double col_center = 0.5 * (r.col_start + r.col_end);
    const double norm = 1.0 / (2.0 * std::numbers::pi * kMaskVariance);
    for (int row = 0; row < r.rows(); ++row) {
        const double dr = (r.row_start + row + 0.5 - row_center) / r.rows();
        double* v = mask.values.row_ptr(row);
        for (int col = 0; col < r.cols(); ++col) {
            const double dc = (r.col_start + col + 0.5 - col_center) / r.cols();
            v[col] = norm * std::exp(-0.5 * (dr * dr + dc * dc) / kMaskVariance);
        }
    }
    return mask;
}

ImageTensor pad_into(const ImageTensor& x, const Region& r, const Shape& canvas) {
    if (x.height() != r.rows() || x.width() != r.cols() || x.channels() != canvas.channels)
        throw DimensionError("pad_into: tensor " + to_string(x.shape()) +
                             " does not match region " + to_string(r) + " in canvas " +
                             to_string(canvas));
    ImageTensor out(canvas);
    paste_region(out, r, x);
    return out;
}

ImageTensor sum_masks(const std::vector<WeightMask>& masks, const Shape& canvas) {
    if (masks.empty()) throw ConfigError("sum_masks: no masks");
    ImageTensor sum(canvas.height, canvas.width, 1);
    for (const auto& mask : masks) {
        const Region& r = mask.region;
        require_region_in_canvas(r, canvas.height, canvas.width, "sum_masks");
        for (int row = 0; row < r.rows(); ++row)
            kernels::active_backend().add(mask.values.row_ptr(row),
                                          sum.row_ptr(r.row_start + row, r.col_start),
                                          static_cast<std::size_t>(r.cols()));
    }
    return sum;
}

ImageTensor normalizer_from_sum(const ImageTensor& summed, const Shape& canvas) {
    for (int row = 0; row < canvas.height; ++row) {
        const double* v = summed.row_ptr(row);
        for (int col = 0; col < canvas.width; ++col)
            if (!(v[col] > 0.0))
                throw CoverageError("no region weight covers pixel (row " +
                                    std::to_string(row) + ", col " + std::to_string(col) + ")");
    }
    ImageTensor z(canvas.height, canvas.width, 1);
    kernels::active_backend().recip(summed.data(), z.data(), z.size());
    return z;
}

ImageTensor normalizer(const std::vector<WeightMask>& masks, const Shape& canvas) {
    return normalizer_from_sum(sum_masks(masks, canvas), canvas);
}

void accumulate_weighted(ImageTensor& acc, const WeightMask& mask, const ImageTensor& values) {
    check_mask_pred(mask, values, 0);
    const Region& r = mask.region;
    const int channels = acc.channels();
    if (values.channels() != channels)
        throw DimensionError("accumulate_weighted: channel mismatch");
    if (channels == 1) {
        for (int row = 0; row < r.rows(); ++row)
            kernels::active_backend().mul_add(mask.values.row_ptr(row), values.row_ptr(row),
                                              acc.row_ptr(r.row_start + row, r.col_start),
                                              static_cast<std::size_t>(r.cols()));
        return;
    }
    // replicate the per-pixel weight across channels so the kernel stays flat
    std::vector<double> wrow(static_cast<std::size_t>(r.cols()) * channels);
    for (int row = 0; row < r.rows(); ++row) {
        const double* w = mask.values.row_ptr(row);
        for (int col = 0; col < r.cols(); ++col)
            for (int ch = 0; ch < channels; ++ch) wrow[col * channels + ch] = w[col];
        kernels::active_backend().mul_add(wrow.data(), values.row_ptr(row),
                                          acc.row_ptr(r.row_start + row, r.col_start),
                                          wrow.size());
    }
}

void apply_pixel_scale(ImageTensor& x, const ImageTensor& z) {
    if (z.height() != x.height() || z.width() != x.width() || z.channels() != 1)
        throw DimensionError("apply_pixel_scale: scale must be " + std::to_string(x.height()) +
                             "x" + std::to_string(x.width()) + "x1, got " + to_string(z.shape()));
    const int channels = x.channels();
    if (channels == 1) {
        kernels::active_backend().mul(x.data(), z.data(), x.data(), x.size());
        return;
    }
    std::vector<double> zrow(static_cast<std::size_t>(x.width()) * channels);
    for (int row = 0; row < x.height(); ++row) {
        const double* zr = z.row_ptr(row);
        for (int col = 0; col < x.width(); ++col)
            for (int ch = 0; ch < channels; ++ch) zrow[col * channels + ch] = zr[col];
        kernels::active_backend().mul(x.row_ptr(row), zrow.data(), x.row_ptr(row), zrow.size());
    }
}

ImageTensor mix_noise(const std::vector<ImageTensor>& region_preds,
                      const std::vector<WeightMask>& masks, const ImageTensor& z,
                      const Shape& canvas) {
    if (region_preds.size() != masks.size())
        throw DimensionError("mix_noise: " + std::to_string(region_preds.size()) +
                             " predictions for " + std::to_string(masks.size()) + " masks");
    if (masks.empty()) throw ConfigError("mix_noise: no regions");
    ImageTensor acc(canvas);
    for (std::size_t i = 0; i < masks.size(); ++i) {
        check_mask_pred(masks[i], region_preds[i], i);
        accumulate_weighted(acc, masks[i], region_preds[i]);
    }
    apply_pixel_scale(acc, z);
    return acc;
}

ImageTensor region_guided_predict(const NoisePredictor& predictor, const ImageTensor& x_t,
                                  int t, const RegionSpec& spec) {
    const ImageTensor slice = slice_region(x_t, spec.region);
    const ImageTensor eps_uncond = predictor.predict(slice, t, kUnconditioned);
    const ImageTensor eps_cond = predictor.predict(slice, t, spec.prompt);
    require_same_shape(eps_uncond, slice, "region_guided_predict output");
    return cfg_combine(eps_uncond, eps_cond, spec.guidance_strength);
}

} // namespace tessera
