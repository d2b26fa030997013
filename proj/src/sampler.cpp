#include "tessera/sampler.hpp"

#include <string>

#include "tessera/diffusion.hpp"
#include "tessera/kernels.hpp"

namespace tessera {

namespace {

void check_latent_aligned(int value, int upscale, const std::string& what) {
    if (value % upscale != 0)
        throw AlignmentError(what + "=" + std::to_string(value) + " is not a multiple of the" +
                             " latent upscale " + std::to_string(upscale));
}

void check_coverage(const CanvasJob& job) {
    std::vector<unsigned char> covered(
        static_cast<std::size_t>(job.canvas.height) * job.canvas.width, 0);
    for (const RegionSpec& spec : job.regions) {
        const Region& r = spec.region;
        for (int row = r.row_start; row < r.row_end; ++row)
            for (int col = r.col_start; col < r.col_end; ++col)
                covered[static_cast<std::size_t>(row) * job.canvas.width + col] = 1;
    }
    for (int row = 0; row < job.canvas.height; ++row)
        for (int col = 0; col < job.canvas.width; ++col)
            if (!covered[static_cast<std::size_t>(row) * job.canvas.width + col])
                throw CoverageError("no region covers pixel (row " + std::to_string(row) +
                                    ", col " + std::to_string(col) + ")");
}

} // namespace

void validate_job(const CanvasJob& job) {
    if (job.canvas.height < 1 || job.canvas.width < 1 || job.canvas.channels < 1)
        throw ConfigError("canvas dimensions must be positive, got " + to_string(job.canvas));
    if (job.regions.empty()) throw ConfigError("job needs at least one region");
    job.target.validate();

    for (std::size_t i = 0; i < job.regions.size(); ++i) {
        const RegionSpec& spec = job.regions[i];
        const std::string what = "regions[" + std::to_string(i) + "]";
        require_region_in_canvas(spec.region, job.canvas.height, job.canvas.width, what);
        if (!(spec.guidance_strength >= 0.0))
            throw ConfigError(what + ".guidance_scale must be >= 0");
        if (spec.prompt.empty()) throw ConfigError(what + ".prompt must be nonempty");
        job.target.mean_for(spec.prompt); // throws on unknown prompt
    }
    check_coverage(job);

    for (std::size_t i = 0; i < job.guides.size(); ++i) {
        const GuideSpec& guide = job.guides[i];
        const std::string what = "guides[" + std::to_string(i) + "]";
        require_region_in_canvas(guide.placement, job.canvas.height, job.canvas.width, what);
        if (guide.image.height() != guide.placement.rows() ||
            guide.image.width() != guide.placement.cols() ||
            guide.image.channels() != job.canvas.channels)
            throw ConfigError(what + ": image " + to_string(guide.image.shape()) +
                              " does not match placement " + to_string(guide.placement) +
                              " with " + std::to_string(job.canvas.channels) + " channels");
        if (!(guide.strength >= 0.0 && guide.strength <= 1.0))
            throw ConfigError(what + ".strength must be in [0, 1]");
        if (guide.noise_exponent != 0.5 && guide.noise_exponent != 1.0)
            throw ConfigError(what + ".noise_exponent must be 0.5 or 1");
    }

    if (job.latent_upscale < 1) throw ConfigError("latent.upscale must be >= 1");
    if (job.latent_upscale > 1) {
        const int u = job.latent_upscale;
        check_latent_aligned(job.canvas.height, u, "canvas.height");
        check_latent_aligned(job.canvas.width, u, "canvas.width");
        for (std::size_t i = 0; i < job.regions.size(); ++i) {
            const Region& r = job.regions[i].region;
            const std::string what = "regions[" + std::to_string(i) + "]";
            check_latent_aligned(r.row_start, u, what + ".rows[0]");
            check_latent_aligned(r.row_end, u, what + ".rows[1]");
            check_latent_aligned(r.col_start, u, what + ".cols[0]");
            check_latent_aligned(r.col_end, u, what + ".cols[1]");
        }
        for (std::size_t i = 0; i < job.guides.size(); ++i) {
            const Region& r = job.guides[i].placement;
            const std::string what = "guides[" + std::to_string(i) + "]";
            check_latent_aligned(r.row_start, u, what + ".rows[0]");
            check_latent_aligned(r.row_end, u, what + ".rows[1]");
            check_latent_aligned(r.col_start, u, what + ".cols[0]");
            check_latent_aligned(r.col_end, u, what + ".cols[1]");
        }
    }
}

namespace {

// Per-pixel normalizer built one mask at a time so the transient working
// set stays at a single region.
ImageTensor build_normalizer(const CanvasJob& job) {
    ImageTensor sum(job.canvas.height, job.canvas.width, 1);
    for (const RegionSpec& spec : job.regions) {
        const WeightMask mask = build_weight_mask(spec);
        const Region& r = mask.region;
        for (int row = 0; row < r.rows(); ++row)
            kernels::active_backend().add(mask.values.row_ptr(row),
                                          sum.row_ptr(r.row_start + row, r.col_start),
                                          static_cast<std::size_t>(r.cols()));
    }
    return normalizer_from_sum(sum, job.canvas);
}

ImageTensor mix_step_sequential(const CanvasJob& job, const NoisePredictor& predictor,
                                const ImageTensor& x, int t, const ImageTensor& z,
                                long long& predictor_calls) {
    ImageTensor acc(job.canvas);
    for (const RegionSpec& spec : job.regions) {
        const WeightMask mask = build_weight_mask(spec);
        const ImageTensor eps = region_guided_predict(predictor, x, t, spec);
        predictor_calls += 2;
        accumulate_weighted(acc, mask, eps);
    }
    apply_pixel_scale(acc, z);
    return acc;
}

ImageTensor mix_step_batched(const CanvasJob& job, const NoisePredictor& predictor,
                             const std::vector<WeightMask>& masks, const ImageTensor& x, int t,
                             const ImageTensor& z, int threads, long long& predictor_calls) {
    // one uncond + one cond item per region, reduced strictly in region order
    std::vector<BatchItem> items;
    items.reserve(2 * job.regions.size());
    for (const RegionSpec& spec : job.regions) {
        ImageTensor slice = slice_region(x, spec.region);
        items.push_back({slice, t, kUnconditioned});
        items.push_back({std::move(slice), t, spec.prompt});
    }
    std::vector<ImageTensor> preds = batch_predict(predictor, items, threads);
    predictor_calls += static_cast<long long>(items.size());

    std::vector<ImageTensor> guided;
    guided.reserve(job.regions.size());
    for (std::size_t i = 0; i < job.regions.size(); ++i)
        guided.push_back(
            cfg_combine(preds[2 * i], preds[2 * i + 1], job.regions[i].guidance_strength));
    return mix_noise(guided, masks, z, job.canvas);
}

} // namespace

SampleResult sample(const CanvasJob& job, const NoisePredictor& predictor,
                    const SampleOptions& options) {
    validate_job(job);
    const NoiseSchedule& sched = job.schedule;
    const int steps = sched.steps();
    SeededRng rng(job.seed);

    SampleResult result;
    ImageTensor x(job.canvas);
    rng.fill_normal(x.data(), x.size());

    const bool has_guides = !job.guides.empty();
    ImageTensor xT;
    if (has_guides) {
        xT = x;
        apply_guides(x, steps, job.guides, xT, sched);
    }

    const ImageTensor z = build_normalizer(job);
    std::vector<WeightMask> masks;
    if (options.mode == PredictionMode::batched) {
        masks.reserve(job.regions.size());
        for (const RegionSpec& spec : job.regions) masks.push_back(build_weight_mask(spec));
    }

    if (options.record_trajectory) result.trajectory.push_back(x);

    for (int t = steps; t >= 1; --t) {
        const ImageTensor eps_mix =
            options.mode == PredictionMode::sequential
                ? mix_step_sequential(job, predictor, x, t, z, result.predictor_calls)
                : mix_step_batched(job, predictor, masks, x, t, z, options.threads,
                                   result.predictor_calls);
        x = ddpm_step(x, eps_mix, t, rng, sched);
        if (has_guides) apply_guides(x, t - 1, job.guides, xT, sched);
        if (options.record_trajectory) result.trajectory.push_back(x);
        if (options.on_step) options.on_step(t - 1, x);
    }

    result.x0 = std::move(x);
    return result;
}

SampleResult sample(const CanvasJob& job, const SampleOptions& options) {
    AnalyticGaussianPredictor predictor(job.target, job.schedule);
    return sample(job, predictor, options);
}

} // namespace tessera
