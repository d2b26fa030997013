#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tessera/guides.hpp"
#include "tessera/mixer.hpp"
#include "tessera/predictors.hpp"
#include "tessera/schedule.hpp"
#include "tessera/tensor.hpp"

namespace tessera {

/// Everything one generation needs: canvas, schedule, seed, regions,
/// optional guides, the analytic predictor configuration and the optional
/// latent upscale factor. Value-like and freely shareable.
struct CanvasJob {
    Shape canvas;
    NoiseSchedule schedule = NoiseSchedule::linear(1, 0.5, 0.5);
    std::uint64_t seed = 0;
    std::vector<RegionSpec> regions;
    std::vector<GuideSpec> guides;
    AnalyticTarget target;
    int latent_upscale = 1;
};

/// Validates bounds, prompt resolvability, full canvas coverage, guide
/// placements and latent alignment. Every failure a sampler run could hit
/// is caught here. Throws ConfigError / CoverageError / AlignmentError.
void validate_job(const CanvasJob& job);

enum class PredictionMode {
    sequential, // one region at a time; peak memory independent of D
    batched     // all region predictions materialized per step
};

struct SampleOptions {
    PredictionMode mode = PredictionMode::sequential;
    /// Worker threads for batched prediction; <= 1 runs single-threaded.
    int threads = 1;
    bool record_trajectory = false;
    /// Called after every reverse step with the new level t-1 and the state.
    std::function<void(int, const ImageTensor&)> on_step;
};

struct SampleResult {
    ImageTensor x0;
    /// When recorded: trajectory[0] is x_T, trajectory[k] is the state after
    /// k reverse steps, down to x_0.
    std::vector<ImageTensor> trajectory;
    long long predictor_calls = 0;
};

/// Runs the full region-mixed reverse loop with the given predictor:
/// x_T from the seed, then for t = T..1 per-region guided predictions,
/// weight-normalized mixing and a reverse step, with guide overrides after
/// initialization and after every step. Sequential and batched modes are
/// bit-identical.
SampleResult sample(const CanvasJob& job, const NoisePredictor& predictor,
                    const SampleOptions& options = {});

/// Same, with the predictor built from job.target and job.schedule.
SampleResult sample(const CanvasJob& job, const SampleOptions& options = {});

} // namespace tessera
