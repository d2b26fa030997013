#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tessera/sampler.hpp"

namespace tessera {

struct RunOptions {
    std::filesystem::path out = "out.ppm";
    PredictionMode mode = PredictionMode::sequential;
    /// Write per-region normalized weight masks (grayscale) into this dir.
    std::optional<std::filesystem::path> dump_masks_dir;
    /// Write an intermediate snapshot whenever the level is a multiple of
    /// this value (0 disables).
    int dump_steps = 0;
    std::optional<std::filesystem::path> report_path;
    /// Worker threads for batched prediction; -1 reads TESSERA_THREADS
    /// (0 = fully sequential).
    int threads = -1;
};

struct RunReport {
    std::vector<std::string> outputs;
    double wall_time_ms = 0.0;
    int steps = 0;
    int region_predictions_per_step = 0;
    long long total_region_predictions = 0;
    std::size_t peak_live_tensor_bytes = 0;
    std::uint64_t seed = 0;
};

/// Parallelism cap from TESSERA_THREADS (1 when unset or unparsable).
int env_thread_cap();

/// Executes the job: latent mapping when configured, sampling, image and
/// optional mask/snapshot/report writing. Deterministic: identical job
/// bytes and seed give identical output bytes.
RunReport run(const CanvasJob& job, const RunOptions& options);

void write_report(const RunReport& report, const std::filesystem::path& path);

} // namespace tessera
