#include "tessera/runtime.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "tessera/image_io.hpp"
#include "tessera/kernels.hpp"
#include "tessera/latent.hpp"
#include "tessera/memory.hpp"

namespace tessera {

namespace {

std::filesystem::path snapshot_path(const std::filesystem::path& out, int level, int channels) {
    std::ostringstream name;
    name << out.stem().string() << "_step" << std::setw(6) << std::setfill('0') << level
         << (channels == 1 ? ".pgm" : ".ppm");
    return out.parent_path() / name.str();
}

// Normalized per-region weights as grayscale: byte = round(w_norm * 255),
// written through the standard [-1, 1] quantizer via v = 2*w_norm - 1.
std::vector<std::string> dump_masks(const CanvasJob& job,
                                    const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<WeightMask> masks;
    masks.reserve(job.regions.size());
    for (const RegionSpec& spec : job.regions) masks.push_back(build_weight_mask(spec));
    const ImageTensor z = normalizer(masks, job.canvas);

    std::vector<std::string> written;
    const Shape mask_canvas{job.canvas.height, job.canvas.width, 1};
    for (std::size_t i = 0; i < masks.size(); ++i) {
        ImageTensor padded = pad_into(masks[i].values, masks[i].region, mask_canvas);
        kernels::active_backend().mul(padded.data(), z.data(), padded.data(), padded.size());
        double* v = padded.data();
        for (std::size_t k = 0; k < padded.size(); ++k) v[k] = 2.0 * v[k] - 1.0;
        std::ostringstream name;
        name << "mask_" << std::setw(2) << std::setfill('0') << i << ".pgm";
        const auto path = dir / name.str();
        write_image(padded, path);
        written.push_back(path.string());
    }
    return written;
}

} // namespace

int env_thread_cap() {
    const char* env = std::getenv("TESSERA_THREADS");
    if (env == nullptr) return 1;
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end == env || value < 0) return 1;
    return static_cast<int>(value);
}

RunReport run(const CanvasJob& job, const RunOptions& options) {
    validate_job(job);
    memory::reset_peak_tensor_bytes();
    const auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.seed = job.seed;

    const bool latent_mode = job.latent_upscale > 1;
    const StandInCodec codec{job.latent_upscale};
    const CanvasJob sampled_job =
        latent_mode ? to_latent_job(job, LatentMapping{job.latent_upscale}) : job;

    if (options.dump_masks_dir) {
        auto written = dump_masks(sampled_job, *options.dump_masks_dir);
        report.outputs.insert(report.outputs.end(), written.begin(), written.end());
    }

    SampleOptions sample_options;
    sample_options.mode = options.mode;
    sample_options.threads = options.threads >= 0 ? options.threads : env_thread_cap();
    if (options.dump_steps > 0) {
        sample_options.on_step = [&](int level, const ImageTensor& x) {
            if (level % options.dump_steps != 0) return;
            const ImageTensor snapshot = latent_mode ? codec.decode(x) : x;
            const auto path = snapshot_path(options.out, level, snapshot.channels());
            write_image(snapshot, path);
            report.outputs.push_back(path.string());
        };
    }

    SampleResult result = sample(sampled_job, sample_options);
    const ImageTensor x0 = latent_mode ? codec.decode(result.x0) : std::move(result.x0);
    write_image(x0, options.out);
    report.outputs.push_back(options.out.string());

    report.steps = sampled_job.schedule.steps();
    report.region_predictions_per_step = 2 * static_cast<int>(sampled_job.regions.size());
    report.total_region_predictions = result.predictor_calls;
    report.peak_live_tensor_bytes = memory::peak_tensor_bytes();
    report.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();

    if (options.report_path) write_report(report, *options.report_path);
    return report;
}

void write_report(const RunReport& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["outputs"] = report.outputs;
    j["wall_time_ms"] = report.wall_time_ms;
    j["steps"] = report.steps;
    j["region_predictions_per_step"] = report.region_predictions_per_step;
    j["total_region_predictions"] = report.total_region_predictions;
    j["peak_live_tensor_bytes"] = report.peak_live_tensor_bytes;
    j["seed"] = report.seed;
    std::ofstream file(path);
    if (!file) throw IoError("cannot open report '" + path.string() + "' for writing");
    file << j.dump(2) << "\n";
}

} // namespace tessera
