#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "tessera/job_config.hpp"
#include "tessera/runtime.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

int generate(const std::string& config_path, const tessera::RunOptions& options) {
    tessera::CanvasJob job;
    try {
        job = tessera::parse_job(config_path);
    } catch (const tessera::Error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }
    try {
        const tessera::RunReport report = tessera::run(job, options);
        std::printf("wrote %s (seed %llu, %d steps, peak %zu tensor bytes, %.1f ms)\n",
                    options.out.string().c_str(),
                    static_cast<unsigned long long>(report.seed), report.steps,
                    report.peak_live_tensor_bytes, report.wall_time_ms);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "runtime error: %s\n", e.what());
        return kExitRuntimeError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tessera - tiled diffusion sampling engine"};
    app.require_subcommand(1);

    std::string config_path;
    tessera::RunOptions options;
    std::string out = "out.ppm";
    std::string dump_masks_dir;
    std::string report_path;
    bool sequential = false;
    bool batch = false;

    CLI::App* gen = app.add_subcommand("generate", "sample a canvas from a job config");
    gen->add_option("config", config_path, "job config (JSON)")->required();
    gen->add_option("--out", out, "output image path (PPM for 3 channels, PGM for 1)");
    CLI::Option* seq_flag =
        gen->add_flag("--sequential", sequential, "one region at a time (low memory, default)");
    gen->add_flag("--batch", batch, "materialize all region predictions per step")
        ->excludes(seq_flag);
    gen->add_option("--dump-masks", dump_masks_dir,
                    "write per-region normalized weight masks into this directory");
    gen->add_option("--dump-steps", options.dump_steps,
                    "write a snapshot every N levels (0 = off)");
    gen->add_option("--report", report_path, "write a JSON run report to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfigError;
    }

    options.out = out;
    options.mode = batch ? tessera::PredictionMode::batched
                         : tessera::PredictionMode::sequential;
    if (!dump_masks_dir.empty()) options.dump_masks_dir = dump_masks_dir;
    if (!report_path.empty()) options.report_path = report_path;

    return generate(config_path, options);
}
