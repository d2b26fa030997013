#include "tessera/job_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tessera/image_io.hpp"

namespace tessera {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& ctx) {
    if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
    for (const auto& item : obj.items())
        if (allowed.find(item.key()) == allowed.end())
            throw ConfigError(ctx + ": unknown field '" + item.key() + "'");
}

const json& require_field(const json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(ctx + ": missing field '" + key + "'");
    return *it;
}

int get_int(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_field(obj, key, ctx);
    if (!v.is_number_integer()) throw ConfigError(ctx + "." + key + ": expected an integer");
    return v.get<int>();
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_field(obj, key, ctx);
    if (!v.is_number()) throw ConfigError(ctx + "." + key + ": expected a number");
    return v.get<double>();
}

std::string get_string(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_field(obj, key, ctx);
    if (!v.is_string()) throw ConfigError(ctx + "." + key + ": expected a string");
    return v.get<std::string>();
}

// [start, end) index pair, e.g. "rows": [0, 64]
std::pair<int, int> get_index_pair(const json& obj, const char* key, const std::string& ctx) {
    const json& v = require_field(obj, key, ctx);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
        throw ConfigError(ctx + "." + key + ": expected [start, end] integer pair");
    return {v[0].get<int>(), v[1].get<int>()};
}

Pattern parse_pattern(const json& node, const std::string& ctx) {
    if (!node.is_object()) throw ConfigError(ctx + ": expected a pattern object");
    const std::string kind = get_string(node, "kind", ctx);
    if (kind == "flat") {
        require_keys(node, {"kind", "value"}, ctx);
        return Pattern::flat(get_number(node, "value", ctx));
    }
    if (kind == "hgradient") {
        require_keys(node, {"kind", "from", "to"}, ctx);
        return Pattern::hgradient(get_number(node, "from", ctx), get_number(node, "to", ctx));
    }
    if (kind == "checkerboard") {
        require_keys(node, {"kind", "values", "cell"}, ctx);
        const json& values = require_field(node, "values", ctx);
        if (!values.is_array() || values.size() != 2 || !values[0].is_number() ||
            !values[1].is_number())
            throw ConfigError(ctx + ".values: expected [v0, v1]");
        return Pattern::checkerboard(values[0].get<double>(), values[1].get<double>(),
                                     get_int(node, "cell", ctx));
    }
    throw ConfigError(ctx + ".kind: unknown pattern kind '" + kind + "'");
}

Region parse_region_bounds(const json& node, const std::string& ctx) {
    auto [row_start, row_end] = get_index_pair(node, "rows", ctx);
    auto [col_start, col_end] = get_index_pair(node, "cols", ctx);
    return Region{row_start, row_end, col_start, col_end};
}

} // namespace

CanvasJob parse_job_text(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    require_keys(root, {"canvas", "schedule", "seed", "latent", "regions", "guides", "predictor"},
                 "config");

    CanvasJob job;

    const json& canvas = require_field(root, "canvas", "config");
    require_keys(canvas, {"height", "width", "channels"}, "canvas");
    job.canvas = Shape{get_int(canvas, "height", "canvas"), get_int(canvas, "width", "canvas"),
                       get_int(canvas, "channels", "canvas")};
    if (job.canvas.channels != 1 && job.canvas.channels != 3)
        throw ConfigError("canvas.channels: must be 1 or 3");

    const json& schedule = require_field(root, "schedule", "config");
    require_keys(schedule, {"kind", "T", "beta_start", "beta_end"}, "schedule");
    if (get_string(schedule, "kind", "schedule") != "linear")
        throw ConfigError("schedule.kind: only 'linear' is supported");
    job.schedule =
        NoiseSchedule::linear(get_int(schedule, "T", "schedule"),
                              get_number(schedule, "beta_start", "schedule"),
                              get_number(schedule, "beta_end", "schedule"));

    const json& seed = require_field(root, "seed", "config");
    if (!seed.is_number_integer() || (seed.is_number_integer() && !seed.is_number_unsigned() &&
                                      seed.get<std::int64_t>() < 0))
        throw ConfigError("seed: expected a nonnegative integer");
    job.seed = seed.get<std::uint64_t>();

    if (root.contains("latent")) {
        const json& latent = root["latent"];
        require_keys(latent, {"upscale"}, "latent");
        job.latent_upscale = get_int(latent, "upscale", "latent");
        if (job.latent_upscale < 1) throw ConfigError("latent.upscale: must be >= 1");
    }

    const json& regions = require_field(root, "regions", "config");
    if (!regions.is_array() || regions.empty())
        throw ConfigError("regions: expected a nonempty array");
    for (std::size_t i = 0; i < regions.size(); ++i) {
        const std::string ctx = "regions[" + std::to_string(i) + "]";
        const json& node = regions[i];
        require_keys(node, {"rows", "cols", "prompt", "guidance_scale", "weights"}, ctx);
        RegionSpec spec;
        spec.region = parse_region_bounds(node, ctx);
        spec.prompt = get_string(node, "prompt", ctx);
        spec.guidance_strength =
            node.contains("guidance_scale") ? get_number(node, "guidance_scale", ctx) : 1.0;
        if (node.contains("weights")) {
            const std::string weights = get_string(node, "weights", ctx);
            if (weights == "gaussian")
                spec.mask_kind = MaskKind::gaussian;
            else if (weights == "constant")
                spec.mask_kind = MaskKind::constant;
            else
                throw ConfigError(ctx + ".weights: expected 'gaussian' or 'constant'");
        }
        job.regions.push_back(std::move(spec));
    }

    if (root.contains("guides")) {
        const json& guides = root["guides"];
        if (!guides.is_array()) throw ConfigError("guides: expected an array");
        for (std::size_t i = 0; i < guides.size(); ++i) {
            const std::string ctx = "guides[" + std::to_string(i) + "]";
            const json& node = guides[i];
            require_keys(node, {"image", "rows", "cols", "strength", "noise_exponent"}, ctx);
            GuideSpec guide;
            guide.placement = parse_region_bounds(node, ctx);
            guide.strength = get_number(node, "strength", ctx);
            if (node.contains("noise_exponent"))
                guide.noise_exponent = get_number(node, "noise_exponent", ctx);
            const std::filesystem::path image_path = get_string(node, "image", ctx);
            const auto resolved =
                image_path.is_absolute() ? image_path : base_dir / image_path;
            try {
                guide.image = read_image(resolved);
            } catch (const IoError& e) {
                throw ConfigError(ctx + ".image: " + e.what());
            }
            job.guides.push_back(std::move(guide));
        }
    }

    const json& predictor = require_field(root, "predictor", "config");
    require_keys(predictor, {"kind", "sigma0", "uncond_sigma0", "uncond_mean", "prompts"},
                 "predictor");
    if (get_string(predictor, "kind", "predictor") != "analytic-gaussian")
        throw ConfigError("predictor.kind: only 'analytic-gaussian' is supported");
    job.target.sigma0 = get_number(predictor, "sigma0", "predictor");
    if (predictor.contains("uncond_sigma0"))
        job.target.uncond_sigma0 = get_number(predictor, "uncond_sigma0", "predictor");
    if (predictor.contains("uncond_mean"))
        job.target.uncond_mean = parse_pattern(predictor["uncond_mean"], "predictor.uncond_mean");
    const json& prompts = require_field(predictor, "prompts", "predictor");
    if (!prompts.is_object()) throw ConfigError("predictor.prompts: expected an object");
    for (const auto& item : prompts.items()) {
        if (item.key().empty()) throw ConfigError("predictor.prompts: empty prompt id");
        job.target.means[item.key()] =
            parse_pattern(item.value(), "predictor.prompts." + item.key());
    }

    validate_job(job);
    return job;
}

CanvasJob parse_job(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open config '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_job_text(buffer.str(), path.has_parent_path() ? path.parent_path()
                                                               : std::filesystem::path("."));
}

} // namespace tessera
