#pragma once

#include <filesystem>
#include <string>

#include "tessera/sampler.hpp"

namespace tessera {

/// Parses and fully validates a JSON job config. Guide image paths are
/// resolved relative to base_dir. Unknown fields are rejected; every
/// bounds/coverage/alignment check of validate_job runs here, so a job
/// returned by parse_job cannot fail the sampler.
CanvasJob parse_job_text(const std::string& text, const std::filesystem::path& base_dir);

/// Reads the config file and parses it; guide paths resolve relative to
/// the config's directory.
CanvasJob parse_job(const std::filesystem::path& path);

} // namespace tessera
