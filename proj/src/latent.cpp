#include "tessera/latent.hpp"

#include <string>

namespace tessera {

namespace {

int divide_aligned(int value, int upscale, const char* which) {
    if (value % upscale != 0)
        throw AlignmentError(std::string(which) + " index " + std::to_string(value) +
                             " is not a multiple of " + std::to_string(upscale));
    return value / upscale;
}

void check_dims_aligned(const ImageTensor& x, int upscale, const char* what) {
    if (x.height() % upscale != 0 || x.width() % upscale != 0)
        throw AlignmentError(std::string(what) + ": dims " + to_string(x.shape()) +
                             " are not multiples of " + std::to_string(upscale));
}

} // namespace

ImageTensor StandInCodec::encode(const ImageTensor& x) const {
    if (upscale < 1) throw ConfigError("codec upscale must be >= 1");
    check_dims_aligned(x, upscale, "encode");
    const int u = upscale;
    const int channels = x.channels();
    ImageTensor z(x.height() / u, x.width() / u, channels);
    const double inv_block = 1.0 / (static_cast<double>(u) * u);
    for (int row = 0; row < z.height(); ++row) {
        for (int col = 0; col < z.width(); ++col) {
            for (int ch = 0; ch < channels; ++ch) {
                double sum = 0.0;
                for (int dr = 0; dr < u; ++dr)
                    for (int dc = 0; dc < u; ++dc) sum += x.at(row * u + dr, col * u + dc, ch);
                z.at(row, col, ch) = sum * inv_block;
            }
        }
    }
    return z;
}

ImageTensor StandInCodec::decode(const ImageTensor& z) const {
    if (upscale < 1) throw ConfigError("codec upscale must be >= 1");
    const int u = upscale;
    const int channels = z.channels();
    ImageTensor x(z.height() * u, z.width() * u, channels);
    for (int row = 0; row < x.height(); ++row) {
        const double* src = z.row_ptr(row / u);
        double* dst = x.row_ptr(row);
        for (int col = 0; col < x.width(); ++col)
            for (int ch = 0; ch < channels; ++ch)
                dst[col * channels + ch] = src[(col / u) * channels + ch];
    }
    return x;
}

Region to_latent_region(const Region& r, int upscale) {
    if (upscale < 1) throw ConfigError("latent upscale must be >= 1");
    return Region{divide_aligned(r.row_start, upscale, "row_start"),
                  divide_aligned(r.row_end, upscale, "row_end"),
                  divide_aligned(r.col_start, upscale, "col_start"),
                  divide_aligned(r.col_end, upscale, "col_end")};
}

CanvasJob to_latent_job(const CanvasJob& job, const LatentMapping& mapping) {
    const int u = mapping.upscale;
    if (u < 1) throw ConfigError("latent upscale must be >= 1");
    if (u == 1) return job;

    CanvasJob latent = job;
    latent.canvas.height = divide_aligned(job.canvas.height, u, "canvas height");
    latent.canvas.width = divide_aligned(job.canvas.width, u, "canvas width");
    for (std::size_t i = 0; i < latent.regions.size(); ++i)
        latent.regions[i].region = to_latent_region(job.regions[i].region, u);

    const StandInCodec codec{u};
    for (std::size_t i = 0; i < latent.guides.size(); ++i) {
        latent.guides[i].placement = to_latent_region(job.guides[i].placement, u);
        latent.guides[i].image = codec.encode(job.guides[i].image);
    }
    latent.latent_upscale = 1; // already in latent space
    return latent;
}

} // namespace tessera
