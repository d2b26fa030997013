#pragma once

#include "tessera/geometry.hpp"
#include "tessera/sampler.hpp"
#include "tessera/tensor.hpp"

namespace tessera {

/// Pixel-to-latent index mapping with a fixed upscale factor U: latent
/// indices are pixel indices divided by U, restricted to multiples of U.
struct LatentMapping {
    int upscale = 1;
};

/// Linear, local stand-in for a learned autoencoder pair: encode is the
/// U x U block mean, decode the U x U nearest-neighbor upsample, so a
/// decode(encode(x)) round trip preserves every block's mean exactly.
struct StandInCodec {
    int upscale = 1;

    ImageTensor encode(const ImageTensor& x) const;
    ImageTensor decode(const ImageTensor& z) const;
};

/// Divides all four region indices by U. Throws AlignmentError naming the
/// first index that is not a multiple of U.
Region to_latent_region(const Region& r, int upscale);

/// The same job expressed in latent space: canvas dims, regions and guide
/// placements divided by U, guide images encoded through the stand-in
/// codec. U = 1 returns the job unchanged.
CanvasJob to_latent_job(const CanvasJob& job, const LatentMapping& mapping);

} // namespace tessera
