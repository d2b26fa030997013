#include "tessera/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace tessera::kernels {

namespace {

const Backend* select_backend() {
    const char* forced = std::getenv("TESSERA_KERNELS");
    if (forced != nullptr) {
        if (std::strcmp(forced, "scalar") == 0) return &scalar_backend();
#if defined(TESSERA_HAVE_AVX2)
        if (std::strcmp(forced, "avx2") == 0 && avx2_supported()) return &avx2_backend();
#endif
#if defined(TESSERA_HAVE_NEON)
        if (std::strcmp(forced, "neon") == 0) return &neon_backend();
#endif
        return &scalar_backend();
    }
#if defined(TESSERA_HAVE_AVX2)
    if (avx2_supported()) return &avx2_backend();
#endif
#if defined(TESSERA_HAVE_NEON)
    return &neon_backend();
#else
    return &scalar_backend();
#endif
}

} // namespace

const Backend& active_backend() {
    static const Backend* chosen = select_backend();
    return *chosen;
}

} // namespace tessera::kernels
