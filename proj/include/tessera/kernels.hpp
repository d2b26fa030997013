#pragma once

#include <cstddef>

namespace tessera::kernels {

/// Elementwise f64 kernels behind the tensor math. Every operation exists
/// as a scalar reference and (per architecture) a SIMD variant; the two are
/// required to produce bit-identical results, which holds because each
/// kernel performs the same IEEE operations per element in the same order
/// and the project is built with -ffp-contract=off (no FMA contraction).
///
/// `out` may alias `x` or `y`; distinct input arrays must not overlap `out`
/// partially.
struct Backend {
    // out[i] = a*x[i] + b*y[i]
    void (*axpby)(double a, const double* x, double b, const double* y, double* out,
                  std::size_t n);
    // out[i] = a*x[i]
    void (*scale)(double a, const double* x, double* out, std::size_t n);
    // out[i] = (x[i] - c*y[i]) / d
    void (*sub_scaled_div)(const double* x, double c, const double* y, double d, double* out,
                           std::size_t n);
    // out[i] = a[i]*b[i]
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    // acc[i] += w[i]*x[i]
    void (*mul_add)(const double* w, const double* x, double* acc, std::size_t n);
    // acc[i] += x[i]
    void (*add)(const double* x, double* acc, std::size_t n);
    // out[i] = 1/x[i]
    void (*recip)(const double* x, double* out, std::size_t n);

    const char* name;
};

const Backend& scalar_backend();

#if defined(TESSERA_HAVE_AVX2)
const Backend& avx2_backend();
bool avx2_supported();
#endif

#if defined(TESSERA_HAVE_NEON)
const Backend& neon_backend();
#endif

/// Backend used by the library. Picks the widest supported SIMD variant;
/// the TESSERA_KERNELS environment variable ("scalar", "avx2", "neon")
/// forces a specific one.
const Backend& active_backend();

} // namespace tessera::kernels
