#if defined(TESSERA_HAVE_NEON)

#include <arm_neon.h>

#include "tessera/kernels.hpp"

// 2-wide f64 variants, mirroring the scalar reference op for op (vmla is
// avoided for the same reason FMA is avoided on x86).

namespace tessera::kernels {

namespace {

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    const float64x2_t vb = vdupq_n_f64(b);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vaddq_f64(vmulq_f64(va, vld1q_f64(x + i)),
                                     vmulq_f64(vb, vld1q_f64(y + i))));
    for (; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(double a, const double* x, double* out, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = a * x[i];
}

void sub_scaled_div(const double* x, double c, const double* y, double d, double* out,
                    std::size_t n) {
    const float64x2_t vc = vdupq_n_f64(c);
    const float64x2_t vd = vdupq_n_f64(d);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i,
                  vdivq_f64(vsubq_f64(vld1q_f64(x + i), vmulq_f64(vc, vld1q_f64(y + i))), vd));
    for (; i < n; ++i) out[i] = (x[i] - c * y[i]) / d;
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(out + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_add(const double* w, const double* x, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t prod = vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i));
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), prod));
    }
    for (; i < n; ++i) acc[i] += w[i] * x[i];
}

void add(const double* x, double* acc, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(acc + i, vaddq_f64(vld1q_f64(acc + i), vld1q_f64(x + i)));
    for (; i < n; ++i) acc[i] += x[i];
}

void recip(const double* x, double* out, std::size_t n) {
    const float64x2_t one = vdupq_n_f64(1.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) vst1q_f64(out + i, vdivq_f64(one, vld1q_f64(x + i)));
    for (; i < n; ++i) out[i] = 1.0 / x[i];
}

} // namespace

const Backend& neon_backend() {
    static const Backend backend{axpby, scale, sub_scaled_div, mul, mul_add, add, recip, "neon"};
    return backend;
}

} // namespace tessera::kernels

#endif // TESSERA_HAVE_NEON
