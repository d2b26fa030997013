#include "tessera/kernels.hpp"

namespace tessera::kernels {

namespace {

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void scale(double a, const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a * x[i];
}

void sub_scaled_div(const double* x, double c, const double* y, double d, double* out,
                    std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (x[i] - c * y[i]) / d;
}

void mul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void mul_add(const double* w, const double* x, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += w[i] * x[i];
}

void add(const double* x, double* acc, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void recip(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / x[i];
}

} // namespace

const Backend& scalar_backend() {
    static const Backend backend{axpby, scale, sub_scaled_div, mul, mul_add, add, recip,
                                 "scalar"};
    return backend;
}

} // namespace tessera::kernels
