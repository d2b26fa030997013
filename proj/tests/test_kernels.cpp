#include <doctest.h>

#include <cstddef>
#include <vector>

#include "tessera/kernels.hpp"
#include "tessera/rng.hpp"

using namespace tessera;

namespace {

std::vector<double> random_vec(std::size_t n, SeededRng& rng, double scale = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = scale * rng.normal();
    return v;
}

// Every backend must agree with the scalar reference bit for bit, on every
// size (vector tails included).
void check_backend_equivalence(const kernels::Backend& reference,
                               const kernels::Backend& candidate) {
    SeededRng rng(2024);
    for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{3}, std::size_t{4},
                          std::size_t{5}, std::size_t{7}, std::size_t{8}, std::size_t{16},
                          std::size_t{33}, std::size_t{67}, std::size_t{256}}) {
        const auto x = random_vec(n, rng);
        const auto y = random_vec(n, rng);
        const double a = rng.normal(), b = rng.normal();
        const double c = rng.normal();
        const double d = 0.25 + rng.uniform(); // keep divisor away from 0

        std::vector<double> out_ref(n), out_cand(n);

        reference.axpby(a, x.data(), b, y.data(), out_ref.data(), n);
        candidate.axpby(a, x.data(), b, y.data(), out_cand.data(), n);
        CHECK(out_ref == out_cand);

        reference.scale(a, x.data(), out_ref.data(), n);
        candidate.scale(a, x.data(), out_cand.data(), n);
        CHECK(out_ref == out_cand);

        reference.sub_scaled_div(x.data(), c, y.data(), d, out_ref.data(), n);
        candidate.sub_scaled_div(x.data(), c, y.data(), d, out_cand.data(), n);
        CHECK(out_ref == out_cand);

        reference.mul(x.data(), y.data(), out_ref.data(), n);
        candidate.mul(x.data(), y.data(), out_cand.data(), n);
        CHECK(out_ref == out_cand);

        out_ref = y;
        out_cand = y;
        reference.mul_add(x.data(), y.data(), out_ref.data(), n);
        candidate.mul_add(x.data(), y.data(), out_cand.data(), n);
        CHECK(out_ref == out_cand);

        out_ref = y;
        out_cand = y;
        reference.add(x.data(), out_ref.data(), n);
        candidate.add(x.data(), out_cand.data(), n);
        CHECK(out_ref == out_cand);

        auto pos = random_vec(n, rng);
        for (auto& v : pos) v = 0.5 + v * v;
        reference.recip(pos.data(), out_ref.data(), n);
        candidate.recip(pos.data(), out_cand.data(), n);
        CHECK(out_ref == out_cand);
    }
}

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar reference semantics") {
    const auto& ops = kernels::scalar_backend();
    SeededRng rng(7);
    const std::size_t n = 21;
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);
    std::vector<double> out(n);

    ops.axpby(2.0, x.data(), -0.5, y.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == 2.0 * x[i] + -0.5 * y[i]);

    ops.sub_scaled_div(x.data(), 0.3, y.data(), 1.7, out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == (x[i] - 0.3 * y[i]) / 1.7);

    ops.mul(x.data(), y.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == x[i] * y[i]);
}

TEST_CASE("identity coefficients are exact") {
    const auto& ops = kernels::active_backend();
    SeededRng rng(8);
    const std::size_t n = 13;
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);
    std::vector<double> out(n);

    ops.axpby(1.0, x.data(), 0.0, y.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == x[i]);
    ops.axpby(0.0, x.data(), 1.0, y.data(), out.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(out[i] == y[i]);
}

TEST_CASE("output may alias inputs") {
    const auto& ops = kernels::active_backend();
    SeededRng rng(9);
    const std::size_t n = 29;
    const auto x = random_vec(n, rng);
    const auto y = random_vec(n, rng);

    auto inplace = x;
    ops.axpby(1.5, inplace.data(), 2.5, y.data(), inplace.data(), n);
    std::vector<double> fresh(n);
    ops.axpby(1.5, x.data(), 2.5, y.data(), fresh.data(), n);
    CHECK(inplace == fresh);

    inplace = y;
    ops.mul(x.data(), inplace.data(), inplace.data(), n);
    ops.mul(x.data(), y.data(), fresh.data(), n);
    CHECK(inplace == fresh);
}

#if defined(TESSERA_HAVE_AVX2)
TEST_CASE("avx2 backend matches scalar bit for bit") {
    if (!kernels::avx2_supported()) return;
    check_backend_equivalence(kernels::scalar_backend(), kernels::avx2_backend());
}
#endif

#if defined(TESSERA_HAVE_NEON)
TEST_CASE("neon backend matches scalar bit for bit") {
    check_backend_equivalence(kernels::scalar_backend(), kernels::neon_backend());
}
#endif

TEST_CASE("active backend matches scalar bit for bit") {
    check_backend_equivalence(kernels::scalar_backend(), kernels::active_backend());
}

} // TEST_SUITE
