#include <doctest.h>

#include <cmath>

#include "tessera/diffusion.hpp"
#include "test_util.hpp"

using namespace tessera;
using test_util::bit_equal;
using test_util::max_abs_diff;
using test_util::random_tensor;

namespace {

// predictor that always returns zeros
struct ZeroPredictor final : NoisePredictor {
    ImageTensor predict(const ImageTensor& x, int, const PromptId&) const override {
        return ImageTensor(x.shape());
    }
};

} // namespace

TEST_SUITE("diffusion") {

TEST_CASE("forward_jump zero and constant cases") {
    const auto sched = make_linear_schedule(4, 0.1, 0.4); // alpha_bar(2) = 0.72
    SeededRng rng(1);
    const auto eps = random_tensor(3, 5, 1, rng);

    const ImageTensor zeros(3, 5, 1);
    const auto jump = forward_jump(zeros, eps, 2, sched);
    const double s1ab = std::sqrt(1.0 - 0.72);
    for (std::size_t i = 0; i < jump.size(); ++i)
        CHECK(jump.data()[i] == doctest::Approx(s1ab * eps.data()[i]).epsilon(1e-14));

    const auto ones = ImageTensor::filled(3, 5, 1, 1.0);
    const auto pure = forward_jump(ones, zeros, 2, sched);
    for (std::size_t i = 0; i < pure.size(); ++i)
        CHECK(pure.data()[i] == doctest::Approx(0.848528137423857).epsilon(1e-14));
}

TEST_CASE("forward_jump marginals match the closed-form moments") {
    const auto sched = make_linear_schedule(10, 0.02, 0.3);
    const int t = 7;
    const double abar = sched.alpha_bar(t);
    SeededRng rng(22);
    const double x0_value = 0.4;
    const auto x0 = ImageTensor::filled(1, 1, 1, x0_value);

    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        ImageTensor eps(1, 1, 1);
        rng.fill_normal(eps.data(), 1);
        const double v = forward_jump(x0, eps, t, sched).data()[0];
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    const double expected_mean = std::sqrt(abar) * x0_value;
    const double expected_var = 1.0 - abar;
    CHECK(std::abs(mean - expected_mean) < 3.0 * std::sqrt(expected_var / n));
    CHECK(std::abs(var - expected_var) < 3.0 * expected_var * std::sqrt(2.0 / n));
}

TEST_CASE("forward_jump rejects shape mismatch") {
    const auto sched = make_linear_schedule(4, 0.1, 0.4);
    SeededRng rng(2);
    const auto a = random_tensor(2, 2, 1, rng);
    const auto b = random_tensor(2, 3, 1, rng);
    CHECK_THROWS_AS(forward_jump(a, b, 1, sched), DimensionError);
}

TEST_CASE("forward_step degenerate noise keeps x") {
    const auto sched = make_linear_schedule(1, 1e-12, 1e-12);
    SeededRng rng(3);
    const auto x = random_tensor(4, 4, 1, rng);
    SeededRng step_rng(4);
    const auto y = forward_step(x, 1, step_rng, sched);
    CHECK(max_abs_diff(x, y) < 1e-5);
}

TEST_CASE("forward_step is seed-deterministic") {
    const auto sched = make_linear_schedule(6, 0.05, 0.2);
    SeededRng rng(5);
    const auto x = random_tensor(3, 3, 1, rng);
    SeededRng r1(77), r2(77);
    CHECK(bit_equal(forward_step(x, 3, r1, sched), forward_step(x, 3, r2, sched)));
}

TEST_CASE("composing forward steps matches the jump marginals") {
    const auto sched = make_linear_schedule(8, 0.03, 0.25);
    const double abar_T = sched.alpha_bar(8);
    SeededRng rng(31);
    const double x0_value = -0.3;
    const int n = 20000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        ImageTensor x = ImageTensor::filled(1, 1, 1, x0_value);
        for (int t = 1; t <= 8; ++t) x = forward_step(x, t, rng, sched);
        sum += x.data()[0];
        sumsq += x.data()[0] * x.data()[0];
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean - std::sqrt(abar_T) * x0_value) < 3.0 * std::sqrt((1 - abar_T) / n));
    CHECK(std::abs(var - (1.0 - abar_T)) < 3.0 * (1 - abar_T) * std::sqrt(2.0 / n));
}

TEST_CASE("posterior coefficients, beta=[0.1,0.2], t=2") {
    const auto sched = make_linear_schedule(2, 0.1, 0.2);
    const auto x0 = ImageTensor::filled(1, 1, 1, 1.0);
    const auto xt = ImageTensor(1, 1, 1); // zero
    auto p = posterior_params(x0, xt, 2, sched);
    // sqrt(0.9)*0.2/0.28 and sqrt(0.8)*0.1/0.28, evaluated independently
    CHECK(p.mean.data()[0] == doctest::Approx(0.6776309271789387).epsilon(1e-13));
    CHECK(p.variance == doctest::Approx(0.07142857142857144).epsilon(1e-13));
    auto p2 = posterior_params(xt, x0, 2, sched);
    CHECK(p2.mean.data()[0] == doctest::Approx(0.31943828249996997).epsilon(1e-13));
}

TEST_CASE("posterior of a constant tensor is the coefficient sum") {
    const auto sched = make_linear_schedule(5, 0.05, 0.3);
    const double c = 0.37;
    const auto x = ImageTensor::filled(2, 3, 1, c);
    const int t = 4;
    auto p = posterior_params(x, x, t, sched);
    const double abar = sched.alpha_bar(t), abar_prev = sched.alpha_bar(t - 1);
    const double coeff = std::sqrt(abar_prev) * sched.beta(t) / (1 - abar) +
                         std::sqrt(sched.alpha(t)) * (1 - abar_prev) / (1 - abar);
    for (std::size_t i = 0; i < p.mean.size(); ++i)
        CHECK(p.mean.data()[i] == doctest::Approx(c * coeff).epsilon(1e-14));
}

TEST_CASE("posterior at t=1 collapses onto x0") {
    const auto sched = make_linear_schedule(3, 0.1, 0.3);
    SeededRng rng(6);
    const auto x0 = random_tensor(2, 2, 1, rng);
    const auto x1 = random_tensor(2, 2, 1, rng);
    auto p = posterior_params(x0, x1, 1, sched);
    // coefficient on x0 is beta_1*sqrt(abar_0)/(1-abar_1) = 1, on x1 it is 0 exactly
    CHECK(max_abs_diff(p.mean, x0) < 1e-12);
    CHECK(p.variance == 0.0);
}

TEST_CASE("posterior rejects t=0") {
    const auto sched = make_linear_schedule(3, 0.1, 0.3);
    const ImageTensor x(1, 1, 1);
    CHECK_THROWS_AS(posterior_params(x, x, 0, sched), StepError);
}

TEST_CASE("posterior mean via eps: frozen arithmetic case") {
    // alpha_t = 0.8, abar_t = 0.72, xt = 1, eps_hat = 1
    const auto sched = make_linear_schedule(2, 0.1, 0.2);
    const auto one = ImageTensor::filled(1, 1, 1, 1.0);
    const auto mean = posterior_mean_from_eps(one, one, 2, sched);
    // (1 - 0.2/sqrt(0.28))/sqrt(0.8), computed independently
    CHECK(mean.data()[0] == doctest::Approx(0.6954568613856366).epsilon(1e-13));
}

TEST_CASE("posterior mean via eps: zero estimate") {
    const auto sched = make_linear_schedule(2, 0.1, 0.2);
    SeededRng rng(7);
    const auto xt = random_tensor(3, 3, 1, rng);
    const ImageTensor zero(3, 3, 1);
    const auto mean = posterior_mean_from_eps(xt, zero, 2, sched);
    for (std::size_t i = 0; i < mean.size(); ++i)
        CHECK(mean.data()[i] == xt.data()[i] / std::sqrt(0.8));
}

TEST_CASE("the two posterior-mean routes agree (appendix identity)") {
    const auto sched = make_linear_schedule(50, 1e-3, 0.3);
    SeededRng rng(8);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto x0 = random_tensor(2, 3, 1, rng);
        const auto eps = random_tensor(2, 3, 1, rng);
        const int t = rng.uniform_step(50);
        const auto xt = forward_jump(x0, eps, t, sched);
        const auto via_x0 = posterior_params(x0, xt, t, sched).mean;
        const auto via_eps = posterior_mean_from_eps(xt, eps, t, sched);
        worst = std::max(worst, max_abs_diff(via_x0, via_eps));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("ddpm_step noise amplitude and t=1 determinism") {
    const auto sched = make_linear_schedule(2, 0.1, 0.2);
    const auto xt = ImageTensor::filled(1, 1, 1, 1.0);
    const ImageTensor eps_zero(1, 1, 1);

    // std of the added noise at t=2 is sqrt(beta_tilde) = 0.2672612419124244
    SeededRng r1(10);
    const double z0 = [&] {
        SeededRng probe(10);
        return probe.normal();
    }();
    const auto stepped = ddpm_step(xt, eps_zero, 2, r1, sched);
    const double mean_only = 1.0 / std::sqrt(0.8);
    CHECK(stepped.data()[0] ==
          doctest::Approx(mean_only + 0.2672612419124244 * z0).epsilon(1e-13));

    // t=1 adds no noise and consumes no randomness
    SeededRng r2(11), r3(11);
    const auto final_step = ddpm_step(xt, eps_zero, 1, r2, sched);
    CHECK(final_step.data()[0] == doctest::Approx(1.0 / std::sqrt(0.9)).epsilon(1e-13));
    CHECK(r2.normal() == r3.normal());
}

TEST_CASE("full loop with the exact point-mass predictor lands on the mean") {
    const auto sched = make_linear_schedule(1000, 1e-4, 0.02);
    AnalyticTarget target;
    target.means["spot"] = Pattern::flat(0.45);
    target.sigma0 = 0.0;
    const AnalyticGaussianPredictor predictor(target, sched);

    SeededRng rng(2718);
    ImageTensor x(4, 4, 1);
    rng.fill_normal(x.data(), x.size());
    for (int t = 1000; t >= 1; --t)
        x = ddpm_step(x, predictor.predict(x, t, "spot"), t, rng, sched);

    double rms = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x.data()[i] - 0.45;
        rms += d * d;
    }
    rms = std::sqrt(rms / x.size());
    CHECK(rms < 0.05);
}

TEST_CASE("cfg endpoints are exact") {
    SeededRng rng(12);
    const auto u = random_tensor(3, 4, 1, rng);
    const auto c = random_tensor(3, 4, 1, rng);
    CHECK(bit_equal(cfg_combine(u, c, 1.0), c));
    CHECK(bit_equal(cfg_combine(u, c, 0.0), u));
}

TEST_CASE("cfg extrapolation: frozen case") {
    const ImageTensor u(2, 2, 1); // zeros
    const auto c = ImageTensor::filled(2, 2, 1, 1.0);
    const auto out = cfg_combine(u, c, 2.0);
    for (std::size_t i = 0; i < out.size(); ++i) CHECK(out.data()[i] == 2.0);
}

TEST_CASE("cfg is affine: swapped arguments with the same strength sum to a+b") {
    SeededRng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_tensor(2, 3, 1, rng);
        const auto b = random_tensor(2, 3, 1, rng);
        const double s = 3.0 * rng.uniform() - 1.0;
        const auto ab = cfg_combine(a, b, s);
        const auto ba = cfg_combine(b, a, s);
        for (std::size_t i = 0; i < ab.size(); ++i) {
            const double sum = ab.data()[i] + ba.data()[i];
            const double expect = a.data()[i] + b.data()[i];
            CHECK(sum == doctest::Approx(expect).epsilon(1e-14));
        }
    }
}

TEST_CASE("simple_loss vanishes for the exact point-mass oracle") {
    const auto sched = make_linear_schedule(50, 1e-3, 0.2);
    AnalyticTarget target;
    target.means["p"] = Pattern::flat(0.2);
    target.sigma0 = 0.0;
    const AnalyticGaussianPredictor predictor(target, sched);
    SeededRng rng(14);
    const double loss = simple_loss(predictor, make_target_sampler(target, "p", {4, 4, 1}),
                                    sched, 200, rng);
    CHECK(loss < 1e-20);
}

TEST_CASE("simple_loss: analytic beats a mean-shifted predictor (paired seeds)") {
    const auto sched = make_linear_schedule(100, 1e-3, 0.2);
    for (double sigma0 : {0.0, 0.25, 1.0}) {
        AnalyticTarget target;
        target.means["p"] = Pattern::flat(0.3);
        target.sigma0 = sigma0;
        AnalyticTarget shifted = target;
        shifted.means["p"] = Pattern::flat(0.4);

        const AnalyticGaussianPredictor exact(target, sched);
        const AnalyticGaussianPredictor biased(shifted, sched);
        const auto sampler = make_target_sampler(target, "p", {4, 4, 1});

        SeededRng rng_a(5150), rng_b(5150);
        const double loss_exact = simple_loss(exact, sampler, sched, 2000, rng_a);
        const double loss_biased = simple_loss(biased, sampler, sched, 2000, rng_b);
        CHECK(loss_exact < loss_biased);
    }
}

TEST_CASE("simple_loss of the zero predictor matches its closed form") {
    // target N(0, I), zero predictor: E||eps||^2 = H*W*C, Var = 2*H*W*C
    const auto sched = make_linear_schedule(100, 1e-3, 0.2);
    AnalyticTarget target;
    target.means["p"] = Pattern::flat(0.0);
    target.sigma0 = 1.0;
    const ZeroPredictor zero;
    SeededRng rng(15);
    const int n = 4000;
    const double elems = 4.0 * 4.0;
    const double loss =
        simple_loss(zero, make_target_sampler(target, "p", {4, 4, 1}), sched, n, rng);
    const double se = std::sqrt(2.0 * elems / n);
    CHECK(std::abs(loss - elems) < 3.0 * se);
}

} // TEST_SUITE
