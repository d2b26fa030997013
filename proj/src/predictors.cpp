#include "tessera/predictors.hpp"

#include <cmath>
#include <thread>

#include "tessera/kernels.hpp"

namespace tessera {

double Pattern::value_at(int row, int col, int /*height*/, int width) const {
    switch (kind) {
        case Kind::flat:
            return a;
        case Kind::hgradient:
            return width == 1 ? a : a + (b - a) * (static_cast<double>(col) / (width - 1));
        case Kind::checkerboard:
            return ((row / cell + col / cell) % 2 == 0) ? a : b;
    }
    return a;
}

ImageTensor Pattern::render(int height, int width, int channels) const {
    ImageTensor out(height, width, channels);
    for (int row = 0; row < height; ++row) {
        double* dst = out.row_ptr(row);
        for (int col = 0; col < width; ++col) {
            const double v = value_at(row, col, height, width);
            for (int ch = 0; ch < channels; ++ch) dst[col * channels + ch] = v;
        }
    }
    return out;
}

void Pattern::validate(const std::string& what) const {
    auto in_range = [](double v) { return v >= -1.0 && v <= 1.0 && std::isfinite(v); };
    switch (kind) {
        case Kind::flat:
            if (!in_range(a)) throw ConfigError(what + ": flat value must be in [-1, 1]");
            break;
        case Kind::hgradient:
            if (!in_range(a) || !in_range(b))
                throw ConfigError(what + ": gradient endpoints must be in [-1, 1]");
            break;
        case Kind::checkerboard:
            if (!in_range(a) || !in_range(b))
                throw ConfigError(what + ": checkerboard values must be in [-1, 1]");
            if (cell < 1) throw ConfigError(what + ": checkerboard cell must be >= 1");
            break;
    }
}

const Pattern& AnalyticTarget::mean_for(const PromptId& prompt) const {
    if (prompt.empty()) return uncond_mean;
    auto it = means.find(prompt);
    if (it == means.end()) throw ConfigError("unknown prompt '" + prompt + "'");
    return it->second;
}

void AnalyticTarget::validate() const {
    if (!(sigma0 >= 0.0) || !std::isfinite(sigma0))
        throw ConfigError("predictor sigma0 must be finite and >= 0");
    if (!(uncond_sigma0 >= 0.0) || !std::isfinite(uncond_sigma0))
        throw ConfigError("predictor uncond_sigma0 must be finite and >= 0");
    uncond_mean.validate("predictor uncond_mean");
    for (const auto& [prompt, pattern] : means) {
        if (prompt.empty()) throw ConfigError("prompt ids must be nonempty");
        pattern.validate("prompt '" + prompt + "'");
    }
}

ImageTensor analytic_posterior_x0(const ImageTensor& xt, int t, const AnalyticTarget& target,
                                  const PromptId& prompt, const NoiseSchedule& sched) {
    const double abar = sched.alpha_bar(t);
    const double sigma = target.sigma_for(prompt);
    const double denom = abar * sigma * sigma + (1.0 - abar);
    const ImageTensor mu = target.mean_for(prompt).render(xt.height(), xt.width(), xt.channels());
    ImageTensor out(xt.shape());
    kernels::active_backend().axpby(std::sqrt(abar) * sigma * sigma / denom, xt.data(),
                                    (1.0 - abar) / denom, mu.data(), out.data(), out.size());
    return out;
}

ImageTensor analytic_eps(const ImageTensor& xt, int t, const AnalyticTarget& target,
                         const PromptId& prompt, const NoiseSchedule& sched) {
    const double abar = sched.alpha_bar(t);
    const double sigma = target.sigma_for(prompt);
    const double denom = abar * sigma * sigma + (1.0 - abar);
    const double s1ab = std::sqrt(1.0 - abar);
    const ImageTensor mu = target.mean_for(prompt).render(xt.height(), xt.width(), xt.channels());
    ImageTensor out(xt.shape());
    kernels::active_backend().axpby(s1ab / denom, xt.data(),
                                    -(s1ab * std::sqrt(abar)) / denom, mu.data(), out.data(),
                                    out.size());
    return out;
}

std::vector<ImageTensor> batch_predict(const NoisePredictor& predictor,
                                       const std::vector<BatchItem>& items) {
    if (items.empty()) throw ConfigError("batch_predict: empty batch");
    std::vector<ImageTensor> out;
    out.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        try {
            out.push_back(predictor.predict(items[i].x, items[i].t, items[i].prompt));
        } catch (const Error& e) {
            throw ConfigError("batch item " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

std::vector<ImageTensor> batch_predict(const NoisePredictor& predictor,
                                       const std::vector<BatchItem>& items, int threads) {
    if (items.empty()) throw ConfigError("batch_predict: empty batch");
    const int n = static_cast<int>(items.size());
    const int workers = std::min(threads, n);
    if (workers <= 1) return batch_predict(predictor, items);

    std::vector<ImageTensor> out(items.size());
    std::vector<std::string> errors(items.size());
    auto work = [&](int worker) {
        for (int i = worker; i < n; i += workers) {
            try {
                out[i] = predictor.predict(items[i].x, items[i].t, items[i].prompt);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw ConfigError("batch item " + std::to_string(i) + ": " + errors[i]);
    return out;
}

TargetSampler make_target_sampler(AnalyticTarget target, PromptId prompt, Shape shape) {
    return [target = std::move(target), prompt = std::move(prompt),
            shape](SeededRng& rng) -> std::pair<ImageTensor, PromptId> {
        const double sigma = target.sigma_for(prompt);
        ImageTensor x0 =
            target.mean_for(prompt).render(shape.height, shape.width, shape.channels);
        if (sigma > 0.0) {
            ImageTensor z(shape);
            rng.fill_normal(z.data(), z.size());
            kernels::active_backend().axpby(1.0, x0.data(), sigma, z.data(), x0.data(),
                                            x0.size());
        }
        return {std::move(x0), prompt};
    };
}

} // namespace tessera
