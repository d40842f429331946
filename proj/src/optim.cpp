#include "solarcast/optim.hpp"

#include <cmath>

namespace solarcast {

void AdamHyper::validate() const {
    if (alpha0 <= 0) throw ConfigError("adam: alpha0 must be > 0");
    if (beta1 < 0 || beta1 >= 1) throw ConfigError("adam: beta1 must be in [0, 1)");
    if (beta2 < 0 || beta2 >= 1) throw ConfigError("adam: beta2 must be in [0, 1)");
    if (epsilon <= 0) throw ConfigError("adam: epsilon must be > 0");
    if (decay < 0) throw ConfigError("adam: decay must be >= 0");
}

AdamState AdamState::fresh(const NetworkParams& params) {
    AdamState state;
    state.m = zeros_like(params);
    state.v = zeros_like(params);
    state.t = 0;
    return state;
}

double decayed_lr(const AdamHyper& hyper, std::uint64_t epoch) {
    return hyper.alpha0 / (1.0 + hyper.decay * static_cast<double>(epoch));
}

namespace {

void step_span(double* w, double* m, double* v, const double* g, std::size_t n,
               const AdamHyper& h, double lr, double bc1, double bc2) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(g[i]))
            throw NumericError("adam_step: non-finite gradient coordinate");
        m[i] = h.beta1 * m[i] + (1.0 - h.beta1) * g[i];
        v[i] = h.beta2 * v[i] + (1.0 - h.beta2) * g[i] * g[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + h.epsilon);
    }
}

}  // namespace

void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
               const AdamHyper& hyper, double lr) {
    hyper.validate();
    if (lr <= 0) throw ConfigError("adam_step: lr must be > 0");
    if (params.layers.size() != grads.layers.size() ||
        params.layers.size() != state.m.layers.size() ||
        params.layers.size() != state.v.layers.size())
        throw ShapeError("adam_step: shape trees disagree");

    state.t += 1;
    const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.t));

    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto& p = params.layers[l];
        const auto& g = grads.layers[l];
        auto& m = state.m.layers[l];
        auto& v = state.v.layers[l];
        if (p.weights.size() != g.weights.size() ||
            p.biases.size() != g.biases.size())
            throw ShapeError("adam_step: layer shape mismatch");
        step_span(p.weights.data(), m.weights.data(), v.weights.data(),
                  g.weights.data(), p.weights.size(), hyper, lr, bc1, bc2);
        step_span(p.biases.data(), m.biases.data(), v.biases.data(),
                  g.biases.data(), p.biases.size(), hyper, lr, bc1, bc2);
    }
}

}  // namespace solarcast
