// Test-side oracles, independent of the library's forward/backward path.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "solarcast/network.hpp"
#include "solarcast/rng.hpp"

namespace solarcast::testing {

// Straight-line re-implementation of the affine/relu chain with plain loops.
inline double forward_oracle(const NetworkParams& params,
                             const NetworkConfig& config,
                             const std::vector<double>& input) {
    std::vector<double> x = input;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& layer = params.layers[l];
        std::vector<double> y(layer.units, 0.0);
        for (std::size_t u = 0; u < layer.units; ++u) {
            double z = 0.0;
            for (std::size_t i = 0; i < layer.fan_in; ++i)
                z += layer.weights[u * layer.fan_in + i] * x[i];
            z += layer.biases[u];
            if (config.layers[l].activation == Activation::Relu && z < 0) z = 0;
            y[u] = z;
        }
        x = y;
    }
    return x[0];
}

// Flat view over the parameter tree, weights then biases per layer.
inline std::vector<double*> flatten(NetworkParams& params) {
    std::vector<double*> ptrs;
    for (auto& layer : params.layers) {
        for (auto& w : layer.weights) ptrs.push_back(&w);
        for (auto& b : layer.biases) ptrs.push_back(&b);
    }
    return ptrs;
}

inline std::vector<double> flatten_values(const NetworkParams& params) {
    std::vector<double> values;
    for (const auto& layer : params.layers) {
        values.insert(values.end(), layer.weights.begin(), layer.weights.end());
        values.insert(values.end(), layer.biases.begin(), layer.biases.end());
    }
    return values;
}

// Central finite differences of the single-example loss (ridge included).
inline std::vector<double> fd_gradient(NetworkParams params,
                                       const NetworkConfig& config,
                                       const std::vector<double>& input,
                                       double target, LossKind kind,
                                       double h = 1e-5) {
    auto loss_at = [&](const NetworkParams& p) {
        const double pred = forward_oracle(p, config, input);
        const std::vector<double> preds = {pred};
        const std::vector<double> targets = {target};
        return loss(preds, targets, kind, p, config);
    };
    auto ptrs = flatten(params);
    std::vector<double> grad(ptrs.size());
    for (std::size_t i = 0; i < ptrs.size(); ++i) {
        const double saved = *ptrs[i];
        *ptrs[i] = saved + h;
        const double up = loss_at(params);
        *ptrs[i] = saved - h;
        const double down = loss_at(params);
        *ptrs[i] = saved;
        grad[i] = (up - down) / (2.0 * h);
    }
    return grad;
}

// Box-Muller from the project's deterministic uniform draw.
inline double normal(std::mt19937_64& rng, double mean = 0, double stddev = 1) {
    double u1;
    do {
        u1 = uniform01(rng);
    } while (u1 <= 0);
    const double u2 = uniform01(rng);
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace solarcast::testing
