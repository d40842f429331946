#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "solarcast/errors.hpp"

namespace solarcast {

enum class Activation { Relu, Linear };
enum class LossKind { Mse, Mae };

LossKind loss_kind_from_string(const std::string& name);
std::string to_string(LossKind kind);

struct LayerSpec {
    std::size_t units = 1;
    Activation activation = Activation::Relu;
    bool regularized = false;
};

struct NetworkConfig {
    std::size_t input_dim = 0;
    std::vector<LayerSpec> layers;
    double lambda = 0.0;  // ridge coefficient on regularized layers

    void validate() const;  // throws ConfigError
};

/// The reference stack: 8 inputs, hidden layers 10, 20x5, 15x3 (relu),
/// linear 1-unit head, ridge 0.009 on the last two layers. 2,801 parameters.
NetworkConfig default_network_config();

/// Builds a config from hidden+output unit counts: relu everywhere but the
/// final layer, ridge on the last two layers.
NetworkConfig make_network_config(std::size_t input_dim,
                                  const std::vector<std::size_t>& units,
                                  double lambda);

struct LayerParams {
    std::size_t units = 0;
    std::size_t fan_in = 0;
    std::vector<double> weights;  // units x fan_in, row-major
    std::vector<double> biases;   // units
};

struct NetworkParams {
    std::vector<LayerParams> layers;
    std::size_t scalar_count() const;
};

// Same shape tree as the parameters it differentiates.
using Gradients = NetworkParams;

double relu(double x);

std::size_t param_count(const NetworkConfig& config);
std::vector<std::size_t> per_layer_param_counts(const NetworkConfig& config);

/// Glorot-uniform weights, zero biases; draw order is layer by layer,
/// row-major, so results are reproducible per seed.
NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed);

/// Everything forward computes that backward needs again.
struct ForwardTrace {
    double prediction = 0;  // standardized units
    std::vector<std::vector<double>> activations;  // post-activation per layer
};

ForwardTrace forward(const NetworkParams& params, const NetworkConfig& config,
                     std::span<const double> input);

/// lambda * sum(theta^2) over weights and biases of regularized layers.
double ridge_penalty(const NetworkParams& params, const NetworkConfig& config);

/// Data term (1/N)*sum((y - yhat)^2) or (1/N)*sum(|y - yhat|),
/// plus the ridge penalty.
double loss(std::span<const double> predictions, std::span<const double> targets,
            LossKind kind, const NetworkParams& params,
            const NetworkConfig& config);

Gradients zeros_like(const NetworkParams& params);
void accumulate(Gradients& acc, const Gradients& g);
void scale_gradients(Gradients& g, double factor);

/// Exact analytic gradient of the single-example loss (ridge term included).
/// MAE uses subgradient 0 at a zero residual.
Gradients backward(const NetworkParams& params, const ForwardTrace& trace,
                   std::span<const double> input, double target, LossKind kind,
                   const NetworkConfig& config);

}  // namespace solarcast
