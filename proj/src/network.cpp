#include "solarcast/network.hpp"

#include <cmath>
#include <random>

#include "solarcast/rng.hpp"

namespace solarcast {

LossKind loss_kind_from_string(const std::string& name) {
    if (name == "mse") return LossKind::Mse;
    if (name == "mae") return LossKind::Mae;
    throw ConfigError("unknown loss kind '" + name + "' (expected mse or mae)");
}

std::string to_string(LossKind kind) {
    return kind == LossKind::Mse ? "mse" : "mae";
}

void NetworkConfig::validate() const {
    if (input_dim < 1) throw ConfigError("network: input_dim must be >= 1");
    if (layers.empty()) throw ConfigError("network: need at least one layer");
    for (const auto& layer : layers)
        if (layer.units < 1) throw ConfigError("network: layer units must be >= 1");
    const auto& last = layers.back();
    if (last.units != 1 || last.activation != Activation::Linear)
        throw ConfigError("network: final layer must be 1 linear unit");
    if (lambda < 0) throw ConfigError("network: lambda must be >= 0");
}

NetworkConfig make_network_config(std::size_t input_dim,
                                  const std::vector<std::size_t>& units,
                                  double lambda) {
    NetworkConfig config;
    config.input_dim = input_dim;
    config.lambda = lambda;
    const std::size_t n = units.size();
    for (std::size_t i = 0; i < n; ++i) {
        LayerSpec spec;
        spec.units = units[i];
        spec.activation = (i + 1 == n) ? Activation::Linear : Activation::Relu;
        spec.regularized = (i + 2 >= n);  // last two layers
        config.layers.push_back(spec);
    }
    config.validate();
    return config;
}

NetworkConfig default_network_config() {
    return make_network_config(8, {10, 20, 20, 20, 20, 20, 15, 15, 15, 1}, 0.009);
}

std::size_t NetworkParams::scalar_count() const {
    std::size_t n = 0;
    for (const auto& layer : layers) n += layer.weights.size() + layer.biases.size();
    return n;
}

double relu(double x) { return x > 0 ? x : 0.0; }

std::vector<std::size_t> per_layer_param_counts(const NetworkConfig& config) {
    config.validate();
    std::vector<std::size_t> counts;
    std::size_t fan_in = config.input_dim;
    for (const auto& layer : config.layers) {
        counts.push_back(layer.units * (fan_in + 1));
        fan_in = layer.units;
    }
    return counts;
}

std::size_t param_count(const NetworkConfig& config) {
    std::size_t total = 0;
    for (std::size_t c : per_layer_param_counts(config)) total += c;
    return total;
}

NetworkParams init_params(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    std::mt19937_64 rng(seed);
    NetworkParams params;
    std::size_t fan_in = config.input_dim;
    for (const auto& spec : config.layers) {
        LayerParams layer;
        layer.units = spec.units;
        layer.fan_in = fan_in;
        layer.weights.resize(spec.units * fan_in);
        layer.biases.assign(spec.units, 0.0);
        const double bound =
            std::sqrt(6.0 / static_cast<double>(fan_in + spec.units));
        for (double& w : layer.weights) w = uniform(rng, -bound, bound);
        params.layers.push_back(std::move(layer));
        fan_in = spec.units;
    }
    return params;
}

ForwardTrace forward(const NetworkParams& params, const NetworkConfig& config,
                     std::span<const double> input) {
    if (input.size() != config.input_dim)
        throw ShapeError("forward: input length does not match input_dim");
    for (double x : input)
        if (!std::isfinite(x)) throw NumericError("forward: non-finite input");
    if (params.layers.size() != config.layers.size())
        throw ShapeError("forward: params/config layer count mismatch");

    ForwardTrace trace;
    trace.activations.reserve(params.layers.size());
    std::vector<double> current(input.begin(), input.end());
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        const auto& layer = params.layers[l];
        if (layer.fan_in != current.size())
            throw ShapeError("forward: layer fan_in does not chain");
        std::vector<double> next(layer.units);
        for (std::size_t u = 0; u < layer.units; ++u) {
            double z = layer.biases[u];
            const double* row = layer.weights.data() + u * layer.fan_in;
            for (std::size_t i = 0; i < layer.fan_in; ++i) z += row[i] * current[i];
            next[u] = config.layers[l].activation == Activation::Relu ? relu(z) : z;
        }
        trace.activations.push_back(next);
        current = std::move(next);
    }
    trace.prediction = current[0];
    return trace;
}

double ridge_penalty(const NetworkParams& params, const NetworkConfig& config) {
    double sum = 0;
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        if (!config.layers[l].regularized) continue;
        for (double w : params.layers[l].weights) sum += w * w;
        for (double b : params.layers[l].biases) sum += b * b;
    }
    return config.lambda * sum;
}

double loss(std::span<const double> predictions, std::span<const double> targets,
            LossKind kind, const NetworkParams& params,
            const NetworkConfig& config) {
    if (predictions.size() != targets.size())
        throw ShapeError("loss: predictions and targets differ in length");
    if (predictions.empty()) throw EmptyInputError("loss: empty vectors");
    double sum = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double r = targets[i] - predictions[i];
        sum += kind == LossKind::Mse ? r * r : std::abs(r);
    }
    return sum / static_cast<double>(predictions.size()) +
           ridge_penalty(params, config);
}

Gradients zeros_like(const NetworkParams& params) {
    Gradients g;
    for (const auto& layer : params.layers) {
        LayerParams zero;
        zero.units = layer.units;
        zero.fan_in = layer.fan_in;
        zero.weights.assign(layer.weights.size(), 0.0);
        zero.biases.assign(layer.biases.size(), 0.0);
        g.layers.push_back(std::move(zero));
    }
    return g;
}

void accumulate(Gradients& acc, const Gradients& g) {
    if (acc.layers.size() != g.layers.size())
        throw ShapeError("accumulate: gradient shape mismatch");
    for (std::size_t l = 0; l < acc.layers.size(); ++l) {
        auto& a = acc.layers[l];
        const auto& b = g.layers[l];
        if (a.weights.size() != b.weights.size() || a.biases.size() != b.biases.size())
            throw ShapeError("accumulate: gradient shape mismatch");
        for (std::size_t i = 0; i < a.weights.size(); ++i) a.weights[i] += b.weights[i];
        for (std::size_t i = 0; i < a.biases.size(); ++i) a.biases[i] += b.biases[i];
    }
}

void scale_gradients(Gradients& g, double factor) {
    for (auto& layer : g.layers) {
        for (double& w : layer.weights) w *= factor;
        for (double& b : layer.biases) b *= factor;
    }
}

Gradients backward(const NetworkParams& params, const ForwardTrace& trace,
                   std::span<const double> input, double target, LossKind kind,
                   const NetworkConfig& config) {
    const std::size_t n_layers = params.layers.size();
    if (trace.activations.size() != n_layers)
        throw ShapeError("backward: trace does not match params");

    Gradients grads = zeros_like(params);

    const double residual = trace.prediction - target;
    double d_output;
    if (kind == LossKind::Mse) {
        d_output = 2.0 * residual;
    } else {
        d_output = residual > 0 ? 1.0 : (residual < 0 ? -1.0 : 0.0);
    }

    // delta holds dL/d(post-activation of layer l).
    std::vector<double> delta = {d_output};
    for (std::size_t l = n_layers; l-- > 0;) {
        const auto& layer = params.layers[l];
        const auto& post = trace.activations[l];
        // dL/dz: relu gate on the post-activation (post > 0 iff pre > 0).
        std::vector<double> dz(layer.units);
        for (std::size_t u = 0; u < layer.units; ++u) {
            const bool gated = config.layers[l].activation == Activation::Relu &&
                               post[u] <= 0;
            dz[u] = gated ? 0.0 : delta[u];
        }
        const std::vector<double> below_vec =
            l == 0 ? std::vector<double>(input.begin(), input.end())
                   : trace.activations[l - 1];
        auto& g = grads.layers[l];
        for (std::size_t u = 0; u < layer.units; ++u) {
            g.biases[u] = dz[u];
            double* grow = g.weights.data() + u * layer.fan_in;
            for (std::size_t i = 0; i < layer.fan_in; ++i)
                grow[i] = dz[u] * below_vec[i];
        }
        if (l > 0) {
            std::vector<double> next_delta(layer.fan_in, 0.0);
            for (std::size_t u = 0; u < layer.units; ++u) {
                const double* row = layer.weights.data() + u * layer.fan_in;
                for (std::size_t i = 0; i < layer.fan_in; ++i)
                    next_delta[i] += dz[u] * row[i];
            }
            delta = std::move(next_delta);
        }
    }

    // Ridge term: d(lambda * theta^2)/dtheta = 2 * lambda * theta.
    for (std::size_t l = 0; l < n_layers; ++l) {
        if (!config.layers[l].regularized) continue;
        auto& g = grads.layers[l];
        const auto& p = params.layers[l];
        for (std::size_t i = 0; i < g.weights.size(); ++i)
            g.weights[i] += 2.0 * config.lambda * p.weights[i];
        for (std::size_t i = 0; i < g.biases.size(); ++i)
            g.biases[i] += 2.0 * config.lambda * p.biases[i];
    }
    return grads;
}

}  // namespace solarcast
