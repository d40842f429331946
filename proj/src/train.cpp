#include "solarcast/train.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "solarcast/rng.hpp"

namespace solarcast {

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("train: batch_size must be >= 1");
    if (patience < 1) throw ConfigError("train: patience must be >= 1");
    hyper.validate();
}

namespace {

// Data-term loss over an index subset, no ridge. Fixed accumulation order so
// evaluate() reproduces the training-time validation losses bit for bit.
double data_loss(const NetworkParams& params, const NetworkConfig& config,
                 const FeatureMatrix& features,
                 const std::vector<std::size_t>& indices, LossKind kind) {
    double sum = 0;
    for (std::size_t i : indices) {
        const auto trace = forward(params, config, features.rows[i]);
        const double r = features.targets[i] - trace.prediction;
        sum += kind == LossKind::Mse ? r * r : std::abs(r);
    }
    return sum / static_cast<double>(indices.size());
}

}  // namespace

TrainResult train(const FeatureMatrix& features, const DatasetSplit& split,
                  const NetworkConfig& net_config, const TrainConfig& cfg) {
    cfg.validate();
    net_config.validate();
    if (split.train.empty()) throw ConfigError("train: empty training partition");
    if (split.validation.empty())
        throw ConfigError("train: empty validation partition");

    NetworkParams params = init_params(net_config, cfg.seed);
    AdamState state = AdamState::fresh(params);

    TrainResult result;
    result.params = params;
    if (cfg.max_epochs == 0) return result;

    NetworkParams best = params;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_improvement = 0;

    std::vector<std::size_t> order = split.train;
    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        const double lr = decayed_lr(cfg.hyper, epoch);

        std::mt19937_64 shuffle_rng(mix_seed(cfg.seed, epoch));
        order = split.train;
        deterministic_shuffle(order, shuffle_rng);

        double loss_sum = 0;
        std::size_t n_batches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, order.size());
            const std::size_t batch_n = end - start;

            Gradients grads = zeros_like(params);
            double batch_data = 0;
            for (std::size_t k = start; k < end; ++k) {
                const std::size_t i = order[k];
                const auto trace = forward(params, net_config, features.rows[i]);
                const double r = features.targets[i] - trace.prediction;
                batch_data += cfg.loss_kind == LossKind::Mse ? r * r : std::abs(r);
                accumulate(grads, backward(params, trace, features.rows[i],
                                           features.targets[i], cfg.loss_kind,
                                           net_config));
            }
            // Per-example gradients each carry the full ridge term, so the
            // mean is exactly the gradient of (data mean + ridge).
            scale_gradients(grads, 1.0 / static_cast<double>(batch_n));
            const double batch_loss = batch_data / static_cast<double>(batch_n) +
                                      ridge_penalty(params, net_config);
            if (!std::isfinite(batch_loss))
                throw NumericError("train: non-finite loss at epoch " +
                                   std::to_string(epoch));
            loss_sum += batch_loss;
            ++n_batches;

            adam_step(params, grads, state, cfg.hyper, lr);
        }

        EpochRecord record;
        record.train_loss = loss_sum / static_cast<double>(n_batches);
        record.val_loss =
            data_loss(params, net_config, features, split.validation, cfg.loss_kind);
        record.lr = lr;
        if (!std::isfinite(record.val_loss))
            throw NumericError("train: non-finite validation loss at epoch " +
                               std::to_string(epoch));
        result.history.epochs.push_back(record);

        if (record.val_loss <= best_val - 1e-9) {
            best_val = record.val_loss;
            best = params;
            result.history.best_epoch = epoch;
            since_improvement = 0;
        } else {
            ++since_improvement;
            if (since_improvement >= cfg.patience) {
                result.history.stopped_early = true;
                break;
            }
        }
    }

    result.params = std::move(best);
    return result;
}

EvalResult evaluate(const NetworkParams& params, const NetworkConfig& net_config,
                    const FeatureMatrix& features,
                    const std::vector<std::size_t>& indices, LossKind kind) {
    if (indices.empty()) throw EmptyInputError("evaluate: empty index list");
    EvalResult result;
    result.standardized_loss = data_loss(params, net_config, features, indices, kind);
    double abs_sum = 0;
    for (std::size_t i : indices) {
        const auto trace = forward(params, net_config, features.rows[i]);
        const double predicted = features.scaler.invert_target(trace.prediction);
        const double actual = features.scaler.invert_target(features.targets[i]);
        abs_sum += std::abs(predicted - actual);
    }
    result.mae_wpm2 = abs_sum / static_cast<double>(indices.size());
    return result;
}

}  // namespace solarcast
