#pragma once

#include <cstdint>
#include <vector>

#include "solarcast/dataio.hpp"
#include "solarcast/network.hpp"
#include "solarcast/optim.hpp"

namespace solarcast {

struct TrainConfig {
    std::size_t batch_size = 512;
    std::size_t max_epochs = 152;
    std::size_t patience = 10;
    LossKind loss_kind = LossKind::Mse;
    std::uint64_t seed = 0;
    AdamHyper hyper;

    void validate() const;
};

struct EpochRecord {
    double train_loss = 0;  // mean of per-batch losses, ridge included
    double val_loss = 0;    // full validation pass, data term only
    double lr = 0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0;  // earliest minimal val_loss
    bool stopped_early = false;
};

struct TrainResult {
    NetworkParams params;  // snapshot from best_epoch
    TrainHistory history;
};

/// Mini-batch Adam training with early stopping and best-weight restoration.
/// Rows are reshuffled each epoch with a seed derived from (seed, epoch).
TrainResult train(const FeatureMatrix& features, const DatasetSplit& split,
                  const NetworkConfig& net_config, const TrainConfig& cfg);

struct EvalResult {
    double standardized_loss = 0;  // data term only, standardized units
    double mae_wpm2 = 0;           // mean absolute error in W/m^2
};

EvalResult evaluate(const NetworkParams& params, const NetworkConfig& net_config,
                    const FeatureMatrix& features,
                    const std::vector<std::size_t>& indices, LossKind kind);

}  // namespace solarcast
