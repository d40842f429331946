#pragma once

#include <cstdint>
#include <string>

#include "solarcast/dataio.hpp"
#include "solarcast/network.hpp"

namespace solarcast {

inline constexpr int kModelFormatVersion = 1;

struct TrainingFingerprint {
    std::uint64_t seed = 0;
    LossKind loss_kind = LossKind::Mse;
    std::size_t best_epoch = 0;
};

/// Everything needed to reproduce predictions: architecture, fitted scaler,
/// trained parameters, and the run that produced them.
struct ModelArtifact {
    int format_version = kModelFormatVersion;
    NetworkConfig config;
    Scaler scaler;
    NetworkParams params;
    TrainingFingerprint fingerprint;
};

/// JSON text; floats are hexadecimal so round trips are bitwise exact.
std::string serialize_model(const ModelArtifact& artifact);
ModelArtifact deserialize_model(const std::string& text);

void save_model(const ModelArtifact& artifact, const std::string& path);
ModelArtifact load_model(const std::string& path);

}  // namespace solarcast
