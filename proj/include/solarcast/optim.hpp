#pragma once

#include <cstdint>

#include "solarcast/network.hpp"

namespace solarcast {

struct AdamHyper {
    double alpha0 = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    double decay = 0.01;  // per-epoch learning-rate decay

    void validate() const;
};

struct AdamState {
    Gradients m;  // first-moment tree, shaped like the parameters
    Gradients v;  // second-moment tree
    std::uint64_t t = 0;

    static AdamState fresh(const NetworkParams& params);
};

/// alpha0 / (1 + decay * epoch); nonincreasing in epoch.
double decayed_lr(const AdamHyper& hyper, std::uint64_t epoch);

/// One Adam update with bias correction: m and v are updated in place,
/// t advances, and params move by -lr * mhat / (sqrt(vhat) + eps).
void adam_step(NetworkParams& params, const Gradients& grads, AdamState& state,
               const AdamHyper& hyper, double lr);

}  // namespace solarcast
