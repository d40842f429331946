#pragma once

#include <span>
#include <vector>

#include "solarcast/dataio.hpp"

namespace solarcast {

/// Day x time-slot grid of mean observed radiation.
struct SlotMatrix {
    std::size_t days = 0;
    std::size_t slots = 0;
    int slot_minutes = 60;
    std::vector<double> values;    // days x slots, row-major, W/m^2
    std::vector<bool> observed;    // false where filled from a neighbor slot

    double at(std::size_t day, std::size_t slot) const {
        return values[day * slots + slot];
    }
    bool was_observed(std::size_t day, std::size_t slot) const {
        return observed[day * slots + slot];
    }
};

struct EwmaState {
    std::vector<double> estimate;  // per-slot, W/m^2
    double alpha = 0.5;            // weighting factor in [0, 1]
};

/// Per slot: E' = alpha * E + (1 - alpha) * H.
EwmaState ewma_step(const EwmaState& state, std::span<const double> harvested);

/// Recency-weighted ratio of today's last `window` slots to their historical
/// per-slot means. 1 means a typical sky; a zero historical mean contributes
/// a neutral ratio. history_days = 0 uses all prior days.
double gap_factor(const SlotMatrix& matrix, std::size_t day, std::size_t slot,
                  std::size_t window, std::size_t history_days = 0);

/// alpha * observed(day, slot)
///   + (1 - alpha) * mean-over-prior-days(slot + 1) * gap_factor.
double wcma_predict(const SlotMatrix& matrix, std::size_t day, std::size_t slot,
                    double alpha, std::size_t window,
                    std::size_t history_days = 0);

/// Buckets readings into fixed intraday slots and averages per (day, slot).
/// Empty slots take the previous slot's value within the day (0 for the
/// first) and are marked unobserved.
SlotMatrix build_slot_matrix(const std::vector<WeatherRecord>& records,
                             int slot_minutes);

}  // namespace solarcast
