#include "solarcast/baselines.hpp"

#include <algorithm>
#include <cmath>

namespace solarcast {

EwmaState ewma_step(const EwmaState& state, std::span<const double> harvested) {
    if (state.alpha < 0 || state.alpha > 1)
        throw ConfigError("ewma: alpha must be in [0, 1]");
    if (state.estimate.size() != harvested.size())
        throw ShapeError("ewma: estimate and harvested differ in length");
    EwmaState next = state;
    for (std::size_t i = 0; i < harvested.size(); ++i)
        next.estimate[i] =
            state.alpha * state.estimate[i] + (1.0 - state.alpha) * harvested[i];
    return next;
}

namespace {

// Mean of a slot column over days [first_day, day).
double history_mean(const SlotMatrix& m, std::size_t day, std::size_t slot,
                    std::size_t history_days) {
    std::size_t first = 0;
    if (history_days > 0 && day > history_days) first = day - history_days;
    double sum = 0;
    for (std::size_t d = first; d < day; ++d) sum += m.at(d, slot);
    return sum / static_cast<double>(day - first);
}

}  // namespace

double gap_factor(const SlotMatrix& matrix, std::size_t day, std::size_t slot,
                  std::size_t window, std::size_t history_days) {
    if (window < 1) throw ConfigError("gap_factor: window must be >= 1");
    if (day < 1 || slot + 1 < window)
        throw InsufficientHistoryError(
            "gap_factor: needs at least one prior day and window completed slots");
    if (slot >= matrix.slots || day >= matrix.days)
        throw ShapeError("gap_factor: (day, slot) outside the matrix");

    // v_j: today's value over the historical mean for slots slot-window+1..slot,
    // p_j = j / window so the newest slot weighs most.
    double weighted = 0;
    double weight_sum = 0;
    for (std::size_t j = 1; j <= window; ++j) {
        const std::size_t s = slot + j - window;
        const double mean = history_mean(matrix, day, s, history_days);
        const double v = mean > 0 ? matrix.at(day, s) / mean : 1.0;
        const double p = static_cast<double>(j) / static_cast<double>(window);
        weighted += v * p;
        weight_sum += p;
    }
    return weighted / weight_sum;
}

double wcma_predict(const SlotMatrix& matrix, std::size_t day, std::size_t slot,
                    double alpha, std::size_t window, std::size_t history_days) {
    if (alpha < 0 || alpha > 1)
        throw ConfigError("wcma: alpha must be in [0, 1]");
    if (day >= matrix.days || slot >= matrix.slots)
        throw ShapeError("wcma: (day, slot) outside the matrix");
    if (slot + 1 >= matrix.slots)
        throw ShapeError("wcma: slot " + std::to_string(slot) +
                         " has no successor to predict");
    const double gap = gap_factor(matrix, day, slot, window, history_days);
    const double mean_next = history_mean(matrix, day, slot + 1, history_days);
    return alpha * matrix.at(day, slot) + (1.0 - alpha) * mean_next * gap;
}

SlotMatrix build_slot_matrix(const std::vector<WeatherRecord>& records,
                             int slot_minutes) {
    if (slot_minutes < 30 || slot_minutes > 60 || 1440 % slot_minutes != 0)
        throw ConfigError(
            "slot_minutes must divide 1440 and lie in [30, 60]");
    if (records.empty()) throw EmptyInputError("build_slot_matrix: no records");

    const std::int64_t slot_seconds = static_cast<std::int64_t>(slot_minutes) * 60;
    const std::size_t slots_per_day = static_cast<std::size_t>(1440 / slot_minutes);

    auto day_of = [](std::int64_t ts) {
        return ts >= 0 ? ts / 86400 : (ts - 86399) / 86400;
    };
    std::int64_t min_day = day_of(records.front().timestamp);
    std::int64_t max_day = min_day;
    for (const auto& r : records) {
        min_day = std::min(min_day, day_of(r.timestamp));
        max_day = std::max(max_day, day_of(r.timestamp));
    }

    SlotMatrix m;
    m.days = static_cast<std::size_t>(max_day - min_day + 1);
    m.slots = slots_per_day;
    m.slot_minutes = slot_minutes;
    m.values.assign(m.days * m.slots, 0.0);
    m.observed.assign(m.days * m.slots, false);

    std::vector<double> sums(m.days * m.slots, 0.0);
    std::vector<std::size_t> counts(m.days * m.slots, 0);
    for (const auto& r : records) {
        const std::size_t day =
            static_cast<std::size_t>(day_of(r.timestamp) - min_day);
        std::int64_t sod = r.timestamp % 86400;
        if (sod < 0) sod += 86400;
        const std::size_t slot = static_cast<std::size_t>(sod / slot_seconds);
        sums[day * m.slots + slot] += r.radiation;
        counts[day * m.slots + slot] += 1;
    }
    for (std::size_t d = 0; d < m.days; ++d) {
        for (std::size_t s = 0; s < m.slots; ++s) {
            const std::size_t i = d * m.slots + s;
            if (counts[i] > 0) {
                m.values[i] = sums[i] / static_cast<double>(counts[i]);
                m.observed[i] = true;
            } else {
                m.values[i] = s > 0 ? m.values[i - 1] : 0.0;
            }
        }
    }
    return m;
}

}  // namespace solarcast
