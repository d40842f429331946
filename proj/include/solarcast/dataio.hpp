#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "solarcast/errors.hpp"

namespace solarcast {

/// One timestamped observation row from the weather log.
struct WeatherRecord {
    std::int64_t timestamp = 0;  // seconds since epoch, UTC
    double radiation = 0;        // W/m^2, >= 0
    double temperature = 0;      // dataset-native unit
    double pressure = 0;         // dataset-native unit
    double humidity = 0;         // percent, [0, 100]
    double wind_direction = 0;   // degrees, [0, 360)
    double wind_speed = 0;       // m/s
};

inline constexpr std::size_t kFeatureDim = 8;

// [temperature, humidity, pressure, wind_speed,
//  sin(wind_dir), cos(wind_dir), sin(time_of_day), cos(time_of_day)]
using FeatureVector = std::array<double, kFeatureDim>;

extern const std::array<std::string, kFeatureDim> kFeatureNames;

/// Per-column z-score transform fitted on the training partition.
struct Scaler {
    std::array<double, kFeatureDim> mean{};
    std::array<double, kFeatureDim> std{};
    double target_mean = 0;
    double target_std = 1;

    FeatureVector apply(const FeatureVector& row) const;
    double apply_target(double y) const { return (y - target_mean) / target_std; }
    double invert_target(double z) const { return z * target_std + target_mean; }
};

/// Disjoint row-index lists covering 0..n-1 exactly once.
struct DatasetSplit {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
};

/// Encoded design matrix: standardized features, standardized targets,
/// and the scaler that produced them.
struct FeatureMatrix {
    std::vector<FeatureVector> rows;
    std::vector<double> targets;
    std::vector<std::int64_t> timestamps;
    Scaler scaler;
};

// Canonical field name -> CSV header name.
using Schema = std::map<std::string, std::string>;

Schema default_schema();

/// Reads key=value lines; keys are the canonical field names.
Schema load_schema(const std::string& path);

std::vector<WeatherRecord> parse_csv(std::istream& in,
                                     const Schema& schema = default_schema());
std::vector<WeatherRecord> parse_csv_file(const std::string& path,
                                          const Schema& schema = default_schema());

/// Full-precision re-emit; parse(write(records)) == records.
void write_csv(std::ostream& out, const std::vector<WeatherRecord>& records);

FeatureVector encode_features(const WeatherRecord& record);

/// Population mean/std per feature column and for the target.
/// Throws DataError naming the column if any column is constant.
Scaler fit_scaler(const std::vector<FeatureVector>& rows,
                  const std::vector<double>& targets);
Scaler fit_scaler(const std::vector<FeatureVector>& rows,
                  const std::vector<double>& targets,
                  const std::vector<std::size_t>& indices);

/// Seeded shuffle of 0..n-1 sliced at largest-remainder boundaries.
/// shuffle=false keeps file order (chronological splits).
DatasetSplit split_dataset(std::size_t n_rows, std::uint64_t seed,
                           const std::array<double, 3>& ratios,
                           bool shuffle = true);

struct MonthKey {
    int year = 0;
    unsigned month = 0;  // 1..12
    auto operator<=>(const MonthKey&) const = default;
};

struct MonthlyStats {
    double mean_radiation = 0;
    double mean_temperature = 0;
    double mean_pressure = 0;
    std::size_t count = 0;
};

/// Arithmetic means of the raw column values per calendar month (UTC).
std::map<MonthKey, MonthlyStats> monthly_stats(
    const std::vector<WeatherRecord>& records);

}  // namespace solarcast
