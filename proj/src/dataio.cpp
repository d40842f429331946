#include "solarcast/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <numeric>
#include <ostream>
#include <sstream>

#include "solarcast/rng.hpp"

namespace solarcast {

const std::array<std::string, kFeatureDim> kFeatureNames = {
    "temperature", "humidity",     "pressure", "wind_speed",
    "wind_dir_sin", "wind_dir_cos", "time_sin", "time_cos"};

namespace {

const std::array<std::string, 7> kCanonicalFields = {
    "timestamp", "radiation", "temperature", "pressure",
    "humidity",  "wind_direction", "wind_speed"};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

double parse_double(const std::string& cell, std::size_t line_no,
                    const std::string& column) {
    double value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || cell.empty()) {
        throw RowError("line " + std::to_string(line_no) + ", column '" +
                       column + "': cannot parse '" + cell + "' as a number");
    }
    return value;
}

void check_invariants(const WeatherRecord& r, std::size_t line_no) {
    auto fail = [&](const std::string& what) {
        throw RowError("line " + std::to_string(line_no) + ": " + what);
    };
    if (r.radiation < 0) fail("radiation must be >= 0");
    if (r.humidity < 0 || r.humidity > 100) fail("humidity must be in [0, 100]");
    if (r.wind_direction < 0 || r.wind_direction >= 360)
        fail("wind_direction must be in [0, 360)");
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

Schema default_schema() {
    return {{"timestamp", "UNIXTime"},
            {"radiation", "Radiation"},
            {"temperature", "Temperature"},
            {"pressure", "Pressure"},
            {"humidity", "Humidity"},
            {"wind_direction", "WindDirection(Degrees)"},
            {"wind_speed", "Speed"}};
}

Schema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open schema file '" + path + "'");
    Schema schema = default_schema();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SchemaError("schema file '" + path + "' line " +
                              std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (std::find(kCanonicalFields.begin(), kCanonicalFields.end(), key) ==
            kCanonicalFields.end())
            throw SchemaError("schema file '" + path + "': unknown field '" +
                              key + "'");
        schema[key] = value;
    }
    return schema;
}

std::vector<WeatherRecord> parse_csv(std::istream& in, const Schema& schema) {
    std::string header;
    if (!std::getline(in, header))
        throw EmptyInputError("empty input: no header row");

    const auto names = split_line(header);
    std::map<std::string, std::size_t> column_of;
    for (const auto& field : kCanonicalFields) {
        const std::string& wanted = schema.at(field);
        auto it = std::find(names.begin(), names.end(), wanted);
        if (it == names.end())
            throw SchemaError("missing required column '" + wanted + "' (field " +
                              field + ")");
        column_of[field] = static_cast<std::size_t>(it - names.begin());
    }

    std::vector<WeatherRecord> records;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_line(line);
        auto cell = [&](const std::string& field) -> const std::string& {
            std::size_t idx = column_of.at(field);
            if (idx >= cells.size())
                throw RowError("line " + std::to_string(line_no) +
                               ": too few cells");
            return cells[idx];
        };
        WeatherRecord r;
        r.timestamp = static_cast<std::int64_t>(
            std::llround(parse_double(cell("timestamp"), line_no, "timestamp")));
        r.radiation = parse_double(cell("radiation"), line_no, "radiation");
        r.temperature = parse_double(cell("temperature"), line_no, "temperature");
        r.pressure = parse_double(cell("pressure"), line_no, "pressure");
        r.humidity = parse_double(cell("humidity"), line_no, "humidity");
        r.wind_direction =
            parse_double(cell("wind_direction"), line_no, "wind_direction");
        r.wind_speed = parse_double(cell("wind_speed"), line_no, "wind_speed");
        check_invariants(r, line_no);
        records.push_back(r);
    }
    if (records.empty()) throw EmptyInputError("empty input: no data rows");
    return records;
}

std::vector<WeatherRecord> parse_csv_file(const std::string& path,
                                          const Schema& schema) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file '" + path + "'");
    return parse_csv(in, schema);
}

void write_csv(std::ostream& out, const std::vector<WeatherRecord>& records) {
    const Schema schema = default_schema();
    out << schema.at("timestamp") << ',' << schema.at("radiation") << ','
        << schema.at("temperature") << ',' << schema.at("pressure") << ','
        << schema.at("humidity") << ',' << schema.at("wind_direction") << ','
        << schema.at("wind_speed") << '\n';
    for (const auto& r : records) {
        out << r.timestamp << ',' << format_double(r.radiation) << ','
            << format_double(r.temperature) << ',' << format_double(r.pressure)
            << ',' << format_double(r.humidity) << ','
            << format_double(r.wind_direction) << ','
            << format_double(r.wind_speed) << '\n';
    }
}

FeatureVector encode_features(const WeatherRecord& record) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double wind_rad = record.wind_direction * std::numbers::pi / 180.0;
    std::int64_t sod = record.timestamp % 86400;
    if (sod < 0) sod += 86400;
    const double tod = static_cast<double>(sod) / 86400.0 * two_pi;
    return {record.temperature, record.humidity,  record.pressure,
            record.wind_speed,  std::sin(wind_rad), std::cos(wind_rad),
            std::sin(tod),      std::cos(tod)};
}

FeatureVector Scaler::apply(const FeatureVector& row) const {
    FeatureVector out;
    for (std::size_t i = 0; i < kFeatureDim; ++i)
        out[i] = (row[i] - mean[i]) / std[i];
    return out;
}

Scaler fit_scaler(const std::vector<FeatureVector>& rows,
                  const std::vector<double>& targets) {
    std::vector<std::size_t> all(rows.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return fit_scaler(rows, targets, all);
}

Scaler fit_scaler(const std::vector<FeatureVector>& rows,
                  const std::vector<double>& targets,
                  const std::vector<std::size_t>& indices) {
    if (rows.size() != targets.size())
        throw ShapeError("fit_scaler: rows and targets differ in length");
    if (indices.size() < 2)
        throw DataError("fit_scaler: need at least 2 rows");

    const double n = static_cast<double>(indices.size());
    Scaler s;
    for (std::size_t c = 0; c < kFeatureDim; ++c) {
        double sum = 0;
        for (std::size_t i : indices) sum += rows[i][c];
        const double mu = sum / n;
        double sq = 0;
        for (std::size_t i : indices) {
            const double d = rows[i][c] - mu;
            sq += d * d;
        }
        const double sigma = std::sqrt(sq / n);
        if (sigma <= 0)
            throw DataError("fit_scaler: zero variance in column '" +
                            kFeatureNames[c] + "'");
        s.mean[c] = mu;
        s.std[c] = sigma;
    }
    double sum = 0;
    for (std::size_t i : indices) sum += targets[i];
    s.target_mean = sum / n;
    double sq = 0;
    for (std::size_t i : indices) {
        const double d = targets[i] - s.target_mean;
        sq += d * d;
    }
    s.target_std = std::sqrt(sq / n);
    if (s.target_std <= 0)
        throw DataError("fit_scaler: zero variance in column 'target'");
    return s;
}

DatasetSplit split_dataset(std::size_t n_rows, std::uint64_t seed,
                           const std::array<double, 3>& ratios, bool shuffle) {
    if (n_rows < 1) throw ConfigError("split_dataset: need at least 1 row");
    double sum = 0;
    for (double r : ratios) {
        if (r < 0) throw ConfigError("split_dataset: ratios must be nonnegative");
        sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ConfigError("split_dataset: ratios must sum to 1");

    std::vector<std::size_t> order(n_rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (shuffle) {
        std::mt19937_64 rng(seed);
        deterministic_shuffle(order, rng);
    }

    // Largest-remainder sizes: floor each, hand leftovers to the largest
    // fractional parts (earliest wins ties).
    std::array<std::size_t, 3> sizes{};
    std::array<double, 3> frac{};
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const double exact = ratios[i] * static_cast<double>(n_rows);
        sizes[i] = static_cast<std::size_t>(std::floor(exact));
        frac[i] = exact - std::floor(exact);
        assigned += sizes[i];
    }
    std::array<std::size_t, 3> idx = {0, 1, 2};
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < n_rows; ++k, ++assigned) sizes[idx[k % 3]]++;

    DatasetSplit split;
    auto it = order.begin();
    split.train.assign(it, it + static_cast<std::ptrdiff_t>(sizes[0]));
    it += static_cast<std::ptrdiff_t>(sizes[0]);
    split.validation.assign(it, it + static_cast<std::ptrdiff_t>(sizes[1]));
    it += static_cast<std::ptrdiff_t>(sizes[1]);
    split.test.assign(it, it + static_cast<std::ptrdiff_t>(sizes[2]));
    return split;
}

std::map<MonthKey, MonthlyStats> monthly_stats(
    const std::vector<WeatherRecord>& records) {
    if (records.empty()) throw EmptyInputError("monthly_stats: no records");
    using namespace std::chrono;
    std::map<MonthKey, MonthlyStats> stats;
    for (const auto& r : records) {
        const sys_seconds tp{seconds{r.timestamp}};
        const year_month_day ymd{floor<days>(tp)};
        MonthKey key{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month())};
        auto& s = stats[key];
        s.mean_radiation += r.radiation;
        s.mean_temperature += r.temperature;
        s.mean_pressure += r.pressure;
        s.count += 1;
    }
    for (auto& [key, s] : stats) {
        const double n = static_cast<double>(s.count);
        s.mean_radiation /= n;
        s.mean_temperature /= n;
        s.mean_pressure /= n;
    }
    return stats;
}

}  // namespace solarcast
