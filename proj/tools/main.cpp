#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "solarcast/baselines.hpp"
#include "solarcast/dataio.hpp"
#include "solarcast/model_io.hpp"
#include "solarcast/train.hpp"

namespace fs = std::filesystem;
using namespace solarcast;

namespace {

constexpr std::array<double, 3> kDefaultRatios = {0.70, 0.15, 0.15};

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct CommonArgs {
    std::string data;
    std::string schema_path;
    std::uint64_t seed = 42;
    std::string out_dir = ".";
};

void add_common(CLI::App* cmd, CommonArgs& args, bool data_required = true) {
    auto* data = cmd->add_option("--data", args.data, "Input weather CSV");
    if (data_required) data->required();
    cmd->add_option("--schema", args.schema_path,
                    "key=value file remapping CSV column names");
    cmd->add_option("--seed", args.seed, "Random seed");
    cmd->add_option("--out", args.out_dir, "Output directory");
}

Schema resolve_schema(const CommonArgs& args) {
    return args.schema_path.empty() ? default_schema()
                                    : load_schema(args.schema_path);
}

struct Dataset {
    std::vector<WeatherRecord> records;
    std::vector<FeatureVector> raw_rows;
    std::vector<double> raw_targets;
};

Dataset load_dataset(const CommonArgs& args) {
    Dataset ds;
    ds.records = parse_csv_file(args.data, resolve_schema(args));
    ds.raw_rows.reserve(ds.records.size());
    ds.raw_targets.reserve(ds.records.size());
    for (const auto& r : ds.records) {
        ds.raw_rows.push_back(encode_features(r));
        ds.raw_targets.push_back(r.radiation);
    }
    return ds;
}

FeatureMatrix standardize(const Dataset& ds, const Scaler& scaler) {
    FeatureMatrix m;
    m.scaler = scaler;
    m.rows.reserve(ds.raw_rows.size());
    m.targets.reserve(ds.raw_targets.size());
    for (std::size_t i = 0; i < ds.raw_rows.size(); ++i) {
        m.rows.push_back(scaler.apply(ds.raw_rows[i]));
        m.targets.push_back(scaler.apply_target(ds.raw_targets[i]));
        m.timestamps.push_back(ds.records[i].timestamp);
    }
    return m;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    return out;
}

void write_history_csv(const fs::path& path, const TrainHistory& history) {
    auto out = open_output(path);
    out << "epoch,train_loss,val_loss,lr\n";
    for (std::size_t e = 0; e < history.epochs.size(); ++e) {
        const auto& rec = history.epochs[e];
        out << e << ',' << format_double(rec.train_loss) << ','
            << format_double(rec.val_loss) << ',' << format_double(rec.lr)
            << '\n';
    }
}

void write_predictions_csv(const fs::path& path, const NetworkParams& params,
                           const NetworkConfig& config, const FeatureMatrix& m,
                           const std::vector<std::size_t>& indices) {
    auto out = open_output(path);
    out << "timestamp,actual_wpm2,predicted_wpm2\n";
    for (std::size_t i : indices) {
        const auto trace = forward(params, config, m.rows[i]);
        out << m.timestamps[i] << ','
            << format_double(m.scaler.invert_target(m.targets[i])) << ','
            << format_double(m.scaler.invert_target(trace.prediction)) << '\n';
    }
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
    CommonArgs common;
    std::string loss = "mse";
    TrainConfig cfg;
    double lambda = 0.009;
    std::vector<std::size_t> layer_units = {10, 20, 20, 20, 20, 20, 15, 15, 15, 1};
    bool chronological = false;
};

int run_train(const TrainArgs& args) {
    const Dataset ds = load_dataset(args.common);
    const DatasetSplit split = split_dataset(ds.records.size(), args.common.seed,
                                             kDefaultRatios, !args.chronological);
    const Scaler scaler = fit_scaler(ds.raw_rows, ds.raw_targets, split.train);
    const FeatureMatrix features = standardize(ds, scaler);

    const NetworkConfig net =
        make_network_config(kFeatureDim, args.layer_units, args.lambda);

    TrainConfig cfg = args.cfg;
    cfg.loss_kind = loss_kind_from_string(args.loss);
    cfg.seed = args.common.seed;
    const TrainResult result = train(features, split, net, cfg);

    fs::create_directories(args.common.out_dir);
    const fs::path out_dir(args.common.out_dir);

    ModelArtifact artifact;
    artifact.config = net;
    artifact.scaler = scaler;
    artifact.params = result.params;
    artifact.fingerprint = {cfg.seed, cfg.loss_kind, result.history.best_epoch};
    save_model(artifact, (out_dir / "model.json").string());

    write_history_csv(out_dir / "history.csv", result.history);

    auto summary = open_output(out_dir / "summary.txt");
    summary << "epochs_run " << result.history.epochs.size() << '\n'
            << "best_epoch " << result.history.best_epoch << '\n'
            << "stopped_early "
            << (result.history.stopped_early ? "true" : "false") << '\n';
    if (!result.history.epochs.empty()) {
        const auto& last = result.history.epochs.back();
        summary << "final_train_loss " << format_double(last.train_loss) << '\n'
                << "final_val_loss " << format_double(last.val_loss) << '\n';
    }
    const char* names[3] = {"train", "validation", "test"};
    const std::vector<std::size_t>* parts[3] = {&split.train, &split.validation,
                                                &split.test};
    for (int p = 0; p < 3; ++p) {
        if (parts[p]->empty()) continue;
        const EvalResult ev =
            evaluate(result.params, net, features, *parts[p], cfg.loss_kind);
        summary << names[p] << "_eval_loss "
                << format_double(ev.standardized_loss) << '\n'
                << names[p] << "_eval_mae_wpm2 " << format_double(ev.mae_wpm2)
                << '\n';
    }

    std::cout << "wrote " << (out_dir / "model.json").string() << ", "
              << (out_dir / "history.csv").string() << ", "
              << (out_dir / "summary.txt").string() << '\n';
    return 0;
}

// ---- eval / predict --------------------------------------------------------

struct EvalArgs {
    CommonArgs common;
    std::string model_path;
    std::string partition = "test";
    std::string predictions_path;
    bool chronological = false;
};

int run_eval(const EvalArgs& args) {
    const ModelArtifact artifact = load_model(args.model_path);
    const Dataset ds = load_dataset(args.common);
    if (artifact.config.input_dim != kFeatureDim)
        throw DataError("model expects input_dim " +
                        std::to_string(artifact.config.input_dim) +
                        ", data encodes " + std::to_string(kFeatureDim));
    const FeatureMatrix features = standardize(ds, artifact.scaler);

    std::vector<std::size_t> indices;
    if (args.partition == "all") {
        indices = all_indices(ds.records.size());
    } else {
        const DatasetSplit split =
            split_dataset(ds.records.size(), artifact.fingerprint.seed,
                          kDefaultRatios, !args.chronological);
        if (args.partition == "train") indices = split.train;
        else if (args.partition == "validation") indices = split.validation;
        else if (args.partition == "test") indices = split.test;
        else throw ConfigError("unknown partition '" + args.partition + "'");
    }

    const EvalResult ev = evaluate(artifact.params, artifact.config, features,
                                   indices, artifact.fingerprint.loss_kind);
    std::cout << "partition " << args.partition << '\n'
              << "loss_kind " << to_string(artifact.fingerprint.loss_kind) << '\n'
              << "standardized_loss " << format_double(ev.standardized_loss)
              << '\n'
              << "mae_wpm2 " << format_double(ev.mae_wpm2) << '\n';

    if (!args.predictions_path.empty())
        write_predictions_csv(args.predictions_path, artifact.params,
                              artifact.config, features, indices);
    return 0;
}

struct PredictArgs {
    CommonArgs common;
    std::string model_path;
    std::string out_file;
};

int run_predict(const PredictArgs& args) {
    const ModelArtifact artifact = load_model(args.model_path);
    const Dataset ds = load_dataset(args.common);
    const FeatureMatrix features = standardize(ds, artifact.scaler);
    const auto indices = all_indices(ds.records.size());
    if (args.out_file.empty()) {
        std::cout << "timestamp,actual_wpm2,predicted_wpm2\n";
        for (std::size_t i : indices) {
            const auto trace = forward(artifact.params, artifact.config,
                                       features.rows[i]);
            std::cout << features.timestamps[i] << ','
                      << format_double(
                             features.scaler.invert_target(features.targets[i]))
                      << ','
                      << format_double(
                             features.scaler.invert_target(trace.prediction))
                      << '\n';
        }
    } else {
        write_predictions_csv(args.out_file, artifact.params, artifact.config,
                              features, indices);
    }
    return 0;
}

// ---- baseline ---------------------------------------------------------------

struct BaselineArgs {
    CommonArgs common;
    double alpha = 0.7;
    std::size_t window = 4;
    int slot_minutes = 60;
    std::size_t history_days = 0;
};

int run_baseline(const BaselineArgs& args) {
    const auto records = parse_csv_file(args.common.data, resolve_schema(args.common));
    const SlotMatrix matrix = build_slot_matrix(records, args.slot_minutes);
    if (matrix.days < 2)
        throw InsufficientHistoryError("baseline: data must span at least 2 days");

    fs::create_directories(args.common.out_dir);
    const fs::path out_dir(args.common.out_dir);

    // EWMA: the day-d estimate blends the previous estimate with the previous
    // day's observations; the estimate is seeded with day 0.
    double ewma_abs_sum = 0;
    std::size_t ewma_count = 0;
    {
        auto out = open_output(out_dir / "ewma.csv");
        out << "day,slot,observed,predicted,abs_error\n";
        EwmaState state;
        state.alpha = args.alpha;
        state.estimate.assign(matrix.values.begin(),
                              matrix.values.begin() +
                                  static_cast<std::ptrdiff_t>(matrix.slots));
        for (std::size_t d = 1; d < matrix.days; ++d) {
            std::vector<double> prev_day(
                matrix.values.begin() + static_cast<std::ptrdiff_t>((d - 1) * matrix.slots),
                matrix.values.begin() + static_cast<std::ptrdiff_t>(d * matrix.slots));
            if (d > 1) state = ewma_step(state, prev_day);
            for (std::size_t s = 0; s < matrix.slots; ++s) {
                const double observed = matrix.at(d, s);
                const double err = std::abs(observed - state.estimate[s]);
                out << d << ',' << s << ',' << format_double(observed) << ','
                    << format_double(state.estimate[s]) << ','
                    << format_double(err) << '\n';
                ewma_abs_sum += err;
                ++ewma_count;
            }
        }
    }

    double wcma_abs_sum = 0;
    std::size_t wcma_count = 0;
    {
        auto out = open_output(out_dir / "wcma.csv");
        out << "day,slot,observed,predicted,abs_error\n";
        for (std::size_t d = 1; d < matrix.days; ++d) {
            for (std::size_t n = args.window - 1; n + 1 < matrix.slots; ++n) {
                const double predicted = wcma_predict(matrix, d, n, args.alpha,
                                                      args.window,
                                                      args.history_days);
                const double observed = matrix.at(d, n + 1);
                const double err = std::abs(observed - predicted);
                out << d << ',' << (n + 1) << ',' << format_double(observed)
                    << ',' << format_double(predicted) << ','
                    << format_double(err) << '\n';
                wcma_abs_sum += err;
                ++wcma_count;
            }
        }
    }

    auto summary = open_output(out_dir / "baseline_summary.txt");
    const double ewma_mae = ewma_abs_sum / static_cast<double>(ewma_count);
    const double wcma_mae = wcma_abs_sum / static_cast<double>(wcma_count);
    summary << "ewma_mae_wpm2 " << format_double(ewma_mae) << '\n'
            << "wcma_mae_wpm2 " << format_double(wcma_mae) << '\n';
    std::cout << "ewma_mae_wpm2 " << format_double(ewma_mae) << '\n'
              << "wcma_mae_wpm2 " << format_double(wcma_mae) << '\n';
    return 0;
}

// ---- stats ------------------------------------------------------------------

struct StatsArgs {
    CommonArgs common;
    std::size_t bins = 50;
};

int run_stats(const StatsArgs& args) {
    const auto records = parse_csv_file(args.common.data, resolve_schema(args.common));
    const auto stats = monthly_stats(records);

    fs::create_directories(args.common.out_dir);
    const fs::path out_dir(args.common.out_dir);

    {
        auto out = open_output(out_dir / "monthly_stats.csv");
        out << "year,month,mean_radiation,mean_temperature,mean_pressure\n";
        for (const auto& [key, s] : stats) {
            out << key.year << ',' << key.month << ','
                << format_sig6(s.mean_radiation) << ','
                << format_sig6(s.mean_temperature) << ','
                << format_sig6(s.mean_pressure) << '\n';
        }
    }

    {
        auto out = open_output(out_dir / "histogram.csv");
        out << "bin_low,bin_high,count\n";
        double lo = records.front().radiation;
        double hi = lo;
        for (const auto& r : records) {
            lo = std::min(lo, r.radiation);
            hi = std::max(hi, r.radiation);
        }
        if (lo == hi) {
            out << format_double(lo) << ',' << format_double(hi) << ','
                << records.size() << '\n';
        } else {
            const std::size_t n_bins = args.bins;
            std::vector<std::size_t> counts(n_bins, 0);
            const double width = (hi - lo) / static_cast<double>(n_bins);
            for (const auto& r : records) {
                auto bin = static_cast<std::size_t>((r.radiation - lo) / width);
                counts[std::min(bin, n_bins - 1)] += 1;
            }
            for (std::size_t b = 0; b < n_bins; ++b) {
                out << format_double(lo + width * static_cast<double>(b)) << ','
                    << format_double(lo + width * static_cast<double>(b + 1))
                    << ',' << counts[b] << '\n';
            }
        }
    }
    std::cout << "wrote " << (out_dir / "monthly_stats.csv").string() << ", "
              << (out_dir / "histogram.csv").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hourly solar-radiation forecasting toolkit"};
    app.require_subcommand(1);

    TrainArgs train_args;
    auto* train_cmd = app.add_subcommand("train", "Train the MLP regressor");
    add_common(train_cmd, train_args.common);
    train_cmd->add_option("--loss", train_args.loss, "Loss function: mse or mae")
        ->check(CLI::IsMember({"mse", "mae"}));
    train_cmd->add_option("--batch", train_args.cfg.batch_size, "Batch size");
    train_cmd->add_option("--epochs", train_args.cfg.max_epochs, "Max epochs");
    train_cmd->add_option("--patience", train_args.cfg.patience,
                          "Early-stopping patience");
    train_cmd->add_option("--lr", train_args.cfg.hyper.alpha0,
                          "Base learning rate");
    train_cmd->add_option("--decay", train_args.cfg.hyper.decay,
                          "Per-epoch learning-rate decay");
    train_cmd->add_option("--lambda", train_args.lambda,
                          "Ridge coefficient on the last two layers");
    train_cmd->add_option("--layers", train_args.layer_units,
                          "Comma-separated layer unit counts")
        ->delimiter(',');
    train_cmd->add_flag("--chronological", train_args.chronological,
                        "Split in file order instead of shuffling");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a saved model");
    add_common(eval_cmd, eval_args.common);
    eval_cmd->add_option("--model", eval_args.model_path, "Model artifact")
        ->required();
    eval_cmd->add_option("--partition", eval_args.partition,
                         "train, validation, test, or all")
        ->check(CLI::IsMember({"train", "validation", "test", "all"}));
    eval_cmd->add_option("--predictions", eval_args.predictions_path,
                         "Write per-row predictions CSV here");
    eval_cmd->add_flag("--chronological", eval_args.chronological,
                       "Recompute the split in file order");

    PredictArgs predict_args;
    auto* predict_cmd =
        app.add_subcommand("predict", "Predict radiation for every row");
    add_common(predict_cmd, predict_args.common);
    predict_cmd->add_option("--model", predict_args.model_path, "Model artifact")
        ->required();
    predict_cmd->add_option("--predictions", predict_args.out_file,
                            "Output CSV (stdout if omitted)");

    BaselineArgs baseline_args;
    auto* baseline_cmd =
        app.add_subcommand("baseline", "Run the EWMA and WCMA baselines");
    add_common(baseline_cmd, baseline_args.common);
    baseline_cmd->add_option("--alpha", baseline_args.alpha, "Weighting factor");
    baseline_cmd->add_option("--window", baseline_args.window,
                             "GAP window (slots)");
    baseline_cmd->add_option("--slot-minutes", baseline_args.slot_minutes,
                             "Slot duration in minutes (30-60, divides 1440)");
    baseline_cmd->add_option("--history-days", baseline_args.history_days,
                             "Cap on the number of prior days (0 = all)");

    StatsArgs stats_args;
    auto* stats_cmd =
        app.add_subcommand("stats", "Monthly means and radiation histogram");
    add_common(stats_cmd, stats_args.common);
    stats_cmd->add_option("--bins", stats_args.bins, "Histogram bin count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (train_cmd->parsed()) return run_train(train_args);
        if (eval_cmd->parsed()) return run_eval(eval_args);
        if (predict_cmd->parsed()) return run_predict(predict_args);
        if (baseline_cmd->parsed()) return run_baseline(baseline_args);
        if (stats_cmd->parsed()) return run_stats(stats_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
