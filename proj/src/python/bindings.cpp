#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "solarcast/baselines.hpp"
#include "solarcast/dataio.hpp"
#include "solarcast/model_io.hpp"
#include "solarcast/train.hpp"

namespace py = pybind11;
using namespace solarcast;

namespace {

FeatureMatrix make_feature_matrix(std::vector<FeatureVector> rows,
                                  std::vector<double> targets, Scaler scaler) {
    if (rows.size() != targets.size())
        throw ShapeError("feature matrix: rows and targets differ in length");
    FeatureMatrix m;
    m.rows = std::move(rows);
    m.targets = std::move(targets);
    m.scaler = std::move(scaler);
    return m;
}

SlotMatrix make_slot_matrix(std::vector<std::vector<double>> grid,
                            int slot_minutes) {
    SlotMatrix m;
    m.days = grid.size();
    m.slots = grid.empty() ? 0 : grid[0].size();
    m.slot_minutes = slot_minutes;
    for (const auto& row : grid) {
        if (row.size() != m.slots)
            throw ShapeError("slot matrix: ragged rows");
        m.values.insert(m.values.end(), row.begin(), row.end());
    }
    m.observed.assign(m.values.size(), true);
    return m;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Solar radiation forecasting: MLP regressor and moving-average "
              "baselines";

    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<DataError>(m, "DataError");
    py::register_exception<NumericError>(m, "NumericError");

    py::enum_<LossKind>(m, "LossKind")
        .value("mse", LossKind::Mse)
        .value("mae", LossKind::Mae);

    py::class_<WeatherRecord>(m, "WeatherRecord")
        .def(py::init<>())
        .def(py::init([](std::int64_t ts, double rad, double temp, double pres,
                         double hum, double wdir, double wspd) {
                 return WeatherRecord{ts, rad, temp, pres, hum, wdir, wspd};
             }),
             py::arg("timestamp"), py::arg("radiation"), py::arg("temperature"),
             py::arg("pressure"), py::arg("humidity"),
             py::arg("wind_direction"), py::arg("wind_speed"))
        .def_readwrite("timestamp", &WeatherRecord::timestamp)
        .def_readwrite("radiation", &WeatherRecord::radiation)
        .def_readwrite("temperature", &WeatherRecord::temperature)
        .def_readwrite("pressure", &WeatherRecord::pressure)
        .def_readwrite("humidity", &WeatherRecord::humidity)
        .def_readwrite("wind_direction", &WeatherRecord::wind_direction)
        .def_readwrite("wind_speed", &WeatherRecord::wind_speed);

    py::class_<Scaler>(m, "Scaler")
        .def(py::init<>())
        .def_readwrite("mean", &Scaler::mean)
        .def_readwrite("std", &Scaler::std)
        .def_readwrite("target_mean", &Scaler::target_mean)
        .def_readwrite("target_std", &Scaler::target_std)
        .def("apply", &Scaler::apply)
        .def("apply_target", &Scaler::apply_target)
        .def("invert_target", &Scaler::invert_target);

    py::class_<DatasetSplit>(m, "DatasetSplit")
        .def_readonly("train", &DatasetSplit::train)
        .def_readonly("validation", &DatasetSplit::validation)
        .def_readonly("test", &DatasetSplit::test);

    py::class_<FeatureMatrix>(m, "FeatureMatrix")
        .def(py::init(&make_feature_matrix), py::arg("rows"),
             py::arg("targets"), py::arg("scaler"))
        .def_readonly("rows", &FeatureMatrix::rows)
        .def_readonly("targets", &FeatureMatrix::targets);

    py::class_<LayerSpec>(m, "LayerSpec")
        .def_readonly("units", &LayerSpec::units)
        .def_readonly("regularized", &LayerSpec::regularized);

    py::class_<NetworkConfig>(m, "NetworkConfig")
        .def_readonly("input_dim", &NetworkConfig::input_dim)
        .def_readonly("layers", &NetworkConfig::layers)
        .def_readonly("lambda_", &NetworkConfig::lambda);

    py::class_<NetworkParams>(m, "NetworkParams")
        .def("scalar_count", &NetworkParams::scalar_count);

    py::class_<AdamHyper>(m, "AdamHyper")
        .def(py::init<>())
        .def_readwrite("alpha0", &AdamHyper::alpha0)
        .def_readwrite("beta1", &AdamHyper::beta1)
        .def_readwrite("beta2", &AdamHyper::beta2)
        .def_readwrite("epsilon", &AdamHyper::epsilon)
        .def_readwrite("decay", &AdamHyper::decay);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("batch_size", &TrainConfig::batch_size)
        .def_readwrite("max_epochs", &TrainConfig::max_epochs)
        .def_readwrite("patience", &TrainConfig::patience)
        .def_readwrite("loss_kind", &TrainConfig::loss_kind)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("hyper", &TrainConfig::hyper);

    py::class_<EpochRecord>(m, "EpochRecord")
        .def_readonly("train_loss", &EpochRecord::train_loss)
        .def_readonly("val_loss", &EpochRecord::val_loss)
        .def_readonly("lr", &EpochRecord::lr);

    py::class_<TrainHistory>(m, "TrainHistory")
        .def_readonly("epochs", &TrainHistory::epochs)
        .def_readonly("best_epoch", &TrainHistory::best_epoch)
        .def_readonly("stopped_early", &TrainHistory::stopped_early);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("params", &TrainResult::params)
        .def_readonly("history", &TrainResult::history);

    py::class_<EvalResult>(m, "EvalResult")
        .def_readonly("standardized_loss", &EvalResult::standardized_loss)
        .def_readonly("mae_wpm2", &EvalResult::mae_wpm2);

    py::class_<SlotMatrix>(m, "SlotMatrix")
        .def(py::init(&make_slot_matrix), py::arg("grid"),
             py::arg("slot_minutes") = 60)
        .def_readonly("days", &SlotMatrix::days)
        .def_readonly("slots", &SlotMatrix::slots)
        .def("at", &SlotMatrix::at);

    m.def("parse_csv_file", &parse_csv_file, py::arg("path"),
          py::arg("schema") = default_schema());
    m.def("encode_features", &encode_features);
    m.def("fit_scaler",
          py::overload_cast<const std::vector<FeatureVector>&,
                            const std::vector<double>&>(&fit_scaler));
    m.def("split_dataset", &split_dataset, py::arg("n_rows"), py::arg("seed"),
          py::arg("ratios") = std::array<double, 3>{0.70, 0.15, 0.15},
          py::arg("shuffle") = true);

    m.def("default_network_config", &default_network_config);
    m.def("make_network_config", &make_network_config, py::arg("input_dim"),
          py::arg("units"), py::arg("lambda"));
    m.def("param_count", &param_count);
    m.def("per_layer_param_counts", &per_layer_param_counts);
    m.def("init_params", &init_params, py::arg("config"), py::arg("seed"));
    m.def(
        "predict_one",
        [](const NetworkParams& params, const NetworkConfig& config,
           const std::vector<double>& input) {
            return forward(params, config, input).prediction;
        },
        py::arg("params"), py::arg("config"), py::arg("input"));

    m.def("decayed_lr", &decayed_lr, py::arg("hyper"), py::arg("epoch"));
    m.def("train", &train, py::arg("features"), py::arg("split"),
          py::arg("net_config"), py::arg("cfg"));
    m.def("evaluate", &evaluate, py::arg("params"), py::arg("net_config"),
          py::arg("features"), py::arg("indices"), py::arg("kind"));

    m.def(
        "ewma_step",
        [](const std::vector<double>& estimate, double alpha,
           const std::vector<double>& harvested) {
            EwmaState state{estimate, alpha};
            return ewma_step(state, harvested).estimate;
        },
        py::arg("estimate"), py::arg("alpha"), py::arg("harvested"));
    m.def("gap_factor", &gap_factor, py::arg("matrix"), py::arg("day"),
          py::arg("slot"), py::arg("window"), py::arg("history_days") = 0);
    m.def("wcma_predict", &wcma_predict, py::arg("matrix"), py::arg("day"),
          py::arg("slot"), py::arg("alpha"), py::arg("window"),
          py::arg("history_days") = 0);
    m.def("build_slot_matrix", &build_slot_matrix, py::arg("records"),
          py::arg("slot_minutes") = 60);
    m.def("monthly_stats", [](const std::vector<WeatherRecord>& records) {
        py::list out;
        for (const auto& [key, s] : monthly_stats(records))
            out.append(py::make_tuple(key.year, key.month, s.mean_radiation,
                                      s.mean_temperature, s.mean_pressure,
                                      s.count));
        return out;
    });
}
