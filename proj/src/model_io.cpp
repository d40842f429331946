#include "solarcast/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace solarcast {

namespace {

using nlohmann::json;

std::string hexfloat(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hexfloat(const json& j) {
    if (!j.is_string()) throw ArtifactError("model: expected hexfloat string");
    const std::string s = j.get<std::string>();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty())
        throw ArtifactError("model: malformed float '" + s + "'");
    return v;
}

json floats_to_json(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values) arr.push_back(hexfloat(v));
    return arr;
}

std::vector<double> floats_from_json(const json& arr) {
    if (!arr.is_array()) throw ArtifactError("model: expected a float array");
    std::vector<double> values;
    values.reserve(arr.size());
    for (const auto& j : arr) values.push_back(parse_hexfloat(j));
    return values;
}

std::string activation_name(Activation a) {
    return a == Activation::Relu ? "relu" : "linear";
}

Activation activation_from_name(const std::string& name) {
    if (name == "relu") return Activation::Relu;
    if (name == "linear") return Activation::Linear;
    throw ArtifactError("model: unknown activation '" + name + "'");
}

}  // namespace

std::string serialize_model(const ModelArtifact& artifact) {
    json doc;
    doc["format_version"] = artifact.format_version;

    json net;
    net["input_dim"] = artifact.config.input_dim;
    net["lambda"] = hexfloat(artifact.config.lambda);
    net["layers"] = json::array();
    for (const auto& layer : artifact.config.layers) {
        net["layers"].push_back({{"units", layer.units},
                                 {"activation", activation_name(layer.activation)},
                                 {"regularized", layer.regularized}});
    }
    doc["network"] = net;

    json scaler;
    scaler["mean"] = floats_to_json(
        {artifact.scaler.mean.begin(), artifact.scaler.mean.end()});
    scaler["std"] =
        floats_to_json({artifact.scaler.std.begin(), artifact.scaler.std.end()});
    scaler["target_mean"] = hexfloat(artifact.scaler.target_mean);
    scaler["target_std"] = hexfloat(artifact.scaler.target_std);
    doc["scaler"] = scaler;

    doc["parameters"] = json::array();
    for (const auto& layer : artifact.params.layers) {
        doc["parameters"].push_back({{"weights", floats_to_json(layer.weights)},
                                     {"biases", floats_to_json(layer.biases)}});
    }

    doc["fingerprint"] = {
        {"seed", std::to_string(artifact.fingerprint.seed)},
        {"loss", to_string(artifact.fingerprint.loss_kind)},
        {"best_epoch", artifact.fingerprint.best_epoch}};

    return doc.dump(2) + "\n";
}

ModelArtifact deserialize_model(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ArtifactError(std::string("model: invalid JSON: ") + e.what());
    }

    try {
        ModelArtifact artifact;
        artifact.format_version = doc.at("format_version").get<int>();
        if (artifact.format_version != kModelFormatVersion)
            throw ArtifactError("model: unsupported format_version " +
                                std::to_string(artifact.format_version));

        const json& net = doc.at("network");
        artifact.config.input_dim = net.at("input_dim").get<std::size_t>();
        artifact.config.lambda = parse_hexfloat(net.at("lambda"));
        for (const auto& jl : net.at("layers")) {
            LayerSpec spec;
            spec.units = jl.at("units").get<std::size_t>();
            spec.activation = activation_from_name(jl.at("activation"));
            spec.regularized = jl.at("regularized").get<bool>();
            artifact.config.layers.push_back(spec);
        }
        artifact.config.validate();

        const json& scaler = doc.at("scaler");
        const auto mean = floats_from_json(scaler.at("mean"));
        const auto std_ = floats_from_json(scaler.at("std"));
        if (mean.size() != kFeatureDim || std_.size() != kFeatureDim)
            throw ArtifactError("model: scaler dimension mismatch");
        std::copy(mean.begin(), mean.end(), artifact.scaler.mean.begin());
        std::copy(std_.begin(), std_.end(), artifact.scaler.std.begin());
        artifact.scaler.target_mean = parse_hexfloat(scaler.at("target_mean"));
        artifact.scaler.target_std = parse_hexfloat(scaler.at("target_std"));

        std::size_t fan_in = artifact.config.input_dim;
        const json& parameters = doc.at("parameters");
        if (parameters.size() != artifact.config.layers.size())
            throw ArtifactError("model: parameter layer count mismatch");
        for (std::size_t l = 0; l < parameters.size(); ++l) {
            LayerParams layer;
            layer.units = artifact.config.layers[l].units;
            layer.fan_in = fan_in;
            layer.weights = floats_from_json(parameters[l].at("weights"));
            layer.biases = floats_from_json(parameters[l].at("biases"));
            if (layer.weights.size() != layer.units * layer.fan_in ||
                layer.biases.size() != layer.units)
                throw ArtifactError("model: layer " + std::to_string(l) +
                                    " payload length mismatch");
            fan_in = layer.units;
            artifact.params.layers.push_back(std::move(layer));
        }
        if (artifact.params.scalar_count() != param_count(artifact.config))
            throw ArtifactError("model: payload length does not match param_count");

        const json& fp = doc.at("fingerprint");
        artifact.fingerprint.seed =
            std::stoull(fp.at("seed").get<std::string>());
        artifact.fingerprint.loss_kind =
            loss_kind_from_string(fp.at("loss").get<std::string>());
        artifact.fingerprint.best_epoch = fp.at("best_epoch").get<std::size_t>();
        return artifact;
    } catch (const json::exception& e) {
        throw ArtifactError(std::string("model: missing or mistyped field: ") +
                            e.what());
    }
}

void save_model(const ModelArtifact& artifact, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file '" + path + "'");
    out << serialize_model(artifact);
}

ModelArtifact load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return deserialize_model(buffer.str());
}

}  // namespace solarcast
