// Copyright 2026 The hyquls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "hyquls/lssvm.hpp"
#include "hyquls/qsls.hpp"
#include "hyquls/runner.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using hyquls::ConfigError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ConfigError("cannot write file: " + out_path);
    out << text << "\n";
}

hyquls::ExperimentConfig load_config(const std::string& path,
                                     std::optional<std::uint64_t> seed_override) {
    auto config = hyquls::config_from_json(read_json_file(path));
    if (seed_override) config.seed = *seed_override;
    return config;
}

struct TrainOverrides {
    std::optional<hyquls::Algorithm> algo;
    std::optional<double> tau;
    std::optional<hyquls::Index> t_max;
};

int run_train(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_path, const TrainOverrides& overrides) {
    auto config = load_config(config_path, seed);
    if (overrides.algo) config.algorithm = *overrides.algo;
    if (overrides.tau) config.qsls.tau = *overrides.tau;
    if (overrides.t_max) config.qsls.t_max = *overrides.t_max;
    const json report = hyquls::run(config);
    emit(report.dump(2), out_path);
    return kExitOk;
}

int run_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
    json doc = read_json_file(model_path);
    const json& model_json = doc.contains("model") ? doc["model"] : doc;
    if (!model_json.contains("alpha"))
        throw ConfigError("no model object found in " + model_path);

    const std::string train_path = model_json.at("dataset_path").get<std::string>();
    const std::string expect_hash = model_json.at("dataset_hash").get<std::string>();
    const std::string actual_hash = hyquls::file_content_hash(train_path);
    if (actual_hash != expect_hash)
        throw ConfigError("training data changed since the model was saved (hash " +
                          actual_hash + " != " + expect_hash + ")");

    std::optional<hyquls::Index> label_column;
    if (model_json.contains("label_column"))
        label_column = model_json["label_column"].get<hyquls::Index>();
    hyquls::Dataset train = hyquls::Dataset::load_csv(train_path, label_column);
    double feature_scale = 1.0;
    if (model_json.value("scaled_to_unit_ball", false)) {
        auto [scaled, rep] = hyquls::scale_to_unit_ball(train);
        train = scaled;
        feature_scale = rep.scale;
    }

    hyquls::LsSvmModel model;
    const auto& alpha_json = model_json.at("alpha");
    model.alpha.resize(alpha_json.size());
    for (std::size_t i = 0; i < alpha_json.size(); ++i)
        model.alpha[static_cast<hyquls::Index>(i)] = alpha_json[i].get<double>();
    model.b = model_json.at("b").get<double>();
    model.kernel = hyquls::KernelSpec::from_json(model_json.at("kernel").dump());
    model.train_features = train.features();

    const hyquls::Dataset probes = hyquls::Dataset::load_csv(data_path);
    json out;
    out["version"] = hyquls::kVersion;
    json values = json::array();
    json labels = json::array();
    double agree = 0.0;
    for (hyquls::Index i = 0; i < probes.sample_count(); ++i) {
        const hyquls::Vector x = probes.features().row(i).transpose() * feature_scale;
        const double v = hyquls::decision_value(model, x);
        values.push_back(v);
        labels.push_back(hyquls::sign_label(v));
        if (hyquls::sign_label(v) == static_cast<int>(probes.labels()[i])) agree += 1.0;
    }
    out["values"] = std::move(values);
    out["labels"] = std::move(labels);
    out["label_agreement"] = agree / static_cast<double>(probes.sample_count());
    emit(out.dump(2), out_path);
    return kExitOk;
}

int run_spectrum(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
    auto config = load_config(config_path, seed);
    hyquls::Dataset data = hyquls::load_dataset(config.dataset);
    if (config.scale_unit_ball) data = hyquls::scale_to_unit_ball(data).first;
    const auto gram = hyquls::gram_matrix(config.kernel, data);
    const auto spectrum = hyquls::kernel_spectrum(gram, config.qsls.tau, config.qsls.t_max);
    const auto cp = hyquls::project_components(spectrum, data.labels(), std::nullopt, 0);

    json out;
    out["version"] = hyquls::kVersion;
    out["R"] = spectrum.rank;
    out["T"] = spectrum.retained;
    out["tau"] = spectrum.tau;
    json table = json::array();
    for (hyquls::Index i = 0; i < spectrum.retained; ++i) {
        table.push_back({{"sigma", spectrum.sigma(i)},
                         {"u_dot_y", cp.y_rot[i]},
                         {"u_dot_ones", cp.ones_rot[i]}});
    }
    out["table"] = std::move(table);
    emit(out.dump(2), out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least-square SVM solver suite with spectral-filter and "
                 "compressed-spectrum pipelines"};
    app.require_subcommand(1);

    std::string config_path, out_path, model_path, data_path, algo_name;
    std::optional<std::uint64_t> seed;
    std::optional<double> tau;
    std::optional<hyquls::Index> t_max;
    std::vector<double> lambdas, windows, eps_list;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "JSON experiment config")->required();
        cmd->add_option("--seed", seed, "override the config seed");
        cmd->add_option("--out", out_path, "output path (stdout when omitted)");
    };

    auto* train = app.add_subcommand("train", "run the configured pipeline");
    add_common(train, true);
    train->add_option("--algo", algo_name,
                      "override the configured algorithm "
                      "(classical|plssvm|hvq|qsls|dual|dual-rotated|compare)");
    train->add_option("--tau", tau, "singular-value threshold for qsls");
    train->add_option("--t-max", t_max, "retained-component cap for qsls");
    auto* compare = app.add_subcommand(
        "compare", "run classical, hvq and qsls on the same data");
    add_common(compare, true);
    auto* spectrum = app.add_subcommand("spectrum", "kernel spectrum table");
    add_common(spectrum, true);

    auto* predict = app.add_subcommand("predict", "classify new data with a saved model");
    predict->add_option("--model", model_path, "report or model JSON")->required();
    predict->add_option("--data", data_path, "CSV of probe rows")->required();
    predict->add_option("--out", out_path, "output path (stdout when omitted)");

    auto* scan = app.add_subcommand("filter-scan", "window/noise attenuation table");
    scan->add_option("--lambda", lambdas, "eigenvalues")->required()->delimiter(',');
    scan->add_option("--L", windows, "window widths")->required()->delimiter(',');
    scan->add_option("--eps", eps_list, "detection widths")->required()->delimiter(',');
    scan->add_option("--out", out_path, "output path (stdout when omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            TrainOverrides overrides;
            if (!algo_name.empty()) overrides.algo = hyquls::algorithm_from_string(algo_name);
            overrides.tau = tau;
            overrides.t_max = t_max;
            return run_train(config_path, seed, out_path, overrides);
        }
        if (compare->parsed())
            return run_train(config_path, seed, out_path, {hyquls::Algorithm::compare, {}, {}});
        if (spectrum->parsed()) return run_spectrum(config_path, seed, out_path);
        if (predict->parsed()) return run_predict(model_path, data_path, out_path);
        if (scan->parsed()) {
            emit(hyquls::filter_scan_csv(lambdas, windows, eps_list), out_path);
            return kExitOk;
        }
    } catch (const hyquls::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hyquls::CsvError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const hyquls::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitConfig;
}
