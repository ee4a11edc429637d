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

#pragma once

#include "hyquls/common.hpp"
#include "hyquls/dataset.hpp"
#include "hyquls/dual_qp.hpp"
#include "hyquls/hvq.hpp"
#include "hyquls/kernel.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace hyquls {

enum class Algorithm { classical, plssvm, hvq, qsls, dual, dual_rotated, compare };

Algorithm algorithm_from_string(const std::string& name);
std::string algorithm_to_string(Algorithm algo);

struct DatasetSpec {
    enum class Kind { csv, blobs } kind = Kind::blobs;
    // csv
    std::string path;
    std::optional<Index> label_column;
    // blobs
    Index m_per_class = 20;
    Index n = 2;
    double separation = 6.0;
    std::uint64_t seed = 0;
};

struct ProbeSpec {
    enum class Kind { training, random, explicit_points } kind = Kind::training;
    Index count = 10;                  // random
    std::vector<Vector> points;        // explicit
};

struct QslsParams {
    double tau = 0.0;
    std::optional<Index> t_max;
    std::optional<long> shots;
};

struct DualParams {
    EqualityForm form = EqualityForm::sum_alpha;
    double tol = 1e-8;
    int max_iters = 200000;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    bool scale_unit_ball = true;
    KernelSpec kernel;
    double gamma = 1.0;
    Algorithm algorithm = Algorithm::classical;
    HvqConfig hvq;
    QslsParams qsls;
    DualParams dual;
    ProbeSpec probes;
    std::uint64_t seed = 0;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// Dispatches the configured pipeline(s) and assembles the machine-readable
/// report. Identical (config, seed) pairs reproduce every numeric field
/// bit-exactly; only the "timing" subtree varies between runs.
nlohmann::json run(const ExperimentConfig& config);

/// Cartesian product table of the window filters, sorted lexicographically by
/// (lambda, L, eps_q). Zero eigenvalues are marked, not computed.
std::string filter_scan_csv(const std::vector<double>& lambdas,
                            const std::vector<double>& windows,
                            const std::vector<double>& eps_list);

/// FNV-1a over the raw file bytes; ties saved models to their training data.
std::string file_content_hash(const std::string& path);

Dataset load_dataset(const DatasetSpec& spec);

}  // namespace hyquls
