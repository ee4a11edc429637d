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

#include "hyquls/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace hyquls {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

Dataset::Dataset(Matrix features, Vector labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
    if (features_.rows() < 2) throw ConfigError("dataset needs at least 2 samples");
    if (features_.cols() < 1) throw ConfigError("dataset needs at least 1 feature");
    if (labels_.size() != features_.rows())
        throw DimensionError("label count does not match sample count");
    if (!features_.allFinite()) throw ConfigError("dataset contains non-finite features");
    for (Index i = 0; i < labels_.size(); ++i) {
        if (labels_[i] != 1.0 && labels_[i] != -1.0)
            throw ConfigError("label outside {-1,+1} at sample " + std::to_string(i));
    }
}

bool Dataset::operator==(const Dataset& other) const {
    return features_.rows() == other.features_.rows() &&
           features_.cols() == other.features_.cols() && features_ == other.features_ &&
           labels_ == other.labels_;
}

Dataset Dataset::load_csv(const std::string& path, std::optional<Index> label_column) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file: " + path);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t arity = 0;
    bool first_content_row = true;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv_line(line);
        std::vector<double> values(cells.size());
        bool numeric = true;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (!parse_double(trim(cells[c]), values[c])) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            // Header rows are only allowed as the very first row of the file.
            if (first_content_row) {
                first_content_row = false;
                continue;
            }
            throw CsvError("malformed row: non-numeric cell", line_no);
        }
        first_content_row = false;
        if (rows.empty()) {
            arity = values.size();
        } else if (values.size() != arity) {
            throw CsvError("malformed row: expected " + std::to_string(arity) +
                               " cells, got " + std::to_string(values.size()),
                           line_no);
        }
        const Index label_idx =
            label_column.value_or(static_cast<Index>(values.size()) - 1);
        if (label_idx < 0 || label_idx >= static_cast<Index>(values.size()))
            throw CsvError("label column out of range", line_no);
        const double label = values[static_cast<std::size_t>(label_idx)];
        if (label != 1.0 && label != -1.0)
            throw CsvError("InvalidLabel: expected +-1, got " + std::to_string(label),
                           line_no);
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw ConfigError("empty file: " + path);
    if (arity < 2) throw ConfigError("file has no feature columns: " + path);

    const Index m = static_cast<Index>(rows.size());
    const Index n = static_cast<Index>(arity) - 1;
    const Index label_idx = label_column.value_or(static_cast<Index>(arity) - 1);
    Matrix features(m, n);
    Vector labels(m);
    for (Index i = 0; i < m; ++i) {
        Index col = 0;
        for (Index j = 0; j < static_cast<Index>(arity); ++j) {
            if (j == label_idx) continue;
            features(i, col++) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        labels[i] = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(label_idx)];
    }
    return Dataset(std::move(features), std::move(labels));
}

void Dataset::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    char buf[64];
    for (Index i = 0; i < sample_count(); ++i) {
        for (Index j = 0; j < feature_count(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", features_(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof(buf), "%.17g", labels_[i]);
        out << buf << '\n';
    }
}

Dataset Dataset::generate_blobs(Index m_per_class, Index n, double separation,
                                std::uint64_t seed) {
    if (m_per_class < 1) throw ConfigError("m_per_class must be >= 1");
    if (n < 1) throw ConfigError("feature count must be >= 1");
    if (!(separation > 0.0)) throw ConfigError("separation must be > 0");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Index m = 2 * m_per_class;
    Matrix features(m, n);
    Vector labels(m);
    for (Index i = 0; i < m; ++i) {
        const double center = (i < m_per_class) ? separation / 2.0 : -separation / 2.0;
        for (Index j = 0; j < n; ++j) features(i, j) = gauss(rng);
        features(i, 0) += center;
        labels[i] = (i < m_per_class) ? 1.0 : -1.0;
    }
    return Dataset(std::move(features), std::move(labels));
}

std::pair<Dataset, ScalingReport> scale_to_unit_ball(const Dataset& dataset) {
    double max_norm = 0.0;
    for (Index i = 0; i < dataset.sample_count(); ++i)
        max_norm = std::max(max_norm, dataset.features().row(i).norm());

    ScalingReport report;
    if (max_norm == 0.0) {
        report.degenerate = true;
        report.scale = 1.0;
        report.max_row_norm = 0.0;
        return {dataset, report};
    }
    if (max_norm <= 1.0) {
        report.scale = 1.0;
        report.max_row_norm = max_norm;
        return {dataset, report};
    }

    report.scale = 1.0 / max_norm;
    Matrix scaled = dataset.features() * report.scale;
    // Rounding can leave the rescaled maximum a few ulp above 1; nudge until
    // the bound holds exactly so a second pass is the identity.
    for (int pass = 0; pass < 4; ++pass) {
        double rescaled_max = 0.0;
        for (Index i = 0; i < scaled.rows(); ++i)
            rescaled_max = std::max(rescaled_max, scaled.row(i).norm());
        report.max_row_norm = rescaled_max;
        if (rescaled_max <= 1.0) break;
        const double fix = 1.0 / rescaled_max;
        scaled *= fix;
        report.scale *= fix;
    }
    Dataset out(std::move(scaled), dataset.labels());
    return {std::move(out), report};
}

}  // namespace hyquls
