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

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

namespace hyquls {

/// What scale_to_unit_ball did to the data.
struct ScalingReport {
    double scale = 1.0;         ///< single global factor applied to every entry
    double max_row_norm = 0.0;  ///< max ||x_i|| after scaling
    bool degenerate = false;    ///< all-zero input; identity scaling applied
};

/// Immutable two-class dataset: an M x N feature matrix with +-1 labels.
///
/// Rows are samples. Construction validates M >= 2, N >= 1, finite entries
/// and labels restricted to {-1,+1}; every instance is therefore well-formed.
class Dataset {
  public:
    Dataset(Matrix features, Vector labels);

    /// Parses a comma-separated file. A header row is skipped automatically
    /// when its first row contains any non-numeric cell. The label column
    /// defaults to the last column and must hold +-1 entries.
    static Dataset load_csv(const std::string& path,
                            std::optional<Index> label_column = std::nullopt);

    /// Writes features followed by the label column, 17 significant digits,
    /// row order preserved. load_csv(save_csv(d)) reproduces d bit-exactly.
    void save_csv(const std::string& path) const;

    /// Two isotropic unit-variance Gaussian clusters centered at
    /// +-(separation/2) along the first axis; first cluster labeled +1.
    /// Deterministic in (m_per_class, n, separation, seed).
    static Dataset generate_blobs(Index m_per_class, Index n, double separation,
                                  std::uint64_t seed);

    const Matrix& features() const { return features_; }
    const Vector& labels() const { return labels_; }
    Index sample_count() const { return features_.rows(); }
    Index feature_count() const { return features_.cols(); }

    bool operator==(const Dataset& other) const;

  private:
    Matrix features_;
    Vector labels_;
};

/// Divides all features by max(1, max ||x_i||) so every row lands in the unit
/// ball; idempotent. All-zero data passes through with the degenerate flag set.
std::pair<Dataset, ScalingReport> scale_to_unit_ball(const Dataset& dataset);

}  // namespace hyquls
