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

#include <string>

namespace hyquls {

enum class KernelKind { linear, poly, rbf, rbf_approx };

/// Kernel family and parameters.
///
/// - linear:      K(x,z) = <x,z>
/// - poly:        K(x,z) = (<x,z> + 1)^d
/// - rbf:         K(x,z) = exp(-|x-z|^2 / 2 omega^2)
/// - rbf_approx:  K(x,z) = e^{-|x|^2/2w^2} (1 + <x,z>/(w^2 k))^k e^{-|z|^2/2w^2},
///   the finite-order surrogate of rbf obtained from (1+s/k)^k -> e^s.
struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    int degree = 1;      ///< poly only, d >= 1
    double omega = 1.0;  ///< rbf / rbf_approx width, > 0
    long order = 1;      ///< rbf_approx tensor order k >= 1

    static KernelSpec linear();
    static KernelSpec poly(int d);
    static KernelSpec rbf(double omega);
    static KernelSpec rbf_approx(double omega, long k);

    void validate() const;

    /// {"kind": "linear"|"poly"|"rbf"|"rbf_approx", "d":..., "omega":..., "k":...}
    std::string to_json() const;
    static KernelSpec from_json(const std::string& json_text);
};

/// Symmetric kernel matrix K_ij = K(x_i, x_j); symmetry is enforced exactly
/// by averaging with the transpose on construction.
class GramMatrix {
  public:
    explicit GramMatrix(Matrix entries);

    const Matrix& entries() const { return entries_; }
    Index size() const { return entries_.rows(); }

  private:
    Matrix entries_;
};

double kernel_eval(const KernelSpec& spec, const Vector& x, const Vector& z);

GramMatrix gram_matrix(const KernelSpec& spec, const Dataset& dataset);

/// Kernel values of one probe against every training sample:
/// out[i] = K(x_i, xhat).
Vector kernel_row(const KernelSpec& spec, const Dataset& dataset, const Vector& xhat);

/// Implicit tensor-power feature state. The realized feature vector is
/// amp_scale * (base / register_scale)^{tensor product, order times}; its
/// squared norm is amp_scale^2 * norm_factor. All pipeline quantities reduce
/// to inner products, which factorize as powers of the base inner product,
/// so the (dim+1)^order tensor is never formed outside test oracles.
struct FeatureState {
    Vector base;                  ///< augmented vector x' ((x,1) or (x, w sqrt(k)))
    long tensor_order = 1;        ///< d or k
    double register_scale = 1.0;  ///< per-register amplitude divisor
    double amp_scale = 1.0;       ///< global prefactor (rbf: e^{-|x|^2/2w^2})
    double norm_factor = 1.0;     ///< N with unit amplitudes = products / sqrt(N)
};

/// Polynomial map: base (x,1), order d, norm_factor |(x,1)|^{2d}.
FeatureState poly_feature_state(const Vector& x, int d);

/// Finite-order RBF map: base (x, w sqrt(k)), order k,
/// norm_factor ((|x|^2 + w^2 k)/(w^2 k))^k -> e^{|x|^2/w^2} as k -> inf.
FeatureState rbf_feature_state(const Vector& x, double omega, long k);

/// Normalized inner product of the unit states; always in [-1, 1].
double unit_inner(const FeatureState& a, const FeatureState& b);

/// Inner product of the realized (scaled) feature vectors. Reproduces
/// kernel_eval for the matching KernelSpec.
double scaled_inner(const FeatureState& a, const FeatureState& b);

/// Smallest k with |e^s - (1+s/k)^k| < delta for all |s| <= s_max, checked at
/// the interval extremes. Throws NumericError when k would exceed cap, with
/// the bound achieved at the cap in the message.
long rbf_order_for_accuracy(double delta, double s_max, long cap = 1000000);

/// Materializes the full M x (N+1)^k amplitude block of the dataset state
/// (per-sample prefactor e^{-|x_i|^2/2w^2}, registers x_i' / (w sqrt(k))),
/// normalizes it to a unit state, and partial-traces out the feature
/// register. The result is an M x M density-matrix block with trace 1.
/// Guarded by (N+1)^k * M <= 10^6; intended for tiny sanity scales only.
Matrix dataset_state_gram_check(const Matrix& features, double omega, long k);
Matrix dataset_state_gram_check(const Dataset& dataset, double omega, long k);

}  // namespace hyquls
