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
#include "hyquls/kernel.hpp"

#include <cstdint>
#include <optional>

namespace hyquls {

/// Eigensystem of a Gram matrix with rank and retention bookkeeping.
/// Eigenvalues descend; eigenvector signs are canonicalized (largest-|entry|
/// component positive, ties to the lowest index) for deterministic output.
struct SpectrumModel {
    Vector eigenvalues;   ///< lambda_i = sigma_i^2, descending, length M
    Matrix eigenvectors;  ///< columns u_i, orthonormal
    Index rank = 0;       ///< R: count above rank_tol * lambda_1
    Index retained = 0;   ///< T <= R after the sigma >= tau threshold and cap
    double tau = 0.0;     ///< sigma threshold used

    double sigma(Index i) const;  ///< sqrt(max(lambda_i, 0))
};

inline constexpr double kRankTol = 1e-10;

/// Full classical eigendecomposition standing in for the quantum spectrum
/// extraction; tau discards singular values below it, t_max caps the count.
SpectrumModel kernel_spectrum(const GramMatrix& gram, double tau = 0.0,
                              std::optional<Index> t_max = std::nullopt);

/// The handful of numbers the compressed solve needs.
struct CompressedProblem {
    Vector lambda_r;        ///< retained eigenvalues (diagonal of the rotated Gram)
    Vector y_rot;           ///< u_i . y
    Vector ones_rot;        ///< u_i . 1
    double ones_dot_y = 0;  ///< sum of labels
    Index sample_count = 0;
};

/// Exact mode projects labels and the all-ones vector onto the retained
/// eigenvectors; sampled mode estimates each scalar with a swap test on the
/// normalized pair and rescales by the known sqrt(M) norms.
CompressedProblem project_components(const SpectrumModel& spectrum, const Vector& labels,
                                     std::optional<long> shots, std::uint64_t seed);

struct SparseSolution {
    Vector alpha_rot;  ///< length T
    double b = 0.0;
};

/// Solves the rotated, compressed normal equations
///   (gamma^-1 L + L^2 - (1/M) L o o^T L) a = L (y_rot - (1y/M) o),
///   b = (1y - o . (L a)) / M,
/// where L = diag(lambda_r) and o = ones_rot.
SparseSolution solve_compressed(const CompressedProblem& cp, double gamma);

struct QslsDecision {
    double value = 0.0;
    int label = +1;
};

/// Decision sum_i (k(xhat) . u_i) alpha_rot[i] + b over the retained
/// components; kernel_vector[i] must equal K(x_i, xhat).
QslsDecision qsls_decision(const SpectrumModel& spectrum, const SparseSolution& sol,
                           const Vector& kernel_vector);

/// Upper bound sigma_{T+1} |sum_{i>T} a_i [k(xhat).u_i / sigma_i + sigma_i (u_i.1)]|
/// on the decision-value change from keeping T of R components;
/// alpha_rot_full is the full-rank (T = R) rotated solution.
double truncation_error_bound(const SpectrumModel& spectrum, const Vector& alpha_rot_full,
                              const Vector& kernel_vector, Index t);

/// Explicit weight vector for the linear kernel: w = A^T U_{:,1..T} alpha_rot;
/// decision w . xhat + b matches qsls_decision.
Vector linear_weights(const SpectrumModel& spectrum, const SparseSolution& sol,
                      const Dataset& dataset, const KernelSpec& kernel);

}  // namespace hyquls
