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

namespace hyquls {

/// Condition-number cap; solves beyond it raise SingularSystemError instead
/// of returning garbage.
inline constexpr double kConditionCap = 1e12;

/// The (M+1) x (M+1) saddle matrix [[K + gamma^-1 I, 1^T], [1, 0]].
struct SaddleSystem {
    Matrix m_s;
    double gamma = 1.0;

    Index sample_count() const { return m_s.rows() - 1; }
};

SaddleSystem build_saddle_system(const GramMatrix& gram, double gamma);

/// Right-hand side (y, 0) of the saddle system.
Vector saddle_rhs(const Vector& labels);

/// Raw solver output shared by the two classical routes.
struct LsSvmSolution {
    Vector alpha;      ///< length M
    double b = 0.0;    ///< bias
    double residual = 0.0;
    double condition = 0.0;
};

/// Solves the full saddle system directly (dense symmetric-indefinite
/// spectral factorization with one refinement pass).
LsSvmSolution solve_lssvm_direct(const SaddleSystem& system, const Vector& labels);

/// Solves the kernel-space reformulation
///   (gamma^-1 K + K^2 - (1/M) K 1 1^T K) alpha = K (y - mean(y) 1),
///   b = (sum(y) - 1^T K alpha) / M.
/// Rank-deficient but consistent systems get the minimum-norm solution;
/// inconsistent or all-zero systems raise SingularSystemError.
LsSvmSolution solve_plssvm(const GramMatrix& gram, double gamma, const Vector& labels);

/// Trained classifier: decision f(x) = sum_i alpha_i K(x_i, x) + b.
struct LsSvmModel {
    Vector alpha;
    double b = 0.0;
    KernelSpec kernel;
    Matrix train_features;
};

enum class ClassicalSolver { direct, plssvm };

LsSvmModel train_lssvm(const Dataset& dataset, const KernelSpec& kernel, double gamma,
                       ClassicalSolver solver = ClassicalSolver::direct);

double decision_value(const LsSvmModel& model, const Vector& xhat);

/// sign(decision_value), with sign(0) = +1.
int predict(const LsSvmModel& model, const Vector& xhat);

}  // namespace hyquls
