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
#include "hyquls/kernel.hpp"
#include "hyquls/qsls.hpp"

namespace hyquls {

/// Which equality constraint closes the dual feasible set.
///
/// `sum_alpha` (sum_i alpha_i = 0) together with the [0, gamma/2] box admits
/// only the origin; it is kept because it is one documented reading of the
/// model, with `sum_alpha_y` (sum_i alpha_i y_i = 0) as the conventional
/// alternative. Both are exposed so the difference is measurable.
enum class EqualityForm { sum_alpha, sum_alpha_y };

/// Soft-margin dual: maximize sum_i alpha_i y_i - 1/2 alpha K alpha^T
/// subject to the selected equality constraint and 0 <= alpha_i <= gamma/2.
struct DualQp {
    Matrix gram;
    Vector labels;
    double gamma = 1.0;
    EqualityForm form = EqualityForm::sum_alpha;

    double objective(const Vector& alpha) const;
    Vector gradient(const Vector& alpha) const;
    Vector equality_normal() const;  ///< all-ones or the labels
    Vector box_lower() const;
    Vector box_upper() const;
    Index dim() const { return labels.size(); }
    double quadratic_lipschitz() const;  ///< largest eigenvalue of K
};

DualQp build_dual(const GramMatrix& gram, const Vector& labels, double gamma,
                  EqualityForm form = EqualityForm::sum_alpha);

/// The dual expressed in the Gram eigenbasis: maximize
///   sum_{i<=R} a_i (y_rot_i - 1/2 lambda_i a_i) + sum_{i>R} a_i y_rot_i
/// subject to ones_rot . a = 0 and the componentwise box 0..(gamma/2) ones_rot_i
/// (stored as sorted intervals, since ones_rot entries may be negative).
struct RotatedQp {
    Vector lambda;    ///< length R
    Vector y_rot;     ///< length M
    Vector ones_rot;  ///< length M
    double gamma = 1.0;
    Index rank = 0;

    double objective(const Vector& alpha_rot) const;
    Vector gradient(const Vector& alpha_rot) const;
    Vector equality_normal() const { return ones_rot; }
    Vector box_lower() const;
    Vector box_upper() const;
    Index dim() const { return y_rot.size(); }
    double quadratic_lipschitz() const;
};

RotatedQp rotate_dual(const DualQp& dual, const SpectrumModel& spectrum);

struct QpSolution {
    Vector alpha;
    double objective = 0.0;
    bool converged = false;
    int iterations = 0;
    double projected_gradient_norm = 0.0;
    // Only meaningful for the original (unrotated) problem:
    double b = 0.0;
    bool b_from_average = false;
    Vector slacks;              ///< xi_i = max(0, 1 - y_i f(x_i))
    double kkt_residual = 0.0;  ///< max violation across the three conditions
};

/// Projected-gradient ascent with exact projection onto
/// {box} intersect {a^T x = 0} (clamped shift along the constraint normal,
/// multiplier found by bisection). Non-convergence sets the flag rather than
/// throwing.
QpSolution solve_qp_projected_gradient(const DualQp& qp, double tol, int max_iters);
QpSolution solve_qp_projected_gradient(const RotatedQp& qp, double tol, int max_iters);

/// Exact projection helper, exposed for tests: nearest point of
/// {lo <= x <= hi, a . x = 0} to v.
Vector project_box_hyperplane(const Vector& v, const Vector& a, const Vector& lo,
                              const Vector& hi);

/// Max violation across alpha_i (y_i f(x_i) - 1 + xi_i) = 0,
/// 1 - xi_i - y_i f(x_i) <= 0 and alpha_i >= 0, with f(x) = (K alpha) + b and
/// xi_i = max(0, 1 - y_i f(x_i)).
double kkt_residual(const Vector& alpha, const Matrix& gram, const Vector& labels,
                    double gamma, double b);

/// Bias from the first strictly interior coordinate (0 < alpha_i < gamma/2);
/// falls back to averaging the margin equations and reports it did.
std::pair<double, bool> recover_bias(const Vector& alpha, const Matrix& gram,
                                     const Vector& labels, double gamma);

}  // namespace hyquls
