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

#include <array>
#include <cmath>
#include <vector>

namespace hyquls {

/// Finite support [0, L] of the step-function window that replaces the ideal
/// (unbounded) inversion integral. Larger L means less attenuation.
struct StepWindow {
    double width = 0.0;  ///< L > 0

    explicit StepWindow(double L) : width(L) {
        if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("window width must be finite and > 0");
    }
};

/// Homodyne post-selection width; 0 is the ideal projector.
struct DetectionNoise {
    double eps_q = 0.0;

    DetectionNoise() = default;
    explicit DetectionNoise(double eps) : eps_q(eps) {
        if (!(eps >= 0.0)) throw ConfigError("detection width must be >= 0");
    }
};

/// Finite-squeezing attenuation parameters. s1 is derived from the squeezing
/// factor and the post-selection point (Q1, Q2) as 2s/(Q1^2 + Q2^2).
struct SqueezeParams {
    double s = 1.0;    ///< squeezing factor > 0
    double chi = 0.0;  ///< ridge term >= 0
    double eta = 1.0;  ///< scale > 0
    double s1 = 1.0;   ///< 2s/(Q1^2+Q2^2) > 0

    static SqueezeParams from_postselection(double s, double chi, double eta, double q1,
                                            double q2);
    void validate() const;
};

/// Per-eigenvalue attenuation table (lambda_k, F(lambda_k)).
struct FilterProfile {
    Vector eigenvalues;
    Vector attenuations;
};

/// Numerically evaluates the double integral
///   (i/sqrt(2 pi)) \int_0^L \int_R psi p2 e^{-p2^2/2} e^{i lambda p1 p2} dp2 dp1
/// with Gauss-Hermite nodes in p2 and adaptive Simpson in p1, then applies
/// the library's +1/lambda sign convention. Agrees with
/// (1/lambda)(1 - e^{-lambda^2 L^2 / 2}) to quadrature accuracy.
double quadrature_inverse(double lambda, StepWindow window, int hermite_nodes = 301,
                          double simpson_tol = 1e-10);

/// Closed-form window filter F_L(lambda) = 1 - e^{-lambda^2 L^2 / 2}; even in
/// lambda, F_L(0) = 0.
double ideal_inverse_filter(double lambda, StepWindow window);

/// Detection-noise filter
///   F(l) = [1 - e^{-L^2 (l^2 + e^2 + e^4) / (2 (1 + e^2))}] / [1 + (e^2+e^4)/|l|].
/// |l| keeps the attenuation in (0, 1] for the negative eigenvalues of a
/// saddle matrix; reduces exactly to ideal_inverse_filter at e = 0.
double detection_filter(double lambda, StepWindow window, DetectionNoise noise);

FilterProfile build_filter_profile(const Vector& eigenvalues, StepWindow window,
                                   DetectionNoise noise);

struct FilteredApply {
    Vector solution;
    std::vector<Index> dropped;  ///< spectral components below the floor
};

/// Applies sum_k c_k lambda_k^-1 F(lambda_k) u_k for an orthonormal
/// eigenbasis (columns of eigvecs) and expansion coefficients c. Components
/// with |lambda| < floor_rel * max|lambda| are dropped and reported rather
/// than amplified; all-dropped input is an error.
FilteredApply apply_filtered_inverse(const Matrix& eigvecs, const Vector& eigvals,
                                     const Vector& coeffs, StepWindow window,
                                     DetectionNoise noise, double floor_rel = 1e-10);

/// Shape factor C(s1, lambda) = e^{-1/(alpha^2 s1^2)} with
/// alpha = eta (lambda^2 + chi); the unknown global constant is normalized
/// away so only ratios across eigenvalues are meaningful.
double squeeze_shape(double lambda, const SqueezeParams& params);

/// Attenuated inverse weight lambda/(lambda^2 + chi) * C(s1, lambda);
/// tends to 1/lambda as s1 -> infinity at chi = 0.
double squeeze_attenuation(double lambda, const SqueezeParams& params);

/// The three generators summing to the saddle matrix: the kernel block, the
/// ridge block, and the bias border.
std::array<Matrix, 3> trotter_generators(const GramMatrix& gram, double gamma);

/// Operator-norm distance between e^{i M_s t} and the first-order product
/// (e^{i G1 t/n} e^{i G2 t/n} e^{i G3 t/n})^n.
double trotter_product_error(const GramMatrix& gram, double gamma, double t, int steps);

}  // namespace hyquls
