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

#include "hyquls/qsls.hpp"

#include "hyquls/hvq.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <string>

namespace hyquls {

double SpectrumModel::sigma(Index i) const {
    return std::sqrt(std::max(0.0, eigenvalues[i]));
}

SpectrumModel kernel_spectrum(const GramMatrix& gram, double tau,
                              std::optional<Index> t_max) {
    if (!(tau >= 0.0)) throw ConfigError("threshold must be >= 0");
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram.entries());
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");

    const Index m = gram.size();
    SpectrumModel model;
    model.tau = tau;
    model.eigenvalues.resize(m);
    model.eigenvectors.resize(m, m);
    // Eigen returns ascending order; flip to descending.
    for (Index i = 0; i < m; ++i) {
        model.eigenvalues[i] = es.eigenvalues()[m - 1 - i];
        model.eigenvectors.col(i) = es.eigenvectors().col(m - 1 - i);
    }

    const double lam_max = std::max(0.0, model.eigenvalues[0]);
    if (model.eigenvalues.minCoeff() < -1e-9 * std::max(lam_max, 1.0))
        throw NumericError("Gram matrix is not positive semidefinite within tolerance");

    // Canonical signs: the largest-|entry| component positive, ties broken by
    // the lowest index.
    for (Index i = 0; i < m; ++i) {
        Index arg = 0;
        double best = 0.0;
        for (Index r = 0; r < m; ++r) {
            const double mag = std::abs(model.eigenvectors(r, i));
            if (mag > best + 1e-15) {
                best = mag;
                arg = r;
            }
        }
        if (model.eigenvectors(arg, i) < 0.0) model.eigenvectors.col(i) *= -1.0;
    }

    Index rank = 0;
    while (rank < m && model.eigenvalues[rank] > kRankTol * lam_max && lam_max > 0.0)
        ++rank;
    model.rank = rank;

    Index above_tau = 0;
    while (above_tau < m && model.sigma(above_tau) >= tau) ++above_tau;
    model.retained = std::min({t_max.value_or(m), above_tau, rank});
    return model;
}

CompressedProblem project_components(const SpectrumModel& spectrum, const Vector& labels,
                                     std::optional<long> shots, std::uint64_t seed) {
    const Index m = spectrum.eigenvectors.rows();
    if (labels.size() != m) throw DimensionError("label count does not match spectrum");
    const Index t = spectrum.retained;

    CompressedProblem cp;
    cp.sample_count = m;
    cp.lambda_r = spectrum.eigenvalues.head(t);
    cp.y_rot.resize(t);
    cp.ones_rot.resize(t);

    if (!shots) {
        for (Index i = 0; i < t; ++i) {
            cp.y_rot[i] = spectrum.eigenvectors.col(i).dot(labels);
            cp.ones_rot[i] = spectrum.eigenvectors.col(i).sum();
        }
        cp.ones_dot_y = labels.sum();
        return cp;
    }

    // Sampled mode: each scalar is a swap-test estimate on unit vectors,
    // rescaled by the known norms (sqrt(M) for both the labels and ones).
    const double root_m = std::sqrt(static_cast<double>(m));
    const Vector y_hat = labels / labels.norm();
    const Vector ones_hat = Vector::Ones(m) / root_m;
    for (Index i = 0; i < t; ++i) {
        const Vector u = spectrum.eigenvectors.col(i);
        cp.y_rot[i] = labels.norm() * swap_test_inner(u, y_hat, shots,
                                                      derive_seed(seed, "qsls.y." + std::to_string(i)));
        cp.ones_rot[i] = root_m * swap_test_inner(u, ones_hat, shots,
                                                  derive_seed(seed, "qsls.one." + std::to_string(i)));
    }
    cp.ones_dot_y = labels.norm() * root_m *
                    swap_test_inner(y_hat, ones_hat, shots, derive_seed(seed, "qsls.oney"));
    return cp;
}

SparseSolution solve_compressed(const CompressedProblem& cp, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    const Index t = cp.lambda_r.size();
    if (t == 0)
        throw SingularSystemError("no retained spectral components to solve over",
                                  std::numeric_limits<double>::infinity());
    const double m = static_cast<double>(cp.sample_count);

    const Vector lam_o = cp.lambda_r.cwiseProduct(cp.ones_rot);
    Matrix system = (cp.lambda_r / gamma + cp.lambda_r.cwiseProduct(cp.lambda_r)).asDiagonal();
    system -= (lam_o * lam_o.transpose()) / m;
    const Vector rhs =
        cp.lambda_r.cwiseProduct(cp.y_rot - (cp.ones_dot_y / m) * cp.ones_rot);

    Eigen::SelfAdjointEigenSolver<Matrix> es(system);
    if (es.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
    const double lam_max = es.eigenvalues().cwiseAbs().maxCoeff();
    const double lam_min = es.eigenvalues().cwiseAbs().minCoeff();
    const double cond =
        lam_min > 0.0 ? lam_max / lam_min : std::numeric_limits<double>::infinity();
    if (!(cond < kConditionCap))
        throw SingularSystemError("compressed system is singular", cond);

    SparseSolution sol;
    sol.alpha_rot = es.eigenvectors() *
                    (es.eigenvalues().cwiseInverse().asDiagonal() *
                     (es.eigenvectors().transpose() * rhs));
    sol.alpha_rot += es.eigenvectors() *
                     (es.eigenvalues().cwiseInverse().asDiagonal() *
                      (es.eigenvectors().transpose() * (rhs - system * sol.alpha_rot)));
    sol.b = (cp.ones_dot_y - lam_o.dot(sol.alpha_rot)) / m;
    return sol;
}

QslsDecision qsls_decision(const SpectrumModel& spectrum, const SparseSolution& sol,
                           const Vector& kernel_vector) {
    const Index m = spectrum.eigenvectors.rows();
    if (kernel_vector.size() != m)
        throw DimensionError("kernel vector does not match spectrum size");
    const Index t = sol.alpha_rot.size();
    if (t > m) throw DimensionError("solution has more components than the spectrum");

    QslsDecision decision;
    decision.value = sol.b;
    for (Index i = 0; i < t; ++i)
        decision.value += spectrum.eigenvectors.col(i).dot(kernel_vector) * sol.alpha_rot[i];
    decision.label = sign_label(decision.value);
    return decision;
}

double truncation_error_bound(const SpectrumModel& spectrum, const Vector& alpha_rot_full,
                              const Vector& kernel_vector, Index t) {
    const Index r = spectrum.rank;
    if (alpha_rot_full.size() < r)
        throw DimensionError("need the full-rank rotated solution (length R)");
    if (t >= r) return 0.0;
    const double sigma_next = spectrum.sigma(t);
    if (sigma_next == 0.0) return 0.0;

    double sum = 0.0;
    for (Index i = t; i < r; ++i) {
        const double sigma_i = spectrum.sigma(i);
        const double phi_v = spectrum.eigenvectors.col(i).dot(kernel_vector) / sigma_i;
        const double ones_i = spectrum.eigenvectors.col(i).sum();
        sum += alpha_rot_full[i] * (phi_v + sigma_i * ones_i);
    }
    return sigma_next * std::abs(sum);
}

Vector linear_weights(const SpectrumModel& spectrum, const SparseSolution& sol,
                      const Dataset& dataset, const KernelSpec& kernel) {
    if (kernel.kind != KernelKind::linear)
        throw ConfigError("explicit weights are only available for the linear kernel");
    const Index t = sol.alpha_rot.size();
    if (spectrum.eigenvectors.rows() != dataset.sample_count())
        throw DimensionError("spectrum does not match dataset");
    return dataset.features().transpose() * (spectrum.eigenvectors.leftCols(t) * sol.alpha_rot);
}

}  // namespace hyquls
