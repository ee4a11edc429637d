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

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace hyquls {

namespace {

// Spectral solve of a symmetric system with one iterative-refinement pass.
// Components with |lambda| <= drop_tol * max|lambda| are excluded, giving the
// minimum-norm solution on the retained subspace.
struct SpectralSolve {
    Vector solution;
    double lam_max = 0.0;
    double lam_min_all = 0.0;   // over the full spectrum
    double lam_min_kept = 0.0;  // over retained components
    Index dropped = 0;
    double residual = 0.0;
};

SpectralSolve spectral_solve(const Matrix& a, const Vector& rhs, double drop_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success)
        throw NumericError("symmetric eigendecomposition failed");
    const Vector& lam = es.eigenvalues();
    const Matrix& u = es.eigenvectors();

    SpectralSolve out;
    out.lam_max = lam.cwiseAbs().maxCoeff();
    out.lam_min_all = lam.cwiseAbs().minCoeff();
    if (out.lam_max == 0.0)
        throw SingularSystemError("system matrix is zero",
                                  std::numeric_limits<double>::infinity());

    const double floor = drop_tol * out.lam_max;
    out.lam_min_kept = out.lam_max;
    Vector inv(lam.size());
    for (Index i = 0; i < lam.size(); ++i) {
        if (std::abs(lam[i]) <= floor) {
            inv[i] = 0.0;
            ++out.dropped;
        } else {
            inv[i] = 1.0 / lam[i];
            out.lam_min_kept = std::min(out.lam_min_kept, std::abs(lam[i]));
        }
    }

    const auto apply_inverse = [&](const Vector& v) -> Vector {
        return u * (inv.asDiagonal() * (u.transpose() * v));
    };
    Vector x = apply_inverse(rhs);
    x += apply_inverse(rhs - a * x);

    out.residual = (a * x - rhs).norm();
    out.solution = std::move(x);
    return out;
}

}  // namespace

SaddleSystem build_saddle_system(const GramMatrix& gram, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    const Index m = gram.size();
    Matrix m_s = Matrix::Zero(m + 1, m + 1);
    m_s.topLeftCorner(m, m) = gram.entries() + Matrix::Identity(m, m) / gamma;
    m_s.topRightCorner(m, 1).setOnes();
    m_s.bottomLeftCorner(1, m).setOnes();
    m_s(m, m) = 0.0;
    return SaddleSystem{std::move(m_s), gamma};
}

Vector saddle_rhs(const Vector& labels) {
    Vector rhs = Vector::Zero(labels.size() + 1);
    rhs.head(labels.size()) = labels;
    return rhs;
}

LsSvmSolution solve_lssvm_direct(const SaddleSystem& system, const Vector& labels) {
    if (labels.size() != system.sample_count())
        throw DimensionError("label count does not match saddle system");
    const Vector rhs = saddle_rhs(labels);

    auto sol = spectral_solve(system.m_s, rhs, 0.0);
    const double cond = sol.lam_min_all > 0.0
                            ? sol.lam_max / sol.lam_min_all
                            : std::numeric_limits<double>::infinity();
    if (sol.dropped > 0 || !(cond < kConditionCap))
        throw SingularSystemError("saddle system is singular or near-singular", cond);

    LsSvmSolution out;
    out.alpha = sol.solution.head(system.sample_count());
    out.b = sol.solution[system.sample_count()];
    out.residual = sol.residual;
    out.condition = cond;
    return out;
}

LsSvmSolution solve_plssvm(const GramMatrix& gram, double gamma, const Vector& labels) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    const Index m = gram.size();
    if (labels.size() != m) throw DimensionError("label count does not match Gram matrix");

    const Matrix& k = gram.entries();
    const Vector k_ones = k * Vector::Ones(m);
    Matrix system = k / gamma + k * k - (k_ones * k_ones.transpose()) / static_cast<double>(m);
    system = 0.5 * (system + system.transpose());

    const double mean_y = labels.sum() / static_cast<double>(m);
    const Vector rhs = k * (labels.array() - mean_y).matrix();

    // K itself may be rank-deficient (e.g. a linear kernel with N < M); the
    // system is then singular but consistent, and the minimum-norm solution
    // yields the same decision function. Inconsistency is caught by the
    // residual check.
    auto sol = spectral_solve(system, rhs, 1e-12);
    const double scale = std::max(rhs.norm(), 1.0);
    if (sol.residual > 1e-8 * scale)
        throw SingularSystemError("kernel-space system is inconsistent",
                                  sol.lam_max / sol.lam_min_kept);

    LsSvmSolution out;
    out.alpha = std::move(sol.solution);
    out.b = (labels.sum() - k_ones.dot(out.alpha)) / static_cast<double>(m);
    out.residual = sol.residual;
    out.condition = sol.lam_max / sol.lam_min_kept;
    return out;
}

LsSvmModel train_lssvm(const Dataset& dataset, const KernelSpec& kernel, double gamma,
                       ClassicalSolver solver) {
    const GramMatrix gram = gram_matrix(kernel, dataset);
    LsSvmSolution sol;
    if (solver == ClassicalSolver::direct) {
        sol = solve_lssvm_direct(build_saddle_system(gram, gamma), dataset.labels());
    } else {
        sol = solve_plssvm(gram, gamma, dataset.labels());
    }
    return LsSvmModel{std::move(sol.alpha), sol.b, kernel, dataset.features()};
}

double decision_value(const LsSvmModel& model, const Vector& xhat) {
    if (xhat.size() != model.train_features.cols())
        throw DimensionError("probe dimension does not match training data");
    double value = model.b;
    for (Index i = 0; i < model.train_features.rows(); ++i)
        value += model.alpha[i] * kernel_eval(model.kernel, model.train_features.row(i), xhat);
    return value;
}

int predict(const LsSvmModel& model, const Vector& xhat) {
    return sign_label(decision_value(model, xhat));
}

}  // namespace hyquls
