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

#include "hyquls/dual_qp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <utility>

namespace hyquls {

double DualQp::objective(const Vector& alpha) const {
    return alpha.dot(labels) - 0.5 * alpha.dot(gram * alpha);
}

Vector DualQp::gradient(const Vector& alpha) const { return labels - gram * alpha; }

Vector DualQp::equality_normal() const {
    return form == EqualityForm::sum_alpha ? Vector::Ones(dim()).eval() : labels;
}

Vector DualQp::box_lower() const { return Vector::Zero(dim()); }

Vector DualQp::box_upper() const { return Vector::Constant(dim(), 0.5 * gamma); }

double DualQp::quadratic_lipschitz() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

DualQp build_dual(const GramMatrix& gram, const Vector& labels, double gamma,
                  EqualityForm form) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    if (labels.size() != gram.size())
        throw DimensionError("label count does not match Gram matrix");
    return DualQp{gram.entries(), labels, gamma, form};
}

double RotatedQp::objective(const Vector& alpha_rot) const {
    if (alpha_rot.size() != dim()) throw DimensionError("rotated alpha has wrong length");
    double value = alpha_rot.dot(y_rot);
    for (Index i = 0; i < rank; ++i)
        value -= 0.5 * lambda[i] * alpha_rot[i] * alpha_rot[i];
    return value;
}

Vector RotatedQp::gradient(const Vector& alpha_rot) const {
    Vector g = y_rot;
    for (Index i = 0; i < rank; ++i) g[i] -= lambda[i] * alpha_rot[i];
    return g;
}

Vector RotatedQp::box_lower() const {
    Vector lo(dim());
    for (Index i = 0; i < dim(); ++i) lo[i] = std::min(0.0, 0.5 * gamma * ones_rot[i]);
    return lo;
}

Vector RotatedQp::box_upper() const {
    Vector hi(dim());
    for (Index i = 0; i < dim(); ++i) hi[i] = std::max(0.0, 0.5 * gamma * ones_rot[i]);
    return hi;
}

double RotatedQp::quadratic_lipschitz() const {
    return rank > 0 ? std::max(0.0, lambda.head(rank).maxCoeff()) : 0.0;
}

RotatedQp rotate_dual(const DualQp& dual, const SpectrumModel& spectrum) {
    if (spectrum.eigenvectors.rows() != dual.dim())
        throw DimensionError("spectrum does not match dual problem size");
    RotatedQp rot;
    rot.rank = spectrum.rank;
    rot.lambda = spectrum.eigenvalues.head(spectrum.rank);
    rot.y_rot = spectrum.eigenvectors.transpose() * dual.labels;
    rot.ones_rot = spectrum.eigenvectors.transpose() * Vector::Ones(dual.dim());
    rot.gamma = dual.gamma;
    return rot;
}

Vector project_box_hyperplane(const Vector& v, const Vector& a, const Vector& lo,
                              const Vector& hi) {
    const Index n = v.size();
    if (a.size() != n || lo.size() != n || hi.size() != n)
        throw DimensionError("projection pieces disagree in size");

    const auto clamp_shift = [&](double mu) {
        Vector x(n);
        for (Index i = 0; i < n; ++i)
            x[i] = std::min(hi[i], std::max(lo[i], v[i] - mu * a[i]));
        return x;
    };
    const auto h = [&](double mu) { return a.dot(clamp_shift(mu)); };

    // h is continuous and nonincreasing in mu; bracket a root and bisect.
    double left = -1.0, right = 1.0;
    const double scale = std::max(1.0, v.cwiseAbs().maxCoeff()) *
                         std::max(1.0, a.cwiseAbs().maxCoeff());
    for (int grow = 0; grow < 80 && h(left) < 0.0; ++grow) left = -(std::abs(left) * 2.0 + scale);
    for (int grow = 0; grow < 80 && h(right) > 0.0; ++grow) right = std::abs(right) * 2.0 + scale;

    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (left + right);
        if (h(mid) > 0.0)
            left = mid;
        else
            right = mid;
    }
    return clamp_shift(0.5 * (left + right));
}

namespace {

template <typename Qp>
QpSolution run_projected_gradient(const Qp& qp, double tol, int max_iters) {
    if (!(tol > 0.0)) throw ConfigError("tolerance must be > 0");
    if (max_iters < 1) throw ConfigError("iteration cap must be >= 1");
    if (!(qp.gamma > 0.0)) throw ConfigError("gamma must be > 0");

    const Vector lo = qp.box_lower();
    const Vector hi = qp.box_upper();
    const Vector a = qp.equality_normal();
    const double lip = qp.quadratic_lipschitz();
    const double step = lip > 0.0 ? 1.0 / lip : 1.0;

    Vector x = project_box_hyperplane(Vector::Zero(qp.dim()), a, lo, hi);
    QpSolution sol;
    sol.converged = false;
    int it = 0;
    double pg_norm = 0.0;
    for (; it < max_iters; ++it) {
        const Vector next = project_box_hyperplane(x + step * qp.gradient(x), a, lo, hi);
        pg_norm = (next - x).norm() / step;
        x = next;
        if (pg_norm <= tol) {
            sol.converged = true;
            ++it;
            break;
        }
    }
    sol.alpha = std::move(x);
    sol.objective = qp.objective(sol.alpha);
    sol.iterations = it;
    sol.projected_gradient_norm = pg_norm;
    return sol;
}

}  // namespace

QpSolution solve_qp_projected_gradient(const DualQp& qp, double tol, int max_iters) {
    QpSolution sol = run_projected_gradient(qp, tol, max_iters);
    auto [bias, averaged] = recover_bias(sol.alpha, qp.gram, qp.labels, qp.gamma);
    sol.b = bias;
    sol.b_from_average = averaged;
    const Vector f = qp.gram * sol.alpha + Vector::Constant(qp.dim(), sol.b);
    sol.slacks.resize(qp.dim());
    for (Index i = 0; i < qp.dim(); ++i)
        sol.slacks[i] = std::max(0.0, 1.0 - qp.labels[i] * f[i]);
    sol.kkt_residual = kkt_residual(sol.alpha, qp.gram, qp.labels, qp.gamma, sol.b);
    return sol;
}

QpSolution solve_qp_projected_gradient(const RotatedQp& qp, double tol, int max_iters) {
    return run_projected_gradient(qp, tol, max_iters);
}

std::pair<double, bool> recover_bias(const Vector& alpha, const Matrix& gram,
                                     const Vector& labels, double gamma) {
    const Vector k_alpha = gram * alpha;
    const double margin = 1e-8 * gamma;
    for (Index i = 0; i < alpha.size(); ++i) {
        if (alpha[i] > margin && alpha[i] < 0.5 * gamma - margin)
            return {labels[i] - k_alpha[i], false};
    }
    // No interior support coordinate: average the margin equations.
    double sum = 0.0;
    for (Index i = 0; i < alpha.size(); ++i) sum += labels[i] - k_alpha[i];
    return {sum / static_cast<double>(alpha.size()), true};
}

double kkt_residual(const Vector& alpha, const Matrix& gram, const Vector& labels,
                    double gamma, double b) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    const Vector f = gram * alpha + Vector::Constant(alpha.size(), b);
    double residual = 0.0;
    for (Index i = 0; i < alpha.size(); ++i) {
        const double yf = labels[i] * f[i];
        const double xi = std::max(0.0, 1.0 - yf);
        residual = std::max(residual, std::abs(alpha[i] * (yf - 1.0 + xi)));
        residual = std::max(residual, std::max(0.0, 1.0 - xi - yf));
        residual = std::max(residual, std::max(0.0, -alpha[i]));
    }
    return residual;
}

}  // namespace hyquls
