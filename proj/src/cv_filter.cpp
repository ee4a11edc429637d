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

#include "hyquls/cv_filter.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>

namespace hyquls {

namespace {

struct HermiteRule {
    Vector nodes;
    Vector weights;  // for weight function e^{-t^2} on the whole line
};

// Golub-Welsch: eigen-decompose the Jacobi matrix of the (physicists')
// Hermite polynomials.
HermiteRule gauss_hermite(int n) {
    Matrix jacobi = Matrix::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double off = std::sqrt(i / 2.0);
        jacobi(i, i - 1) = off;
        jacobi(i - 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(jacobi);
    HermiteRule rule;
    rule.nodes = es.eigenvalues();
    rule.weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

SqueezeParams SqueezeParams::from_postselection(double s, double chi, double eta,
                                                double q1, double q2) {
    const double q2sum = q1 * q1 + q2 * q2;
    if (!(q2sum > 0.0)) throw ConfigError("post-selection point must be nonzero");
    SqueezeParams p{s, chi, eta, 2.0 * s / q2sum};
    p.validate();
    return p;
}

void SqueezeParams::validate() const {
    if (!(s > 0.0)) throw ConfigError("squeezing factor must be > 0");
    if (!(chi >= 0.0)) throw ConfigError("ridge term must be >= 0");
    if (!(eta > 0.0)) throw ConfigError("scale must be > 0");
    if (!(s1 > 0.0)) throw ConfigError("derived s1 must be > 0");
}

double quadrature_inverse(double lambda, StepWindow window, int hermite_nodes,
                          double simpson_tol) {
    if (lambda == 0.0) throw NumericError("window integral diverges at lambda = 0");
    if (hermite_nodes < 8) throw ConfigError("too few Hermite nodes");

    const HermiteRule rule = gauss_hermite(hermite_nodes);
    const double root2 = std::numbers::sqrt2;

    // Inner p2 integral after p2 = sqrt(2) t: 2i * sum_j w_j t_j sin(sqrt2 l p1 t_j);
    // the leading i/sqrt(2 pi) makes the p1 integrand real.
    const auto integrand = [&](double p1) {
        double q = 0.0;
        for (Index j = 0; j < rule.nodes.size(); ++j)
            q += rule.weights[j] * rule.nodes[j] * std::sin(root2 * lambda * p1 * rule.nodes[j]);
        return -2.0 / std::sqrt(2.0 * std::numbers::pi) * q;
    };

    const double raw = integrate(integrand, 0.0, window.width, simpson_tol);
    // The raw phase convention lands on -1/lambda; the pipeline uses +.
    return -raw;
}

double ideal_inverse_filter(double lambda, StepWindow window) {
    const double l2 = window.width * window.width;
    return -std::expm1(-0.5 * l2 * (lambda * lambda));
}

double detection_filter(double lambda, StepWindow window, DetectionNoise noise) {
    if (lambda == 0.0) throw NumericError("detection filter undefined at lambda = 0");
    const double e2 = noise.eps_q * noise.eps_q;
    const double e4 = e2 * e2;
    const double l2 = window.width * window.width;
    // Same expression shape as the ideal filter so eps_q = 0 reduces to it
    // bit for bit.
    const double shifted = (lambda * lambda + e2 + e4) / (1.0 + e2);
    const double numer = -std::expm1(-0.5 * l2 * shifted);
    const double denom = 1.0 + (e2 + e4) / std::abs(lambda);
    return numer / denom;
}

FilterProfile build_filter_profile(const Vector& eigenvalues, StepWindow window,
                                   DetectionNoise noise) {
    FilterProfile profile;
    profile.eigenvalues = eigenvalues;
    profile.attenuations.resize(eigenvalues.size());
    for (Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] == 0.0 || noise.eps_q == 0.0)
            profile.attenuations[i] = ideal_inverse_filter(eigenvalues[i], window);
        else
            profile.attenuations[i] = detection_filter(eigenvalues[i], window, noise);
    }
    return profile;
}

FilteredApply apply_filtered_inverse(const Matrix& eigvecs, const Vector& eigvals,
                                     const Vector& coeffs, StepWindow window,
                                     DetectionNoise noise, double floor_rel) {
    const Index n = eigvals.size();
    if (eigvecs.rows() != n || eigvecs.cols() != n || coeffs.size() != n)
        throw DimensionError("spectrum pieces disagree in size");
    const double gram_dev =
        (eigvecs.transpose() * eigvecs - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (gram_dev > 1e-10)
        throw NumericError("eigenvectors are not orthonormal (deviation " +
                           std::to_string(gram_dev) + ")");

    const double floor = floor_rel * eigvals.cwiseAbs().maxCoeff();
    FilteredApply out;
    out.solution = Vector::Zero(n);
    for (Index k = 0; k < n; ++k) {
        if (std::abs(eigvals[k]) < floor || eigvals[k] == 0.0) {
            out.dropped.push_back(k);
            continue;
        }
        const double f = noise.eps_q == 0.0
                             ? ideal_inverse_filter(eigvals[k], window)
                             : detection_filter(eigvals[k], window, noise);
        out.solution += coeffs[k] / eigvals[k] * f * eigvecs.col(k);
    }
    if (static_cast<Index>(out.dropped.size()) == n)
        throw SingularSystemError("all spectral components fall below the floor",
                                  std::numeric_limits<double>::infinity());
    return out;
}

double squeeze_shape(double lambda, const SqueezeParams& params) {
    params.validate();
    const double alpha = params.eta * (lambda * lambda + params.chi);
    if (alpha == 0.0) throw NumericError("attenuation undefined: alpha = 0");
    return std::exp(-1.0 / (alpha * alpha * params.s1 * params.s1));
}

double squeeze_attenuation(double lambda, const SqueezeParams& params) {
    const double denom = lambda * lambda + params.chi;
    if (denom == 0.0) throw NumericError("attenuation undefined at lambda = chi = 0");
    return lambda / denom * squeeze_shape(lambda, params);
}

std::array<Matrix, 3> trotter_generators(const GramMatrix& gram, double gamma) {
    if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
    const Index m = gram.size();
    Matrix g1 = Matrix::Zero(m + 1, m + 1);
    g1.topLeftCorner(m, m) = gram.entries();
    Matrix g2 = Matrix::Zero(m + 1, m + 1);
    g2.topLeftCorner(m, m) = Matrix::Identity(m, m) / gamma;
    Matrix g3 = Matrix::Zero(m + 1, m + 1);
    g3.topRightCorner(m, 1).setOnes();
    g3.bottomLeftCorner(1, m).setOnes();
    return {std::move(g1), std::move(g2), std::move(g3)};
}

namespace {

using ComplexMatrix = Eigen::MatrixXcd;

// e^{i H t} for symmetric H via its spectral decomposition.
ComplexMatrix unitary_exp(const Matrix& h, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw NumericError("symmetric eigendecomposition failed");
    const Index n = h.rows();
    Eigen::VectorXcd phases(n);
    for (Index i = 0; i < n; ++i)
        phases[i] = std::exp(std::complex<double>(0.0, es.eigenvalues()[i] * t));
    return es.eigenvectors().cast<std::complex<double>>() * phases.asDiagonal() *
           es.eigenvectors().transpose().cast<std::complex<double>>();
}

double operator_norm(const ComplexMatrix& a) {
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues()[0];
}

}  // namespace

double trotter_product_error(const GramMatrix& gram, double gamma, double t, int steps) {
    if (steps < 1) throw ConfigError("step count must be >= 1");
    if (!std::isfinite(t)) throw ConfigError("time must be finite");
    const auto gen = trotter_generators(gram, gamma);
    const Matrix m_s = gen[0] + gen[1] + gen[2];

    const ComplexMatrix exact = unitary_exp(m_s, t);
    const double dt = t / steps;
    const ComplexMatrix slice =
        unitary_exp(gen[0], dt) * unitary_exp(gen[1], dt) * unitary_exp(gen[2], dt);
    ComplexMatrix product = ComplexMatrix::Identity(m_s.rows(), m_s.cols());
    for (int k = 0; k < steps; ++k) product = slice * product;

    return operator_norm(exact - product);
}

}  // namespace hyquls
