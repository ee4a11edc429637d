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

#include "hyquls/hvq.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>

namespace hyquls {

void NormLedger::check() const {
    if (!(ys_norm > 0.0)) throw NumericError("ledger holds a non-positive norm");
    for (double v : feature_norms)
        if (!(v > 0.0)) throw NumericError("ledger holds a non-positive norm");
    for (double v : dropped_scales)
        if (!(v > 0.0)) throw NumericError("ledger holds a non-positive norm");
}

Vector encode_ys(const Vector& labels, NormLedger& ledger) {
    Vector ys = Vector::Zero(labels.size() + 1);
    ys.head(labels.size()) = labels;
    const double norm = ys.norm();
    if (norm == 0.0) throw NumericError("cannot encode an all-zero label vector");
    ledger.ys_norm = norm;
    return ys / norm;
}

HvqSolution hvq_solve(const SaddleSystem& system, const Vector& labels,
                      const HvqConfig& config) {
    if (labels.size() != system.sample_count())
        throw DimensionError("label count does not match saddle system");

    Eigen::SelfAdjointEigenSolver<Matrix> es(system.m_s);
    if (es.info() != Eigen::Success)
        throw NumericError("symmetric eigendecomposition failed");
    const Vector& lam = es.eigenvalues();
    const Matrix& u = es.eigenvectors();

    HvqSolution out;
    const Vector encoded = encode_ys(labels, out.ledger);
    out.spectral_coeffs = u.transpose() * encoded;

    const double min_abs = lam.cwiseAbs().minCoeff();
    double width;
    if (config.window_width) {
        width = *config.window_width;
    } else {
        if (min_abs == 0.0)
            throw SingularSystemError("cannot pick a default window for a singular system",
                                      std::numeric_limits<double>::infinity());
        width = 10.0 / min_abs;
    }
    out.window_width = width;

    const StepWindow window(width);
    const DetectionNoise noise(config.eps_q);
    auto filtered =
        apply_filtered_inverse(u, lam, out.spectral_coeffs, window, noise);
    out.dropped = std::move(filtered.dropped);
    // Undo the encoding normalization so exact mode matches the classical
    // solve, value for value.
    out.alpha_s = out.ledger.ys_norm * filtered.solution;
    out.profile = build_filter_profile(lam, window, noise);
    return out;
}

double swap_test_inner(const Vector& a, const Vector& b, std::optional<long> shots,
                       std::uint64_t seed) {
    if (a.size() != b.size()) throw DimensionError("swap test needs equal dimensions");
    if (std::abs(a.norm() - 1.0) > 1e-10 || std::abs(b.norm() - 1.0) > 1e-10)
        throw NumericError("swap test requires unit vectors");
    const double overlap = stable_dot(a, b);
    if (!shots) return overlap;
    if (*shots < 1) throw ConfigError("shot count must be >= 1");

    const double p_plus = std::min(1.0, std::max(0.0, 0.5 * (1.0 + overlap)));
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p_plus);
    long plus = 0;
    for (long s = 0; s < *shots; ++s)
        if (coin(rng)) ++plus;
    return 2.0 * static_cast<double>(plus) / static_cast<double>(*shots) - 1.0;
}

HvqDecision hvq_decide(const HvqSolution& solution, const Dataset& dataset,
                       const KernelSpec& kernel, const Vector& xhat,
                       const HvqConfig& config, NormLedger* ledger) {
    const Index m = dataset.sample_count();
    if (solution.alpha_s.size() != m + 1)
        throw DimensionError("solution does not match dataset size");

    // Probe row of the contraction: kernel values against every sample plus
    // the bias slot.
    Vector probe(m + 1);
    probe.head(m) = kernel_row(kernel, dataset, xhat);
    probe[m] = 1.0;

    HvqDecision decision;
    if (!config.shots) {
        decision.value = stable_dot(probe, solution.alpha_s);
    } else {
        const double probe_norm = probe.norm();
        const double sol_norm = solution.alpha_s.norm();
        if (probe_norm == 0.0 || sol_norm == 0.0) {
            decision.value = 0.0;
        } else {
            const double estimate =
                swap_test_inner(probe / probe_norm, solution.alpha_s / sol_norm,
                                config.shots, derive_seed(config.seed, "hvq.swap"));
            decision.value = estimate * probe_norm * sol_norm;
        }
        if (ledger) {
            ledger->feature_norms.push_back(probe_norm);
            ledger->dropped_scales.push_back(sol_norm);
        }
    }
    decision.label = sign_label(decision.value);
    return decision;
}

HvqDecision hvq_decision(const Dataset& dataset, const KernelSpec& kernel, double gamma,
                         const HvqConfig& config, const Vector& xhat) {
    const GramMatrix gram = gram_matrix(kernel, dataset);
    const SaddleSystem system = build_saddle_system(gram, gamma);
    HvqSolution solution = hvq_solve(system, dataset.labels(), config);
    return hvq_decide(solution, dataset, kernel, xhat, config, &solution.ledger);
}

}  // namespace hyquls
