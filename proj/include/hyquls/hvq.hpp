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
#include "hyquls/cv_filter.hpp"
#include "hyquls/dataset.hpp"
#include "hyquls/kernel.hpp"
#include "hyquls/lssvm.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hyquls {

/// Hybrid-variable pipeline settings. window_width unset means
/// 10 / min|lambda(M_s)|, which keeps every spectral component within
/// e^{-50} of unattenuated.
struct HvqConfig {
    std::optional<double> window_width;  ///< L
    double eps_q = 0.0;
    std::optional<long> shots;  ///< empty = exact expectation values
    std::uint64_t seed = 0;
};

/// Positive scale factors that state normalization strips along the pipeline;
/// carrying them restores honest decision values, not just their signs.
struct NormLedger {
    double ys_norm = 1.0;               ///< |(y, 0)| = sqrt(M) for +-1 labels
    std::vector<double> feature_norms;  ///< probe/kernel-row norms used in decisions
    std::vector<double> dropped_scales;

    void check() const;  ///< all entries must be > 0
};

/// Unit-norm encoding of (y, 0); the stripped norm goes to the ledger.
Vector encode_ys(const Vector& labels, NormLedger& ledger);

struct HvqSolution {
    Vector alpha_s;               ///< length M+1; last entry plays the bias role
    NormLedger ledger;
    Vector spectral_coeffs;       ///< c_k in the eigenbasis of M_s
    FilterProfile profile;        ///< (lambda_k, F(lambda_k))
    std::vector<Index> dropped;   ///< components under the spectral floor
    double window_width = 0.0;    ///< resolved L
};

/// Spectrally applies the filtered inverse of M_s to the encoded labels and
/// rescales by the ledger; with the filter pinned at 1 this reproduces the
/// classical solution of the saddle system exactly.
HvqSolution hvq_solve(const SaddleSystem& system, const Vector& labels,
                      const HvqConfig& config);

/// Swap-test estimate of Re<a|b> for unit vectors. Exact mode returns the
/// inner product; sampled mode draws `shots` Bernoulli outcomes with
/// P(+) = (1 + Re<a|b>)/2 and returns 2 (fraction of +) - 1.
double swap_test_inner(const Vector& a, const Vector& b, std::optional<long> shots,
                       std::uint64_t seed);

struct HvqDecision {
    double value = 0.0;
    int label = +1;
};

/// Decision value sum_i alpha_s[i] K(x_i, xhat) + alpha_s[M], evaluated as a
/// (possibly sampled) inner product with ledger-restored scales.
HvqDecision hvq_decide(const HvqSolution& solution, const Dataset& dataset,
                       const KernelSpec& kernel, const Vector& xhat,
                       const HvqConfig& config, NormLedger* ledger = nullptr);

/// End-to-end: Gram -> saddle -> filtered spectral inverse -> decision.
HvqDecision hvq_decision(const Dataset& dataset, const KernelSpec& kernel, double gamma,
                         const HvqConfig& config, const Vector& xhat);

}  // namespace hyquls
