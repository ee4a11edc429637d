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

// End-to-end verification suite. Each check prints one PASS/FAIL line; the
// process exit code is the number of failed checks.

#include "hyquls/cv_filter.hpp"
#include "hyquls/dual_qp.hpp"
#include "hyquls/hvq.hpp"
#include "hyquls/lssvm.hpp"
#include "hyquls/qsls.hpp"
#include "hyquls/runner.hpp"

#include "oracle_helpers.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hyquls;
using nlohmann::json;

namespace {

int failures = 0;

void report(int number, bool pass, const std::string& name, const std::string& detail) {
    std::printf("%s  [%2d] %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++failures;
}

struct Instance {
    Dataset data;
    KernelSpec kernel;
    double gamma;
};

// Twenty random nonsingular instances cycling M x kernel x gamma. Feature
// counts keep every Gram (and therefore every saddle system) nonsingular:
// linear needs N >= M, poly d=2 needs enough monomials, rbf is generic.
std::vector<Instance> benchmark_instances() {
    std::vector<Instance> instances;
    const Index ms[] = {8, 16, 32};
    const double gammas[] = {0.1, 1.0, 10.0};
    std::uint64_t seed = 1000;
    int produced = 0;
    for (int round = 0; produced < 20; ++round) {
        for (int kk = 0; kk < 3 && produced < 20; ++kk) {
            const Index m = ms[(round + kk) % 3];
            const double gamma = gammas[(round + 2 * kk) % 3];
            KernelSpec kernel;
            Index n;
            if (kk == 0) {
                kernel = KernelSpec::linear();
                n = m + 2;
            } else if (kk == 1) {
                kernel = KernelSpec::poly(2);
                n = 8;
            } else {
                kernel = KernelSpec::rbf(1.0);
                n = 3;
            }
            auto [scaled, rep] = scale_to_unit_ball(oracle::random_dataset(m, n, ++seed, 2.0));
            (void)rep;
            instances.push_back({std::move(scaled), kernel, gamma});
            ++produced;
        }
    }
    return instances;
}

void criterion_1_solver_equivalence(const std::vector<Instance>& instances) {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    bool pass = true;
    std::mt19937_64 rng(2);
    for (const auto& inst : instances) {
        const GramMatrix gram = gram_matrix(inst.kernel, inst.data);
        const LsSvmSolution direct =
            solve_lssvm_direct(build_saddle_system(gram, inst.gamma), inst.data.labels());
        const LsSvmSolution pls = solve_plssvm(gram, inst.gamma, inst.data.labels());
        const LsSvmModel md{direct.alpha, direct.b, inst.kernel, inst.data.features()};
        const LsSvmModel mp{pls.alpha, pls.b, inst.kernel, inst.data.features()};
        for (int p = 0; p < 50; ++p) {
            const Vector probe = oracle::random_vector(inst.data.feature_count(), rng);
            const double va = decision_value(md, probe);
            const double vb = decision_value(mp, probe);
            const double rel = std::abs(va - vb) / std::max({1.0, std::abs(va), std::abs(vb)});
            worst = std::max(worst, rel);
            if (rel > 1e-8) pass = false;
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= 5.0) pass = false;
    std::ostringstream detail;
    detail << "20 instances x 50 probes, worst rel diff " << worst << ", " << secs << " s";
    report(1, pass, "direct and kernel-space solvers agree to 1e-8", detail.str());
}

void criterion_2_integral_oracle() {
    double worst = 0.0;
    for (double lambda : {0.5, 1.0, 2.0, -0.5, -1.0, -2.0}) {
        for (double width : {1.0, 2.0, 5.0}) {
            const double closed =
                (1.0 - std::exp(-0.5 * lambda * lambda * width * width)) / lambda;
            worst = std::max(worst,
                             std::abs(quadrature_inverse(lambda, StepWindow(width)) - closed));
        }
    }
    std::ostringstream detail;
    detail << "max |quadrature - closed form| = " << worst;
    report(2, worst <= 1e-6, "window integral matches 1/lambda (1 - e^{-l^2 L^2/2})",
           detail.str());
}

void criterion_3_filter_laws() {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> log_uni(-3.0, 1.0);
    bool pass = true;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> lams(6);
        for (auto& l : lams) l = std::pow(10.0, log_uni(rng));
        std::sort(lams.rbegin(), lams.rend());
        for (double width : {0.5, 2.0, 10.0}) {
            for (double eps : {0.0, 0.1, 0.5}) {
                double prev = 1.0;
                for (double l : lams) {
                    const double f = detection_filter(l, StepWindow(width), DetectionNoise(eps));
                    if (!(f > 0.0 && f <= 1.0)) pass = false;
                    if (f > prev + 1e-15) pass = false;
                    prev = f;
                }
                if (eps == 0.0) {
                    for (double l : lams)
                        if (detection_filter(l, StepWindow(width), DetectionNoise(0.0)) !=
                            ideal_inverse_filter(l, StepWindow(width)))
                            pass = false;
                }
            }
        }
    }
    report(3, pass, "attenuation chain is monotone, in (0,1], and exact at eps_q = 0",
           "1000 sorted spectra x 9 (L, eps_q) pairs");
}

void criterion_4_hvq_oracle() {
    bool pass = true;
    double worst_rel = 0.0;
    int label_misses = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Dataset d = Dataset::generate_blobs(20, 2, 6.0, seed);
        const KernelSpec kernel = KernelSpec::rbf(1.0);
        const double gamma = 1.0;
        const GramMatrix gram = gram_matrix(kernel, d);
        const SaddleSystem system = build_saddle_system(gram, gamma);
        const LsSvmSolution classical = solve_lssvm_direct(system, d.labels());
        const LsSvmModel model{classical.alpha, classical.b, kernel, d.features()};
        HvqConfig config;  // default window 10/min|lambda|, eps_q = 0, exact
        const HvqSolution sol = hvq_solve(system, d.labels(), config);
        for (Index i = 0; i < d.sample_count(); ++i) {
            const Vector probe = d.features().row(i).transpose();
            const double cv = decision_value(model, probe);
            const HvqDecision dec = hvq_decide(sol, d, kernel, probe, config);
            const double rel = std::abs(dec.value - cv) / std::max(1.0, std::abs(cv));
            worst_rel = std::max(worst_rel, rel);
            if (rel > 1e-6) pass = false;
            if (dec.label != sign_label(cv)) {
                ++label_misses;
                pass = false;
            }
        }
    }
    std::ostringstream detail;
    detail << "10 blob sets x 40 points, worst rel diff " << worst_rel << ", "
           << label_misses << " label misses";
    report(4, pass, "exact-mode pipeline reproduces the classical decision function",
           detail.str());
}

void criterion_5_shot_noise() {
    Vector a = Vector::Unit(3, 0);
    Vector b(3);
    b << 0.5, std::sqrt(0.75), 0.0;
    std::vector<double> log_shots, log_stderr;
    for (long shots : {100L, 1000L, 10000L, 100000L}) {
        double mean = 0.0, sq = 0.0;
        const int seeds = 100;
        for (int s = 0; s < seeds; ++s) {
            const double est = swap_test_inner(a, b, shots, 7000 + s);
            mean += est;
            sq += est * est;
        }
        mean /= seeds;
        const double var = sq / seeds - mean * mean;
        log_shots.push_back(std::log10(static_cast<double>(shots)));
        log_stderr.push_back(0.5 * std::log10(std::max(var, 1e-300)));
    }
    // Least-squares slope.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(log_shots.size());
    for (int i = 0; i < n; ++i) {
        sx += log_shots[i];
        sy += log_stderr[i];
        sxx += log_shots[i] * log_shots[i];
        sxy += log_shots[i] * log_stderr[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    std::ostringstream detail;
    detail << "log-log slope " << slope;
    report(5, std::abs(slope + 0.5) <= 0.1, "swap-test error scales as shots^{-1/2}",
           detail.str());
}

void criterion_6_full_rank_equality(const std::vector<Instance>& instances) {
    bool pass = true;
    double worst = 0.0;
    std::mt19937_64 rng(6);
    for (const auto& inst : instances) {
        const GramMatrix gram = gram_matrix(inst.kernel, inst.data);
        const LsSvmSolution pls = solve_plssvm(gram, inst.gamma, inst.data.labels());
        const LsSvmModel model{pls.alpha, pls.b, inst.kernel, inst.data.features()};
        SpectrumModel spectrum = kernel_spectrum(gram);
        spectrum.retained = spectrum.rank;
        const CompressedProblem cp =
            project_components(spectrum, inst.data.labels(), std::nullopt, 0);
        const SparseSolution sol = solve_compressed(cp, inst.gamma);
        if (std::abs(sol.b - pls.b) > 1e-8 * std::max(1.0, std::abs(pls.b))) pass = false;
        for (int p = 0; p < 50; ++p) {
            const Vector probe = oracle::random_vector(inst.data.feature_count(), rng);
            const Vector kvec = kernel_row(inst.kernel, inst.data, probe);
            const double vq = qsls_decision(spectrum, sol, kvec).value;
            const double vc = decision_value(model, probe);
            const double rel = std::abs(vq - vc) / std::max({1.0, std::abs(vq), std::abs(vc)});
            worst = std::max(worst, rel);
            if (rel > 1e-8) pass = false;
        }
    }
    std::ostringstream detail;
    detail << "worst rel diff " << worst << " (bias equality included)";
    report(6, pass, "full-spectrum compressed solve equals the kernel-space solver",
           detail.str());
}

void criterion_7_bound_dominance(const std::vector<Instance>& instances) {
    // The bound is computed exactly as specified. The final inequality step
    // behind it rescales a signed sum by sigma_{T+1}, which is not a valid
    // upper bound when terms cancel; this check is expected to report
    // violations and is kept honest rather than weakened.
    int checks = 0, violations = 0, equality_step_violations = 0;
    std::mt19937_64 rng(7);
    for (const auto& inst : instances) {
        const GramMatrix gram = gram_matrix(inst.kernel, inst.data);
        const SpectrumModel spectrum = kernel_spectrum(gram);
        const Index r = spectrum.rank;
        SpectrumModel full = spectrum;
        full.retained = r;
        const CompressedProblem cp_full =
            project_components(full, inst.data.labels(), std::nullopt, 0);
        const SparseSolution sol_full = solve_compressed(cp_full, inst.gamma);
        for (Index t : {r - 1, r - 2, (r + 1) / 2}) {
            if (t < 1 || t >= r) continue;
            SpectrumModel trunc = spectrum;
            trunc.retained = t;
            const CompressedProblem cp =
                project_components(trunc, inst.data.labels(), std::nullopt, 0);
            const SparseSolution sol = solve_compressed(cp, inst.gamma);
            for (int p = 0; p < 20; ++p) {
                const Vector probe = oracle::random_vector(inst.data.feature_count(), rng);
                const Vector kvec = kernel_row(inst.kernel, inst.data, probe);
                const double g_full = qsls_decision(full, sol_full, kvec).value;
                const double g_trunc = qsls_decision(trunc, sol, kvec).value;
                const double measured = std::abs(g_full - g_trunc);
                const double bound =
                    truncation_error_bound(spectrum, sol_full.alpha_rot, kvec, t);
                ++checks;
                if (measured > bound + 1e-12) ++violations;

                // Diagnostic: even the signed-sum identity the bound descends
                // from exceeds the bound once terms cancel.
                double eq = 0.0;
                for (Index i = t; i < r; ++i) {
                    const double si = spectrum.sigma(i);
                    eq += sol_full.alpha_rot[i] *
                          si *
                          (spectrum.eigenvectors.col(i).dot(kvec) / si +
                           si * spectrum.eigenvectors.col(i).sum());
                }
                if (std::abs(eq) > bound + 1e-12) ++equality_step_violations;
            }
        }
    }
    std::ostringstream detail;
    detail << violations << "/" << checks
           << " probes exceed the bound (signed-sum step alone fails on "
           << equality_step_violations << "); sigma_{T+1} |sum c_i| is not an upper "
           << "bound for |sum sigma_i c_i| under cancellation";
    report(7, violations == 0, "truncation bound dominates the measured decision error",
           detail.str());
}

void criterion_8_rbf_approximation() {
    auto [scaled, rep] = scale_to_unit_ball(oracle::random_dataset(20, 2, 88, 2.0));
    (void)rep;
    const GramMatrix exact = gram_matrix(KernelSpec::rbf(1.0), scaled);
    const auto max_err = [&](long k) {
        const GramMatrix approx = gram_matrix(KernelSpec::rbf_approx(1.0, k), scaled);
        return (approx.entries() - exact.entries()).cwiseAbs().maxCoeff();
    };
    bool pass = true;
    double prev = 1e300;
    std::ostringstream detail;
    for (long k : {1L, 10L, 100L, 1000L}) {
        const double err = max_err(k);
        detail << "k=" << k << ":" << err << " ";
        if (err > prev + 1e-15) pass = false;
        prev = err;
    }
    for (double delta : {0.1, 0.02}) {
        const long k = rbf_order_for_accuracy(delta, 1.0);
        const double err = max_err(k);
        detail << "| delta=" << delta << " -> k=" << k << ", err=" << err;
        if (!(err < delta)) pass = false;
        detail << " ";
    }
    report(8, pass, "finite-order Gram error is monotone in k and meets the order rule",
           detail.str());
}

void criterion_9_trotter() {
    const Dataset d = oracle::random_dataset(4, 2, 5);
    const GramMatrix gram = gram_matrix(KernelSpec::rbf(1.0), d);
    const double gamma = 2.0;

    const auto gen = trotter_generators(gram, gamma);
    const Matrix m_s = build_saddle_system(gram, gamma).m_s;
    bool pass = ((gen[0] + gen[1] + gen[2]) - m_s).cwiseAbs().maxCoeff() == 0.0;

    // Band [0.40, 0.60] frozen from the pre-registered oracle run on this
    // instance: measured ratios {0.499980, 0.499995, 0.499999}.
    std::ostringstream detail;
    detail << "assembly exact; ratios";
    for (int n : {8, 16, 32}) {
        const double ratio = trotter_product_error(gram, gamma, 0.1, 2 * n) /
                             trotter_product_error(gram, gamma, 0.1, n);
        detail << " " << ratio;
        if (!(ratio > 0.40 && ratio < 0.60)) pass = false;
    }
    report(9, pass, "generators assemble exactly; halving matches the first-order rate",
           detail.str());
}

void criterion_10_qp_cross_check() {
    bool pass = true;
    std::ostringstream detail;
    double worst_gap = 0.0, worst_rotation = 0.0, worst_kkt = 0.0;
    std::mt19937_64 rng(10);

    for (int inst = 0; inst < 10; ++inst) {
        const Index m = 2 + (inst % 3);
        const double gamma = (inst % 2 == 0) ? 0.1 : 1.0;
        const Dataset d = oracle::random_dataset(m, 2, 7000 + inst);
        const GramMatrix g = gram_matrix(KernelSpec::rbf(1.0), d);
        const SpectrumModel s = kernel_spectrum(g);

        for (EqualityForm form : {EqualityForm::sum_alpha, EqualityForm::sum_alpha_y}) {
            const DualQp qp = build_dual(g, d.labels(), gamma, form);
            const QpSolution sol = solve_qp_projected_gradient(qp, 1e-9, 200000);
            // Exhaustive search at pitch gamma/400 (200 subdivisions of the box).
            double grid_best = qp.objective(Vector::Zero(m));
            {
                const Vector lo = qp.box_lower(), hi = qp.box_upper();
                const Vector a = qp.equality_normal();
                std::vector<int> idx(m - 1, 0);
                Vector alpha = Vector::Zero(m);
                while (true) {
                    double partial = 0.0;
                    for (Index i = 0; i + 1 < m; ++i) {
                        alpha[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / 200.0;
                        partial += a[i] * alpha[i];
                    }
                    const double last = -partial / a[m - 1];
                    if (last >= lo[m - 1] - 1e-12 && last <= hi[m - 1] + 1e-12) {
                        alpha[m - 1] = last;
                        grid_best = std::max(grid_best, qp.objective(alpha));
                    }
                    Index carry = 0;
                    while (carry + 1 < m) {
                        if (++idx[carry] <= 200) break;
                        idx[carry] = 0;
                        ++carry;
                    }
                    if (carry + 1 >= m) break;
                }
            }
            worst_gap = std::max(worst_gap, grid_best - sol.objective);
            if (sol.objective < grid_best - 1e-6) pass = false;
            worst_kkt = std::max(worst_kkt, sol.kkt_residual);
            if (sol.kkt_residual > 1e-6) pass = false;

            // Rotation invariance of the boxless objective.
            const RotatedQp rot = rotate_dual(qp, s);
            for (int trial = 0; trial < 100; ++trial) {
                const Vector alpha = oracle::random_vector(m, rng);
                const double d1 = qp.objective(alpha);
                const double d2 = rot.objective(s.eigenvectors.transpose() * alpha);
                worst_rotation = std::max(worst_rotation, std::abs(d1 - d2));
                if (std::abs(d1 - d2) > 1e-10) pass = false;
            }
        }
    }
    detail << "worst grid gap " << worst_gap << ", worst rotation diff " << worst_rotation
           << ", worst KKT " << worst_kkt;
    report(10, pass, "projected gradient beats grid search; objectives rotate exactly",
           detail.str());
}

void criterion_11_cli_determinism() {
#ifndef HYQULS_CLI_PATH
    report(11, false, "CLI determinism", "binary path not configured");
#else
    const std::string cli = HYQULS_CLI_PATH;
    const std::string cfg_path = "/tmp/hyquls_acceptance_cfg.json";
    const std::string out1 = "/tmp/hyquls_acceptance_r1.json";
    const std::string out2 = "/tmp/hyquls_acceptance_r2.json";
    {
        json cfg;
        cfg["dataset"] = {{"kind", "blobs"}, {"m_per_class", 8}, {"n", 2},
                          {"separation", 6.0}, {"seed", 5}};
        cfg["kernel"] = {{"kind", "rbf"}, {"omega", 1.0}};
        cfg["gamma"] = 1.0;
        cfg["algorithm"] = "compare";
        cfg["probes"] = {{"kind", "random"}, {"count", 7}};
        cfg["seed"] = 99;
        cfg["hvq"] = {{"shots", 2000}};
        std::ofstream(cfg_path) << cfg.dump(2);
    }
    const auto run_cli = [&](const std::string& out) {
        const std::string cmd = "\"" + cli + "\" train --config " + cfg_path + " --out " + out;
        return std::system(cmd.c_str());
    };
    bool pass = run_cli(out1) == 0 && run_cli(out2) == 0;
    std::string detail = "two runs, numeric fields compared byte-wise";
    if (pass) {
        json r1, r2;
        std::ifstream(out1) >> r1;
        std::ifstream(out2) >> r2;
        r1.erase("timing");
        r2.erase("timing");
        pass = r1.dump() == r2.dump();
        if (!pass) detail = "reports differ outside the timing subtree";
    } else {
        detail = "CLI invocation failed";
    }
    std::remove(cfg_path.c_str());
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    report(11, pass, "repeated CLI runs are byte-identical outside timing", detail);
#endif
}

}  // namespace

int main() {
    std::printf("acceptance suite (%s)\n", kVersion);
    const auto instances = benchmark_instances();
    criterion_1_solver_equivalence(instances);
    criterion_2_integral_oracle();
    criterion_3_filter_laws();
    criterion_4_hvq_oracle();
    criterion_5_shot_noise();
    criterion_6_full_rank_equality(instances);
    criterion_7_bound_dominance(instances);
    criterion_8_rbf_approximation();
    criterion_9_trotter();
    criterion_10_qp_cross_check();
    criterion_11_cli_determinism();
    std::printf("%d/11 checks passed\n", 11 - failures);
    return failures;
}
