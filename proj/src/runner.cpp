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

#include "hyquls/runner.hpp"

#include "hyquls/lssvm.hpp"
#include "hyquls/qsls.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace hyquls {

using nlohmann::json;

Algorithm algorithm_from_string(const std::string& name) {
    if (name == "classical") return Algorithm::classical;
    if (name == "plssvm") return Algorithm::plssvm;
    if (name == "hvq") return Algorithm::hvq;
    if (name == "qsls") return Algorithm::qsls;
    if (name == "dual") return Algorithm::dual;
    if (name == "dual-rotated") return Algorithm::dual_rotated;
    if (name == "compare") return Algorithm::compare;
    throw ConfigError("unknown algorithm: " + name);
}

std::string algorithm_to_string(Algorithm algo) {
    switch (algo) {
        case Algorithm::classical: return "classical";
        case Algorithm::plssvm: return "plssvm";
        case Algorithm::hvq: return "hvq";
        case Algorithm::qsls: return "qsls";
        case Algorithm::dual: return "dual";
        case Algorithm::dual_rotated: return "dual-rotated";
        case Algorithm::compare: return "compare";
    }
    throw ConfigError("unreachable algorithm");
}

namespace {

Vector json_to_vector(const json& j) {
    Vector v(j.size());
    Index i = 0;
    for (const auto& x : j) v[i++] = x.get<double>();
    return v;
}

json vector_to_json(const Vector& v) {
    json j = json::array();
    for (Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
    return j;
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    try {
        const json& ds = j.at("dataset");
        const std::string kind = ds.at("kind").get<std::string>();
        if (kind == "csv") {
            config.dataset.kind = DatasetSpec::Kind::csv;
            config.dataset.path = ds.at("path").get<std::string>();
            if (ds.contains("label_column") && !ds["label_column"].is_null())
                config.dataset.label_column = ds["label_column"].get<Index>();
        } else if (kind == "blobs") {
            config.dataset.kind = DatasetSpec::Kind::blobs;
            config.dataset.m_per_class = ds.at("m_per_class").get<Index>();
            config.dataset.n = ds.at("n").get<Index>();
            config.dataset.separation = ds.at("separation").get<double>();
            config.dataset.seed = ds.value("seed", 0ULL);
        } else {
            throw ConfigError("dataset.kind must be csv or blobs");
        }

        config.scale_unit_ball = j.value("scale_to_unit_ball", true);
        config.kernel = KernelSpec::from_json(j.at("kernel").dump());
        config.gamma = j.at("gamma").get<double>();
        config.algorithm = algorithm_from_string(j.value("algorithm", "classical"));
        config.seed = j.value("seed", 0ULL);

        if (j.contains("hvq")) {
            const json& h = j["hvq"];
            if (h.contains("window") && !h["window"].is_null())
                config.hvq.window_width = h["window"].get<double>();
            config.hvq.eps_q = h.value("eps_q", 0.0);
            if (h.contains("shots") && !h["shots"].is_null())
                config.hvq.shots = h["shots"].get<long>();
        }
        if (j.contains("qsls")) {
            const json& q = j["qsls"];
            config.qsls.tau = q.value("tau", 0.0);
            if (q.contains("t_max") && !q["t_max"].is_null())
                config.qsls.t_max = q["t_max"].get<Index>();
            if (q.contains("shots") && !q["shots"].is_null())
                config.qsls.shots = q["shots"].get<long>();
        }
        if (j.contains("dual")) {
            const json& d = j["dual"];
            const std::string form = d.value("form", "printed");
            if (form == "printed")
                config.dual.form = EqualityForm::sum_alpha;
            else if (form == "standard")
                config.dual.form = EqualityForm::sum_alpha_y;
            else
                throw ConfigError("dual.form must be printed or standard");
            config.dual.tol = d.value("tol", 1e-8);
            config.dual.max_iters = d.value("max_iters", 200000);
        }
        if (j.contains("probes")) {
            const json& p = j["probes"];
            const std::string pkind = p.at("kind").get<std::string>();
            if (pkind == "training") {
                config.probes.kind = ProbeSpec::Kind::training;
            } else if (pkind == "random") {
                config.probes.kind = ProbeSpec::Kind::random;
                config.probes.count = p.value("count", 10);
            } else if (pkind == "explicit") {
                config.probes.kind = ProbeSpec::Kind::explicit_points;
                for (const auto& pt : p.at("points")) config.probes.points.push_back(json_to_vector(pt));
            } else {
                throw ConfigError("probes.kind must be training, random or explicit");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    config.kernel.validate();
    if (!(config.gamma > 0.0)) throw ConfigError("gamma must be > 0");
    return config;
}

json config_to_json(const ExperimentConfig& config) {
    json j;
    if (config.dataset.kind == DatasetSpec::Kind::csv) {
        j["dataset"]["kind"] = "csv";
        j["dataset"]["path"] = config.dataset.path;
        if (config.dataset.label_column)
            j["dataset"]["label_column"] = *config.dataset.label_column;
    } else {
        j["dataset"]["kind"] = "blobs";
        j["dataset"]["m_per_class"] = config.dataset.m_per_class;
        j["dataset"]["n"] = config.dataset.n;
        j["dataset"]["separation"] = config.dataset.separation;
        j["dataset"]["seed"] = config.dataset.seed;
    }
    j["scale_to_unit_ball"] = config.scale_unit_ball;
    j["kernel"] = json::parse(config.kernel.to_json());
    j["gamma"] = config.gamma;
    j["algorithm"] = algorithm_to_string(config.algorithm);
    j["seed"] = config.seed;
    if (config.hvq.window_width) j["hvq"]["window"] = *config.hvq.window_width;
    j["hvq"]["eps_q"] = config.hvq.eps_q;
    if (config.hvq.shots) j["hvq"]["shots"] = *config.hvq.shots;
    j["qsls"]["tau"] = config.qsls.tau;
    if (config.qsls.t_max) j["qsls"]["t_max"] = *config.qsls.t_max;
    if (config.qsls.shots) j["qsls"]["shots"] = *config.qsls.shots;
    j["dual"]["form"] = config.dual.form == EqualityForm::sum_alpha ? "printed" : "standard";
    j["dual"]["tol"] = config.dual.tol;
    j["dual"]["max_iters"] = config.dual.max_iters;
    switch (config.probes.kind) {
        case ProbeSpec::Kind::training: j["probes"]["kind"] = "training"; break;
        case ProbeSpec::Kind::random:
            j["probes"]["kind"] = "random";
            j["probes"]["count"] = config.probes.count;
            break;
        case ProbeSpec::Kind::explicit_points: {
            j["probes"]["kind"] = "explicit";
            json pts = json::array();
            for (const auto& p : config.probes.points) pts.push_back(vector_to_json(p));
            j["probes"]["points"] = std::move(pts);
            break;
        }
    }
    return j;
}

Dataset load_dataset(const DatasetSpec& spec) {
    if (spec.kind == DatasetSpec::Kind::csv)
        return Dataset::load_csv(spec.path, spec.label_column);
    return Dataset::generate_blobs(spec.m_per_class, spec.n, spec.separation, spec.seed);
}

std::string file_content_hash(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file for hashing: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<Vector> resolve_probes(const ExperimentConfig& config, const Dataset& data) {
    std::vector<Vector> probes;
    switch (config.probes.kind) {
        case ProbeSpec::Kind::training:
            for (Index i = 0; i < data.sample_count(); ++i)
                probes.push_back(data.features().row(i).transpose());
            break;
        case ProbeSpec::Kind::random: {
            std::mt19937_64 rng(derive_seed(config.seed, "probes"));
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (Index p = 0; p < config.probes.count; ++p) {
                Vector v(data.feature_count());
                for (Index j = 0; j < v.size(); ++j) v[j] = gauss(rng);
                probes.push_back(std::move(v));
            }
            break;
        }
        case ProbeSpec::Kind::explicit_points:
            for (const auto& p : config.probes.points) {
                if (p.size() != data.feature_count())
                    throw ConfigError("explicit probe has wrong dimension");
                probes.push_back(p);
            }
            break;
    }
    return probes;
}

json classical_section(const ExperimentConfig& config, const Dataset& data,
                       const GramMatrix& gram, ClassicalSolver which,
                       const std::vector<Vector>& probes, LsSvmModel* model_out) {
    LsSvmSolution sol;
    if (which == ClassicalSolver::direct)
        sol = solve_lssvm_direct(build_saddle_system(gram, config.gamma), data.labels());
    else
        sol = solve_plssvm(gram, config.gamma, data.labels());

    LsSvmModel model{sol.alpha, sol.b, config.kernel, data.features()};

    json section;
    section["alpha"] = vector_to_json(sol.alpha);
    section["b"] = sol.b;
    section["residual"] = sol.residual;
    section["condition"] = sol.condition;
    json values = json::array();
    json labels = json::array();
    std::vector<double> vals(probes.size());
    parallel_for(static_cast<Index>(probes.size()), [&](Index p) {
        vals[static_cast<std::size_t>(p)] = decision_value(model, probes[p]);
    });
    for (double v : vals) {
        values.push_back(v);
        labels.push_back(sign_label(v));
    }
    section["values"] = std::move(values);
    section["labels"] = std::move(labels);
    if (model_out) *model_out = std::move(model);
    return section;
}

json hvq_section(const ExperimentConfig& config, const Dataset& data,
                 const GramMatrix& gram, const std::vector<Vector>& probes) {
    HvqConfig hvq_config = config.hvq;
    hvq_config.seed = derive_seed(config.seed, "hvq");
    const SaddleSystem system = build_saddle_system(gram, config.gamma);
    const HvqSolution solution = hvq_solve(system, data.labels(), hvq_config);

    json section;
    section["window"] = solution.window_width;
    section["eps_q"] = hvq_config.eps_q;
    section["alpha_s"] = vector_to_json(solution.alpha_s);
    json table = json::array();
    for (Index k = 0; k < solution.profile.eigenvalues.size(); ++k) {
        table.push_back({{"lambda", solution.profile.eigenvalues[k]},
                         {"c", solution.spectral_coeffs[k]},
                         {"f_hat", solution.profile.attenuations[k]}});
    }
    section["spectral_table"] = std::move(table);
    json dropped = json::array();
    for (Index d : solution.dropped) dropped.push_back(d);
    section["dropped"] = std::move(dropped);

    std::vector<double> vals(probes.size());
    parallel_for(static_cast<Index>(probes.size()), [&](Index p) {
        HvqConfig probe_config = hvq_config;
        probe_config.seed = derive_seed(hvq_config.seed, "probe." + std::to_string(p));
        vals[static_cast<std::size_t>(p)] =
            hvq_decide(solution, data, config.kernel, probes[p], probe_config).value;
    });
    json values = json::array();
    json labels = json::array();
    for (double v : vals) {
        values.push_back(v);
        labels.push_back(sign_label(v));
    }
    section["values"] = std::move(values);
    section["labels"] = std::move(labels);
    return section;
}

json qsls_section(const ExperimentConfig& config, const Dataset& data,
                  const GramMatrix& gram, const std::vector<Vector>& probes) {
    const SpectrumModel spectrum =
        kernel_spectrum(gram, config.qsls.tau, config.qsls.t_max);
    const CompressedProblem cp = project_components(
        spectrum, data.labels(), config.qsls.shots, derive_seed(config.seed, "qsls"));
    const SparseSolution sol = solve_compressed(cp, config.gamma);

    // The truncation bound needs the full-rank rotated solution as well.
    SpectrumModel full = spectrum;
    full.retained = full.rank;
    const CompressedProblem cp_full =
        project_components(full, data.labels(), std::nullopt, 0);
    const SparseSolution sol_full = solve_compressed(cp_full, config.gamma);

    json section;
    section["R"] = spectrum.rank;
    section["T"] = spectrum.retained;
    section["tau"] = spectrum.tau;
    section["component_repetitions"] = spectrum.retained;
    section["b"] = sol.b;
    section["alpha_rot"] = vector_to_json(sol.alpha_rot);
    json table = json::array();
    for (Index i = 0; i < spectrum.retained; ++i) {
        table.push_back({{"sigma", spectrum.sigma(i)},
                         {"u_dot_y", cp.y_rot[i]},
                         {"u_dot_ones", cp.ones_rot[i]}});
    }
    section["spectral_table"] = std::move(table);

    std::vector<double> vals(probes.size());
    std::vector<double> bounds(probes.size());
    parallel_for(static_cast<Index>(probes.size()), [&](Index p) {
        const Vector kvec = kernel_row(config.kernel, data, probes[p]);
        vals[static_cast<std::size_t>(p)] = qsls_decision(spectrum, sol, kvec).value;
        bounds[static_cast<std::size_t>(p)] =
            truncation_error_bound(spectrum, sol_full.alpha_rot, kvec, spectrum.retained);
    });
    json values = json::array();
    json labels = json::array();
    json bound_list = json::array();
    for (std::size_t p = 0; p < probes.size(); ++p) {
        values.push_back(vals[p]);
        labels.push_back(sign_label(vals[p]));
        bound_list.push_back(bounds[p]);
    }
    section["values"] = std::move(values);
    section["labels"] = std::move(labels);
    section["truncation_bounds"] = std::move(bound_list);
    return section;
}

json dual_section(const ExperimentConfig& config, const Dataset& data,
                  const GramMatrix& gram, bool rotated) {
    json section;
    if (!rotated) {
        const DualQp qp = build_dual(gram, data.labels(), config.gamma, config.dual.form);
        const QpSolution sol =
            solve_qp_projected_gradient(qp, config.dual.tol, config.dual.max_iters);
        section["alpha"] = vector_to_json(sol.alpha);
        section["objective"] = sol.objective;
        section["b"] = sol.b;
        section["b_from_average"] = sol.b_from_average;
        section["kkt_residual"] = sol.kkt_residual;
        section["converged"] = sol.converged;
        section["iterations"] = sol.iterations;
        section["projected_gradient_norm"] = sol.projected_gradient_norm;
        section["feasible_set"] =
            config.dual.form == EqualityForm::sum_alpha ? "printed" : "standard";
    } else {
        const SpectrumModel spectrum = kernel_spectrum(gram);
        const DualQp qp = build_dual(gram, data.labels(), config.gamma, config.dual.form);
        const RotatedQp rot = rotate_dual(qp, spectrum);
        const QpSolution sol =
            solve_qp_projected_gradient(rot, config.dual.tol, config.dual.max_iters);
        section["alpha_rot"] = vector_to_json(sol.alpha);
        section["objective"] = sol.objective;
        section["converged"] = sol.converged;
        section["iterations"] = sol.iterations;
        section["projected_gradient_norm"] = sol.projected_gradient_norm;
        section["R"] = spectrum.rank;
        section["feasible_set"] = "rotated-componentwise";
    }
    return section;
}

}  // namespace

json run(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    Dataset raw = load_dataset(config.dataset);
    json scaling_info;
    Dataset data = [&] {
        if (!config.scale_unit_ball) {
            scaling_info["applied"] = false;
            return raw;
        }
        auto [scaled, report] = scale_to_unit_ball(raw);
        scaling_info["applied"] = true;
        scaling_info["scale"] = report.scale;
        scaling_info["max_row_norm"] = report.max_row_norm;
        scaling_info["degenerate"] = report.degenerate;
        return scaled;
    }();

    const GramMatrix gram = gram_matrix(config.kernel, data);
    const std::vector<Vector> probes = resolve_probes(config, data);

    json report;
    report["version"] = kVersion;
    report["config"] = config_to_json(config);
    report["dataset"] = {{"samples", data.sample_count()},
                         {"features", data.feature_count()},
                         {"scaling", scaling_info}};
    json probe_list = json::array();
    for (const auto& p : probes) probe_list.push_back(vector_to_json(p));
    report["probes"] = std::move(probe_list);

    json results;
    const auto want = [&](Algorithm a) {
        return config.algorithm == a || config.algorithm == Algorithm::compare;
    };

    LsSvmModel classical_model;
    if (want(Algorithm::classical)) {
        results["classical"] = classical_section(config, data, gram,
                                                 ClassicalSolver::direct, probes,
                                                 &classical_model);
        if (config.dataset.kind == DatasetSpec::Kind::csv) {
            json model;
            model["alpha"] = results["classical"]["alpha"];
            model["b"] = results["classical"]["b"];
            model["kernel"] = json::parse(config.kernel.to_json());
            model["dataset_path"] = config.dataset.path;
            model["dataset_hash"] = file_content_hash(config.dataset.path);
            model["scaled_to_unit_ball"] = config.scale_unit_ball;
            if (config.dataset.label_column)
                model["label_column"] = *config.dataset.label_column;
            report["model"] = std::move(model);
        }
    }
    if (want(Algorithm::plssvm) && config.algorithm != Algorithm::compare)
        results["plssvm"] =
            classical_section(config, data, gram, ClassicalSolver::plssvm, probes, nullptr);
    if (want(Algorithm::hvq)) results["hvq"] = hvq_section(config, data, gram, probes);
    if (want(Algorithm::qsls)) results["qsls"] = qsls_section(config, data, gram, probes);
    if (config.algorithm == Algorithm::dual) results["dual"] = dual_section(config, data, gram, false);
    if (config.algorithm == Algorithm::dual_rotated)
        results["dual_rotated"] = dual_section(config, data, gram, true);

    if (config.algorithm == Algorithm::compare) {
        json agreement;
        const auto fraction = [&](const char* a, const char* b) {
            const auto& la = results[a]["labels"];
            const auto& lb = results[b]["labels"];
            double same = 0.0;
            double max_diff = 0.0;
            for (std::size_t i = 0; i < la.size(); ++i) {
                if (la[i] == lb[i]) same += 1.0;
                max_diff = std::max(max_diff,
                                    std::abs(results[a]["values"][i].get<double>() -
                                             results[b]["values"][i].get<double>()));
            }
            return json{{"label_agreement", la.empty() ? 1.0 : same / la.size()},
                        {"max_value_diff", max_diff}};
        };
        agreement["hvq_vs_classical"] = fraction("hvq", "classical");
        agreement["qsls_vs_classical"] = fraction("qsls", "classical");
        report["agreement"] = std::move(agreement);
    }

    report["results"] = std::move(results);
    const auto t1 = std::chrono::steady_clock::now();
    report["timing"] = {
        {"total_seconds", std::chrono::duration<double>(t1 - t0).count()}};
    return report;
}

std::string filter_scan_csv(const std::vector<double>& lambdas,
                            const std::vector<double>& windows,
                            const std::vector<double>& eps_list) {
    if (lambdas.empty() || windows.empty() || eps_list.empty())
        throw ConfigError("filter scan needs nonempty parameter lists");

    std::vector<double> ls = lambdas, ws = windows, es = eps_list;
    std::sort(ls.begin(), ls.end());
    std::sort(ws.begin(), ws.end());
    std::sort(es.begin(), es.end());

    std::ostringstream out;
    out << "lambda,L,eps_q,F_ideal,F_hat\n";
    char buf[128];
    for (double lambda : ls) {
        for (double w : ws) {
            const StepWindow window(w);
            for (double eps : es) {
                if (lambda == 0.0) {
                    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,nan,nan\n", lambda,
                                  w, eps);
                    out << buf;
                    continue;
                }
                const double ideal = ideal_inverse_filter(lambda, window);
                const double hat = detection_filter(lambda, window, DetectionNoise(eps));
                std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", lambda,
                              w, eps, ideal, hat);
                out << buf;
            }
        }
    }
    return out.str();
}

}  // namespace hyquls
