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

#include "hyquls/kernel.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <limits>

namespace hyquls {

using nlohmann::json;

KernelSpec KernelSpec::linear() { return KernelSpec{KernelKind::linear, 1, 1.0, 1}; }

KernelSpec KernelSpec::poly(int d) { return KernelSpec{KernelKind::poly, d, 1.0, 1}; }

KernelSpec KernelSpec::rbf(double omega) {
    return KernelSpec{KernelKind::rbf, 1, omega, 1};
}

KernelSpec KernelSpec::rbf_approx(double omega, long k) {
    return KernelSpec{KernelKind::rbf_approx, 1, omega, k};
}

void KernelSpec::validate() const {
    if (kind == KernelKind::poly && degree < 1) throw ConfigError("poly degree must be >= 1");
    if ((kind == KernelKind::rbf || kind == KernelKind::rbf_approx) && !(omega > 0.0))
        throw ConfigError("rbf width must be > 0");
    if (kind == KernelKind::rbf_approx && order < 1)
        throw ConfigError("rbf_approx order must be >= 1");
}

std::string KernelSpec::to_json() const {
    json j;
    switch (kind) {
        case KernelKind::linear: j["kind"] = "linear"; break;
        case KernelKind::poly:
            j["kind"] = "poly";
            j["d"] = degree;
            break;
        case KernelKind::rbf:
            j["kind"] = "rbf";
            j["omega"] = omega;
            break;
        case KernelKind::rbf_approx:
            j["kind"] = "rbf_approx";
            j["omega"] = omega;
            j["k"] = order;
            break;
    }
    return j.dump();
}

KernelSpec KernelSpec::from_json(const std::string& json_text) {
    json j = json::parse(json_text);
    const std::string kind = j.at("kind").get<std::string>();
    KernelSpec spec;
    if (kind == "linear") {
        spec = linear();
    } else if (kind == "poly") {
        spec = poly(j.at("d").get<int>());
    } else if (kind == "rbf") {
        spec = rbf(j.at("omega").get<double>());
    } else if (kind == "rbf_approx") {
        spec = rbf_approx(j.at("omega").get<double>(), j.at("k").get<long>());
    } else {
        throw ConfigError("unknown kernel kind: " + kind);
    }
    spec.validate();
    return spec;
}

GramMatrix::GramMatrix(Matrix entries) {
    if (entries.rows() != entries.cols())
        throw DimensionError("Gram matrix must be square");
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw NumericError("Gram matrix departs from symmetry beyond 1e-12");
    entries_ = 0.5 * (entries + entries.transpose());
}

double kernel_eval(const KernelSpec& spec, const Vector& x, const Vector& z) {
    if (x.size() != z.size()) throw DimensionError("kernel_eval: dimension mismatch");
    spec.validate();
    switch (spec.kind) {
        case KernelKind::linear:
            return stable_dot(x, z);
        case KernelKind::poly:
            return std::pow(stable_dot(x, z) + 1.0, spec.degree);
        case KernelKind::rbf: {
            const double d2 = (x - z).squaredNorm();
            return std::exp(-d2 / (2.0 * spec.omega * spec.omega));
        }
        case KernelKind::rbf_approx: {
            const double w2 = spec.omega * spec.omega;
            const double k = static_cast<double>(spec.order);
            const double gauss =
                std::exp(-(x.squaredNorm() + z.squaredNorm()) / (2.0 * w2));
            return gauss * std::pow(1.0 + stable_dot(x, z) / (w2 * k), spec.order);
        }
    }
    throw ConfigError("unreachable kernel kind");
}

GramMatrix gram_matrix(const KernelSpec& spec, const Dataset& dataset) {
    const Index m = dataset.sample_count();
    Matrix k(m, m);
    parallel_for(m, [&](Index i) {
        for (Index j = 0; j <= i; ++j) {
            const double v =
                kernel_eval(spec, dataset.features().row(i), dataset.features().row(j));
            k(i, j) = v;
            k(j, i) = v;
        }
    });
    return GramMatrix(std::move(k));
}

Vector kernel_row(const KernelSpec& spec, const Dataset& dataset, const Vector& xhat) {
    const Index m = dataset.sample_count();
    Vector row(m);
    for (Index i = 0; i < m; ++i)
        row[i] = kernel_eval(spec, dataset.features().row(i), xhat);
    return row;
}

FeatureState poly_feature_state(const Vector& x, int d) {
    if (d < 1) throw ConfigError("poly order must be >= 1");
    Vector base(x.size() + 1);
    base << x, 1.0;
    FeatureState state;
    state.base = std::move(base);
    state.tensor_order = d;
    state.register_scale = 1.0;
    state.amp_scale = 1.0;
    state.norm_factor = std::pow(state.base.squaredNorm(), d);
    return state;
}

FeatureState rbf_feature_state(const Vector& x, double omega, long k) {
    if (!(omega > 0.0)) throw ConfigError("rbf width must be > 0");
    if (k < 1) throw ConfigError("tensor order must be >= 1");
    const double w2k = omega * omega * static_cast<double>(k);
    Vector base(x.size() + 1);
    base << x, std::sqrt(w2k);
    FeatureState state;
    state.base = std::move(base);
    state.tensor_order = k;
    state.register_scale = std::sqrt(w2k);
    state.amp_scale = std::exp(-x.squaredNorm() / (2.0 * omega * omega));
    state.norm_factor = std::pow((x.squaredNorm() + w2k) / w2k, static_cast<double>(k));
    return state;
}

double unit_inner(const FeatureState& a, const FeatureState& b) {
    if (a.base.size() != b.base.size())
        throw DimensionError("feature states live in different register spaces");
    if (a.tensor_order != b.tensor_order)
        throw DimensionError("feature states have different tensor orders");
    const double cosine = stable_dot(a.base, b.base) / (a.base.norm() * b.base.norm());
    // |cosine| <= 1 up to rounding; clamp so the power stays in [-1, 1].
    const double clamped = std::min(1.0, std::max(-1.0, cosine));
    return std::pow(clamped, static_cast<double>(a.tensor_order));
}

double scaled_inner(const FeatureState& a, const FeatureState& b) {
    return a.amp_scale * b.amp_scale * unit_inner(a, b) *
           std::sqrt(a.norm_factor * b.norm_factor);
}

long rbf_order_for_accuracy(double delta, double s_max, long cap) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("accuracy must be in (0,1)");
    if (!(s_max >= 0.0) || !(s_max <= 1.0))
        throw ConfigError("s_max must lie in [0,1]; scale inputs first");

    // Worst case over |s| <= s_max sits at the interval extremes, and the
    // error there decreases monotonically in k, so bisection applies.
    const auto bound = [&](long k) {
        const double kd = static_cast<double>(k);
        const double hi = std::abs(std::exp(s_max) - std::pow(1.0 + s_max / kd, kd));
        const double lo = std::abs(std::exp(-s_max) - std::pow(1.0 - s_max / kd, kd));
        return std::max(hi, lo);
    };

    if (s_max == 0.0) return 1;
    if (bound(1) < delta) return 1;
    if (bound(cap) >= delta)
        throw NumericError("accuracy unreachable: bound at order cap " +
                           std::to_string(cap) + " is " + std::to_string(bound(cap)));
    long lo = 1, hi = cap;  // bound(lo) >= delta > bound(hi)
    while (hi - lo > 1) {
        const long mid = lo + (hi - lo) / 2;
        if (bound(mid) < delta)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

Matrix dataset_state_gram_check(const Matrix& features, double omega, long k) {
    if (!(omega > 0.0)) throw ConfigError("rbf width must be > 0");
    if (k < 1) throw ConfigError("tensor order must be >= 1");
    const Index m = features.rows();
    const Index reg_dim = features.cols() + 1;
    double tensor_dim = 1.0;
    for (long r = 0; r < k; ++r) {
        tensor_dim *= static_cast<double>(reg_dim);
        if (tensor_dim * static_cast<double>(m) > 1e6)
            throw ConfigError("tensor register too large: (N+1)^k * M exceeds 1e6");
    }
    const Index cols = static_cast<Index>(tensor_dim);

    // Row i holds the flattened k-fold tensor power of x_i' / (w sqrt(k)),
    // scaled by the sample's Gaussian prefactor.
    Matrix amps(m, cols);
    const double w2k = omega * omega * static_cast<double>(k);
    const double reg_scale = std::sqrt(w2k);
    for (Index i = 0; i < m; ++i) {
        Vector reg(reg_dim);
        reg << features.row(i).transpose(), reg_scale;
        reg /= reg_scale;
        Vector tensor = Vector::Ones(1);
        for (long r = 0; r < k; ++r) {
            Vector next(tensor.size() * reg_dim);
            for (Index a = 0; a < tensor.size(); ++a)
                for (Index b = 0; b < reg_dim; ++b) next[a * reg_dim + b] = tensor[a] * reg[b];
            tensor = std::move(next);
        }
        const double gauss =
            std::exp(-features.row(i).squaredNorm() / (2.0 * omega * omega));
        amps.row(i) = gauss * tensor.transpose();
    }

    const double total = amps.norm();
    if (total == 0.0) throw NumericError("dataset state has zero norm");
    amps /= total;
    // Partial trace over the feature register of the (now unit) pure state.
    return amps * amps.transpose();
}

Matrix dataset_state_gram_check(const Dataset& dataset, double omega, long k) {
    return dataset_state_gram_check(dataset.features(), omega, k);
}

}  // namespace hyquls
