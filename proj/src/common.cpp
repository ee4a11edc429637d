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

#include "hyquls/common.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace hyquls {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    // FNV-1a over the label, then mixed with the master seed.
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ splitmix64(h));
}

unsigned thread_cap() {
    static const unsigned cap = [] {
        unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        if (const char* env = std::getenv("HYQULS_THREADS")) {
            char* end = nullptr;
            long v = std::strtol(env, &end, 10);
            if (end != env && v >= 1) hw = std::min<long>(v, 256);
        }
        return hw;
    }();
    return cap;
}

void parallel_for(Index n, const std::function<void(Index)>& fn) {
    const unsigned cap = thread_cap();
    if (n <= 0) return;
    if (cap <= 1 || n < 32) {
        for (Index i = 0; i < n; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(std::min<Index>(cap, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (Index i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double compensated_dot(const Vector& a, const Vector& b) {
    double sum = 0.0;
    double carry = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        const double term = a[i] * b[i] - carry;
        const double next = sum + term;
        carry = (next - sum) - term;
        sum = next;
    }
    return sum;
}

double stable_dot(const Vector& a, const Vector& b) {
    if (a.size() != b.size()) throw DimensionError("stable_dot: size mismatch");
    if (a.size() > 1000) return compensated_dot(a, b);
    return a.dot(b);
}

}  // namespace hyquls
