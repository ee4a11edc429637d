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

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hyquls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr const char* kVersion = "hyquls 0.1.0";

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent user-supplied configuration.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Mismatched vector/matrix dimensions.
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// CSV parse failure; carries the 1-based line number.
class CsvError : public Error {
  public:
    CsvError(const std::string& what, std::size_t line)
        : Error(what + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Linear system is singular or beyond the condition cap; carries the estimate.
class SingularSystemError : public Error {
  public:
    SingularSystemError(const std::string& what, double condition)
        : Error(what + " (condition estimate " + std::to_string(condition) + ")"),
          condition_(condition) {}

    double condition() const { return condition_; }

  private:
    double condition_;
};

/// Numerical failure not tied to a single linear solve.
class NumericError : public Error {
  public:
    using Error::Error;
};

/// Sign convention used everywhere: sgn(0) = +1.
inline int sign_label(double value) { return value >= 0.0 ? +1 : -1; }

/// Derives a subsystem seed from a master seed and a fixed label, so that
/// independent consumers of randomness never share a stream.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label);

/// Thread cap for data-parallel loops; reads HYQULS_THREADS once (>=1).
unsigned thread_cap();

/// Runs fn(i) for i in [0, n), split over at most thread_cap() threads.
/// fn must only write to per-index slots; iteration order is unspecified.
void parallel_for(Index n, const std::function<void(Index)>& fn);

/// Kahan-compensated dot product; used where plain summation would lose
/// digits on long vectors.
double compensated_dot(const Vector& a, const Vector& b);

/// Dot product that switches to compensated summation above 10^3 entries.
double stable_dot(const Vector& a, const Vector& b);

}  // namespace hyquls
