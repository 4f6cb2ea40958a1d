// Copyright 2026 The conga Authors
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

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "conga/error.hpp"

namespace conga {

/// Polynomial latency f(x) = c0 + c1 x + ... + ck x^k with nonnegative
/// coefficients. Nonnegative coefficients make f nonnegative, continuous and
/// nondecreasing on x >= 0, and give closed forms for the antiderivative and
/// the marginal cost f(x) + x f'(x).
class LatencyFunction {
 public:
  /// The zero function.
  LatencyFunction() = default;

  explicit LatencyFunction(std::vector<double> coefficients)
      : coefficients_(std::move(coefficients)) {
    for (std::size_t i = 0; i < coefficients_.size(); ++i) {
      const double c = coefficients_[i];
      if (!std::isfinite(c) || c < 0.0) {
        throw Error(ErrorCode::kNegativeCoefficient,
                    "coefficient c" + std::to_string(i) + " = " +
                        std::to_string(c) + " must be finite and >= 0");
      }
    }
  }

  static LatencyFunction constant(double c) { return LatencyFunction({c}); }
  static LatencyFunction affine(double c0, double c1) {
    return LatencyFunction({c0, c1});
  }

  std::span<const double> coefficients() const { return coefficients_; }
  std::size_t degree() const {
    return coefficients_.empty() ? 0 : coefficients_.size() - 1;
  }

  double eval(double x) const {
    check_load(x);
    double acc = 0.0;
    for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }

  double operator()(double x) const { return eval(x); }

  /// f'(x).
  double derivative(double x) const {
    check_load(x);
    double acc = 0.0;
    for (std::size_t i = coefficients_.size(); i-- > 1;) {
      acc = acc * x + static_cast<double>(i) * coefficients_[i];
    }
    return acc;
  }

  /// Integral of f over [0, x].
  double integral(double x) const {
    check_load(x);
    double acc = 0.0;
    for (std::size_t i = coefficients_.size(); i-- > 0;) {
      acc = acc * x + coefficients_[i] / static_cast<double>(i + 1);
    }
    return acc * x;
  }

  /// f(x) + x f'(x), the derivative of x f(x).
  double marginal(double x) const {
    check_load(x);
    double acc = 0.0;
    for (std::size_t i = coefficients_.size(); i-- > 0;) {
      acc = acc * x + static_cast<double>(i + 1) * coefficients_[i];
    }
    return acc;
  }

  /// Every coefficient multiplied by `factor` (> 0).
  LatencyFunction scaled(double factor) const {
    std::vector<double> c(coefficients_);
    for (double& v : c) v *= factor;
    return LatencyFunction(std::move(c));
  }

  bool operator==(const LatencyFunction&) const = default;

 private:
  static void check_load(double x) {
    if (!(x >= 0.0)) {
      throw Error(ErrorCode::kNegativeLoad,
                  "load " + std::to_string(x) + " is negative");
    }
  }

  std::vector<double> coefficients_;
};

inline double eval_latency(const LatencyFunction& f, double x) {
  return f.eval(x);
}
inline double latency_integral(const LatencyFunction& f, double x) {
  return f.integral(x);
}
inline double marginal_latency(const LatencyFunction& f, double x) {
  return f.marginal(x);
}

}  // namespace conga
