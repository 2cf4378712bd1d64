//
// Copyright 2026 The dpsynth Authors.
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
//

#include "dpsynth/bounds.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "absl/strings/str_format.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {

namespace {

double G(int l, double epsilon) {
  return 1.0 + (std::ldexp(1.0, l) - 1.0) * std::exp(-epsilon);
}

// g / (1 - e^{-eps}) * (b - a) / c.
double AbsoluteFactor(const BoundInputs& in) {
  return (in.b - in.a) * G(in.l, in.epsilon) /
         (in.c * -std::expm1(-in.epsilon));
}

// 1 + e^eps / (2^l - 1).
double LowerBoundDenominator(const BoundInputs& in) {
  return 1.0 + std::exp(in.epsilon) / (std::ldexp(1.0, in.l) - 1.0);
}

}  // namespace

absl::Status BoundInputs::Validate() const {
  if (n < 1) return absl::InvalidArgumentError("n must be at least 1");
  if (l < 1) return absl::InvalidArgumentError("l must be at least 1");
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bounds need eps > 0, got %g", epsilon));
  }
  if (!(b > a)) return absl::InvalidArgumentError("bounds need b > a");
  if (!(c > 0.0)) return absl::InvalidArgumentError("bounds need c > 0");
  if (lipschitz.has_value() && !(*lipschitz >= 0.0)) {
    return absl::InvalidArgumentError("Lipschitz constant must be >= 0");
  }
  if (!(berry_esseen_constant > 0.0)) {
    return absl::InvalidArgumentError("Berry-Esseen constant must be > 0");
  }
  return absl::OkStatus();
}

double StdNormalCdf(double t) {
  return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

absl::StatusOr<double> UpperBoundSquared(const BoundInputs& in, bool proper) {
  RETURN_IF_ERROR(in.Validate());
  const double factor = AbsoluteFactor(in);
  return (proper ? 4.0 : 1.0) * factor * factor / static_cast<double>(in.n);
}

absl::StatusOr<double> UpperBoundAbsolute(const BoundInputs& in, bool proper) {
  RETURN_IF_ERROR(in.Validate());
  return (proper ? 2.0 : 1.0) * AbsoluteFactor(in) /
         std::sqrt(static_cast<double>(in.n));
}

absl::StatusOr<double> LowerBoundSquaredAsymptotic(const BoundInputs& in) {
  RETURN_IF_ERROR(in.Validate());
  const double tail = 1.0 - StdNormalCdf(1.0);
  const double denominator = LowerBoundDenominator(in);
  return tail * tail /
         (std::ldexp(1.0, in.l + 4) * denominator * denominator * denominator *
          static_cast<double>(in.n));
}

absl::StatusOr<double> LowerBoundFiniteN(const BoundInputs& in) {
  RETURN_IF_ERROR(in.Validate());
  const double gamma = 1.0 / (2.0 * LowerBoundDenominator(in));
  const double sigma_sq = std::ldexp(1.0, 1 - in.l);
  const double sigma = std::sqrt(sigma_sq);
  const double rho = sigma_sq;
  const double n = static_cast<double>(in.n);
  const double inner =
      (1.0 - StdNormalCdf(1.0)) * sigma * std::pow(gamma, 1.5) * std::sqrt(n) -
      in.berry_esseen_constant * rho * gamma / (sigma_sq * sigma);
  const double clamped = std::max(0.0, inner);
  return clamped * clamped / (4.0 * n * n);
}

absl::StatusOr<double> ContinuousUpperBound(const BoundInputs& in) {
  RETURN_IF_ERROR(in.Validate());
  if (!in.lipschitz.has_value()) {
    return absl::InvalidArgumentError(
        "continuous bound needs a Lipschitz constant");
  }
  const double lipschitz = *in.lipschitz;
  const double one_minus = -std::expm1(-in.epsilon);
  const double spread = in.b - in.a;
  const double c_sq = in.c * in.c;
  const double leading = lipschitz * lipschitz / c_sq +
                         4.0 * spread * spread * std::exp(-2.0 * in.epsilon) /
                             (c_sq * one_minus * one_minus);
  return leading / std::sqrt(static_cast<double>(in.n));
}

absl::StatusOr<double> CutBound(int64_t source_size, int64_t sink_size,
                                double epsilon) {
  if (source_size < 1 || sink_size < 1) {
    return absl::InvalidArgumentError("cut bound needs nonempty S and T");
  }
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("cut bound needs eps > 0, got %g", epsilon));
  }
  const double e = std::exp(-epsilon);
  return (1.0 + e) / -std::expm1(-epsilon) *
         std::sqrt(static_cast<double>(source_size) *
                   static_cast<double>(sink_size));
}

}  // namespace dpsynth
