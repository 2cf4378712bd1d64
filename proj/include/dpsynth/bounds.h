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

// Closed-form distortion bounds for the synthetic-database mechanism and its
// companion estimators, together with the matching lower bounds.
//
// All statistical-query bounds are for normalized queries, so the squared
// bounds scale as 1/n and the absolute bounds as 1/sqrt(n).

#ifndef DPSYNTH_BOUNDS_H_
#define DPSYNTH_BOUNDS_H_

#include <cstdint>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace dpsynth {

// Universal constant of the Berry-Esseen theorem. 0.56 is the best published
// value to two digits; callers may substitute another.
inline constexpr double kDefaultBerryEsseenConstant = 0.56;

struct BoundInputs {
  int64_t n = 1;
  int l = 1;
  double epsilon = 1.0;
  // Query-class constants: a <= a_i < b_i <= b and c_i >= c.
  double a = 0.0;
  double b = 1.0;
  double c = 1.0;
  // Lipschitz constant of the row functions (continuous universe only).
  std::optional<double> lipschitz;
  double berry_esseen_constant = kDefaultBerryEsseenConstant;

  absl::Status Validate() const;
};

// Standard normal cdf, 0.5 * erfc(-t / sqrt(2)). glibc's erfc is accurate to
// a few ulp, well inside 1e-12 absolute.
double StdNormalCdf(double t);

// (b-a)^2 g^2 / (c^2 (1 - e^{-eps})^2 n), times 4 for the proper estimator.
absl::StatusOr<double> UpperBoundSquared(const BoundInputs& in, bool proper);

// (b-a) g / (c (1 - e^{-eps}) sqrt(n)), times 2 for the proper estimator.
absl::StatusOr<double> UpperBoundAbsolute(const BoundInputs& in, bool proper);

// Leading 1/n term of the minimax lower bound:
//   (1 - Phi(1))^2 / (2^{l+4} (1 + e^eps / (2^l - 1))^3 n).
// Stated for normalized queries; a, b and c do not enter.
absl::StatusOr<double> LowerBoundSquaredAsymptotic(const BoundInputs& in);

// Finite-n lower bound from the Berry-Esseen argument on the Hamming query
// family, already divided by n^2 so it is comparable to squared distortion:
//   (1 / (4 n^2)) max(0, (1 - Phi(1)) sigma gamma^{3/2} sqrt(n)
//                         - C rho gamma / sigma^3)^2
// with gamma = 1 / (2 (1 + e^eps / (2^l - 1))), sigma^2 = rho = 2^{1-l}.
// Returns 0 when the Berry-Esseen penalty dominates.
absl::StatusOr<double> LowerBoundFiniteN(const BoundInputs& in);

// Leading term for L-Lipschitz queries over a [0,1] universe discretized
// into 2^{2k} = sqrt(n) cells:
//   (L^2 / c^2 + 4 (b-a)^2 e^{-2 eps} / (c^2 (1 - e^{-eps})^2)) / sqrt(n).
// Requires `lipschitz`.
absl::StatusOr<double> ContinuousUpperBound(const BoundInputs& in);

// Expected absolute error bound of the cut estimator:
//   (1 + e^{-eps}) / (1 - e^{-eps}) sqrt(|S| |T|).
absl::StatusOr<double> CutBound(int64_t source_size, int64_t sink_size,
                                double epsilon);

}  // namespace dpsynth

#endif  // DPSYNTH_BOUNDS_H_
