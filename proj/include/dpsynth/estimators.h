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

// Companion estimators for the synthetic-database mechanism and tools to
// measure their distortion.
//
// The unbiased estimator inverts the mechanism's expected perturbation:
//   E[q(Y)] = ((1 - e^{-eps}) q(x) + e^{-eps} C_phi) / g(eps),
// so  q_u(y) = g / (1 - e^{-eps}) q(y) - e^{-eps} / (1 - e^{-eps}) C_phi.
// The proper estimator projects q_u(y) onto a set that contains every value
// q can take, which at most doubles the pointwise error.

#ifndef DPSYNTH_ESTIMATORS_H_
#define DPSYNTH_ESTIMATORS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/queries.h"

namespace dpsynth {

enum class EstimatorKind { kUnbiased, kProper };
enum class DistortionMeasure { kSquared, kAbsolute };

enum class ProjectionStrategy {
  // Clamp to [min_x q(x), max_x q(x)]. Always available.
  kIntervalClamp,
  // Nearest value of the exact range q(X^n), ties to the smaller value.
  kExactRange,
};

// Cap on the number of distinct values kExactRange will materialize.
inline constexpr size_t kMaxAchievableValues = 1'000'000;

// Fails with FAILED_PRECONDITION when eps == 0 (the estimator divides by
// 1 - e^{-eps}).
absl::StatusOr<double> EstimateUnbiased(const StatisticalQuery& q,
                                        const Database& y,
                                        const MechanismParams& params);

// The affine correction applied to an already evaluated q(y). eps must be
// positive; not checked.
double DebiasQueryValue(const StatisticalQuery& q, double raw_value,
                        const MechanismParams& params);

// Sorted distinct values of q over all databases of q.size() rows, computed
// row by row as a Minkowski sum of the row tables. Values closer than 1e-12
// relative are merged. RESOURCE_EXHAUSTED past `max_values`.
absl::StatusOr<std::vector<double>> AchievableValues(
    const StatisticalQuery& q, size_t max_values = kMaxAchievableValues);

// Nearest element of nonempty sorted `values`; ties go to the smaller one.
double ProjectOntoValues(std::span<const double> values, double raw);

absl::StatusOr<double> ProjectProper(const StatisticalQuery& q, double raw,
                                     ProjectionStrategy strategy);

// Projection with the projection set computed once.
class ProperProjector {
 public:
  static absl::StatusOr<ProperProjector> Create(const StatisticalQuery& q,
                                                ProjectionStrategy strategy);
  double Project(double raw) const;

 private:
  ProperProjector(double lo, double hi, std::vector<double> values)
      : lo_(lo), hi_(hi), values_(std::move(values)) {}

  double lo_;
  double hi_;
  std::vector<double> values_;  // empty for interval clamping
};

enum class CutEstimate {
  // Affine correction of the raw crossing count; may leave [0, |S||T|].
  kUnbiased,
  // kUnbiased clamped to [0, |S||T|].
  kClamped,
};

// Estimate of the number of edges from S to T given a released edge-indicator
// database y (l = 1, n = |V|^2, row i*|V| + j for the pair (i, j)):
//   (1 + e^{-eps}) / (1 - e^{-eps}) q_ST(y) - e^{-eps} / (1 - e^{-eps}) |S||T|.
absl::StatusOr<double> EstimateCut(const Database& y,
                                   std::span<const uint32_t> source,
                                   std::span<const uint32_t> sink,
                                   double epsilon,
                                   CutEstimate kind = CutEstimate::kUnbiased);

struct DistortionOptions {
  EstimatorKind estimator = EstimatorKind::kUnbiased;
  DistortionMeasure measure = DistortionMeasure::kSquared;
  ProjectionStrategy projection = ProjectionStrategy::kIntervalClamp;
  std::string query_id;
};

struct DistortionReport {
  std::string query_id;
  DistortionMeasure measure = DistortionMeasure::kSquared;
  double empirical_mean = 0.0;
  double empirical_stderr = 0.0;
  int64_t sample_count = 0;
  double analytic_bound = 0.0;
  // Set when n * l is small enough to enumerate every output.
  std::optional<double> exact_value;
  // |empirical_mean - exact_value| > 6 * empirical_stderr. Informational.
  bool exact_mismatch = false;
};

// Databases with n * l at most this are given an exact_value.
inline constexpr int kMaxExactDistortionBits = 12;

// Monte Carlo estimate of E[rho(q_hat(Y), q(x))] over `trials` releases.
// Trial t draws from rng.Fork(t), so the report does not depend on the order
// of trials; `rng` itself is not advanced.
absl::StatusOr<DistortionReport> MeasureDistortion(
    const StatisticalQuery& q, const Database& x, const MechanismParams& params,
    const DistortionOptions& options, int64_t trials, const RandomSource& rng);

// sum_y p(y|x) rho(q_hat(y), q(x)) over every output. Requires n * l <= 12.
absl::StatusOr<double> ExactDistortion(const StatisticalQuery& q,
                                       const Database& x,
                                       const MechanismParams& params,
                                       const DistortionOptions& options);

// The upper bound that applies to `options`, using the instance constants
// a = q.lower(), b = q.upper(), c = q.min_range().
absl::StatusOr<double> AnalyticBound(const StatisticalQuery& q,
                                     const MechanismParams& params,
                                     const DistortionOptions& options);

}  // namespace dpsynth

#endif  // DPSYNTH_ESTIMATORS_H_
