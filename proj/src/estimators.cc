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

#include "dpsynth/estimators.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsynth/bounds.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {

namespace {

absl::Status CheckEstimable(double epsilon) {
  if (!(epsilon > 0.0)) {
    return absl::FailedPreconditionError(
        "estimator undefined at eps = 0 (division by 1 - e^{-eps})");
  }
  return absl::OkStatus();
}

double Distortion(DistortionMeasure measure, double estimate, double truth) {
  const double error = estimate - truth;
  return measure == DistortionMeasure::kSquared ? error * error
                                                : std::abs(error);
}

// Sorted `values` with runs closer than `tolerance` collapsed to their first
// element.
void MergeClose(std::vector<double>& values, double tolerance) {
  auto out = values.begin();
  for (auto it = values.begin(); it != values.end(); ++it) {
    if (out == values.begin() || *it - *(out - 1) > tolerance) {
      *out++ = *it;
    }
  }
  values.erase(out, values.end());
}

// Estimator that maps a released database to an answer for one query.
class Estimator {
 public:
  static absl::StatusOr<Estimator> Create(const StatisticalQuery& q,
                                          const MechanismParams& params,
                                          const DistortionOptions& options) {
    RETURN_IF_ERROR(CheckEstimable(params.epsilon()));
    std::optional<ProperProjector> projector;
    if (options.estimator == EstimatorKind::kProper) {
      ASSIGN_OR_RETURN(projector,
                       ProperProjector::Create(q, options.projection));
    }
    return Estimator(q, params, std::move(projector));
  }

  double operator()(std::span<const Row> y) const {
    const double raw = DebiasQueryValue(*q_, q_->EvaluateRows(y), *params_);
    return projector_ ? projector_->Project(raw) : raw;
  }

 private:
  Estimator(const StatisticalQuery& q, const MechanismParams& params,
            std::optional<ProperProjector> projector)
      : q_(&q), params_(&params), projector_(std::move(projector)) {}

  const StatisticalQuery* q_;
  const MechanismParams* params_;
  std::optional<ProperProjector> projector_;
};

absl::Status CheckShapes(const StatisticalQuery& q, const Database& x,
                         const MechanismParams& params) {
  if (x.universe() != params.universe() || q.universe() != params.universe()) {
    return absl::InvalidArgumentError(
        "dimension mismatch: query, database and mechanism universes differ");
  }
  if (x.size() != q.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: database has %d rows, query expects %d", x.size(),
        q.size()));
  }
  return absl::OkStatus();
}

}  // namespace

double DebiasQueryValue(const StatisticalQuery& q, double raw_value,
                        const MechanismParams& params) {
  const double e = params.exp_neg_epsilon();
  const double one_minus =
      params.is_identity() ? 1.0 : -std::expm1(-params.epsilon());
  return params.g() / one_minus * raw_value -
         e / one_minus * q.centering_constant();
}

absl::StatusOr<double> EstimateUnbiased(const StatisticalQuery& q,
                                        const Database& y,
                                        const MechanismParams& params) {
  RETURN_IF_ERROR(CheckEstimable(params.epsilon()));
  RETURN_IF_ERROR(CheckShapes(q, y, params));
  return DebiasQueryValue(q, q.EvaluateRows(y.rows()), params);
}

absl::StatusOr<std::vector<double>> AchievableValues(const StatisticalQuery& q,
                                                     size_t max_values) {
  // Distinct entries of each stored table.
  std::vector<std::vector<double>> distinct(q.functions().size());
  double magnitude = 0.0;
  for (size_t f = 0; f < distinct.size(); ++f) {
    auto table = q.functions()[f].table();
    distinct[f].assign(table.begin(), table.end());
    std::sort(distinct[f].begin(), distinct[f].end());
    distinct[f].erase(std::unique(distinct[f].begin(), distinct[f].end()),
                      distinct[f].end());
    magnitude = std::max({magnitude, std::abs(distinct[f].front()),
                          std::abs(distinct[f].back())});
  }
  const double tolerance =
      1e-12 * std::max(1.0, magnitude * static_cast<double>(q.size()));

  std::vector<double> sums = {0.0};
  std::vector<double> next, shifted;
  for (uint32_t f : q.assignment()) {
    next.clear();
    for (double t : distinct[f]) {
      shifted.clear();
      std::transform(sums.begin(), sums.end(), std::back_inserter(shifted),
                     [t](double s) { return s + t; });
      const size_t middle = next.size();
      next.insert(next.end(), shifted.begin(), shifted.end());
      std::inplace_merge(next.begin(), next.begin() + middle, next.end());
    }
    MergeClose(next, tolerance);
    if (next.size() > max_values) {
      return absl::ResourceExhaustedError(absl::StrFormat(
          "exact range of the query exceeds %d distinct values", max_values));
    }
    sums.swap(next);
  }
  for (double& s : sums) s /= q.range_sum();
  return sums;
}

double ProjectOntoValues(std::span<const double> values, double raw) {
  auto upper = std::lower_bound(values.begin(), values.end(), raw);
  if (upper == values.begin()) return *upper;
  if (upper == values.end()) return values.back();
  const double below = *(upper - 1);
  return raw - below <= *upper - raw ? below : *upper;
}

absl::StatusOr<ProperProjector> ProperProjector::Create(
    const StatisticalQuery& q, ProjectionStrategy strategy) {
  std::vector<double> values;
  if (strategy == ProjectionStrategy::kExactRange) {
    ASSIGN_OR_RETURN(values, AchievableValues(q));
  }
  return ProperProjector(q.min_value(), q.max_value(), std::move(values));
}

double ProperProjector::Project(double raw) const {
  if (!values_.empty()) return ProjectOntoValues(values_, raw);
  return std::clamp(raw, lo_, hi_);
}

absl::StatusOr<double> ProjectProper(const StatisticalQuery& q, double raw,
                                     ProjectionStrategy strategy) {
  ASSIGN_OR_RETURN(const ProperProjector projector,
                   ProperProjector::Create(q, strategy));
  return projector.Project(raw);
}

absl::StatusOr<double> EstimateCut(const Database& y,
                                   std::span<const uint32_t> source,
                                   std::span<const uint32_t> sink,
                                   double epsilon, CutEstimate kind) {
  RETURN_IF_ERROR(CheckEstimable(epsilon));
  if (y.universe().bits() != 1) {
    return absl::InvalidArgumentError(
        "dimension mismatch: cut estimation needs a 1-bit edge database");
  }
  const auto vertices = static_cast<uint64_t>(
      std::llround(std::sqrt(static_cast<double>(y.size()))));
  if (vertices * vertices != y.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: %d rows is not |V|^2 for any |V|", y.size()));
  }
  std::vector<char> side(vertices, 0);
  for (uint32_t v : source) {
    if (v >= vertices || side[v] != 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("source vertex %d is out of range or repeated", v));
    }
    side[v] = 1;
  }
  for (uint32_t v : sink) {
    if (v >= vertices) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sink vertex %d is out of range", v));
    }
    if (side[v] == 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("S and T overlap at vertex %d", v));
    }
    if (side[v] == 2) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sink vertex %d is repeated", v));
    }
    side[v] = 2;
  }

  int64_t crossing = 0;
  for (uint32_t i : source) {
    for (uint32_t j : sink) crossing += y[uint64_t{i} * vertices + j];
  }
  const double pairs =
      static_cast<double>(source.size()) * static_cast<double>(sink.size());
  const double e = epsilon >= kIdentityEpsilon ? 0.0 : std::exp(-epsilon);
  const double one_minus = e == 0.0 ? 1.0 : -std::expm1(-epsilon);
  const double estimate =
      (1.0 + e) / one_minus * static_cast<double>(crossing) -
      e / one_minus * pairs;
  if (kind == CutEstimate::kClamped) return std::clamp(estimate, 0.0, pairs);
  return estimate;
}

absl::StatusOr<double> AnalyticBound(const StatisticalQuery& q,
                                     const MechanismParams& params,
                                     const DistortionOptions& options) {
  BoundInputs inputs;
  inputs.n = static_cast<int64_t>(q.size());
  inputs.l = q.universe().bits();
  inputs.epsilon = params.epsilon();
  inputs.a = q.lower();
  inputs.b = q.upper();
  inputs.c = q.min_range();
  const bool proper = options.estimator == EstimatorKind::kProper;
  return options.measure == DistortionMeasure::kSquared
             ? UpperBoundSquared(inputs, proper)
             : UpperBoundAbsolute(inputs, proper);
}

absl::StatusOr<double> ExactDistortion(const StatisticalQuery& q,
                                       const Database& x,
                                       const MechanismParams& params,
                                       const DistortionOptions& options) {
  RETURN_IF_ERROR(CheckShapes(q, x, params));
  if (x.size() * static_cast<size_t>(x.universe().bits()) >
      static_cast<size_t>(kMaxExactDistortionBits)) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "enumeration too large: n * l = %d exceeds %d",
        x.size() * x.universe().bits(), kMaxExactDistortionBits));
  }
  ASSIGN_OR_RETURN(const Estimator estimate,
                   Estimator::Create(q, params, options));
  ASSIGN_OR_RETURN(const DatabaseEnumeration outputs,
                   EnumerateDatabases(x.universe(), x.size()));
  const double truth = q.EvaluateRows(x.rows());
  CompensatedSum total;
  for (const Database& y : outputs) {
    ASSIGN_OR_RETURN(const double log_p, ExactLogPmf(x, y, params));
    if (std::isinf(log_p)) continue;
    total.Add(std::exp(log_p) *
              Distortion(options.measure, estimate(y.rows()), truth));
  }
  return total.Total();
}

absl::StatusOr<DistortionReport> MeasureDistortion(
    const StatisticalQuery& q, const Database& x, const MechanismParams& params,
    const DistortionOptions& options, int64_t trials, const RandomSource& rng) {
  if (trials < 1) {
    return absl::InvalidArgumentError("trials must be at least 1");
  }
  RETURN_IF_ERROR(CheckShapes(q, x, params));
  ASSIGN_OR_RETURN(const Estimator estimate,
                   Estimator::Create(q, params, options));
  const double truth = q.EvaluateRows(x.rows());

  CompensatedSum sum, sum_sq;
  std::vector<Row> y(x.size());
  for (int64_t t = 0; t < trials; ++t) {
    RandomSource trial_rng = rng.Fork(static_cast<uint64_t>(t));
    for (size_t i = 0; i < x.size(); ++i) {
      y[i] = SampleRow(x[i], params, trial_rng);
    }
    const double rho = Distortion(options.measure, estimate(y), truth);
    sum.Add(rho);
    sum_sq.Add(rho * rho);
  }

  DistortionReport report;
  report.query_id = options.query_id;
  report.measure = options.measure;
  report.sample_count = trials;
  const double count = static_cast<double>(trials);
  report.empirical_mean = sum.Total() / count;
  if (trials > 1) {
    const double variance =
        std::max(0.0, (sum_sq.Total() -
                       count * report.empirical_mean * report.empirical_mean) /
                          (count - 1.0));
    report.empirical_stderr = std::sqrt(variance / count);
  }
  ASSIGN_OR_RETURN(report.analytic_bound, AnalyticBound(q, params, options));
  if (x.size() * static_cast<size_t>(x.universe().bits()) <=
      static_cast<size_t>(kMaxExactDistortionBits)) {
    ASSIGN_OR_RETURN(const double exact,
                     ExactDistortion(q, x, params, options));
    report.exact_value = exact;
    report.exact_mismatch =
        std::abs(report.empirical_mean - exact) > 6.0 * report.empirical_stderr;
  }
  return report;
}

}  // namespace dpsynth
