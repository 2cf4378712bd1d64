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

// The `verify` suite: production code checked against the oracle.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/strings/str_format.h"
#include "dpsynth/bounds.h"
#include "dpsynth/estimators.h"
#include "dpsynth/graph.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/oracle.h"
#include "dpsynth/queries.h"

namespace dpsynth::oracle {

namespace {

struct Instance {
  StatisticalQuery query;
  Database x;
  MechanismParams params;
};

// A random (query, x, eps) with n * l <= max_bits and n * l >= 2.
absl::StatusOr<Instance> RandomInstance(int max_bits,
                                        std::span<const double> epsilons,
                                        RandomSource& rng) {
  const int bits = 1 + static_cast<int>(rng.UniformInt(std::min(max_bits, 4)));
  const size_t max_n = std::max(1, max_bits / bits);
  const size_t n = 1 + rng.UniformInt(max_n);
  std::vector<size_t> divisors;
  for (size_t h = 1; h <= n; ++h) {
    if (n % h == 0) divisors.push_back(h);
  }
  const size_t h = divisors[rng.UniformInt(divisors.size())];
  absl::StatusOr<DataUniverse> universe = DataUniverse::Create(bits);
  if (!universe.ok()) return universe.status();
  absl::StatusOr<StatisticalQuery> q =
      GenerateRandomQuery(*universe, n, h, rng);
  if (!q.ok()) return q.status();
  std::vector<Row> rows(n);
  for (Row& r : rows)
    r = static_cast<Row>(rng.UniformInt(universe->cardinality()));
  absl::StatusOr<Database> x = Database::Create(*universe, std::move(rows));
  if (!x.ok()) return x.status();
  const double epsilon = epsilons[rng.UniformInt(epsilons.size())];
  absl::StatusOr<MechanismParams> params =
      MechanismParams::Create(epsilon, *universe);
  if (!params.ok()) return params.status();
  return Instance{*std::move(q), *std::move(x), *params};
}

CheckResult Fail(std::string name, const absl::Status& status) {
  return {std::move(name), false, std::string(status.ToString())};
}

CheckResult CheckPmfAgreement(int max_bits, std::span<const double> epsilons) {
  double worst = 0.0;
  std::vector<double> all_eps(epsilons.begin(), epsilons.end());
  all_eps.push_back(0.0);
  all_eps.push_back(700.0);
  for (int bits = 1; bits <= max_bits; ++bits) {
    for (size_t n = 1; static_cast<int>(n) * bits <= std::min(max_bits, 10);
         ++n) {
      auto universe = DataUniverse::Create(bits);
      if (!universe.ok()) return Fail("pmf_agreement", universe.status());
      // Two inputs per shape: all zeros and all ones-valued rows.
      for (Row value : {Row{0}, universe->cardinality() - 1}) {
        auto x = Database::Create(*universe, std::vector<Row>(n, value));
        if (!x.ok()) return Fail("pmf_agreement", x.status());
        for (double eps : all_eps) {
          auto dist = ComputeExactDistribution(*x, eps);
          auto params = MechanismParams::Create(eps, *universe);
          if (!dist.ok()) return Fail("pmf_agreement", dist.status());
          if (!params.ok()) return Fail("pmf_agreement", params.status());
          for (uint64_t i = 0; i < dist->size(); ++i) {
            auto y = Database::Create(*universe, dist->Output(i));
            auto production = ExactLogPmf(*x, *y, *params);
            if (!production.ok()) {
              return Fail("pmf_agreement", production.status());
            }
            const double reference = dist->log_probs()[i];
            if (std::isinf(reference) || std::isinf(*production)) {
              if (reference != *production) {
                return {
                    "pmf_agreement", false,
                    absl::StrFormat("infinite mismatch at n=%d l=%d", n, bits)};
              }
              continue;
            }
            worst = std::max(worst, std::abs(reference - *production));
          }
        }
      }
    }
  }
  return {"pmf_agreement", worst <= 1e-10,
          absl::StrFormat("max |log p diff| = %.3g (tolerance 1e-10)", worst)};
}

CheckResult CheckDpExact(int max_bits, double eps) {
  const std::string name = absl::StrFormat("dp_exact eps=%g", eps);
  double worst_oracle = 0.0;
  double worst_production = 0.0;
  for (int bits = 1; bits <= max_bits; ++bits) {
    auto universe = DataUniverse::Create(bits);
    if (!universe.ok()) return Fail(name, universe.status());
    auto params = MechanismParams::Create(eps, *universe);
    if (!params.ok()) return Fail(name, params.status());
    for (size_t n = 1; static_cast<int>(n) * bits <= max_bits; ++n) {
      auto reference = MaxNeighborLogRatio(*universe, n, eps);
      auto production = VerifyDp(*universe, n, *params);
      if (!reference.ok()) return Fail(name, reference.status());
      if (!production.ok()) return Fail(name, production.status());
      worst_oracle = std::max(worst_oracle, std::abs(*reference - eps));
      worst_production =
          std::max(worst_production, std::abs(*production - eps));
    }
  }
  return {name, worst_oracle <= 1e-12 && worst_production <= 1e-12,
          absl::StrFormat("max |ratio - eps|: oracle %.3g, production %.3g "
                          "over n*l <= %d (tolerance 1e-12)",
                          worst_oracle, worst_production, max_bits)};
}

}  // namespace

std::vector<CheckResult> RunVerificationSuite(
    const VerificationOptions& options) {
  std::vector<CheckResult> results;
  const int max_bits = std::clamp(options.max_bits, 1, kMaxDistributionBits);
  results.push_back(CheckPmfAgreement(max_bits, options.epsilons));
  for (double eps : options.epsilons) {
    results.push_back(CheckDpExact(max_bits, eps));
  }

  // Random micro-instances: unbiasedness, the squared-error bound, the
  // factor-2 pointwise projection inequality and agreement of estimators.
  RandomSource rng(options.seed);
  double worst_bias = 0.0;
  double worst_bound_ratio = 0.0;
  double worst_proper_ratio = 0.0;
  double worst_estimator_diff = 0.0;
  int64_t pointwise_violations = 0;
  const int instance_bits = std::min(max_bits, 10);
  for (int k = 0; k < options.random_instances; ++k) {
    auto instance = RandomInstance(instance_bits, options.epsilons, rng);
    if (!instance.ok()) {
      results.push_back(Fail("random_instances", instance.status()));
      return results;
    }
    const StatisticalQuery& q = instance->query;
    const double eps = instance->params.epsilon();
    auto dist = ComputeExactDistribution(instance->x, eps);
    auto clamp = ProperProjector::Create(q, ProjectionStrategy::kIntervalClamp);
    auto exact = ProperProjector::Create(q, ProjectionStrategy::kExactRange);
    if (!dist.ok() || !clamp.ok() || !exact.ok()) {
      results.push_back(Fail("random_instances", !dist.ok() ? dist.status()
                                                 : !clamp.ok()
                                                     ? clamp.status()
                                                     : exact.status()));
      return results;
    }
    const double truth = QueryValue(q, instance->x.rows());
    double mean = 0.0, squared = 0.0, proper_squared = 0.0;
    for (uint64_t i = 0; i < dist->size(); ++i) {
      const double p = std::exp(dist->log_probs()[i]);
      const std::vector<Row> y_rows = dist->Output(i);
      auto y = Database::Create(q.universe(), y_rows);
      auto production = EstimateUnbiased(q, *y, instance->params);
      if (!production.ok()) {
        results.push_back(Fail("random_instances", production.status()));
        return results;
      }
      const double reference = UnbiasedEstimate(q, y_rows, eps);
      worst_estimator_diff =
          std::max(worst_estimator_diff, std::abs(reference - *production));
      mean += p * *production;
      const double err = *production - truth;
      squared += p * err * err;
      for (const ProperProjector* projector : {&*clamp, &*exact}) {
        const double proper_err = projector->Project(*production) - truth;
        if (std::abs(proper_err) > 2.0 * std::abs(err) + 1e-12) {
          ++pointwise_violations;
        }
      }
      const double clamp_err = clamp->Project(*production) - truth;
      proper_squared += p * clamp_err * clamp_err;
    }
    worst_bias = std::max(worst_bias, std::abs(mean - truth));
    BoundInputs in;
    in.n = static_cast<int64_t>(q.size());
    in.l = q.universe().bits();
    in.epsilon = eps;
    in.a = q.lower();
    in.b = q.upper();
    in.c = q.min_range();
    auto bound = UpperBoundSquared(in, /*proper=*/false);
    if (!bound.ok()) {
      results.push_back(Fail("random_instances", bound.status()));
      return results;
    }
    worst_bound_ratio = std::max(worst_bound_ratio, squared / *bound);
    worst_proper_ratio =
        std::max(worst_proper_ratio, proper_squared / (4.0 * *bound));
  }
  results.push_back(
      {"estimator_agreement", worst_estimator_diff <= 1e-10,
       absl::StrFormat("max |production - oracle| = %.3g over %d instances",
                       worst_estimator_diff, options.random_instances)});
  results.push_back({"unbiasedness", worst_bias <= 1e-10,
                     absl::StrFormat("max |E[q_u(Y)] - q(x)| = %.3g "
                                     "(tolerance 1e-10)",
                                     worst_bias)});
  results.push_back(
      {"squared_error_bound", worst_bound_ratio <= 1.0,
       absl::StrFormat("max exact MSE / bound = %.4f", worst_bound_ratio)});
  results.push_back(
      {"projection_factor_two", pointwise_violations == 0,
       absl::StrFormat("%d outputs with |q_hat - q| > 2 |q_u - q|",
                       pointwise_violations)});
  results.push_back({"proper_squared_error_bound", worst_proper_ratio <= 1.0,
                     absl::StrFormat("max exact proper MSE / (4 bound) = %.4f",
                                     worst_proper_ratio)});

  // Cut estimator on a 3-vertex graph: all 2^9 outputs.
  {
    const std::string name = "cut_unbiased_3_vertices";
    auto graph = Graph::Create(3, {{0, 1}, {1, 2}, {0, 2}, {2, 1}});
    auto cut = CutQuery::Create(3, {0, 1}, {2});
    auto x = graph.ok() ? graph->ToDatabase() : graph.status();
    auto truth = graph.ok() && cut.ok()
                     ? CutValue(*graph, *cut)
                     : absl::StatusOr<int64_t>(absl::InternalError("setup"));
    if (!x.ok() || !truth.ok()) {
      results.push_back(Fail(name, !x.ok() ? x.status() : truth.status()));
    } else {
      double worst = 0.0;
      double worst_abs_ratio = 0.0;
      for (double eps : options.epsilons) {
        auto dist = ComputeExactDistribution(*x, eps);
        if (!dist.ok()) {
          results.push_back(Fail(name, dist.status()));
          break;
        }
        double mean = 0.0, abs_err = 0.0;
        bool ok = true;
        for (uint64_t i = 0; i < dist->size(); ++i) {
          auto y = Database::Create(x->universe(), dist->Output(i));
          auto estimate = AnswerCut(*y, *cut, eps);
          if (!estimate.ok()) {
            results.push_back(Fail(name, estimate.status()));
            ok = false;
            break;
          }
          const double p = std::exp(dist->log_probs()[i]);
          mean += p * *estimate;
          abs_err += p * std::abs(*estimate - static_cast<double>(*truth));
        }
        if (!ok) break;
        auto bound = CutBound(2, 1, eps);
        worst = std::max(worst, std::abs(mean - static_cast<double>(*truth)));
        if (bound.ok()) {
          worst_abs_ratio = std::max(worst_abs_ratio, abs_err / *bound);
        }
      }
      results.push_back(
          {name, worst <= 1e-10 && worst_abs_ratio <= 1.0,
           absl::StrFormat("max |E[cut_hat] - cut| = %.3g, max E|err| / "
                           "bound = %.4f",
                           worst, worst_abs_ratio)});
    }
  }

  // Micro minimax against the mechanism's own unbiased estimator.
  {
    const std::string name = "micro_minimax n=2 l=1 eps=1";
    auto universe = DataUniverse::Create(1);
    auto family = HammingFamily(*universe, 2);
    if (!family.ok()) {
      results.push_back(Fail(name, family.status()));
    } else {
      const std::vector<double> grid = DpKeepProbabilityGrid(1, 1.0, 21);
      auto report = MicroMinimax(*family, 1.0, grid);
      if (!report.ok()) {
        results.push_back(Fail(name, report.status()));
      } else {
        results.push_back(
            {name,
             report->value >= 0.0 &&
                 report->value <= report->mechanism_unbiased_worst,
             absl::StrFormat("grid optimum %.6f at keep %.4f <= unbiased "
                             "worst case %.6f; %s",
                             report->value, report->best_keep_probability,
                             report->mechanism_unbiased_worst,
                             report->scope_note)});
      }
    }
  }
  return results;
}

}  // namespace dpsynth::oracle
