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

#include "dpsynth/mechanism.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {

MechanismParams::MechanismParams(double epsilon, DataUniverse universe)
    : epsilon_(epsilon),
      universe_(universe),
      exp_neg_epsilon_(epsilon >= kIdentityEpsilon ? 0.0 : std::exp(-epsilon)),
      g_(1.0 + (static_cast<double>(universe.cardinality()) - 1.0) *
                   exp_neg_epsilon_) {}

absl::StatusOr<MechanismParams> MechanismParams::Create(double epsilon,
                                                        DataUniverse universe) {
  if (std::isnan(epsilon) || epsilon < 0.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("privacy level must be nonnegative, got %g", epsilon));
  }
  return MechanismParams(epsilon, universe);
}

Row SampleRow(Row value, const MechanismParams& params, RandomSource& rng) {
  if (params.is_identity() || rng.Uniform() < params.keep_probability()) {
    return value;
  }
  // Uniform over the 2^l - 1 values other than `value`.
  const Row alternative =
      static_cast<Row>(rng.UniformInt(params.universe().cardinality() - 1));
  return alternative >= value ? alternative + 1 : alternative;
}

absl::StatusOr<Database> SampleSynthetic(const Database& x,
                                         const MechanismParams& params,
                                         RandomSource& rng) {
  if (x.universe() != params.universe()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: database has %d bits, mechanism expects %d",
        x.universe().bits(), params.universe().bits()));
  }
  std::vector<Row> rows(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    rows[i] = SampleRow(x[i], params, rng);
  }
  return Database::Create(x.universe(), std::move(rows));
}

absl::StatusOr<double> ExactLogPmf(const Database& x, const Database& y,
                                   const MechanismParams& params) {
  if (x.universe() != params.universe()) {
    return absl::InvalidArgumentError(
        "dimension mismatch: database universe differs from mechanism's");
  }
  ASSIGN_OR_RETURN(const int64_t distance, HammingDistance(x, y));
  if (params.is_identity()) {
    return distance == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  return -params.epsilon() * static_cast<double>(distance) -
         static_cast<double>(x.size()) * std::log(params.g());
}

absl::StatusOr<double> VerifyDp(DataUniverse universe, size_t n,
                                const MechanismParams& params) {
  if (universe != params.universe()) {
    return absl::InvalidArgumentError(
        "dimension mismatch: universe differs from mechanism's");
  }
  if (n * static_cast<size_t>(universe.bits()) >
      static_cast<size_t>(kMaxDpVerificationBits)) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "enumeration too large: n * l = %d exceeds %d for DP verification",
        n * universe.bits(), kMaxDpVerificationBits));
  }
  ASSIGN_OR_RETURN(const DatabaseEnumeration all,
                   EnumerateDatabases(universe, n));
  if (params.is_identity()) {
    return std::numeric_limits<double>::infinity();
  }

  const uint64_t outputs = all.size();
  const uint64_t alternatives = universe.cardinality() - 1;
  const uint64_t full_work = outputs * n * alternatives * outputs;
  const uint64_t input_count =
      full_work <= kFullDpEnumerationBudget ? outputs : 1;

  std::vector<Database> output_databases;
  output_databases.reserve(outputs);
  for (const Database& y : all) output_databases.push_back(y);

  const double log_normalizer = static_cast<double>(n) * std::log(params.g());
  auto log_pmf = [&](std::span<const Row> x, const Database& y) {
    int64_t distance = 0;
    for (size_t r = 0; r < n; ++r) distance += x[r] != y[r] ? 1 : 0;
    return -params.epsilon() * static_cast<double>(distance) - log_normalizer;
  };

  std::vector<double> log_pmf_x(outputs);
  double worst = 0.0;
  for (uint64_t xi = 0; xi < input_count; ++xi) {
    const Database& x = output_databases[xi];
    for (uint64_t yi = 0; yi < outputs; ++yi) {
      log_pmf_x[yi] = log_pmf(x.rows(), output_databases[yi]);
    }
    std::vector<Row> neighbour(x.rows().begin(), x.rows().end());
    for (size_t row = 0; row < n; ++row) {
      for (Row value = 0; value < universe.cardinality(); ++value) {
        if (value == x[row]) continue;
        neighbour[row] = value;
        for (uint64_t yi = 0; yi < outputs; ++yi) {
          worst = std::max(worst,
                           std::abs(log_pmf_x[yi] -
                                    log_pmf(neighbour, output_databases[yi])));
        }
      }
      neighbour[row] = x[row];
    }
  }
  return worst;
}

}  // namespace dpsynth
