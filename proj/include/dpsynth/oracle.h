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

// Brute-force reference implementations for tests and the `verify` command.
//
// Nothing here calls the mechanism, estimator or enumeration code of the main
// library: Hamming distances, normalizing constants, query values and the
// debiasing transform are all recomputed from scratch so that a bug shared
// with the production path shows up as a disagreement.

#ifndef DPSYNTH_ORACLE_H_
#define DPSYNTH_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"
#include "dpsynth/queries.h"

namespace dpsynth::oracle {

// Largest n * l for which output distributions are materialized.
inline constexpr int kMaxDistributionBits = 12;
// Largest n * l for the minimax searches.
inline constexpr int kMaxMinimaxBits = 6;
inline constexpr size_t kMaxKeepGridSize = 1000;
// Cap on the number of estimators tried by MinimaxProperEstimator.
inline constexpr uint64_t kMaxEstimatorCandidates = 1'000'000;

double LogSumExp(std::span<const double> values);

// Output i of an (n, l) enumeration: row r is base-2^l digit r of i.
std::vector<Row> DecodeDatabase(uint64_t index, int bits, size_t n);

// The normalized output distribution of the mechanism on input x, computed
// as exp(-eps d(x, y)) over every y with a brute-force log-sum-exp
// normalizer. eps >= 700 gives a point mass at x.
class ExactDistribution {
 public:
  int bits() const { return bits_; }
  size_t rows() const { return n_; }
  uint64_t size() const { return log_probs_.size(); }
  std::span<const double> log_probs() const { return log_probs_; }
  std::vector<Row> Output(uint64_t index) const {
    return DecodeDatabase(index, bits_, n_);
  }

  // sum_y p(y) f(y), skipping outputs of probability zero.
  double Expectation(
      const std::function<double(std::span<const Row>)>& f) const;

 private:
  friend absl::StatusOr<ExactDistribution> ComputeExactDistribution(
      const Database& x, double epsilon);
  ExactDistribution(int bits, size_t n, std::vector<double> log_probs)
      : bits_(bits), n_(n), log_probs_(std::move(log_probs)) {}

  int bits_;
  size_t n_;
  std::vector<double> log_probs_;
};

// Requires n * l <= kMaxDistributionBits.
absl::StatusOr<ExactDistribution> ComputeExactDistribution(const Database& x,
                                                           double epsilon);

// q(rows) straight from the tables.
double QueryValue(const StatisticalQuery& q, std::span<const Row> rows);

// The debiased answer on y, with g and C_phi recomputed from the tables.
double UnbiasedEstimate(const StatisticalQuery& q, std::span<const Row> y,
                        double epsilon);

// Largest |log p(y|x) - log p(y|x')| over all x, every neighbour x' of x and
// every y, with both normalizers computed by enumeration. Because the two
// pmfs differ only through row i, y is enumerated over the three classes
// y_i = x_i, y_i = x'_i and y_i elsewhere. Requires n * l <= 12. Returns
// +infinity when eps >= 700.
absl::StatusOr<double> MaxNeighborLogRatio(DataUniverse universe, size_t n,
                                           double epsilon);

// Squared error of the conditional-mean estimator E[q(X) | Y = y] under a
// uniform prior on X, for the per-row randomized response that keeps a row
// with probability `keep` and otherwise picks one of the other 2^l - 1 values
// uniformly. Entry i is the exact expected error when X is database i.
absl::StatusOr<std::vector<double>> ConditionalMeanDistortion(
    const StatisticalQuery& q, double keep);

// Exact expected squared error of the unbiased estimator under the mechanism,
// one entry per input database.
absl::StatusOr<std::vector<double>> UnbiasedDistortion(
    const StatisticalQuery& q, double epsilon);

// `count` keep probabilities from 2^{-l} (uniform output) up to the
// mechanism's own 1/g(eps), evenly spaced and inclusive. Every point is
// eps-DP.
std::vector<double> DpKeepProbabilityGrid(int bits, double epsilon, int count);

struct MinimaxReport {
  // min over the grid of max over (query, x) of the conditional-mean error.
  double value = 0.0;
  double best_keep_probability = 0.0;
  // max over (query, x) of the unbiased estimator's error under the
  // mechanism itself.
  double mechanism_unbiased_worst = 0.0;
  // Only symmetric per-row mechanisms are searched, so `value` bounds the
  // true minimax distortion from above; it does not solve it.
  std::string scope_note;
};

// Every query in `family` must be over n rows with n * l <= 6.
absl::StatusOr<MinimaxReport> MicroMinimax(
    std::span<const StatisticalQuery> family, double epsilon,
    std::span<const double> keep_grid);

// All Hamming queries q_z for z in X^n.
absl::StatusOr<std::vector<StatisticalQuery>> HammingFamily(
    DataUniverse universe, size_t n);

struct ProperMinimax {
  // min over maps y -> achievable value of max_x E[(q_hat(Y) - q(x))^2].
  double value = 0.0;
  // The minimizing map, indexed like DecodeDatabase.
  std::vector<double> estimator;
};

// Exhaustive search over proper estimators for the mechanism at eps.
// RESOURCE_EXHAUSTED when |values|^|outputs| exceeds kMaxEstimatorCandidates.
absl::StatusOr<ProperMinimax> MinimaxProperEstimator(const StatisticalQuery& q,
                                                     double epsilon);

// One line of the `verify` report.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerificationOptions {
  // Largest n * l enumerated by the DP and unbiasedness checks.
  int max_bits = kMaxDistributionBits;
  std::vector<double> epsilons = {0.25, 1.0, 2.0};
  int random_instances = 100;
  uint64_t seed = 1;
};

std::vector<CheckResult> RunVerificationSuite(
    const VerificationOptions& options);

}  // namespace dpsynth::oracle

#endif  // DPSYNTH_ORACLE_H_
