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

// The synthetic-database releasing mechanism: every row is kept with
// probability 1/g(eps) and otherwise replaced by one of the other 2^l - 1
// values uniformly at random, where g(eps) = 1 + (2^l - 1) e^{-eps}. The
// joint output pmf is e^{-eps d(x, y)} / g(eps)^n, which makes this both an
// exponential mechanism with score -d and a per-row randomized response.

#ifndef DPSYNTH_MECHANISM_H_
#define DPSYNTH_MECHANISM_H_

#include <cstddef>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"

namespace dpsynth {

// At or above this privacy level e^{-eps} is treated as exactly zero and the
// mechanism releases its input unchanged.
inline constexpr double kIdentityEpsilon = 700.0;

class MechanismParams {
 public:
  // eps must be finite or +infinity and nonnegative.
  static absl::StatusOr<MechanismParams> Create(double epsilon,
                                                DataUniverse universe);

  double epsilon() const { return epsilon_; }
  const DataUniverse& universe() const { return universe_; }
  // e^{-eps}, or exactly 0 for identity releases.
  double exp_neg_epsilon() const { return exp_neg_epsilon_; }
  // g(eps) = 1 + (2^l - 1) e^{-eps}.
  double g() const { return g_; }
  double keep_probability() const { return 1.0 / g_; }
  // Probability of each particular replacement value, e^{-eps} / g(eps).
  double replace_probability() const { return exp_neg_epsilon_ / g_; }
  bool is_identity() const { return exp_neg_epsilon_ == 0.0; }

 private:
  MechanismParams(double epsilon, DataUniverse universe);

  double epsilon_;
  DataUniverse universe_;
  double exp_neg_epsilon_;
  double g_;
};

// Draws a synthetic database, consuming rows from `rng` in order: a keep/flip
// coin per row and, on a flip, one uniform index into the 2^l - 1
// alternatives.
absl::StatusOr<Database> SampleSynthetic(const Database& x,
                                         const MechanismParams& params,
                                         RandomSource& rng);

// Single-row step of SampleSynthetic, with no validation.
Row SampleRow(Row value, const MechanismParams& params, RandomSource& rng);

// log p(y | x) = -eps d(x, y) - n log g(eps). Identity releases give 0 for
// y == x and -infinity otherwise.
absl::StatusOr<double> ExactLogPmf(const Database& x, const Database& y,
                                   const MechanismParams& params);

// Largest |log p(y|x) - log p(y|x')| over neighbouring (x, x') and all
// outputs y, for databases of n rows. Requires n * l <= 12.
//
// Small instances are enumerated completely. When the full triple loop would
// exceed kFullDpEnumerationBudget pmf evaluations, x is restricted to the
// all-zeros database: the pmf depends on (x, y) only through d(x, y), which
// is invariant under XOR-ing the same per-row mask into x, x' and y, so every
// neighbour pair is equivalent to one with x = 0. Identity releases return
// +infinity.
absl::StatusOr<double> VerifyDp(DataUniverse universe, size_t n,
                                const MechanismParams& params);

inline constexpr int kMaxDpVerificationBits = 12;
inline constexpr uint64_t kFullDpEnumerationBudget = uint64_t{1} << 24;

}  // namespace dpsynth

#endif  // DPSYNTH_MECHANISM_H_
