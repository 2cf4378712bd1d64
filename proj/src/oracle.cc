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

#include "dpsynth/oracle.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"
#include "dpsynth/status_macros.h"

namespace dpsynth::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOracleIdentityEpsilon = 700.0;

// dist[m] = number of nonzero l-bit groups of m, i.e. the Hamming distance
// between two databases whose packed indices XOR to m.
std::vector<uint8_t> GroupDistanceTable(int bits, size_t n) {
  const uint64_t size = uint64_t{1} << (bits * n);
  const uint64_t group_mask = (uint64_t{1} << bits) - 1;
  std::vector<uint8_t> dist(size);
  for (uint64_t m = 0; m < size; ++m) {
    int d = 0;
    for (size_t r = 0; r < n; ++r) {
      if (((m >> (r * bits)) & group_mask) != 0) ++d;
    }
    dist[m] = static_cast<uint8_t>(d);
  }
  return dist;
}

absl::Status CheckBits(int bits, size_t n, int cap) {
  if (n == 0) return absl::InvalidArgumentError("n must be positive");
  if (static_cast<uint64_t>(bits) * n > static_cast<uint64_t>(cap)) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "n * l = %d exceeds the oracle cap of %d", bits * n, cap));
  }
  return absl::OkStatus();
}

// Row-transition matrix entries of the symmetric randomized response.
struct Channel {
  double keep;
  double each_other;
};

Channel MechanismChannel(int bits, double epsilon) {
  const double others = std::ldexp(1.0, bits) - 1.0;
  if (epsilon >= kOracleIdentityEpsilon) return {1.0, 0.0};
  const double w = std::exp(-epsilon);
  const double norm = 1.0 + others * w;
  return {1.0 / norm, w / norm};
}

// P[y * size + x] = p(y | x).
std::vector<double> TransitionMatrix(size_t n, Channel channel,
                                     const std::vector<uint8_t>& dist) {
  const uint64_t size = dist.size();
  std::vector<double> power_keep(n + 1), power_other(n + 1);
  for (size_t d = 0; d <= n; ++d) {
    power_keep[d] = std::pow(channel.keep, static_cast<double>(n - d));
    power_other[d] = std::pow(channel.each_other, static_cast<double>(d));
  }
  std::vector<double> p(size * size);
  for (uint64_t y = 0; y < size; ++y) {
    for (uint64_t x = 0; x < size; ++x) {
      const uint8_t d = dist[x ^ y];
      p[y * size + x] = power_keep[d] * power_other[d];
    }
  }
  return p;
}

std::vector<double> AllQueryValues(const StatisticalQuery& q) {
  const int bits = q.universe().bits();
  const size_t n = q.size();
  const uint64_t size = uint64_t{1} << (bits * n);
  std::vector<double> values(size);
  for (uint64_t i = 0; i < size; ++i) {
    values[i] = QueryValue(q, DecodeDatabase(i, bits, n));
  }
  return values;
}

}  // namespace

double LogSumExp(std::span<const double> values) {
  double top = -kInf;
  for (double v : values) top = std::max(top, v);
  if (top == -kInf) return -kInf;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - top);
  return top + std::log(sum);
}

std::vector<Row> DecodeDatabase(uint64_t index, int bits, size_t n) {
  std::vector<Row> rows(n);
  const uint64_t mask = (uint64_t{1} << bits) - 1;
  for (size_t r = 0; r < n; ++r) {
    rows[r] = static_cast<Row>((index >> (r * bits)) & mask);
  }
  return rows;
}

double ExactDistribution::Expectation(
    const std::function<double(std::span<const Row>)>& f) const {
  double total = 0.0;
  for (uint64_t i = 0; i < log_probs_.size(); ++i) {
    if (log_probs_[i] == -kInf) continue;
    total += std::exp(log_probs_[i]) * f(Output(i));
  }
  return total;
}

absl::StatusOr<ExactDistribution> ComputeExactDistribution(const Database& x,
                                                           double epsilon) {
  const int bits = x.universe().bits();
  const size_t n = x.size();
  RETURN_IF_ERROR(CheckBits(bits, n, kMaxDistributionBits));
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be nonnegative");
  }
  const uint64_t size = uint64_t{1} << (bits * n);
  std::vector<double> log_weights(size);
  for (uint64_t i = 0; i < size; ++i) {
    const std::vector<Row> y = DecodeDatabase(i, bits, n);
    int d = 0;
    for (size_t r = 0; r < n; ++r) d += x[r] != y[r] ? 1 : 0;
    if (epsilon >= kOracleIdentityEpsilon) {
      log_weights[i] = d == 0 ? 0.0 : -kInf;
    } else {
      log_weights[i] = -epsilon * d;
    }
  }
  const double log_z = LogSumExp(log_weights);
  for (double& w : log_weights) w -= log_z;
  return ExactDistribution(bits, n, std::move(log_weights));
}

double QueryValue(const StatisticalQuery& q, std::span<const Row> rows) {
  double numerator = 0.0;
  double denominator = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto table = q.functions()[q.assignment()[i]].table();
    numerator += table[rows[i]];
    const auto [lo, hi] = std::minmax_element(table.begin(), table.end());
    denominator += *hi - *lo;
  }
  return numerator / denominator;
}

double UnbiasedEstimate(const StatisticalQuery& q, std::span<const Row> y,
                        double epsilon) {
  const double raw = QueryValue(q, y);
  if (epsilon >= kOracleIdentityEpsilon) return raw;
  const double w = std::exp(-epsilon);
  const double g = 1.0 + (std::ldexp(1.0, q.universe().bits()) - 1.0) * w;
  double total = 0.0;
  double ranges = 0.0;
  for (size_t i = 0; i < q.size(); ++i) {
    const auto table = q.functions()[q.assignment()[i]].table();
    for (double v : table) total += v;
    const auto [lo, hi] = std::minmax_element(table.begin(), table.end());
    ranges += *hi - *lo;
  }
  const double centering = total / ranges;
  return (g * raw - w * centering) / (1.0 - w);
}

absl::StatusOr<double> MaxNeighborLogRatio(DataUniverse universe, size_t n,
                                           double epsilon) {
  const int bits = universe.bits();
  RETURN_IF_ERROR(CheckBits(bits, n, kMaxDistributionBits));
  if (!(epsilon >= 0.0)) {
    return absl::InvalidArgumentError("epsilon must be nonnegative");
  }
  if (epsilon >= kOracleIdentityEpsilon) return kInf;
  const std::vector<uint8_t> dist = GroupDistanceTable(bits, n);
  const uint64_t size = dist.size();
  const Row values = universe.cardinality();

  // log Z(x) by summing e^{-eps d(x, y)} over every y. The largest term is
  // 1 (y = x), so the plain sum cannot overflow.
  std::vector<double> weight(n + 1);
  for (size_t d = 0; d <= n; ++d) weight[d] = std::exp(-epsilon * d);
  std::vector<double> log_z(size);
  for (uint64_t x = 0; x < size; ++x) {
    double z = 0.0;
    for (uint64_t y = 0; y < size; ++y) z += weight[dist[x ^ y]];
    log_z[x] = std::log(z);
  }

  const uint64_t group_mask = values - 1;
  double worst = 0.0;
  for (uint64_t x = 0; x < size; ++x) {
    for (size_t i = 0; i < n; ++i) {
      const int shift = static_cast<int>(i) * bits;
      const uint64_t cleared = x & ~(group_mask << shift);
      const uint64_t a = (x >> shift) & group_mask;
      for (uint64_t b = 0; b < values; ++b) {
        if (b == a) continue;
        const uint64_t xp = cleared | (b << shift);
        // Representatives of the three classes of y_i; the other rows of y
        // copy x.
        uint64_t candidates[3] = {a, b, a};
        for (uint64_t c = 0; c < values; ++c) {
          if (c != a && c != b) {
            candidates[2] = c;
            break;
          }
        }
        for (uint64_t c : candidates) {
          const uint64_t y = cleared | (c << shift);
          const double log_p = -epsilon * dist[x ^ y] - log_z[x];
          const double log_pp = -epsilon * dist[xp ^ y] - log_z[xp];
          worst = std::max(worst, std::abs(log_p - log_pp));
        }
      }
    }
  }
  return worst;
}

absl::StatusOr<std::vector<double>> ConditionalMeanDistortion(
    const StatisticalQuery& q, double keep) {
  const int bits = q.universe().bits();
  const size_t n = q.size();
  RETURN_IF_ERROR(CheckBits(bits, n, kMaxMinimaxBits));
  const double others = std::ldexp(1.0, bits) - 1.0;
  if (!(keep >= 0.0 && keep <= 1.0)) {
    return absl::InvalidArgumentError("keep probability must be in [0, 1]");
  }
  const std::vector<uint8_t> dist = GroupDistanceTable(bits, n);
  const uint64_t size = dist.size();
  const std::vector<double> p =
      TransitionMatrix(n, {keep, (1.0 - keep) / others}, dist);
  const std::vector<double> truth = AllQueryValues(q);

  std::vector<double> posterior_mean(size);
  for (uint64_t y = 0; y < size; ++y) {
    double weight = 0.0, weighted = 0.0;
    for (uint64_t x = 0; x < size; ++x) {
      weight += p[y * size + x];
      weighted += p[y * size + x] * truth[x];
    }
    // Unreachable outputs keep 0; they carry no probability.
    posterior_mean[y] = weight > 0.0 ? weighted / weight : 0.0;
  }
  std::vector<double> error(size, 0.0);
  for (uint64_t x = 0; x < size; ++x) {
    for (uint64_t y = 0; y < size; ++y) {
      const double diff = posterior_mean[y] - truth[x];
      error[x] += p[y * size + x] * diff * diff;
    }
  }
  return error;
}

absl::StatusOr<std::vector<double>> UnbiasedDistortion(
    const StatisticalQuery& q, double epsilon) {
  const int bits = q.universe().bits();
  const size_t n = q.size();
  RETURN_IF_ERROR(CheckBits(bits, n, kMaxDistributionBits));
  if (!(epsilon > 0.0)) {
    return absl::FailedPreconditionError("estimator needs eps > 0");
  }
  const std::vector<uint8_t> dist = GroupDistanceTable(bits, n);
  const uint64_t size = dist.size();
  const Channel channel = MechanismChannel(bits, epsilon);
  std::vector<double> estimate(size);
  for (uint64_t y = 0; y < size; ++y) {
    estimate[y] = UnbiasedEstimate(q, DecodeDatabase(y, bits, n), epsilon);
  }
  const std::vector<double> truth = AllQueryValues(q);
  std::vector<double> power_keep(n + 1), power_other(n + 1);
  for (size_t d = 0; d <= n; ++d) {
    power_keep[d] = std::pow(channel.keep, static_cast<double>(n - d));
    power_other[d] = std::pow(channel.each_other, static_cast<double>(d));
  }
  std::vector<double> error(size, 0.0);
  for (uint64_t x = 0; x < size; ++x) {
    for (uint64_t y = 0; y < size; ++y) {
      const uint8_t d = dist[x ^ y];
      const double diff = estimate[y] - truth[x];
      error[x] += power_keep[d] * power_other[d] * diff * diff;
    }
  }
  return error;
}

std::vector<double> DpKeepProbabilityGrid(int bits, double epsilon, int count) {
  const double lo = std::ldexp(1.0, -bits);
  const double hi = MechanismChannel(bits, epsilon).keep;
  std::vector<double> grid;
  if (count <= 1) return {hi};
  for (int k = 0; k < count; ++k) {
    grid.push_back(k == count - 1 ? hi : lo + (hi - lo) * k / (count - 1));
  }
  return grid;
}

absl::StatusOr<std::vector<StatisticalQuery>> HammingFamily(
    DataUniverse universe, size_t n) {
  RETURN_IF_ERROR(CheckBits(universe.bits(), n, kMaxMinimaxBits));
  const uint64_t size = uint64_t{1} << (universe.bits() * n);
  std::vector<StatisticalQuery> family;
  for (uint64_t z = 0; z < size; ++z) {
    ASSIGN_OR_RETURN(
        const Database center,
        Database::Create(universe, DecodeDatabase(z, universe.bits(), n)));
    ASSIGN_OR_RETURN(StatisticalQuery q, MakeHammingQuery(center));
    family.push_back(std::move(q));
  }
  return family;
}

absl::StatusOr<MinimaxReport> MicroMinimax(
    std::span<const StatisticalQuery> family, double epsilon,
    std::span<const double> keep_grid) {
  if (family.empty()) return absl::InvalidArgumentError("empty query family");
  if (keep_grid.empty() || keep_grid.size() > kMaxKeepGridSize) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "keep grid must have 1 to %d points", kMaxKeepGridSize));
  }
  const DataUniverse universe = family[0].universe();
  const size_t n = family[0].size();
  for (const StatisticalQuery& q : family) {
    if (q.universe() != universe || q.size() != n) {
      return absl::InvalidArgumentError(
          "dimension mismatch: family mixes universes or sizes");
    }
  }
  RETURN_IF_ERROR(CheckBits(universe.bits(), n, kMaxMinimaxBits));
  const double others = std::ldexp(1.0, universe.bits()) - 1.0;
  const double bound =
      epsilon >= kOracleIdentityEpsilon ? kInf : std::exp(epsilon);
  for (double keep : keep_grid) {
    // p / ((1 - p) / others) must lie in [e^{-eps}, e^{eps}].
    const double ratio = keep * others / (1.0 - keep);
    if (!(keep >= 0.0 && keep <= 1.0) || ratio > bound * (1.0 + 1e-12) ||
        ratio * bound < 1.0 - 1e-12) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "keep probability %g is not eps-DP at eps = %g", keep, epsilon));
    }
  }

  MinimaxReport report;
  report.value = kInf;
  for (double keep : keep_grid) {
    double worst = 0.0;
    for (const StatisticalQuery& q : family) {
      ASSIGN_OR_RETURN(const std::vector<double> errors,
                       ConditionalMeanDistortion(q, keep));
      worst = std::max(worst, *std::max_element(errors.begin(), errors.end()));
    }
    if (worst < report.value) {
      report.value = worst;
      report.best_keep_probability = keep;
    }
  }
  if (epsilon > 0.0) {
    for (const StatisticalQuery& q : family) {
      ASSIGN_OR_RETURN(const std::vector<double> errors,
                       UnbiasedDistortion(q, epsilon));
      report.mechanism_unbiased_worst =
          std::max(report.mechanism_unbiased_worst,
                   *std::max_element(errors.begin(), errors.end()));
    }
  } else {
    report.mechanism_unbiased_worst = kInf;
  }
  report.scope_note =
      "searched symmetric per-row randomized response only; an upper bound "
      "on the minimax distortion, not its value";
  return report;
}

absl::StatusOr<ProperMinimax> MinimaxProperEstimator(const StatisticalQuery& q,
                                                     double epsilon) {
  const int bits = q.universe().bits();
  const size_t n = q.size();
  RETURN_IF_ERROR(CheckBits(bits, n, kMaxMinimaxBits));
  const std::vector<double> truth = AllQueryValues(q);
  std::vector<double> values = truth;
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double v : values) {
    if (distinct.empty() ||
        v - distinct.back() > 1e-12 * std::max(1.0, std::abs(v))) {
      distinct.push_back(v);
    }
  }
  const uint64_t size = truth.size();
  double candidates =
      std::pow(static_cast<double>(distinct.size()), static_cast<double>(size));
  if (candidates > static_cast<double>(kMaxEstimatorCandidates)) {
    return absl::ResourceExhaustedError(
        absl::StrFormat("%g candidate estimators exceed the cap of %d",
                        candidates, kMaxEstimatorCandidates));
  }
  const std::vector<uint8_t> dist = GroupDistanceTable(bits, n);
  const std::vector<double> p =
      TransitionMatrix(n, MechanismChannel(bits, epsilon), dist);

  std::vector<size_t> choice(size, 0);
  ProperMinimax best;
  best.value = kInf;
  while (true) {
    double worst = 0.0;
    for (uint64_t x = 0; x < size && worst < best.value; ++x) {
      double error = 0.0;
      for (uint64_t y = 0; y < size; ++y) {
        const double diff = distinct[choice[y]] - truth[x];
        error += p[y * size + x] * diff * diff;
      }
      worst = std::max(worst, error);
    }
    if (worst < best.value) {
      best.value = worst;
      best.estimator.resize(size);
      for (uint64_t y = 0; y < size; ++y) {
        best.estimator[y] = distinct[choice[y]];
      }
    }
    // Odometer increment.
    uint64_t pos = 0;
    while (pos < size && ++choice[pos] == distinct.size()) {
      choice[pos] = 0;
      ++pos;
    }
    if (pos == size) break;
  }
  return best;
}

}  // namespace dpsynth::oracle
