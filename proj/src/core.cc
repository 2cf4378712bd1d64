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

#include "dpsynth/core.h"

#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace dpsynth {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 SeedEngine(uint64_t seed, uint64_t stream) {
  std::seed_seq sequence{
      static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
      static_cast<uint32_t>(stream), static_cast<uint32_t>(stream >> 32)};
  return std::mt19937_64(sequence);
}

absl::Status CheckSameShape(const Database& x, const Database& y) {
  if (x.universe() != y.universe()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension mismatch: universes have %d and %d bits",
                        x.universe().bits(), y.universe().bits()));
  }
  if (x.size() != y.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("dimension mismatch: databases have %d and %d rows",
                        x.size(), y.size()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<DataUniverse> DataUniverse::Create(int bits) {
  if (bits < 1 || bits > kMaxAttributeBits) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "attribute count must be in [1, %d], got %d", kMaxAttributeBits, bits));
  }
  return DataUniverse(bits);
}

absl::StatusOr<Database> Database::Create(DataUniverse universe,
                                          std::vector<Row> rows) {
  if (rows.empty()) {
    return absl::InvalidArgumentError("database must have at least one row");
  }
  for (size_t i = 0; i < rows.size(); ++i) {
    if (!universe.Contains(rows[i])) {
      return absl::InvalidArgumentError(
          absl::StrFormat("row %d has value %d outside the %d-bit universe", i,
                          rows[i], universe.bits()));
    }
  }
  return Database(universe, std::move(rows));
}

std::vector<uint64_t> RowHistogram(const Database& x) {
  std::vector<uint64_t> counts(x.universe().cardinality(), 0);
  for (Row r : x.rows()) ++counts[r];
  return counts;
}

absl::StatusOr<int64_t> HammingDistance(const Database& x, const Database& y) {
  if (absl::Status status = CheckSameShape(x, y); !status.ok()) {
    return status;
  }
  int64_t distance = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    distance += x[i] != y[i];
  }
  return distance;
}

absl::StatusOr<bool> IsNeighbor(const Database& x, const Database& y) {
  absl::StatusOr<int64_t> distance = HammingDistance(x, y);
  if (!distance.ok()) return distance.status();
  return *distance == 1;
}

absl::StatusOr<DatabaseEnumeration> DatabaseEnumeration::Create(
    DataUniverse universe, size_t n) {
  if (n == 0) {
    return absl::InvalidArgumentError("database must have at least one row");
  }
  if (n * static_cast<size_t>(universe.bits()) >
      static_cast<size_t>(kMaxEnumerationBits)) {
    return absl::ResourceExhaustedError(
        absl::StrFormat("enumeration too large: n * l = %d exceeds %d",
                        n * universe.bits(), kMaxEnumerationBits));
  }
  return DatabaseEnumeration(universe, n);
}

Database DatabaseEnumeration::At(uint64_t index) const {
  const int bits = universe_.bits();
  const uint64_t mask = universe_.cardinality() - 1;
  std::vector<Row> rows(n_);
  for (size_t i = 0; i < n_; ++i) {
    rows[i] = static_cast<Row>((index >> (bits * i)) & mask);
  }
  return *Database::Create(universe_, std::move(rows));
}

uint64_t DatabaseEnumeration::IndexOf(const Database& x) const {
  uint64_t index = 0;
  for (size_t i = 0; i < n_; ++i) {
    index |= uint64_t{x[i]} << (universe_.bits() * i);
  }
  return index;
}

absl::StatusOr<DatabaseEnumeration> EnumerateDatabases(DataUniverse universe,
                                                       size_t n) {
  return DatabaseEnumeration::Create(universe, n);
}

RandomSource::RandomSource(uint64_t seed, uint64_t stream)
    : seed_(seed), stream_(stream), engine_(SeedEngine(seed, stream)) {}

uint64_t RandomSource::UniformInt(uint64_t bound) {
  if (bound == 1) return 0;
  std::uniform_int_distribution<uint64_t> distribution(0, bound - 1);
  return distribution(engine_);
}

RandomSource RandomSource::Fork(uint64_t index) const {
  return RandomSource(seed_, SplitMix64(SplitMix64(stream_) ^ index));
}

void CompensatedSum::Add(double value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

}  // namespace dpsynth
