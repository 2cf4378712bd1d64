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

// Domain model shared by every other module: the binary-attribute data
// universe, databases over it, Hamming distance, and the seedable random
// source that all stochastic operations take explicitly.

#ifndef DPSYNTH_CORE_H_
#define DPSYNTH_CORE_H_

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace dpsynth {

// Maximum number of binary attributes per row.
inline constexpr int kMaxAttributeBits = 30;

// Exhaustive enumeration of (2^l)^n databases is allowed only for n * l up
// to this many bits.
inline constexpr int kMaxEnumerationBits = 24;

// A row value: attribute k of the row is bit k.
using Row = uint32_t;

// The finite row domain {0,1}^l, encoded as the integers [0, 2^l).
class DataUniverse {
 public:
  static absl::StatusOr<DataUniverse> Create(int bits);

  int bits() const { return bits_; }
  uint32_t cardinality() const { return uint32_t{1} << bits_; }
  bool Contains(uint64_t value) const { return value < cardinality(); }

  friend bool operator==(const DataUniverse&, const DataUniverse&) = default;

 private:
  explicit DataUniverse(int bits) : bits_(bits) {}
  int bits_;
};

// A length-n sequence of rows drawn from a DataUniverse.
class Database {
 public:
  static absl::StatusOr<Database> Create(DataUniverse universe,
                                         std::vector<Row> rows);

  const DataUniverse& universe() const { return universe_; }
  std::span<const Row> rows() const { return rows_; }
  size_t size() const { return rows_.size(); }
  Row operator[](size_t i) const { return rows_[i]; }

  friend bool operator==(const Database&, const Database&) = default;

 private:
  Database(DataUniverse universe, std::vector<Row> rows)
      : universe_(universe), rows_(std::move(rows)) {}

  DataUniverse universe_;
  std::vector<Row> rows_;
};

// Returns |{i : x_i != y_i}|. Rows are compared as whole values.
// counts[v] = number of rows equal to v, for every v in the universe.
std::vector<uint64_t> RowHistogram(const Database& x);

absl::StatusOr<int64_t> HammingDistance(const Database& x, const Database& y);

// True iff x and y differ in exactly one row.
absl::StatusOr<bool> IsNeighbor(const Database& x, const Database& y);

// Every database of size n over a universe, in lexicographic order of the
// base-2^l digits (row 0 is the least significant digit). Databases are
// materialized lazily by index.
class DatabaseEnumeration {
 public:
  class Iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Database;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Database;

    Iterator() = default;
    Iterator(const DatabaseEnumeration* owner, uint64_t index)
        : owner_(owner), index_(index) {}

    Database operator*() const { return owner_->At(index_); }
    Iterator& operator++() {
      ++index_;
      return *this;
    }
    Iterator operator++(int) {
      Iterator copy = *this;
      ++index_;
      return copy;
    }
    friend bool operator==(const Iterator& a, const Iterator& b) {
      return a.index_ == b.index_;
    }

   private:
    const DatabaseEnumeration* owner_ = nullptr;
    uint64_t index_ = 0;
  };

  // Fails with RESOURCE_EXHAUSTED when n * l > kMaxEnumerationBits.
  static absl::StatusOr<DatabaseEnumeration> Create(DataUniverse universe,
                                                    size_t n);

  uint64_t size() const { return uint64_t{1} << (universe_.bits() * n_); }
  Database At(uint64_t index) const;
  // Inverse of At().
  uint64_t IndexOf(const Database& x) const;

  Iterator begin() const { return Iterator(this, 0); }
  Iterator end() const { return Iterator(this, size()); }

 private:
  DatabaseEnumeration(DataUniverse universe, size_t n)
      : universe_(universe), n_(n) {}

  DataUniverse universe_;
  size_t n_;
};

absl::StatusOr<DatabaseEnumeration> EnumerateDatabases(DataUniverse universe,
                                                       size_t n);

// Reproducible pseudo-random stream identified by (seed, stream-id).
//
// Identical (seed, stream) pairs replay identical draw sequences. Streams are
// decorrelated by hashing both 64-bit words into the generator's seed
// sequence. Satisfies UniformRandomBitGenerator so it can be handed to
// <random> distributions and std::shuffle.
class RandomSource {
 public:
  using result_type = uint64_t;

  explicit RandomSource(uint64_t seed, uint64_t stream = 0);

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  uint64_t seed() const { return seed_; }
  uint64_t stream() const { return stream_; }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  // Uniform on {0, ..., bound - 1}; bound must be positive.
  uint64_t UniformInt(uint64_t bound);
  bool Bernoulli(double p) { return Uniform() < p; }

  // An independent source for sub-task `index`, sharing this source's seed.
  // Does not advance this source.
  RandomSource Fork(uint64_t index) const;

 private:
  uint64_t seed_;
  uint64_t stream_;
  std::mt19937_64 engine_;
};

// Compensated (Neumaier) summation; the result does not depend on how large
// partial sums are relative to the addends.
class CompensatedSum {
 public:
  void Add(double value);
  double Total() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace dpsynth

#endif  // DPSYNTH_CORE_H_
