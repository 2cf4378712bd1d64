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

// Graphs as edge-indicator databases and private cut queries.
//
// A graph on V vertices is encoded as a 1-bit database with V^2 rows; row
// i*V + j is 1 iff the directed pair (i, j) is an edge. Undirected inputs are
// stored with both orientations unless symmetrization is turned off.

#ifndef DPSYNTH_GRAPH_H_
#define DPSYNTH_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpsynth/core.h"
#include "dpsynth/estimators.h"

namespace dpsynth {

// Largest V^2 accepted by ReleaseGraph and Graph::ToDatabase.
inline constexpr uint64_t kMaxGraphPairs = 100'000'000;

using Edge = std::pair<uint32_t, uint32_t>;

class Graph {
 public:
  // Duplicate edges are merged. Fails if an endpoint is >= vertex_count.
  static absl::StatusOr<Graph> Create(uint32_t vertex_count,
                                      std::vector<Edge> edges);
  // Inverse of ToDatabase. `y` must have l = 1 and a square row count.
  static absl::StatusOr<Graph> FromDatabase(const Database& y);

  uint32_t vertex_count() const { return vertex_count_; }
  // Sorted, without duplicates.
  std::span<const Edge> edges() const { return edges_; }
  size_t edge_count() const { return edges_.size(); }
  bool HasEdge(uint32_t i, uint32_t j) const;

  absl::StatusOr<Database> ToDatabase() const;

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  Graph(uint32_t vertex_count, std::vector<Edge> edges)
      : vertex_count_(vertex_count), edges_(std::move(edges)) {}

  uint32_t vertex_count_;
  std::vector<Edge> edges_;
};

// A pair of disjoint vertex sets. Either set may be empty.
class CutQuery {
 public:
  static absl::StatusOr<CutQuery> Create(uint32_t vertex_count,
                                         std::vector<uint32_t> source,
                                         std::vector<uint32_t> sink);

  uint32_t vertex_count() const { return vertex_count_; }
  std::span<const uint32_t> source() const { return source_; }
  std::span<const uint32_t> sink() const { return sink_; }
  // |S| |T|, the largest possible answer.
  int64_t pair_count() const {
    return static_cast<int64_t>(source_.size()) *
           static_cast<int64_t>(sink_.size());
  }

 private:
  CutQuery(uint32_t vertex_count, std::vector<uint32_t> source,
           std::vector<uint32_t> sink)
      : vertex_count_(vertex_count),
        source_(std::move(source)),
        sink_(std::move(sink)) {}

  uint32_t vertex_count_;
  std::vector<uint32_t> source_;
  std::vector<uint32_t> sink_;
};

// Number of edges (i, j) with i in S and j in T.
absl::StatusOr<int64_t> CutValue(const Graph& g, const CutQuery& q);

// Runs the mechanism with l = 1 on g's encoding. eps >= 0.
absl::StatusOr<Database> ReleaseGraph(const Graph& g, double epsilon,
                                      RandomSource& rng);

// Estimate of the cut from a released edge-indicator database. eps > 0.
absl::StatusOr<double> AnswerCut(const Database& y, const CutQuery& q,
                                 double epsilon,
                                 CutEstimate kind = CutEstimate::kUnbiased);

// S is a uniformly random floor(V/2)-subset and T its complement.
absl::StatusOr<CutQuery> RandomBisectionCut(uint32_t vertex_count,
                                            RandomSource& rng);

// G(V, p) with each unordered pair {i, j}, i != j, present with probability
// p, stored in both orientations.
absl::StatusOr<Graph> ErdosRenyiGraph(uint32_t vertex_count, double p,
                                      RandomSource& rng);

// Undirected Chung-Lu graph whose expected degrees follow a power law with
// the given exponent (> 2), scaled to the requested average degree. Stored in
// both orientations.
absl::StatusOr<Graph> PowerLawGraph(uint32_t vertex_count,
                                    double average_degree, double exponent,
                                    RandomSource& rng);

struct EdgeListOptions {
  // Vertex ids in the file start at 1.
  bool one_based = false;
  // Each line "i j" also adds (j, i).
  bool symmetrize = true;
  // 0 means one more than the largest id seen.
  uint32_t vertex_count = 0;
};

// One "i j" pair per line; '#' starts a comment. Self-loops are dropped.
absl::StatusOr<Graph> ParseEdgeList(std::string_view text,
                                    const EdgeListOptions& options = {});

// Two lines of whitespace-separated vertex ids, S then T, after removing
// '#' comment lines. A blank line is an empty set.
absl::StatusOr<CutQuery> ParseCutSpec(std::string_view text,
                                      uint32_t vertex_count,
                                      bool one_based = false);

}  // namespace dpsynth

#endif  // DPSYNTH_GRAPH_H_
