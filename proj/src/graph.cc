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

#include "dpsynth/graph.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/ascii.h"
#include "absl/strings/match.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dpsynth/mechanism.h"
#include "dpsynth/status_macros.h"

namespace dpsynth {

namespace {

absl::Status CheckPairCount(uint32_t vertex_count) {
  const uint64_t pairs = uint64_t{vertex_count} * vertex_count;
  if (pairs > kMaxGraphPairs) {
    return absl::ResourceExhaustedError(
        absl::StrFormat("|V|^2 = %d exceeds the cap of %d vertex pairs", pairs,
                        kMaxGraphPairs));
  }
  if (vertex_count == 0) {
    return absl::InvalidArgumentError("graph has no vertices");
  }
  return absl::OkStatus();
}

// Strips a trailing '#' comment and surrounding whitespace.
absl::string_view StripComment(absl::string_view line) {
  const size_t hash = line.find('#');
  if (hash != absl::string_view::npos) line = line.substr(0, hash);
  return absl::StripAsciiWhitespace(line);
}

absl::StatusOr<std::vector<uint32_t>> ParseIds(absl::string_view line,
                                               int line_number,
                                               bool one_based) {
  std::vector<uint32_t> ids;
  for (absl::string_view token :
       absl::StrSplit(line, absl::ByAnyChar(" \t,"), absl::SkipEmpty())) {
    uint32_t id = 0;
    if (!absl::SimpleAtoi(token, &id) || (one_based && id == 0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "line %d: bad vertex id \"%s\"", line_number, std::string(token)));
    }
    ids.push_back(one_based ? id - 1 : id);
  }
  return ids;
}

}  // namespace

absl::StatusOr<Graph> Graph::Create(uint32_t vertex_count,
                                    std::vector<Edge> edges) {
  if (vertex_count == 0) {
    return absl::InvalidArgumentError("graph has no vertices");
  }
  for (const Edge& e : edges) {
    if (e.first >= vertex_count || e.second >= vertex_count) {
      return absl::InvalidArgumentError(
          absl::StrFormat("edge (%d, %d) has an endpoint outside [0, %d)",
                          e.first, e.second, vertex_count));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph(vertex_count, std::move(edges));
}

absl::StatusOr<Graph> Graph::FromDatabase(const Database& y) {
  if (y.universe().bits() != 1) {
    return absl::InvalidArgumentError(
        "dimension mismatch: an edge database has 1-bit rows");
  }
  const auto vertices = static_cast<uint64_t>(
      std::llround(std::sqrt(static_cast<double>(y.size()))));
  if (vertices * vertices != y.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: %d rows is not |V|^2 for any |V|", y.size()));
  }
  std::vector<Edge> edges;
  for (uint64_t r = 0; r < y.size(); ++r) {
    if (y[r] != 0) {
      edges.emplace_back(static_cast<uint32_t>(r / vertices),
                         static_cast<uint32_t>(r % vertices));
    }
  }
  return Graph(static_cast<uint32_t>(vertices), std::move(edges));
}

bool Graph::HasEdge(uint32_t i, uint32_t j) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge(i, j));
}

absl::StatusOr<Database> Graph::ToDatabase() const {
  RETURN_IF_ERROR(CheckPairCount(vertex_count_));
  std::vector<Row> rows(uint64_t{vertex_count_} * vertex_count_, 0);
  for (const Edge& e : edges_) {
    rows[uint64_t{e.first} * vertex_count_ + e.second] = 1;
  }
  ASSIGN_OR_RETURN(const DataUniverse universe, DataUniverse::Create(1));
  return Database::Create(universe, std::move(rows));
}

absl::StatusOr<CutQuery> CutQuery::Create(uint32_t vertex_count,
                                          std::vector<uint32_t> source,
                                          std::vector<uint32_t> sink) {
  std::sort(source.begin(), source.end());
  std::sort(sink.begin(), sink.end());
  for (const auto* set : {&source, &sink}) {
    if (std::adjacent_find(set->begin(), set->end()) != set->end()) {
      return absl::InvalidArgumentError("vertex repeated within a cut side");
    }
    if (!set->empty() && set->back() >= vertex_count) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "vertex %d is outside [0, %d)", set->back(), vertex_count));
    }
  }
  std::vector<uint32_t> common;
  std::set_intersection(source.begin(), source.end(), sink.begin(), sink.end(),
                        std::back_inserter(common));
  if (!common.empty()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("S and T overlap at vertex %d", common.front()));
  }
  return CutQuery(vertex_count, std::move(source), std::move(sink));
}

absl::StatusOr<int64_t> CutValue(const Graph& g, const CutQuery& q) {
  if (g.vertex_count() != q.vertex_count()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: cut is over %d vertices, graph has %d",
        q.vertex_count(), g.vertex_count()));
  }
  std::vector<char> in_sink(g.vertex_count(), 0);
  for (uint32_t v : q.sink()) in_sink[v] = 1;
  int64_t count = 0;
  for (uint32_t i : q.source()) {
    auto it = std::lower_bound(g.edges().begin(), g.edges().end(), Edge(i, 0));
    for (; it != g.edges().end() && it->first == i; ++it) {
      count += in_sink[it->second];
    }
  }
  return count;
}

absl::StatusOr<Database> ReleaseGraph(const Graph& g, double epsilon,
                                      RandomSource& rng) {
  ASSIGN_OR_RETURN(const Database x, g.ToDatabase());
  ASSIGN_OR_RETURN(const MechanismParams params,
                   MechanismParams::Create(epsilon, x.universe()));
  return SampleSynthetic(x, params, rng);
}

absl::StatusOr<double> AnswerCut(const Database& y, const CutQuery& q,
                                 double epsilon, CutEstimate kind) {
  if (y.size() != uint64_t{q.vertex_count()} * q.vertex_count()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "dimension mismatch: cut is over %d vertices, database has %d rows",
        q.vertex_count(), y.size()));
  }
  return EstimateCut(y, q.source(), q.sink(), epsilon, kind);
}

absl::StatusOr<CutQuery> RandomBisectionCut(uint32_t vertex_count,
                                            RandomSource& rng) {
  if (vertex_count < 2) {
    return absl::InvalidArgumentError("bisection needs at least 2 vertices");
  }
  std::vector<uint32_t> order(vertex_count);
  std::iota(order.begin(), order.end(), 0u);
  // Partial Fisher-Yates: the first floor(V/2) slots are a uniform subset.
  const uint32_t half = vertex_count / 2;
  for (uint32_t i = 0; i < half; ++i) {
    const auto j = static_cast<uint32_t>(i + rng.UniformInt(vertex_count - i));
    std::swap(order[i], order[j]);
  }
  std::vector<uint32_t> source(order.begin(), order.begin() + half);
  std::vector<uint32_t> sink(order.begin() + half, order.end());
  return CutQuery::Create(vertex_count, std::move(source), std::move(sink));
}

absl::StatusOr<Graph> ErdosRenyiGraph(uint32_t vertex_count, double p,
                                      RandomSource& rng) {
  RETURN_IF_ERROR(CheckPairCount(vertex_count));
  if (!(p >= 0.0 && p <= 1.0)) {
    return absl::InvalidArgumentError("edge probability must be in [0, 1]");
  }
  std::vector<Edge> edges;
  for (uint32_t i = 0; i < vertex_count; ++i) {
    for (uint32_t j = i + 1; j < vertex_count; ++j) {
      if (rng.Bernoulli(p)) {
        edges.emplace_back(i, j);
        edges.emplace_back(j, i);
      }
    }
  }
  return Graph::Create(vertex_count, std::move(edges));
}

absl::StatusOr<Graph> PowerLawGraph(uint32_t vertex_count,
                                    double average_degree, double exponent,
                                    RandomSource& rng) {
  RETURN_IF_ERROR(CheckPairCount(vertex_count));
  if (!(exponent > 2.0) || !std::isfinite(exponent)) {
    return absl::InvalidArgumentError("power-law exponent must exceed 2");
  }
  if (!(average_degree > 0.0) || average_degree > vertex_count - 1.0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("average degree must be in (0, %d]", vertex_count - 1));
  }
  std::vector<double> weight(vertex_count);
  for (uint32_t i = 0; i < vertex_count; ++i) {
    weight[i] = std::pow(i + 1.0, -1.0 / (exponent - 1.0));
  }
  const double raw_total = std::accumulate(weight.begin(), weight.end(), 0.0);
  const double scale = average_degree * vertex_count / raw_total;
  for (double& w : weight) w *= scale;
  const double total = average_degree * vertex_count;

  std::vector<Edge> edges;
  for (uint32_t i = 0; i < vertex_count; ++i) {
    for (uint32_t j = i + 1; j < vertex_count; ++j) {
      if (rng.Bernoulli(std::min(1.0, weight[i] * weight[j] / total))) {
        edges.emplace_back(i, j);
        edges.emplace_back(j, i);
      }
    }
  }
  return Graph::Create(vertex_count, std::move(edges));
}

absl::StatusOr<Graph> ParseEdgeList(std::string_view text,
                                    const EdgeListOptions& options) {
  std::vector<Edge> edges;
  uint32_t largest = 0;
  bool any = false;
  int line_number = 0;
  for (absl::string_view line :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    line = StripComment(line);
    if (line.empty()) continue;
    ASSIGN_OR_RETURN(const std::vector<uint32_t> ids,
                     ParseIds(line, line_number, options.one_based));
    if (ids.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrFormat("line %d: expected two vertex ids, found %d",
                          line_number, ids.size()));
    }
    largest = std::max({largest, ids[0], ids[1]});
    any = true;
    if (ids[0] == ids[1]) continue;
    edges.emplace_back(ids[0], ids[1]);
    if (options.symmetrize) edges.emplace_back(ids[1], ids[0]);
  }
  uint32_t vertex_count = options.vertex_count;
  if (vertex_count == 0) {
    if (!any) return absl::InvalidArgumentError("edge list is empty");
    vertex_count = largest + 1;
  } else if (any && largest >= vertex_count) {
    return absl::InvalidArgumentError(
        absl::StrFormat("vertex id %d exceeds the declared vertex count %d",
                        largest, vertex_count));
  }
  return Graph::Create(vertex_count, std::move(edges));
}

absl::StatusOr<CutQuery> ParseCutSpec(std::string_view text,
                                      uint32_t vertex_count, bool one_based) {
  std::vector<std::vector<uint32_t>> sides;
  int line_number = 0;
  for (absl::string_view raw :
       absl::StrSplit(absl::string_view(text.data(), text.size()), '\n')) {
    ++line_number;
    if (absl::StartsWith(absl::StripLeadingAsciiWhitespace(raw), "#")) {
      continue;
    }
    absl::string_view line = StripComment(raw);
    if (sides.size() == 2) {
      if (!line.empty()) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "line %d: cut spec has more than two sets", line_number));
      }
      continue;
    }
    ASSIGN_OR_RETURN(std::vector<uint32_t> ids,
                     ParseIds(line, line_number, one_based));
    sides.push_back(std::move(ids));
  }
  if (sides.size() != 2) {
    return absl::InvalidArgumentError("cut spec needs two lines: S, then T");
  }
  return CutQuery::Create(vertex_count, std::move(sides[0]),
                          std::move(sides[1]));
}

}  // namespace dpsynth
