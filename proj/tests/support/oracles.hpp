#pragma once

// Independent reference implementations used to check the library's routing
// and insertion decisions. Everything here re-derives results from the road
// graph's raw edge data with brute force; none of it calls the library's
// shortest_path or insertion code.

#include <algorithm>
#include <optional>
#include <vector>

#include "shuttleswarm/engine/rng.hpp"
#include "shuttleswarm/geo/road_graph.hpp"
#include "support/test_util.hpp"

namespace testsupport {

using shuttleswarm::EdgeId;
using shuttleswarm::geo::RoadGraph;

struct OraclePath {
  double time_s = 0.0;
  double length_m = 0.0;
  std::vector<NodeId> nodes;
};

// Exhaustive search over simple paths. Travel times accumulate left to right
// (origin first), matching the library's per-edge accumulation order so that
// equal results are bit-equal. Ties in time resolve to the lexicographically
// smallest node sequence, the library's documented tie-break.
inline std::optional<OraclePath> oracle_best_path(const RoadGraph& g, NodeId from,
                                                  NodeId to) {
  if (from == to) return OraclePath{0.0, 0.0, {from}};

  std::optional<OraclePath> best;
  std::vector<NodeId> visited{from};

  auto better = [](const OraclePath& a, const OraclePath& b) {
    if (a.time_s != b.time_s) return a.time_s < b.time_s;
    return a.nodes < b.nodes;
  };

  auto dfs = [&](auto&& self, NodeId u, double t, double len) -> void {
    if (best && t > best->time_s) return;  // cannot improve (non-negative edges)
    if (u == to) {
      OraclePath cand{t, len, visited};
      if (!best || better(cand, *best)) best = std::move(cand);
      return;
    }
    for (EdgeId e : g.out_edges(u)) {
      const auto& ed = g.edge(e);
      if (std::find(visited.begin(), visited.end(), ed.to) != visited.end()) continue;
      visited.push_back(ed.to);
      self(self, ed.to, t + g.edge_travel_time(e), len + ed.length_m);
      visited.pop_back();
    }
  };
  dfs(dfs, from, 0.0, 0.0);
  return best;
}

// Random strongly connected city with dyadic-exact edge weights: integer
// lengths and power-of-two speeds make every path time an exact binary
// fraction, so oracle and implementation agree bit-for-bit.
inline CityModel random_scc_city(shuttleswarm::engine::SeededRng& rng,
                                 int max_nodes = 10) {
  const int n = 2 + static_cast<int>(rng.uniform_index(max_nodes - 1));
  std::vector<std::pair<NodeId, Vec2>> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({i, {static_cast<double>(rng.uniform_index(1000)),
                         static_cast<double>(rng.uniform_index(1000))}});
  }
  static constexpr double kSpeeds[] = {1.0, 2.0, 4.0, 8.0, 16.0};
  auto random_road = [&](NodeId a, NodeId b) {
    RoadSpec r;
    r.from = a;
    r.to = b;
    r.length_m = 1.0 + static_cast<double>(rng.uniform_index(1000));
    r.speed_ms = kSpeeds[rng.uniform_index(5)];
    r.oneway = true;
    return r;
  };

  std::vector<RoadSpec> roads;
  // A random Hamiltonian cycle guarantees strong connectivity.
  std::vector<NodeId> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  for (int i = 0; i < n; ++i) roads.push_back(random_road(order[i], order[(i + 1) % n]));
  const int extra = static_cast<int>(rng.uniform_index(n + 1));
  for (int i = 0; i < extra; ++i) {
    const NodeId a = static_cast<NodeId>(rng.uniform_index(n));
    const NodeId b = static_cast<NodeId>(rng.uniform_index(n));
    if (a != b) roads.push_back(random_road(a, b));
  }
  return make_city(nodes, roads);
}

// First-feasible left-to-right insertion scan, re-stated from scratch on top
// of the exhaustive path oracle. Positions are 1-based over `targets`.
struct OracleInsertion {
  bool rejected_by_guard = false;
  bool as_last = false;
  int position = 0;  // valid when !rejected && !as_last
};

inline OracleInsertion oracle_insertion_scan(const RoadGraph& g, NodeId new_origin,
                                             const std::vector<NodeId>& targets,
                                             NodeId d, bool first_is_work_bound,
                                             double av_time_s,
                                             double original_time_s) {
  OracleInsertion out;
  for (std::size_t i = 1; i <= targets.size(); ++i) {
    const NodeId prev = (i == 1) ? new_origin : targets[i - 2];
    const NodeId next = targets[i - 1];
    const auto t2d = oracle_best_path(g, prev, d);
    const auto t2n = oracle_best_path(g, prev, next);
    if (t2d->length_m < t2n->length_m) {
      if (first_is_work_bound) {
        const auto d2t = oracle_best_path(g, d, next);
        const double change =
            original_time_s - t2n->time_s + t2d->time_s + d2t->time_s;
        if (!(change < original_time_s * 3.0 / 2.0 && av_time_s >= change)) {
          out.rejected_by_guard = true;
          return out;
        }
      }
      out.position = static_cast<int>(i);
      return out;
    }
  }
  out.as_last = true;
  return out;
}

}  // namespace testsupport
