#include "shuttleswarm/geo/road_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "shuttleswarm/errors.hpp"

namespace shuttleswarm::geo {

std::size_t RoadGraph::checked_index(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw DomainError("unknown node id " + std::to_string(id));
  }
  return it->second;
}

Vec2 RoadGraph::point_along(EdgeId e, double offset_m) const {
  const Edge& ed = edge(e);
  double left = std::clamp(offset_m, 0.0, ed.length_m);
  for (std::size_t i = 1; i < ed.polyline.size(); ++i) {
    const double seg = distance(ed.polyline[i - 1], ed.polyline[i]);
    if (left <= seg || i + 1 == ed.polyline.size()) {
      if (seg <= 0.0) return ed.polyline[i];
      const double t = std::min(left / seg, 1.0);
      const Vec2 a = ed.polyline[i - 1];
      const Vec2 b = ed.polyline[i];
      return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
    }
    left -= seg;
  }
  return ed.polyline.back();
}

NodeId RoadGraph::nearest_node(Vec2 p) const {
  NodeId best = kNoNode;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    const double d = distance(pos_[i], p);
    if (d < best_d) {
      best_d = d;
      best = ids_[i];
    }
  }
  return best;
}

namespace {

// Iterative Tarjan SCC over dense indices.
std::vector<int> scc_components(std::size_t n,
                                const std::vector<std::vector<std::size_t>>& adj,
                                int& component_count) {
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  component_count = 0;

  struct Frame {
    std::size_t v;
    std::size_t next_child = 0;
  };

  for (std::size_t start = 0; start < n; ++start) {
    if (num[start] != -1) continue;
    std::vector<Frame> call;
    call.push_back({start});
    num[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;

    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_child < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.next_child++];
        if (num[w] == -1) {
          num[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], num[w]);
        }
      } else {
        if (low[f.v] == num[f.v]) {
          while (true) {
            const std::size_t w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = component_count;
            if (w == f.v) break;
          }
          ++component_count;
        }
        const std::size_t v = f.v;
        call.pop_back();
        if (!call.empty()) {
          low[call.back().v] = std::min(low[call.back().v], low[v]);
        }
      }
    }
  }
  return comp;
}

}  // namespace

RoadGraph build_road_graph(const CityModel& city) {
  city.validate();

  std::vector<NodeId> ids;
  ids.reserve(city.intersections.size());
  for (const auto& n : city.intersections) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());

  std::unordered_map<NodeId, std::size_t> index;
  std::vector<Vec2> pos(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    index[ids[i]] = i;
    pos[i] = city.intersection(ids[i]).pos;
  }

  struct ProtoEdge {
    std::size_t from, to;
    double length;
    double speed;
    int lanes;
    std::vector<Vec2> polyline;
  };
  std::vector<ProtoEdge> proto;
  for (const auto& r : city.roads) {
    const double len = r.arc_length();
    if (!(len > 0.0)) {
      throw DomainError("road from " + std::to_string(r.from) + " to " +
                        std::to_string(r.to) + " has zero length");
    }
    proto.push_back({index.at(r.from), index.at(r.to), len, r.max_speed_ms,
                     r.lanes, r.polyline});
    if (!r.oneway) {
      std::vector<Vec2> rev(r.polyline.rbegin(), r.polyline.rend());
      proto.push_back({index.at(r.to), index.at(r.from), len, r.max_speed_ms,
                       r.lanes, std::move(rev)});
    }
  }

  std::vector<std::vector<std::size_t>> adj(ids.size());
  for (const auto& e : proto) adj[e.from].push_back(e.to);

  int ncomp = 0;
  const std::vector<int> comp = scc_components(ids.size(), adj, ncomp);
  std::vector<std::size_t> comp_size(static_cast<std::size_t>(ncomp), 0);
  for (int c : comp) ++comp_size[static_cast<std::size_t>(c)];
  // Largest component; equal sizes resolve to the one holding the lowest id.
  const std::size_t max_size = *std::max_element(comp_size.begin(), comp_size.end());
  int keep = -1;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (comp_size[static_cast<std::size_t>(comp[i])] == max_size) {
      keep = comp[i];
      break;  // ids ascending: first hit holds the lowest id
    }
  }

  RoadGraph g;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (comp[i] == keep) g.ids_.push_back(ids[i]);
  }
  if (g.ids_.size() < 2) {
    throw DomainError("road graph degenerate: strongly connected component has " +
                      std::to_string(g.ids_.size()) + " node(s)");
  }
  for (std::size_t i = 0; i < g.ids_.size(); ++i) {
    g.index_[g.ids_[i]] = i;
    g.pos_.push_back(pos[index.at(g.ids_[i])]);
  }
  g.out_.resize(g.ids_.size());
  g.in_.resize(g.ids_.size());
  for (const auto& e : proto) {
    if (comp[e.from] != keep || comp[e.to] != keep) continue;
    Edge edge;
    edge.from = ids[e.from];
    edge.to = ids[e.to];
    edge.length_m = e.length;
    edge.free_speed_ms = e.speed;
    edge.lanes = e.lanes;
    edge.polyline = e.polyline;
    const EdgeId eid = static_cast<EdgeId>(g.edges_.size());
    g.edges_.push_back(std::move(edge));
    g.out_[g.index_.at(ids[e.from])].push_back(eid);
    g.in_[g.index_.at(ids[e.to])].push_back(eid);
  }
  auto by_head = [&](EdgeId a, EdgeId b) {
    const Edge& ea = g.edges_[static_cast<std::size_t>(a)];
    const Edge& eb = g.edges_[static_cast<std::size_t>(b)];
    if (ea.to != eb.to) return ea.to < eb.to;
    return a < b;
  };
  auto by_tail = [&](EdgeId a, EdgeId b) {
    const Edge& ea = g.edges_[static_cast<std::size_t>(a)];
    const Edge& eb = g.edges_[static_cast<std::size_t>(b)];
    if (ea.from != eb.from) return ea.from < eb.from;
    return a < b;
  };
  for (auto& v : g.out_) std::sort(v.begin(), v.end(), by_head);
  for (auto& v : g.in_) std::sort(v.begin(), v.end(), by_tail);
  return g;
}

namespace {

std::optional<Path> route(const RoadGraph& g, NodeId from, NodeId to,
                          EdgeId banned) {
  if (!g.has_node(from)) throw DomainError("unknown node id " + std::to_string(from));
  if (!g.has_node(to)) throw DomainError("unknown node id " + std::to_string(to));

  Path path;
  path.origin = from;
  path.destination = to;
  if (from == to) return path;

  // Backward Dijkstra from the destination: time_to_dest per node. The pq is
  // keyed (time, node id) so pops are fully ordered.
  std::unordered_map<NodeId, double> time_to_dest;
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  time_to_dest[to] = 0.0;
  pq.push({0.0, to});
  while (!pq.empty()) {
    const auto [t, v] = pq.top();
    pq.pop();
    auto it = time_to_dest.find(v);
    if (it == time_to_dest.end() || t > it->second) continue;
    for (EdgeId e : g.in_edges(v)) {
      if (e == banned) continue;
      const Edge& ed = g.edge(e);
      const double cand = g.edge_travel_time(e) + t;
      auto [uit, fresh] = time_to_dest.try_emplace(ed.from, cand);
      if (fresh || cand < uit->second) {
        uit->second = cand;
        pq.push({cand, ed.from});
      }
    }
  }

  if (!time_to_dest.count(from)) return std::nullopt;

  // Greedy forward walk: at each node take the smallest next node (then the
  // smallest edge id) that lies on an optimal continuation. Equality is exact:
  // time_to_dest[u] was assigned from the identical float expression.
  NodeId u = from;
  while (u != to) {
    const double here = time_to_dest.at(u);
    EdgeId chosen = kNoEdge;
    for (EdgeId e : g.out_edges(u)) {  // sorted by (head id, edge id)
      if (e == banned) continue;
      const Edge& ed = g.edge(e);
      auto it = time_to_dest.find(ed.to);
      if (it == time_to_dest.end()) continue;
      if (g.edge_travel_time(e) + it->second == here) {
        chosen = e;
        break;
      }
    }
    if (chosen == kNoEdge) {
      throw InternalError("shortest-path reconstruction lost the optimal chain");
    }
    path.edges.push_back(chosen);
    path.length_m += g.edge(chosen).length_m;
    path.travel_time_s += g.edge_travel_time(chosen);
    u = g.edge(chosen).to;
  }
  return path;
}

}  // namespace

std::optional<Path> shortest_path(const RoadGraph& graph, NodeId from, NodeId to) {
  return route(graph, from, to, kNoEdge);
}

std::optional<Path> shortest_path_avoiding(const RoadGraph& graph, NodeId from,
                                           NodeId to, EdgeId banned) {
  return route(graph, from, to, banned);
}

double path_travel_time(const Path& path, const RoadGraph& graph) {
  double t = 0.0;
  for (EdgeId e : path.edges) t += graph.edge_travel_time(e);
  return t;
}

}  // namespace shuttleswarm::geo
