#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lipfree/matrix.hpp"

namespace lipfree {

template <typename T>
struct FlowArc {
  std::size_t from;
  std::size_t to;
  T flow;
};

template <typename T>
struct MinCostFlow {
  /// Arcs carrying positive flow, ordered by (from, to).
  std::vector<FlowArc<T>> arcs;
  T cost;
  /// Optimal node potentials g with g(u) - g(v) <= cost(u,v) for every pair
  /// and sum_v g(v) * supply(v) == cost.
  std::vector<T> potential;
};

namespace detail {

// Bellman-Ford over the residual graph of an uncapacitated complete digraph.
// Forward arcs u->v always exist with cost c(u,v); backward arcs v->u exist
// with cost -c(u,v) while flow(u,v) > 0. Every node in `sources` starts at 0.
template <typename T>
void residual_shortest_paths(const SquareMatrix<T>& cost, const SquareMatrix<T>& flow,
                             const std::vector<bool>& sources, std::vector<std::optional<T>>& dist,
                             std::vector<std::size_t>& pred, std::vector<bool>& via_backward) {
  const std::size_t n = cost.size();
  dist.assign(n, std::nullopt);
  pred.assign(n, n);
  via_backward.assign(n, false);
  for (std::size_t i = 0; i < n; ++i)
    if (sources[i]) dist[i] = T(0);
  for (std::size_t round = 0; round + 1 < n || round == 0; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (!dist[u]) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (u == v) continue;
        // forward u->v
        T cand = *dist[u] + cost(u, v);
        if (!dist[v] || cand < *dist[v]) {
          dist[v] = cand;
          pred[v] = u;
          via_backward[v] = false;
          changed = true;
        }
        // backward u->v exists when flow(v,u) > 0
        if (flow(v, u) > 0) {
          T back = *dist[u] - cost(v, u);
          if (!dist[v] || back < *dist[v]) {
            dist[v] = back;
            pred[v] = u;
            via_backward[v] = true;
            changed = true;
          }
        }
      }
    }
    if (!changed) return;
    if (round + 1 >= n) throw std::logic_error("negative cycle in residual graph");
  }
}

}  // namespace detail

/// Exact uncapacitated min-cost flow on the complete digraph with arc costs
/// `cost` (non-negative, symmetric use is not assumed). `supply[v]` is the net
/// outflow required at v; supplies must sum to zero. Successive shortest
/// augmenting paths; exact for any ordered field.
template <typename T>
MinCostFlow<T> min_cost_flow(const SquareMatrix<T>& cost, const std::vector<T>& supply) {
  const std::size_t n = cost.size();
  if (supply.size() != n) throw std::invalid_argument("supply size does not match cost matrix");
  T total(0);
  for (const auto& s : supply) total += s;
  if (total != 0) throw std::invalid_argument("supplies must sum to zero");

  SquareMatrix<T> flow(n, T(0));
  std::vector<T> remaining = supply;
  std::vector<std::optional<T>> dist;
  std::vector<std::size_t> pred;
  std::vector<bool> via_backward;

  for (;;) {
    std::vector<bool> sources(n, false);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i)
      if (remaining[i] > 0) sources[i] = any = true;
    if (!any) break;
    detail::residual_shortest_paths(cost, flow, sources, dist, pred, via_backward);
    std::optional<std::size_t> sink;
    for (std::size_t i = 0; i < n; ++i)
      if (remaining[i] < 0 && dist[i] && (!sink || *dist[i] < *dist[*sink])) sink = i;
    if (!sink) throw std::logic_error("no reachable deficit node");

    // Walk back to the source, collecting the bottleneck.
    T amount = -remaining[*sink];
    std::size_t v = *sink;
    while (pred[v] != n) {
      std::size_t u = pred[v];
      if (via_backward[v] && flow(v, u) < amount) amount = flow(v, u);
      v = u;
    }
    const std::size_t source = v;
    if (remaining[source] < amount) amount = remaining[source];

    v = *sink;
    while (v != source) {
      std::size_t u = pred[v];
      if (via_backward[v])
        flow(v, u) -= amount;
      else
        flow(u, v) += amount;
      v = u;
    }
    remaining[source] -= amount;
    remaining[*sink] += amount;
  }

  MinCostFlow<T> out{{}, T(0), std::vector<T>(n, T(0))};
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (flow(u, v) > 0) {
        out.cost += flow(u, v) * cost(u, v);
        out.arcs.push_back({u, v, flow(u, v)});
      }

  // Potentials from shortest distances in the optimal residual graph.
  std::vector<bool> all(n, true);
  detail::residual_shortest_paths(cost, flow, all, dist, pred, via_backward);
  for (std::size_t i = 0; i < n; ++i) out.potential[i] = -*dist[i];
  return out;
}

}  // namespace lipfree
