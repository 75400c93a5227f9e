#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lipfree/matrix.hpp"

namespace lipfree {

/// In-place all-pairs shortest-path closure of a complete graph with
/// non-negative weights (Floyd-Warshall). Works for any ordered field.
template <typename T>
void floyd_warshall_closure(SquareMatrix<T>& w) {
  const std::size_t n = w.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const T& ik = w(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k || j == i) continue;
        T via = ik + w(k, j);
        if (via < w(i, j)) w(i, j) = std::move(via);
      }
    }
  }
}

/// Single-source shortest paths over the subgraph of arcs accepted by `keep`.
/// Dense O(n^2) Dijkstra; ties are broken towards the smaller predecessor index
/// so that reported paths are deterministic.
template <typename T>
struct ShortestPathTree {
  std::vector<std::optional<T>> dist;
  std::vector<std::size_t> pred;

  /// Vertex sequence source..target, empty when target is unreachable.
  std::vector<std::size_t> path_to(std::size_t target) const {
    if (!dist[target]) return {};
    std::vector<std::size_t> rev{target};
    while (pred[rev.back()] != rev.back()) rev.push_back(pred[rev.back()]);
    return {rev.rbegin(), rev.rend()};
  }
};

template <typename T, typename ArcFilter>
ShortestPathTree<T> dijkstra(const SquareMatrix<T>& w, std::size_t source, ArcFilter keep) {
  const std::size_t n = w.size();
  ShortestPathTree<T> tree{std::vector<std::optional<T>>(n), std::vector<std::size_t>(n)};
  std::vector<bool> done(n, false);
  tree.dist[source] = T(0);
  tree.pred[source] = source;
  for (std::size_t round = 0; round < n; ++round) {
    std::optional<std::size_t> u;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && tree.dist[i] && (!u || *tree.dist[i] < *tree.dist[*u])) u = i;
    if (!u) break;
    done[*u] = true;
    for (std::size_t v = 0; v < n; ++v) {
      if (v == *u || done[v] || !keep(*u, v)) continue;
      T cand = *tree.dist[*u] + w(*u, v);
      if (!tree.dist[v] || cand < *tree.dist[v] || (cand == *tree.dist[v] && *u < tree.pred[v])) {
        tree.dist[v] = std::move(cand);
        tree.pred[v] = *u;
      }
    }
  }
  return tree;
}

}  // namespace lipfree
