#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/shortest_paths.hpp"

namespace lipfree {

/// Discount alpha in (0,1) and scale eps > 0 of the discounted-hop metrics.
class DerivedParams {
 public:
  DerivedParams(Rational alpha, Rational eps) : alpha_(std::move(alpha)), eps_(std::move(eps)) {
    if (alpha_ <= 0 || alpha_ >= 1) throw DomainError("alpha must lie in (0,1), got " + to_string(alpha_));
    if (eps_ <= 0) throw DomainError("eps must be positive, got " + to_string(eps_));
  }
  const Rational& alpha() const noexcept { return alpha_; }
  const Rational& eps() const noexcept { return eps_; }

 private:
  Rational alpha_;
  Rational eps_;
};

/// Hop weight: d(x,y) when d(x,y) >= eps, (1 - alpha) d(x,y) when d(x,y) < eps.
inline Rational w_weight(const MetricSpace& space, const DerivedParams& params, PointIndex x, PointIndex y) {
  space.check_index(x);
  space.check_index(y);
  if (x == y) throw DomainError("hop weight is undefined for x == y");
  const Rational& d = space.d(x, y);
  if (d < params.eps()) return (1 - params.alpha()) * d;
  return d;
}

/// Shortest-path closure of the hop weights over the complete graph on the
/// points: b_{alpha,eps}(x,y) = min over chains x = p_0, ..., p_{n+1} = y of
/// the summed hop weights. Same points and base as `space`.
inline MetricSpace b_metric(const MetricSpace& space, const DerivedParams& params) {
  const std::size_t n = space.size();
  DistanceMatrix w(n, Rational(0));
  const Rational discount = 1 - params.alpha();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const Rational& d = space.d(i, j);
      w(i, j) = d < params.eps() ? discount * d : d;
    }
  floyd_warshall_closure(w);
  return space.with_distances(std::move(w));
}

/// Supremum over eps of b_{alpha,eps}. On a finite space every eps at or below
/// the minimum positive distance leaves all hop weights undiscounted, so the
/// supremum is attained there and equals d.
inline MetricSpace b_alpha(const MetricSpace& space, const Rational& alpha) {
  if (space.size() < 2) return space;
  return b_metric(space, DerivedParams(alpha, space.min_positive_distance()));
}

struct Connectability {
  bool connectable = false;
  /// Shortest chain using only hops strictly shorter than eps (empty if none).
  std::vector<PointIndex> chain;
  /// Total length of `chain`; absent when y is unreachable by sub-eps hops.
  std::optional<Rational> chain_length;
};

/// eps-discrete connectability: a chain from x to y with every hop < eps and
/// total length < d(x,y) + eps. Decided by the shortest path in the subgraph of
/// sub-eps edges.
inline Connectability eps_connectable(const MetricSpace& space, PointIndex x, PointIndex y, const Rational& eps) {
  space.check_index(x);
  space.check_index(y);
  if (x == y) throw DomainError("connectability is undefined for x == y");
  if (eps <= 0) throw DomainError("eps must be positive");
  const auto& dist = space.distances();
  auto tree = dijkstra(dist, x, [&](std::size_t u, std::size_t v) { return dist(u, v) < eps; });
  Connectability out;
  if (!tree.dist[y]) return out;
  out.chain = tree.path_to(y);
  out.chain_length = *tree.dist[y];
  out.connectable = *out.chain_length < space.d(x, y) + eps;
  return out;
}

}  // namespace lipfree
