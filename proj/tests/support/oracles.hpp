#pragma once

// Slow reference computations used only by the tests. None of them shares
// code with the library algorithms they check.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

namespace oracle {

using lipfree::DistanceMatrix;
using lipfree::MetricSpace;
using lipfree::Rational;

// ---------------------------------------------------------------- paths

/// Minimum of the summed weights over every simple path s -> t, found by
/// plain exhaustive DFS (no pruning, so every path is visited).
inline Rational simple_path_min(const DistanceMatrix& w, std::size_t s, std::size_t t) {
  const std::size_t n = w.size();
  std::vector<bool> on_path(n, false);
  std::optional<Rational> best;
  std::function<void(std::size_t, Rational)> visit = [&](std::size_t u, Rational len) {
    if (u == t) {
      if (!best || len < *best) best = len;
      return;
    }
    on_path[u] = true;
    for (std::size_t v = 0; v < n; ++v)
      if (!on_path[v]) visit(v, len + w(u, v));
    on_path[u] = false;
  };
  visit(s, Rational(0));
  return *best;
}

/// simple_path_min from one source to every target in a single exhaustive DFS.
inline std::vector<Rational> simple_path_min_from(const DistanceMatrix& w, std::size_t s) {
  const std::size_t n = w.size();
  std::vector<bool> on_path(n, false);
  std::vector<std::optional<Rational>> best(n);
  std::function<void(std::size_t, const Rational&)> visit = [&](std::size_t u, const Rational& len) {
    if (!best[u] || len < *best[u]) best[u] = len;
    on_path[u] = true;
    for (std::size_t v = 0; v < n; ++v)
      if (!on_path[v]) visit(v, len + w(u, v));
    on_path[u] = false;
  };
  visit(s, Rational(0));
  std::vector<Rational> out;
  for (auto& b : best) out.push_back(*b);
  return out;
}

/// Row-by-row Bellman-Ford: best walk of at most n - 1 hops from every
/// source. With non-negative weights this is the minimum over simple paths.
inline DistanceMatrix hop_bounded_min(const DistanceMatrix& w) {
  const std::size_t n = w.size();
  DistanceMatrix out(n, Rational(0));
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<Rational> dist(n);
    for (std::size_t v = 0; v < n; ++v) dist[v] = w(s, v);
    dist[s] = 0;
    for (std::size_t hop = 2; hop < n; ++hop) {
      bool changed = false;
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
          if (u != v && dist[u] + w(u, v) < dist[v]) {
            dist[v] = dist[u] + w(u, v);
            changed = true;
          }
      if (!changed) break;
    }
    for (std::size_t v = 0; v < n; ++v) out(s, v) = dist[v];
  }
  return out;
}

/// Discounted hop weights, written out from the definition.
inline DistanceMatrix discounted_weights(const MetricSpace& s, const Rational& alpha, const Rational& eps) {
  DistanceMatrix w(s.size(), Rational(0));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (i != j) w(i, j) = s.d(i, j) < eps ? (1 - alpha) * s.d(i, j) : s.d(i, j);
  return w;
}

// ---------------------------------------------------------------- spaces

/// Random metric by closure: random edge weights k/4 (k = 1..12) on the
/// complete graph, then the hop-bounded shortest-path metric.
inline MetricSpace closure_space(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> k(1, 12);
  DistanceMatrix w(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w(i, j) = w(j, i) = lipfree::make_rational(k(rng), 4);
  auto d = hop_bounded_min(w);
  std::vector<lipfree::Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({"v" + std::to_string(i), {}, {}});
  return MetricSpace::create(std::move(pts), "v0", std::move(d));
}

// ---------------------------------------------------------------- transport

/// All labelled trees on n nodes as edge lists, via Pruefer sequences.
inline std::vector<std::vector<std::pair<std::size_t, std::size_t>>> spanning_trees(std::size_t n) {
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out;
  if (n == 1) return {{}};
  if (n == 2) return {{{0, 1}}};
  std::vector<std::size_t> seq(n - 2, 0);
  while (true) {
    std::vector<std::size_t> degree(n, 1);
    for (auto v : seq) ++degree[v];
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (auto v : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      edges.emplace_back(leaf, v);
      --degree[leaf];
      --degree[v];
    }
    std::size_t a = n, b = n;
    for (std::size_t v = 0; v < n; ++v)
      if (degree[v] == 1) (a == n ? a : b) = v;
    edges.emplace_back(a, b);
    out.push_back(std::move(edges));
    std::size_t pos = 0;
    while (pos < seq.size() && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == seq.size()) break;
  }
  return out;
}

/// Min over all spanning trees of the whole space of the tree-flow cost.
/// Each vertex of the transshipment polytope is carried by some spanning
/// tree, so this is the exact LP optimum. `coeff[i]` is the supply at point
/// i; the base point absorbs the total.
inline Rational transport_min(const MetricSpace& s, std::vector<Rational> coeff) {
  const std::size_t n = s.size();
  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != s.base()) total += coeff[i];
  coeff[s.base()] = -total;
  std::optional<Rational> best;
  for (const auto& edges : spanning_trees(n)) {
    // Root at the base, push subtree supplies up the tree.
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<Rational> edge_len(n);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<std::size_t> order, parent(n, n);
    std::vector<bool> seen(n, false);
    order.push_back(s.base());
    seen[s.base()] = true;
    for (std::size_t k = 0; k < order.size(); ++k)
      for (auto v : adj[order[k]])
        if (!seen[v]) {
          seen[v] = true;
          parent[v] = order[k];
          order.push_back(v);
        }
    std::vector<Rational> sub = coeff;
    Rational cost = 0;
    for (std::size_t k = order.size(); k-- > 1;) {
      auto v = order[k];
      cost += (sub[v] < 0 ? Rational(-sub[v]) : sub[v]) * s.d(v, parent[v]);
      sub[parent[v]] += sub[v];
    }
    if (!best || cost < *best) best = cost;
  }
  return *best;
}

/// transport_min with the rooted spanning trees prepared once per space.
class TreeTransport {
 public:
  explicit TreeTransport(const MetricSpace& s) : space_(s) {
    const std::size_t n = s.size();
    for (const auto& edges : spanning_trees(n)) {
      std::vector<std::vector<std::size_t>> adj(n);
      for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
      }
      Tree t;
      t.parent.assign(n, n);
      std::vector<bool> seen(n, false);
      t.order.push_back(s.base());
      seen[s.base()] = true;
      for (std::size_t k = 0; k < t.order.size(); ++k)
        for (auto v : adj[t.order[k]])
          if (!seen[v]) {
            seen[v] = true;
            t.parent[v] = t.order[k];
            t.order.push_back(v);
          }
      trees_.push_back(std::move(t));
    }
  }

  Rational min_cost(const std::vector<Rational>& coeff) const {
    std::optional<Rational> best;
    std::vector<Rational> sub;
    for (const auto& t : trees_) {
      sub = coeff;
      sub[space_.base()] = 0;
      Rational cost = 0;
      for (std::size_t k = t.order.size(); k-- > 1;) {
        auto v = t.order[k];
        cost += (sub[v] < 0 ? Rational(-sub[v]) : sub[v]) * space_.d(v, t.parent[v]);
        sub[t.parent[v]] += sub[v];
      }
      if (!best || cost < *best) best = cost;
    }
    return *best;
  }

 private:
  struct Tree {
    std::vector<std::size_t> order, parent;
  };
  const MetricSpace& space_;
  std::vector<Tree> trees_;
};

/// Vertices of the dual feasible set {g : g(base) = 0, |g(x) - g(y)| <= d(x,y)}:
/// each is fixed by a spanning tree of tight edges and a sign per edge.
inline std::vector<std::vector<Rational>> dual_vertices(const MetricSpace& s) {
  const std::size_t n = s.size();
  std::vector<std::vector<Rational>> out;
  for (const auto& edges : spanning_trees(n)) {
    const std::size_t m = edges.size();
    for (std::uint32_t signs = 0; signs < (1u << m); ++signs) {
      std::vector<std::optional<Rational>> g(n);
      g[s.base()] = Rational(0);
      bool grew = true;
      while (grew) {
        grew = false;
        for (std::size_t e = 0; e < m; ++e) {
          auto [a, b] = edges[e];
          Rational step = (signs >> e & 1u) ? Rational(s.d(a, b)) : Rational(-s.d(a, b));
          if (g[a] && !g[b]) {
            g[b] = *g[a] + step;
            grew = true;
          } else if (g[b] && !g[a]) {
            g[a] = *g[b] - step;
            grew = true;
          }
        }
      }
      std::vector<Rational> v;
      for (auto& x : g) v.push_back(*x);
      bool feasible = true;
      for (std::size_t i = 0; i < n && feasible; ++i)
        for (std::size_t j = i + 1; j < n && feasible; ++j) {
          Rational diff = v[i] - v[j];
          feasible = (diff < 0 ? Rational(-diff) : diff) <= s.d(i, j);
        }
      if (feasible) out.push_back(std::move(v));
    }
  }
  return out;
}

// ---------------------------------------------------------------- renorm (N = 2, 3)

using Vec = Eigen::VectorXd;

/// max of f over the unit sphere of R^N, N in {2, 3}: dense angular grid,
/// then compass search with shrinking steps from the best cells.
inline double sphere_max(int N, const std::function<double(const Vec&)>& f, int grid = 240) {
  const double pi = std::acos(-1.0);
  if (N == 2) {
    auto at = [&](double t) {
      Vec u(2);
      u << std::cos(t), std::sin(t);
      return f(u);
    };
    const int M = 20000;
    std::vector<std::pair<double, double>> vals;
    for (int i = 0; i < M; ++i) {
      double t = 2 * pi * i / M;
      vals.emplace_back(at(t), t);
    }
    std::partial_sort(vals.begin(), vals.begin() + 8, vals.end(), std::greater<>());
    double best = vals.front().first;
    for (int c = 0; c < 8; ++c) {
      double t = vals[c].second, step = 2 * pi / M;
      double cur = vals[c].first;
      while (step > 1e-13) {
        double a = at(t - step), b = at(t + step);
        if (a > cur && a >= b) {
          cur = a;
          t -= step;
        } else if (b > cur) {
          cur = b;
          t += step;
        } else {
          step /= 2;
        }
      }
      best = std::max(best, cur);
    }
    return best;
  }
  auto at = [&](double th, double ph) {
    Vec u(3);
    u << std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th);
    return f(u);
  };
  const int T = grid, P = 2 * grid;
  std::vector<std::tuple<double, double, double>> vals;
  for (int i = 0; i <= T; ++i)
    for (int j = 0; j < P; ++j) {
      double th = pi * i / T, ph = 2 * pi * j / P;
      vals.emplace_back(at(th, ph), th, ph);
    }
  const int starts = grid >= 120 ? 12 : 4;
  const int R = grid >= 120 ? 10 : 5;
  std::partial_sort(vals.begin(), vals.begin() + starts, vals.end(), std::greater<>());
  double best = std::get<0>(vals.front());
  for (int c = 0; c < starts; ++c) {
    auto [cur, th, ph] = vals[c];
    // Zooming local grid: unlike coordinate moves it can follow a ridge in
    // any direction.
    for (double h = 2 * pi / T; h > 1e-12; h /= 3) {
      double bt = th, bp = ph;
      for (int i = -R; i <= R; ++i)
        for (int j = -R; j <= R; ++j) {
          double nt = th + h * i / R, np = ph + h * j / R;
          double v = at(nt, np);
          if (v > cur) {
            cur = v;
            bt = nt;
            bp = np;
          }
        }
      th = bt;
      ph = bp;
    }
    best = std::max(best, cur);
  }
  return best;
}

/// Gauge of clco(B_2 U {+-(e_1 + e_n)}) as max over the dual ball
/// {||a||_2 <= 1, |a_1 + a_n| <= 1}, walking every boundary face: each signed
/// set of active slab rows A a = b cuts the sphere in a small sphere, where the
/// max of <a, v> is a_0 + sqrt(1 - |a_0|^2) P v / |P v| in closed form.
/// Infeasible candidates are dropped. Exponential in N, meant for N <= 4.
inline double dkr_norm_dense(const Vec& v) {
  const Eigen::Index N = v.size(), m = N - 1;
  auto feasible = [&](const Vec& a) {
    if (a.norm() > 1 + 1e-9) return false;
    for (Eigen::Index n = 1; n < N; ++n)
      if (std::abs(a(0) + a(n)) > 1 + 1e-9) return false;
    return true;
  };
  double best = 0.0;
  std::size_t codes = 1;
  for (Eigen::Index i = 0; i < m; ++i) codes *= 3;
  for (std::size_t code = 0; code < codes; ++code) {
    // digit 0: slab row inactive, 1: a_1 + a_n = 1, 2: a_1 + a_n = -1
    std::vector<std::pair<Eigen::Index, double>> active;
    for (std::size_t c = code, n = 1; n <= static_cast<std::size_t>(m); ++n, c /= 3)
      if (c % 3) active.emplace_back(static_cast<Eigen::Index>(n), c % 3 == 1 ? 1.0 : -1.0);
    const auto k = static_cast<Eigen::Index>(active.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, N);
    Vec b(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      A(r, 0) = 1.0;
      A(r, active[static_cast<std::size_t>(r)].first) = 1.0;
      b(r) = active[static_cast<std::size_t>(r)].second;
    }
    Vec a0 = Vec::Zero(N);
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(N, N);
    if (k > 0) {
      Eigen::MatrixXd At = A.transpose();
      Eigen::MatrixXd gram_inv = (A * At).inverse();
      a0 = At * (gram_inv * b);
      P -= At * gram_inv * A;
    }
    const double rest = 1.0 - a0.squaredNorm();
    if (rest < -1e-12) continue;
    Vec pv = P * v;
    Vec a = a0;
    if (pv.norm() > 1e-14) a += std::sqrt(std::max(0.0, rest)) * pv / pv.norm();
    if (feasible(a)) best = std::max(best, a.dot(v));
  }
  return best;
}

inline double golden_min(double lo, double hi, const std::function<double(double)>& f, int iters) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = hi - g * (hi - lo), b = lo + g * (hi - lo), fa = f(a), fb = f(b);
  for (int i = 0; i < iters; ++i) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - g * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + g * (hi - lo);
      fb = f(b);
    }
  }
  return std::min({fa, fb, f(0.5 * (lo + hi))});
}

/// Same gauge as an inf-convolution, minimized by nested golden sections.
inline double dkr_gauge_infconv(const Vec& u) {
  const double r = u.norm();
  auto obj = [&](double m1, double m2) {
    Vec w = u;
    w(0) -= m1 + m2;
    w(1) -= m1;
    if (u.size() > 2) w(2) -= m2;
    return w.norm() + std::abs(m1) + std::abs(m2);
  };
  if (u.size() == 2) return golden_min(-r, r, [&](double m1) { return obj(m1, 0.0); }, 90);
  return golden_min(-r, r, [&](double m1) { return golden_min(-r, r, [&](double m2) { return obj(m1, m2); }, 55); }, 55);
}

inline double slab(const Vec& u) {
  double s = 0;
  for (Eigen::Index n = 1; n < u.size(); ++n) s = std::max(s, std::abs(u(0) - 2 * u(n)));
  return s;
}

/// Dual of the trimmed norm: max of <a, u> / |||u||| over the sphere.
inline double trimmed_dual_dense(const Vec& a) {
  return sphere_max(static_cast<int>(a.size()),
                    [&](const Vec& u) { return a.dot(u) / std::max(dkr_gauge_infconv(u), slab(u)); }, 48);
}

}  // namespace oracle
