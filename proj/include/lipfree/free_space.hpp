#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/min_cost_flow.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

/// Finitely supported element sum_i a_i delta(x_i) of the free space.
/// The base point is never stored (delta(base) = 0) and no stored coefficient
/// is zero.
class FreeVector {
 public:
  FreeVector() = default;

  /// Sums repeated points, drops the base point and zero coefficients.
  FreeVector(const MetricSpace& space, const std::vector<std::pair<PointIndex, Rational>>& terms) {
    for (const auto& [p, a] : terms) {
      space.check_index(p);
      if (p == space.base()) continue;
      terms_[p] += a;
    }
    prune();
  }

  static FreeVector delta(const MetricSpace& space, PointIndex x) { return FreeVector(space, {{x, Rational(1)}}); }

  const std::map<PointIndex, Rational>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  Rational coeff(PointIndex p) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  std::vector<PointIndex> support() const {
    std::vector<PointIndex> s;
    for (const auto& [p, a] : terms_) s.push_back(p);
    return s;
  }

  FreeVector& operator+=(const FreeVector& o) {
    for (const auto& [p, a] : o.terms_) terms_[p] += a;
    prune();
    return *this;
  }
  FreeVector& operator-=(const FreeVector& o) {
    for (const auto& [p, a] : o.terms_) terms_[p] -= a;
    prune();
    return *this;
  }
  FreeVector& operator*=(const Rational& s) {
    for (auto& [p, a] : terms_) a *= s;
    prune();
    return *this;
  }
  friend FreeVector operator+(FreeVector a, const FreeVector& b) { return a += b; }
  friend FreeVector operator-(FreeVector a, const FreeVector& b) { return a -= b; }
  friend FreeVector operator*(const Rational& s, FreeVector a) { return a *= s; }
  friend FreeVector operator-(FreeVector a) { return a *= Rational(-1); }
  bool operator==(const FreeVector&) const = default;

 private:
  void prune() { std::erase_if(terms_, [](const auto& kv) { return kv.second == 0; }); }

  std::map<PointIndex, Rational> terms_;
};

/// A real function on the points vanishing at the base point: an element of
/// Lip_0(M), i.e. a functional on the free space.
class LipschitzFunction {
 public:
  LipschitzFunction(const MetricSpace& space, std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.size() != space.size()) throw StructuralError("function must be defined on every point");
    if (values_[space.base()] != 0)
      throw PreconditionError("function must vanish at the base point, got " + to_string(values_[space.base()]));
  }
  static LipschitzFunction zero(const MetricSpace& space) {
    return LipschitzFunction(space, std::vector<Rational>(space.size(), Rational(0)));
  }

  const Rational& operator()(PointIndex p) const { return values_.at(p); }
  const std::vector<Rational>& values() const noexcept { return values_; }

 private:
  std::vector<Rational> values_;
};

/// A non-negative-in-practice point weight, as produced by partitions of
/// unity. Unlike LipschitzFunction it need not vanish at the base point.
class WeightFunction {
 public:
  WeightFunction(const MetricSpace& space, std::vector<Rational> values) : values_(std::move(values)) {
    if (values_.size() != space.size()) throw StructuralError("weight must be defined on every point");
  }
  static WeightFunction constant(const MetricSpace& space, const Rational& c) {
    return WeightFunction(space, std::vector<Rational>(space.size(), c));
  }
  const Rational& operator()(PointIndex p) const { return values_.at(p); }
  const std::vector<Rational>& values() const noexcept { return values_; }

 private:
  std::vector<Rational> values_;
};

/// m_{xy} = (delta(x) - delta(y)) / d(x,y).
inline FreeVector molecule(const MetricSpace& space, PointIndex x, PointIndex y) {
  space.check_index(x);
  space.check_index(y);
  if (x == y) throw DomainError("molecule needs x != y");
  Rational inv = 1 / space.d(x, y);
  return FreeVector(space, {{x, inv}, {y, Rational(-inv)}});
}

/// <f, mu> = sum_i a_i f(x_i).
inline Rational pair(const LipschitzFunction& f, const FreeVector& mu) {
  Rational s = 0;
  for (const auto& [p, a] : mu.terms()) s += a * f(p);
  return s;
}

struct LipNorm {
  Rational value;
  /// First pair (in index order) attaining the maximum; absent on a one-point space.
  std::optional<std::pair<PointIndex, PointIndex>> argmax;
};

/// Exact Lipschitz constant max |f(x) - f(y)| / d(x,y) over unordered pairs.
template <typename PointFunction>
LipNorm lip_norm(const MetricSpace& space, const PointFunction& f) {
  LipNorm out{Rational(0), std::nullopt};
  for (PointIndex i = 0; i < space.size(); ++i)
    for (PointIndex j = i + 1; j < space.size(); ++j) {
      Rational diff = f(i) - f(j);
      if (diff < 0) diff = -diff;
      Rational q = diff / space.d(i, j);
      if (!out.argmax || q > out.value) {
        out.value = q;
        out.argmax = std::make_pair(i, j);
      }
    }
  return out;
}

struct FlowSolution {
  struct Arc {
    PointIndex from;
    PointIndex to;
    Rational flow;
  };
  std::vector<Arc> arcs;
  Rational objective;
};

struct KrNorm {
  Rational value;
  /// Optimal transport witness: net outflow at each point equals its coefficient.
  FlowSolution flow;
  /// 1-Lipschitz g with g(base) = 0 and <g, mu> = value.
  LipschitzFunction certificate;
};

/// Free-space norm of a finitely supported element, computed as an exact
/// min-cost flow on the complete digraph over supp(mu) and the base point.
/// The base point absorbs the total mass.
inline KrNorm kr_norm(const MetricSpace& space, const FreeVector& mu) {
  std::vector<PointIndex> nodes = mu.support();
  nodes.push_back(space.base());
  std::sort(nodes.begin(), nodes.end());
  const std::size_t n = nodes.size();

  SquareMatrix<Rational> cost(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cost(i, j) = space.d(nodes[i], nodes[j]);
  std::vector<Rational> supply(n, Rational(0));
  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    supply[i] = mu.coeff(nodes[i]);
    total += supply[i];
  }
  auto base_pos = std::find(nodes.begin(), nodes.end(), space.base()) - nodes.begin();
  supply[base_pos] = -total;

  auto solved = min_cost_flow(cost, supply);

  FlowSolution flow;
  flow.objective = solved.cost;
  for (const auto& a : solved.arcs) flow.arcs.push_back({nodes[a.from], nodes[a.to], a.flow});

  // McShane extension of the optimal potentials to the whole space.
  const Rational shift = solved.potential[base_pos];
  std::vector<Rational> g(space.size());
  for (PointIndex z = 0; z < space.size(); ++z) {
    std::optional<Rational> best;
    for (std::size_t i = 0; i < n; ++i) {
      Rational cand = solved.potential[i] - shift + space.d(z, nodes[i]);
      if (!best || cand < *best) best = std::move(cand);
    }
    g[z] = *best;
  }
  g[space.base()] = 0;
  return KrNorm{solved.cost, std::move(flow), LipschitzFunction(space, std::move(g))};
}

struct Atom {
  Rational coeff;
  PointIndex x;
  PointIndex y;
};

/// mu = sum_k coeff_k m_{x_k y_k}.
struct MoleculeCombination {
  std::vector<Atom> atoms;

  Rational total_weight() const {
    Rational s = 0;
    for (const auto& a : atoms) s += a.coeff < 0 ? Rational(-a.coeff) : a.coeff;
    return s;
  }
  FreeVector reconstruct(const MetricSpace& space) const {
    FreeVector out;
    for (const auto& a : atoms) out += a.coeff * molecule(space, a.x, a.y);
    return out;
  }
};

namespace detail {

// Splits a flow into source-to-sink paths. At each step the smallest-index
// source with remaining supply is taken and the walk follows the smallest-index
// arc with remaining flow until it reaches a node with remaining demand.
// Each path becomes one transport (source, sink, amount).
struct Transport {
  PointIndex source;
  PointIndex sink;
  Rational amount;
};

inline std::vector<Transport> decompose_flow(const FlowSolution& flow, std::map<PointIndex, Rational> supply) {
  std::map<PointIndex, std::map<PointIndex, Rational>> rem;
  for (const auto& a : flow.arcs) rem[a.from][a.to] += a.flow;
  std::vector<Transport> out;
  for (;;) {
    auto src = std::find_if(supply.begin(), supply.end(), [](const auto& kv) { return kv.second > 0; });
    if (src == supply.end()) break;
    std::vector<PointIndex> path{src->first};
    Rational amount = src->second;
    for (;;) {
      PointIndex u = path.back();
      if (path.size() > 1 && supply[u] < 0) break;
      auto& outs = rem[u];
      auto next = std::find_if(outs.begin(), outs.end(), [](const auto& kv) { return kv.second > 0; });
      if (next == outs.end()) throw std::logic_error("flow decomposition: dead end (conservation violated)");
      if (std::find(path.begin(), path.end(), next->first) != path.end())
        throw std::logic_error("flow decomposition: cycle with positive flow");
      if (next->second < amount) amount = next->second;
      path.push_back(next->first);
    }
    PointIndex sink = path.back();
    if (-supply[sink] < amount) amount = -supply[sink];
    for (std::size_t i = 0; i + 1 < path.size(); ++i) rem[path[i]][path[i + 1]] -= amount;
    supply[path.front()] -= amount;
    supply[sink] += amount;
    out.push_back({path.front(), sink, amount});
  }
  return out;
}

}  // namespace detail

/// Writes mu as a combination of molecules with sum |coeff| equal to its
/// norm, by path-decomposing an optimal flow. Atoms with the same endpoints
/// are merged; atom order is extraction order.
inline MoleculeCombination molecule_decompose(const MetricSpace& space, const FreeVector& mu) {
  if (mu.is_zero()) return {};
  auto norm = kr_norm(space, mu);
  std::map<PointIndex, Rational> supply;
  Rational total = 0;
  for (const auto& [p, a] : mu.terms()) {
    supply[p] = a;
    total += a;
  }
  supply[space.base()] = -total;

  MoleculeCombination out;
  for (const auto& t : detail::decompose_flow(norm.flow, std::move(supply))) {
    Rational coeff = t.amount * space.d(t.source, t.sink);
    auto same = std::find_if(out.atoms.begin(), out.atoms.end(),
                             [&](const Atom& a) { return a.x == t.source && a.y == t.sink; });
    if (same != out.atoms.end())
      same->coeff += coeff;
    else
      out.atoms.push_back({coeff, t.source, t.sink});
  }
  return out;
}

/// mu lies in the slice {nu in the unit ball : <f, nu> > 1 - alpha}. Requires
/// lip_norm(f) == 1.
inline bool slice_member(const MetricSpace& space, const LipschitzFunction& f, const Rational& alpha,
                         const FreeVector& mu) {
  if (alpha <= 0) throw DomainError("slice parameter must be positive");
  auto ln = lip_norm(space, f);
  if (ln.value != 1) throw PreconditionError("slice functional must have norm 1, got " + to_string(ln.value));
  if (pair(f, mu) <= 1 - alpha) return false;
  return kr_norm(space, mu).value <= 1;
}

/// d(x, M \ U); absent when U is the whole space.
inline std::optional<Rational> distance_to_complement(const MetricSpace& space, const std::vector<bool>& in_set,
                                                      PointIndex x) {
  if (!in_set[x]) return Rational(0);
  std::optional<Rational> best;
  for (PointIndex z = 0; z < space.size(); ++z)
    if (!in_set[z] && (!best || space.d(x, z) < *best)) best = space.d(x, z);
  return best;
}

inline std::vector<bool> membership_mask(const MetricSpace& space, const std::vector<PointIndex>& set) {
  std::vector<bool> mask(space.size(), false);
  for (auto p : set) {
    space.check_index(p);
    mask[p] = true;
  }
  return mask;
}

/// phi_k(x) = d(x, M \ U_k) / sum_i d(x, M \ U_i). A cover equal to the whole
/// space has no complement; where such covers exist they share the weight
/// equally and the others get zero.
inline std::vector<WeightFunction> partition_of_unity(const MetricSpace& space,
                                                      const std::vector<std::vector<PointIndex>>& covers) {
  if (covers.empty()) throw DomainError("partition of unity needs at least one cover");
  std::vector<std::vector<bool>> masks;
  for (const auto& c : covers) masks.push_back(membership_mask(space, c));
  std::vector<std::vector<Rational>> phi(covers.size(), std::vector<Rational>(space.size(), Rational(0)));
  for (PointIndex x = 0; x < space.size(); ++x) {
    std::vector<std::optional<Rational>> dist;
    std::size_t unbounded = 0;
    Rational sum = 0;
    for (const auto& m : masks) {
      dist.push_back(distance_to_complement(space, m, x));
      if (!dist.back())
        ++unbounded;
      else
        sum += *dist.back();
    }
    for (std::size_t k = 0; k < covers.size(); ++k) {
      if (unbounded > 0)
        phi[k][x] = dist[k] ? Rational(0) : Rational(1) / Rational(unbounded);
      else if (sum == 0)
        throw PreconditionError("partition of unity: point '" + space.id(x) + "' lies in no cover");
      else
        phi[k][x] = *dist[k] / sum;
    }
  }
  std::vector<WeightFunction> out;
  for (auto& v : phi) out.emplace_back(space, std::move(v));
  return out;
}

/// The finitely supported W mu with <W mu, f> = <mu, f * phi> for every f:
/// sum_i a_i phi(x_i) delta(x_i).
inline FreeVector weighting_operator(const MetricSpace& space, const FreeVector& mu, const WeightFunction& phi) {
  std::vector<std::pair<PointIndex, Rational>> terms;
  for (const auto& [p, a] : mu.terms()) terms.emplace_back(p, a * phi(p));
  return FreeVector(space, terms);
}

}  // namespace lipfree
