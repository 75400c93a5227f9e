#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/derived_metrics.hpp"
#include "lipfree/error.hpp"
#include "lipfree/free_space.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

/// Answer of the molecule test at a fixed scale eps. Finite spaces have no
/// genuine Delta-points, so every answer is "Delta at scale eps".
struct DeltaMoleculeCheck {
  bool delta_at_scale = false;
  Rational eps;
  Rational b_value;  // b_{alpha,eps}(x,y)
  /// Sub-eps chain and its length when connectable.
  std::vector<PointIndex> chain;
  std::optional<Rational> chain_length;
  /// (1 - alpha) d + eps min(alpha, 1 - alpha), the guaranteed excess when not connectable.
  std::optional<Rational> lower_bound;
};

inline DeltaMoleculeCheck delta_molecule_check(const MetricSpace& space, PointIndex x, PointIndex y,
                                               const Rational& eps, const Rational& alpha) {
  DerivedParams params(alpha, eps);
  auto conn = eps_connectable(space, x, y, eps);
  auto b = b_metric(space, params);
  DeltaMoleculeCheck out;
  out.eps = eps;
  out.b_value = b.d(x, y);
  out.delta_at_scale = conn.connectable;
  const Rational discount = 1 - alpha;
  if (conn.connectable) {
    // Every hop of the chain is discounted, so the chain bounds b from above.
    if (out.b_value > discount * *conn.chain_length)
      throw std::logic_error("b exceeds the discounted length of a sub-eps chain");
    out.chain = std::move(conn.chain);
    out.chain_length = std::move(conn.chain_length);
  } else {
    out.lower_bound = discount * space.d(x, y) + eps * min_of(alpha, discount);
    if (out.b_value < *out.lower_bound)
      throw std::logic_error("b below the non-connectable lower bound for (" + space.id(x) + ", " + space.id(y) + ")");
    if (conn.chain_length) {
      out.chain = std::move(conn.chain);
      out.chain_length = std::move(conn.chain_length);
    }
  }
  return out;
}

/// Free-space norm of mu with the distances replaced by b_{alpha,eps}.
inline Rational b_norm(const MetricSpace& space, const FreeVector& mu, const Rational& alpha, const Rational& eps) {
  auto b = b_metric(space, DerivedParams(alpha, eps));
  return kr_norm(b, mu).value;
}

inline void require_unit_lipschitz(const MetricSpace& space, const LipschitzFunction& f) {
  auto ln = lip_norm(space, f);
  if (ln.value != 1) throw PreconditionError("functional must have norm 1, got " + to_string(ln.value));
}

/// First ordered pair (u,v), in index order, with d(u,v) < eps and
/// <f, m_uv> > 1 - alpha.
inline std::optional<std::pair<PointIndex, PointIndex>> slice_molecule_search(const MetricSpace& space,
                                                                              const LipschitzFunction& f,
                                                                              const Rational& alpha,
                                                                              const Rational& eps) {
  DerivedParams params(alpha, eps);
  require_unit_lipschitz(space, f);
  const Rational threshold = 1 - alpha;
  for (PointIndex u = 0; u < space.size(); ++u)
    for (PointIndex v = 0; v < space.size(); ++v) {
      if (u == v || space.d(u, v) >= eps) continue;
      if ((f(u) - f(v)) / space.d(u, v) > threshold) return std::make_pair(u, v);
    }
  return std::nullopt;
}

struct DeltaDecomposition {
  /// mu = sum lambda_i m_{x_i y_i} with molecules taken in the original metric.
  MoleculeCombination combination;
  /// b_{alpha,eps}(x_i,y_i) == (1 - alpha) d(x_i,y_i) for each atom.
  std::vector<bool> delta_flags;
  Rational b_norm;
  Rational lambda_sum;
  /// b_norm == 1 - alpha; then every atom is flagged and lambda_sum == 1.
  bool equality_case = false;

  bool all_flagged() const {
    for (bool f : delta_flags)
      if (!f) return false;
    return true;
  }
};

/// Decomposes a unit mu along an optimal flow for b_{alpha,eps}. An atom
/// a (delta(x) - delta(y)) / b(x,y) is rewritten as lambda m_xy with
/// lambda = a d(x,y) / b(x,y), so reconstruction stays exact.
inline DeltaDecomposition delta_decompose(const MetricSpace& space, const FreeVector& mu, const Rational& alpha,
                                          const Rational& eps) {
  DerivedParams params(alpha, eps);
  auto norm = kr_norm(space, mu).value;
  if (norm != 1) throw PreconditionError("delta_decompose needs a unit vector, norm is " + to_string(norm));
  auto b = b_metric(space, params);
  auto in_b = molecule_decompose(b, mu);
  DeltaDecomposition out;
  out.b_norm = kr_norm(b, mu).value;
  out.lambda_sum = 0;
  const Rational discount = 1 - alpha;
  for (const auto& a : in_b.atoms) {
    Rational lambda = a.coeff * space.d(a.x, a.y) / b.d(a.x, a.y);
    out.lambda_sum += lambda;
    out.combination.atoms.push_back({lambda, a.x, a.y});
    out.delta_flags.push_back(b.d(a.x, a.y) == discount * space.d(a.x, a.y));
  }
  out.equality_case = out.b_norm == discount;
  return out;
}

struct DeltaDistanceProbe {
  Rational value;
  /// Molecule m_uv attaining the maximum.
  std::optional<std::pair<PointIndex, PointIndex>> argmax;
  std::size_t slice_molecules = 0;
};

/// max of ||mu - m_uv|| over all molecules m_uv with <f, m_uv> > 1 - alpha.
inline DeltaDistanceProbe delta_distance_probe(const MetricSpace& space, const FreeVector& mu,
                                               const LipschitzFunction& f, const Rational& alpha) {
  if (!slice_member(space, f, alpha, mu)) throw PreconditionError("mu is not in the slice of f");
  const Rational threshold = 1 - alpha;
  DeltaDistanceProbe out{Rational(0), std::nullopt, 0};
  for (PointIndex u = 0; u < space.size(); ++u)
    for (PointIndex v = 0; v < space.size(); ++v) {
      if (u == v || (f(u) - f(v)) / space.d(u, v) <= threshold) continue;
      ++out.slice_molecules;
      auto dist = kr_norm(space, mu - molecule(space, u, v)).value;
      if (!out.argmax || dist > out.value) {
        out.value = std::move(dist);
        out.argmax = std::make_pair(u, v);
      }
    }
  return out;
}

struct NormScan {
  struct Row {
    Rational eps;
    Rational value;
  };
  std::vector<Row> rows;
  /// Values never decrease as eps decreases.
  bool monotone = true;
  /// Set when the last eps is at or below the minimum gap: b = d there, so the
  /// last value must equal the plain norm.
  std::optional<bool> final_matches_norm;
};

inline NormScan norm_b_scan(const MetricSpace& space, const FreeVector& mu, const Rational& alpha,
                            const std::vector<Rational>& eps_list) {
  if (eps_list.empty()) throw DomainError("eps list is empty");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (eps_list[i] <= 0) throw DomainError("eps values must be positive");
    if (i > 0 && eps_list[i] > eps_list[i - 1]) throw DomainError("eps list must be sorted in descending order");
  }
  NormScan out;
  for (const auto& eps : eps_list) {
    Rational v = b_norm(space, mu, alpha, eps);
    if (!out.rows.empty() && v < out.rows.back().value) out.monotone = false;
    out.rows.push_back({eps, std::move(v)});
  }
  if (space.size() > 1 && eps_list.back() <= space.min_positive_distance())
    out.final_matches_norm = out.rows.back().value == kr_norm(space, mu).value;
  return out;
}

}  // namespace lipfree
