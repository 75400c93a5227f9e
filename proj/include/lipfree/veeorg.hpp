#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/free_space.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

inline constexpr std::size_t kMaxVeeorgLevels = 8;
inline constexpr std::size_t kVeeorgExhaustiveLevels = 5;

/// Dyadic power 2^-n as an exact rational.
inline Rational dyadic(std::size_t n) {
  Rational r = 1;
  for (std::size_t i = 0; i < n; ++i) r /= 2;
  return r;
}

/// d((x1,y1),(x2,y2)) = |x1 - x2| on a common row, otherwise
/// |y1 - y2| + min(x1 + x2, 2 - x1 - x2).
inline Rational veeorg_distance(const Rational& x1, const Rational& y1, const Rational& x2, const Rational& y2) {
  if (y1 == y2) return x1 > x2 ? Rational(x1 - x2) : Rational(x2 - x1);
  Rational dy = y1 > y2 ? Rational(y1 - y2) : Rational(y2 - y1);
  Rational s = x1 + x2;
  return dy + min_of(s, 2 - s);
}

/// Truncation of the layered dyadic space: p = (0,0), q = (1,0) and the rows
/// S_n = {(k 2^-n, 2^-n) : 0 <= k <= 2^n} for n = 1..levels. Base point p.
/// Point ids are "p", "q" and "s{n}_{k}"; coords are (x, y).
/// The triangle inequality is checked on every triple up to
/// kVeeorgExhaustiveLevels and on a fixed random sample above.
inline MetricSpace veeorg_space(std::size_t levels) {
  if (levels < 1 || levels > kMaxVeeorgLevels)
    throw DomainError("veeorg levels must lie in [1, " + std::to_string(kMaxVeeorgLevels) + "]");
  std::vector<Point> pts;
  pts.push_back({"p", "(0,0)", {Rational(0), Rational(0)}});
  pts.push_back({"q", "(1,0)", {Rational(1), Rational(0)}});
  for (std::size_t n = 1; n <= levels; ++n) {
    const Rational h = dyadic(n);
    const std::size_t count = std::size_t{1} << n;
    for (std::size_t k = 0; k <= count; ++k) {
      Rational x = Rational(static_cast<long>(k)) * h;
      pts.push_back({"s" + std::to_string(n) + "_" + std::to_string(k),
                     "(" + to_short_string(x) + "," + to_short_string(h) + ")", {x, h}});
    }
  }
  DistanceMatrix dist(pts.size(), Rational(0));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      auto d = veeorg_distance(pts[i].coords[0], pts[i].coords[1], pts[j].coords[0], pts[j].coords[1]);
      dist(i, j) = d;
      dist(j, i) = d;
    }
  auto space = MetricSpace::unchecked(std::move(pts), "p", std::move(dist));
  auto report = levels <= kVeeorgExhaustiveLevels ? validate_metric(space) : validate_metric_sampled(space, 200000, 0);
  if (!report.empty()) throw std::logic_error("veeorg metric violates " + report.front().describe());
  return space;
}

inline const Rational& veeorg_x(const MetricSpace& space, PointIndex i) { return space.point(i).coords.at(0); }
inline const Rational& veeorg_y(const MetricSpace& space, PointIndex i) { return space.point(i).coords.at(1); }

inline void require_veeorg(const MetricSpace& space) {
  if (!space.find("p") || !space.find("q") || space.base() != space.index_of("p"))
    throw PreconditionError("not a veeorg space");
  for (const auto& pt : space.points())
    if (pt.coords.size() != 2) throw PreconditionError("veeorg points need (x, y) coordinates");
}

/// h(x,y) = x.
inline LipschitzFunction h_function(const MetricSpace& space) {
  require_veeorg(space);
  std::vector<Rational> v;
  for (PointIndex i = 0; i < space.size(); ++i) v.push_back(veeorg_x(space, i));
  LipschitzFunction h(space, std::move(v));
  if (lip_norm(space, h).value != 1) throw std::logic_error("h does not have norm 1");
  return h;
}

/// A = {x < alpha}, B = {beta < x < 1 - beta}, C = {x > 1 - alpha}.
struct AbcCover {
  Rational alpha;
  Rational beta;
  std::vector<PointIndex> a, b, c;

  std::vector<std::vector<PointIndex>> sets() const { return {a, b, c}; }
};

inline AbcCover abc_cover(const MetricSpace& space, const Rational& alpha, const Rational& beta) {
  require_veeorg(space);
  if (!(0 < beta && beta < alpha && alpha < Rational(1) / 2))
    throw DomainError("cover parameters need 0 < beta < alpha < 1/2");
  AbcCover cover{alpha, beta, {}, {}, {}};
  for (PointIndex i = 0; i < space.size(); ++i) {
    const Rational& x = veeorg_x(space, i);
    if (x < alpha) cover.a.push_back(i);
    if (beta < x && x < 1 - beta) cover.b.push_back(i);
    if (x > 1 - alpha) cover.c.push_back(i);
  }
  return cover;
}

struct CoverSeparation {
  /// min over z of D(z) = sum_k d(z, M \ U_k), empty complements left out.
  Rational min_value;
  PointIndex argmin = 0;
  Rational bound;  // alpha - beta
  bool holds = false;
  std::vector<std::string> warnings;
};

inline CoverSeparation cover_separation(const MetricSpace& space, const AbcCover& cover) {
  CoverSeparation out;
  out.bound = cover.alpha - cover.beta;
  const char* names[] = {"A", "B", "C"};
  auto sets = cover.sets();
  std::vector<std::vector<bool>> masks;
  for (std::size_t k = 0; k < sets.size(); ++k) {
    masks.push_back(membership_mask(space, sets[k]));
    if (sets[k].size() == space.size())
      out.warnings.push_back(std::string("cover set ") + names[k] +
                             " contains every point; its complement is empty and is left out of D");
  }
  std::optional<Rational> best;
  for (PointIndex z = 0; z < space.size(); ++z) {
    Rational sum = 0;
    for (const auto& m : masks)
      if (auto d = distance_to_complement(space, m, z)) sum += *d;
    if (!best || sum < *best) {
      best = sum;
      out.argmin = z;
    }
  }
  out.min_value = best.value_or(Rational(0));
  out.holds = out.min_value >= out.bound;
  return out;
}

struct RoundtripReport {
  std::size_t checked = 0;
  std::size_t failures = 0;
  std::optional<std::string> first_failure;
};

/// Checks sum_k W_k mu == mu, with W_k the weighting operators of the
/// partition of unity subordinate to the cover, on every delta(x) and every
/// molecule m_xy (x < y).
inline RoundtripReport decomposition_roundtrip(const MetricSpace& space,
                                               const std::vector<std::vector<PointIndex>>& covers) {
  auto phi = partition_of_unity(space, covers);
  RoundtripReport out;
  auto check = [&](const FreeVector& mu, const std::string& name) {
    FreeVector sum;
    for (const auto& p : phi) sum += weighting_operator(space, mu, p);
    ++out.checked;
    if (!(sum == mu)) {
      ++out.failures;
      if (!out.first_failure) out.first_failure = name;
    }
  };
  for (PointIndex x = 0; x < space.size(); ++x) check(FreeVector::delta(space, x), "delta(" + space.id(x) + ")");
  for (PointIndex x = 0; x < space.size(); ++x)
    for (PointIndex y = x + 1; y < space.size(); ++y)
      check(molecule(space, x, y), "m(" + space.id(x) + "," + space.id(y) + ")");
  return out;
}

struct PolyhedralWitness {
  LipschitzFunction f;
  Rational lip;
  /// Pairs u < v with [u,v] = {u,v} and |<f, m_uv>| = lip.
  std::vector<std::pair<PointIndex, PointIndex>> attaining;
  /// Largest |<f, m_uv>| over the remaining trivial-segment pairs.
  Rational margin;
  bool passes = false;
};

/// f(x,y) = x (1 - y^2) has norm one and, among molecules with trivial
/// segment, only m_pq norms it.
inline PolyhedralWitness polyhedral_witness(const MetricSpace& space) {
  require_veeorg(space);
  std::vector<Rational> v;
  for (PointIndex i = 0; i < space.size(); ++i) {
    const Rational& y = veeorg_y(space, i);
    v.push_back(veeorg_x(space, i) * (1 - y * y));
  }
  PolyhedralWitness out{LipschitzFunction(space, std::move(v)), Rational(0), {}, Rational(0), false};
  out.lip = lip_norm(space, out.f).value;
  std::vector<std::pair<std::pair<PointIndex, PointIndex>, Rational>> trivial;
  for (PointIndex u = 0; u < space.size(); ++u)
    for (PointIndex w = u + 1; w < space.size(); ++w) {
      if (metric_segment(space, u, w).size() != 2) continue;
      Rational q = (out.f(u) - out.f(w)) / space.d(u, w);
      if (q < 0) q = -q;
      if (q == out.lip)
        out.attaining.emplace_back(u, w);
      else if (q > out.margin)
        out.margin = q;
    }
  const auto pq = std::make_pair(space.index_of("p"), space.index_of("q"));
  out.passes = out.lip == 1 && out.attaining.size() == 1 && out.attaining.front() == pq && out.margin < 1;
  return out;
}

struct AlmostSquareWitness {
  LipschitzFunction g;
  std::size_t level = 0;
  Rational lip_g;
  std::vector<Rational> lip_plus;   // lip_norm(f_i + g)
  std::vector<Rational> lip_minus;  // lip_norm(f_i - g)
  /// Distance from a0 = (1, 2^-level) to its nearest other point.
  Rational nearest_to_a0;
  bool passes = false;
};

/// g = 2^-(k+1) h on S_k and 0 elsewhere, for the smallest k >= 2 with
/// 2^-k < eps. Needs rows k - 1, k and k + 1 in the truncation.
inline AlmostSquareWitness almost_square_witness(const MetricSpace& space, const std::vector<LipschitzFunction>& fs,
                                                 const Rational& eps) {
  require_veeorg(space);
  if (eps <= 0) throw DomainError("eps must be positive");
  for (const auto& f : fs)
    if (lip_norm(space, f).value > 1) throw PreconditionError("every f_i needs norm at most 1");
  std::size_t k = 2;
  while (dyadic(k) >= eps) ++k;
  const std::string a0_id = "s" + std::to_string(k) + "_" + std::to_string(std::size_t{1} << k);
  const std::string next_id = "s" + std::to_string(k + 1) + "_0";
  if (!space.find(a0_id) || !space.find(next_id))
    throw PreconditionError("truncation too shallow: eps needs rows up to " + std::to_string(k + 1));
  const Rational row = dyadic(k);
  const Rational scale = dyadic(k + 1);
  std::vector<Rational> gv(space.size(), Rational(0));
  for (PointIndex i = 0; i < space.size(); ++i)
    if (veeorg_y(space, i) == row) gv[i] = scale * veeorg_x(space, i);
  AlmostSquareWitness out{LipschitzFunction(space, std::move(gv)), k, Rational(0), {}, {}, Rational(0), false};
  out.lip_g = lip_norm(space, out.g).value;
  bool ok = out.lip_g == 1;
  for (const auto& f : fs) {
    std::vector<Rational> plus, minus;
    for (PointIndex i = 0; i < space.size(); ++i) {
      plus.push_back(f(i) + out.g(i));
      minus.push_back(f(i) - out.g(i));
    }
    out.lip_plus.push_back(lip_norm(space, LipschitzFunction(space, std::move(plus))).value);
    out.lip_minus.push_back(lip_norm(space, LipschitzFunction(space, std::move(minus))).value);
    ok = ok && out.lip_plus.back() <= 1 + eps && out.lip_minus.back() <= 1 + eps;
  }
  const PointIndex a0 = space.index_of(a0_id);
  std::optional<Rational> nearest;
  for (PointIndex z = 0; z < space.size(); ++z)
    if (z != a0 && (!nearest || space.d(a0, z) < *nearest)) nearest = space.d(a0, z);
  out.nearest_to_a0 = *nearest;
  out.passes = ok && out.nearest_to_a0 == scale;
  return out;
}

}  // namespace lipfree
