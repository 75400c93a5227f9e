#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/matrix.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

using PointIndex = std::size_t;
using DistanceMatrix = SquareMatrix<Rational>;

struct Point {
  std::string id;
  std::string label;             // optional, empty when absent
  std::vector<Rational> coords;  // optional planar/line coordinates
};

/// Integers print without a denominator, everything else as "p/q".
inline std::string to_short_string(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return to_string(r);
}

struct MetricViolation {
  enum class Kind { DuplicateId, UnknownBase, NonZeroDiagonal, NonPositive, Asymmetric, Triangle };
  Kind kind;
  std::size_t i = 0, j = 0, k = 0;

  std::string describe() const {
    std::ostringstream os;
    switch (kind) {
      case Kind::DuplicateId: os << "duplicate point id at positions (" << i << ", " << j << ")"; break;
      case Kind::UnknownBase: os << "base point is not one of the points"; break;
      case Kind::NonZeroDiagonal: os << "dist[" << i << "][" << i << "] != 0"; break;
      case Kind::NonPositive: os << "dist[" << i << "][" << j << "] <= 0 for distinct points"; break;
      case Kind::Asymmetric: os << "dist[" << i << "][" << j << "] != dist[" << j << "][" << i << "]"; break;
      case Kind::Triangle:
        os << "triangle inequality fails: d(" << i << "," << k << ") > d(" << i << "," << j << ") + d(" << j
           << "," << k << ")";
        break;
    }
    return os.str();
  }
};

using MetricReport = std::vector<MetricViolation>;

/// Checks every metric-space axiom exactly. The triangle check is exhaustive
/// over ordered triples. Throws StructuralError on a dimension mismatch.
inline MetricReport validate_metric(const std::vector<Point>& points, const std::string& base_id,
                                    const DistanceMatrix& dist) {
  const std::size_t n = points.size();
  if (dist.size() != n)
    throw StructuralError("distance matrix is " + std::to_string(dist.size()) + "x" +
                          std::to_string(dist.size()) + " but there are " + std::to_string(n) + " points");
  MetricReport report;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = seen.emplace(points[i].id, i);
    if (!fresh) report.push_back({MetricViolation::Kind::DuplicateId, it->second, i});
  }
  if (!seen.contains(base_id)) report.push_back({MetricViolation::Kind::UnknownBase});
  for (std::size_t i = 0; i < n; ++i) {
    if (dist(i, i) != 0) report.push_back({MetricViolation::Kind::NonZeroDiagonal, i, i});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i)) report.push_back({MetricViolation::Kind::Asymmetric, i, j});
      if (dist(i, j) <= 0 || dist(j, i) <= 0) report.push_back({MetricViolation::Kind::NonPositive, i, j});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (dist(i, k) > dist(i, j) + dist(j, k)) report.push_back({MetricViolation::Kind::Triangle, i, j, k});
      }
    }
  return report;
}

/// A finite pointed metric space with exact rational distances. Instances are
/// immutable and always satisfy the metric axioms.
class MetricSpace {
 public:
  /// Validates and builds; throws PreconditionError listing the violated axioms.
  static MetricSpace create(std::vector<Point> points, const std::string& base_id, DistanceMatrix dist) {
    auto report = validate_metric(points, base_id, dist);
    if (!report.empty()) {
      std::string msg = "invalid metric space:";
      for (std::size_t i = 0; i < report.size() && i < 8; ++i) msg += " [" + report[i].describe() + "]";
      if (report.size() > 8) msg += " ... (" + std::to_string(report.size()) + " violations)";
      throw PreconditionError(msg);
    }
    return unchecked(std::move(points), base_id, std::move(dist));
  }

  /// Skips the O(n^3) triangle check. For generators and derived metrics
  /// whose construction already guarantees the axioms.
  static MetricSpace unchecked(std::vector<Point> points, const std::string& base_id, DistanceMatrix dist) {
    MetricSpace s;
    s.points_ = std::move(points);
    s.dist_ = std::move(dist);
    for (std::size_t i = 0; i < s.points_.size(); ++i) s.index_.emplace(s.points_[i].id, i);
    auto it = s.index_.find(base_id);
    if (it == s.index_.end()) throw StructuralError("unknown base point '" + base_id + "'");
    if (s.dist_.size() != s.points_.size()) throw StructuralError("distance matrix dimension mismatch");
    s.base_ = it->second;
    return s;
  }

  std::size_t size() const noexcept { return points_.size(); }
  PointIndex base() const noexcept { return base_; }
  const std::vector<Point>& points() const noexcept { return points_; }
  const Point& point(PointIndex i) const { return points_.at(i); }
  const std::string& id(PointIndex i) const { return points_.at(i).id; }
  const DistanceMatrix& distances() const noexcept { return dist_; }
  const Rational& d(PointIndex i, PointIndex j) const { return dist_(i, j); }

  PointIndex index_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw StructuralError("unknown point id '" + id + "'");
    return it->second;
  }
  std::optional<PointIndex> find(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  void check_index(PointIndex i) const {
    if (i >= size()) throw StructuralError("point index " + std::to_string(i) + " out of range");
  }

  /// Same points and base, new distances (not validated).
  MetricSpace with_distances(DistanceMatrix dist) const { return unchecked(points_, id(base_), std::move(dist)); }

  /// Smallest distance between distinct points; zero for a one-point space.
  Rational min_positive_distance() const {
    std::optional<Rational> best;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (!best || dist_(i, j) < *best) best = dist_(i, j);
    return best.value_or(Rational(0));
  }

 private:
  MetricSpace() = default;

  std::vector<Point> points_;
  PointIndex base_ = 0;
  DistanceMatrix dist_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Triangle inequality on `samples` random ordered triples (axioms other than
/// the triangle inequality are checked exhaustively).
inline MetricReport validate_metric_sampled(const MetricSpace& space, std::size_t samples, std::uint64_t seed) {
  MetricReport report;
  const std::size_t n = space.size();
  const auto& dist = space.distances();
  for (std::size_t i = 0; i < n; ++i) {
    if (dist(i, i) != 0) report.push_back({MetricViolation::Kind::NonZeroDiagonal, i, i});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist(i, j) != dist(j, i)) report.push_back({MetricViolation::Kind::Asymmetric, i, j});
      if (dist(i, j) <= 0) report.push_back({MetricViolation::Kind::NonPositive, i, j});
    }
  }
  if (n < 3) return report;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t s = 0; s < samples; ++s) {
    std::size_t i = pick(rng), j = pick(rng), k = pick(rng);
    if (i == j || j == k || i == k) continue;
    if (dist(i, k) > dist(i, j) + dist(j, k)) report.push_back({MetricViolation::Kind::Triangle, i, j, k});
  }
  return report;
}

inline MetricReport validate_metric(const MetricSpace& space) {
  return validate_metric(space.points(), space.id(space.base()), space.distances());
}

/// The metric segment [x,y] = {z : d(x,z) + d(z,y) = d(x,y)}, in index order.
inline std::vector<PointIndex> metric_segment(const MetricSpace& space, PointIndex x, PointIndex y) {
  space.check_index(x);
  space.check_index(y);
  std::vector<PointIndex> seg;
  for (PointIndex z = 0; z < space.size(); ++z)
    if (space.d(x, z) + space.d(z, y) == space.d(x, y)) seg.push_back(z);
  return seg;
}

/// Points on the real line at the given coordinates, with |a - b| as metric.
/// The first coordinate is the base point.
inline MetricSpace line_space(const std::vector<Rational>& coords) {
  if (coords.empty()) throw DomainError("line space needs at least one point");
  std::vector<Point> pts;
  pts.reserve(coords.size());
  for (const auto& c : coords) pts.push_back({to_short_string(c), {}, {c}});
  DistanceMatrix dist(coords.size(), Rational(0));
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = 0; j < coords.size(); ++j) {
      Rational diff = coords[i] - coords[j];
      dist(i, j) = diff < 0 ? Rational(-diff) : diff;
    }
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i + 1; j < coords.size(); ++j)
      if (dist(i, j) == 0) throw PreconditionError("duplicate coordinate " + pts[i].id + " in line space");
  // |a - b| on distinct reals is a metric, so the cubic check is skipped.
  std::string base = pts.front().id;
  return MetricSpace::unchecked(std::move(pts), base, std::move(dist));
}

/// {k/n : 0 <= k <= n} on the line, base 0. Point ids are the coordinates
/// ("0", "1/4", ..., "1").
inline MetricSpace grid_space(std::size_t n) {
  if (n < 1) throw DomainError("grid_space needs n >= 1");
  std::vector<Rational> coords;
  for (std::size_t k = 0; k <= n; ++k) coords.push_back(make_rational(static_cast<std::int64_t>(k), static_cast<std::int64_t>(n)));
  return line_space(coords);
}

inline constexpr std::size_t kMaxSvcDepth = 8;

/// Endpoints of the Smith-Volterra-Cantor construction after `depth` steps:
/// at step k the open middle interval of length 4^-k is removed from each
/// remaining interval. 2^(depth+1) points, base 0.
inline MetricSpace svc_space(std::size_t depth) {
  if (depth > kMaxSvcDepth)
    throw DomainError("svc_space depth " + std::to_string(depth) + " exceeds maximum " + std::to_string(kMaxSvcDepth));
  std::vector<std::pair<Rational, Rational>> intervals{{Rational(0), Rational(1)}};
  Rational removed = 1;
  for (std::size_t k = 1; k <= depth; ++k) {
    removed /= 4;
    std::vector<std::pair<Rational, Rational>> next;
    for (const auto& [a, b] : intervals) {
      Rational mid = (a + b) / 2;
      next.emplace_back(a, mid - removed / 2);
      next.emplace_back(mid + removed / 2, b);
    }
    intervals = std::move(next);
  }
  std::vector<Rational> coords;
  for (const auto& [a, b] : intervals) {
    coords.push_back(a);
    coords.push_back(b);
  }
  return line_space(coords);
}

}  // namespace lipfree
