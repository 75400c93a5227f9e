#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

enum class RandomSpaceKind { Banded, Line, Star };

/// Seeded random rational metric space with `n` points p0..p{n-1}, base p0.
///  Banded: every distance drawn from {8,...,16}/8, so any triangle closes.
///  Line:   distinct points drawn from {0,...,32}/8 on the real line.
///  Star:   leaf weights from {1,...,8}/4 around a hidden centre; d(i,j) = w_i + w_j.
inline MetricSpace random_rational_space(std::mt19937_64& rng, std::size_t n, RandomSpaceKind kind) {
  if (n < 1) throw DomainError("random space needs at least one point");
  std::vector<Point> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({"p" + std::to_string(i), {}, {}});
  DistanceMatrix dist(n, Rational(0));
  switch (kind) {
    case RandomSpaceKind::Banded: {
      std::uniform_int_distribution<int> num(8, 16);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = make_rational(num(rng), 8);
      break;
    }
    case RandomSpaceKind::Line: {
      if (n > 33) throw DomainError("line spaces hold at most 33 points");
      std::vector<int> slots(33);
      for (int k = 0; k < 33; ++k) slots[k] = k;
      std::shuffle(slots.begin(), slots.end(), rng);
      for (std::size_t i = 0; i < n; ++i) pts[i].coords = {make_rational(slots[i], 8)};
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          Rational diff = pts[i].coords[0] - pts[j].coords[0];
          dist(i, j) = diff < 0 ? Rational(-diff) : diff;
        }
      break;
    }
    case RandomSpaceKind::Star: {
      std::uniform_int_distribution<int> num(1, 8);
      std::vector<Rational> w;
      for (std::size_t i = 0; i < n; ++i) w.push_back(make_rational(num(rng), 4));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) dist(i, j) = dist(j, i) = w[i] + w[j];
      break;
    }
  }
  return MetricSpace::create(std::move(pts), "p0", std::move(dist));
}

/// Cycles through the kinds so a batch mixes all three.
inline MetricSpace random_rational_space(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<int> pick(0, 2);
  return random_rational_space(rng, n, static_cast<RandomSpaceKind>(pick(rng)));
}

}  // namespace lipfree
