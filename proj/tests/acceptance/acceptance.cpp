// Acceptance suite: one PASS/FAIL line per criterion, each with its own
// runtime budget. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lipfree/json_io.hpp"
#include "lipfree/lipfree.hpp"
#include "support/oracles.hpp"

using namespace lipfree;

namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return make_rational(p, q); }

Rational abs_r(const Rational& r) { return r < 0 ? Rational(-r) : r; }

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Counts checks and keeps the first failure.
struct Count {
  std::size_t checked = 0, failed = 0;
  std::string first;
  void add(bool ok, const std::function<std::string()>& what) {
    ++checked;
    if (!ok && failed++ == 0) first = what();
  }
  std::string summary(const std::string& label) const {
    std::string s = label + " " + std::to_string(checked - failed) + "/" + std::to_string(checked);
    if (failed) s += " (first failure: " + first + ")";
    return s;
  }
};

struct Named {
  std::string name;
  MetricSpace space;
};

// 500 seeded spaces with 2..6 points: half drawn by the library generator,
// half as shortest-path closures of random edge weights.
std::vector<Named> random_corpus() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> size(2, 6);
  std::vector<Named> out;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = size(rng);
    if (i % 2 == 0)
      out.push_back({"random#" + std::to_string(i), random_rational_space(rng, n)});
    else
      out.push_back({"closure#" + std::to_string(i), oracle::closure_space(rng, n)});
  }
  return out;
}

std::vector<Named> generator_corpus() {
  std::vector<Named> out;
  for (std::size_t n = 1; n + 1 <= 30; ++n) out.push_back({"grid(" + std::to_string(n) + ")", grid_space(n)});
  for (std::size_t depth = 0; (std::size_t{2} << depth) <= 30; ++depth)
    out.push_back({"svc(" + std::to_string(depth) + ")", svc_space(depth)});
  for (std::size_t levels = 1; veeorg_space(levels).size() <= 30; ++levels)
    out.push_back({"veeorg(" + std::to_string(levels) + ")", veeorg_space(levels)});
  return out;
}

// Scales around the mesh, around the typical distance and above the diameter.
std::vector<Rational> eps_values(const MetricSpace& s) {
  Rational mesh = s.min_positive_distance(), diam = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) diam = std::max(diam, s.d(i, j));
  std::set<Rational> e{mesh / 2, mesh, mesh * 3 / 2, mesh * 4, diam / 2, diam + 1};
  e.erase(Rational(0));
  return {e.rbegin(), e.rend()};
}

std::string str(const Rational& r) { return to_string(r); }

const std::vector<Rational>& alphas() {
  static const std::vector<Rational> a{R(1, 4), R(1, 2), R(3, 4)};
  return a;
}

// Sub-eps connectability from the definition: shortest chain of hops < eps
// (by exhaustive hop-bounded relaxation) against d(x,y) + eps.
bool connectable_ref(const MetricSpace& s, std::size_t x, std::size_t y, const Rational& eps,
                     const DistanceMatrix& sub_eps_min) {
  (void)eps;
  return sub_eps_min(x, y) < s.d(x, y) + eps;
}

DistanceMatrix sub_eps_shortest(const MetricSpace& s, const Rational& eps) {
  Rational big = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) big += s.d(i, j);
  DistanceMatrix w(s.size(), Rational(0));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (i != j) w(i, j) = s.d(i, j) < eps ? s.d(i, j) : big;
  return oracle::hop_bounded_min(w);
}

// ------------------------------------------------------------------ 1

Outcome criterion1() {
  Count small, gen;
  for (const auto& ns : random_corpus()) {
    const auto& s = ns.space;
    for (const auto& a : alphas())
      for (const auto& e : eps_values(s)) {
        auto b = b_metric(s, DerivedParams(a, e));
        auto w = oracle::discounted_weights(s, a, e);
        for (std::size_t i = 0; i < s.size(); ++i) {
          auto ref = oracle::simple_path_min_from(w, i);
          for (std::size_t j = 0; j < s.size(); ++j)
            if (i != j)
              small.add(b.d(i, j) == ref[j], [&] { return ns.name + " alpha " + str(a) + " eps " + str(e); });
        }
      }
  }
  for (const auto& ns : generator_corpus()) {
    const auto& s = ns.space;
    if (s.size() < 2) continue;
    const Rational mesh = s.min_positive_distance();
    for (const auto& a : alphas())
      for (const auto& e : {mesh * 3 / 2, mesh * 4}) {
        auto b = b_metric(s, DerivedParams(a, e));
        auto ref = oracle::hop_bounded_min(oracle::discounted_weights(s, a, e));
        for (std::size_t i = 0; i < s.size(); ++i)
          for (std::size_t j = 0; j < s.size(); ++j)
            if (i != j) gen.add(b.d(i, j) == ref(i, j), [&] { return ns.name + " alpha " + str(a) + " eps " + str(e); });
      }
  }
  return {small.failed == 0 && gen.failed == 0,
          small.summary("random pairs") + ", " + gen.summary("generator pairs")};
}

// ------------------------------------------------------------------ 2

Outcome criterion2() {
  auto corpus = random_corpus();
  for (auto& g : generator_corpus()) corpus.push_back(std::move(g));
  Count axioms, sandwich, lower;
  for (const auto& ns : corpus) {
    const auto& s = ns.space;
    if (s.size() < 2) continue;
    auto grid = eps_values(s);
    if (s.size() > 12) grid = {s.min_positive_distance() * 3 / 2, s.min_positive_distance() * 4};
    for (const auto& e : grid) {
      auto sub = sub_eps_shortest(s, e);
      for (const auto& a : alphas()) {
        auto b = b_metric(s, DerivedParams(a, e));
        auto tag = [&] { return ns.name + " alpha " + str(a) + " eps " + str(e); };
        bool metric = true;
        for (std::size_t i = 0; i < s.size(); ++i)
          for (std::size_t j = 0; j < s.size(); ++j) {
            metric = metric && (i == j ? b.d(i, j) == 0 : b.d(i, j) > 0) && b.d(i, j) == b.d(j, i);
            for (std::size_t k = 0; k < s.size(); ++k) metric = metric && b.d(i, k) <= b.d(i, j) + b.d(j, k);
          }
        axioms.add(metric, tag);
        for (std::size_t i = 0; i < s.size(); ++i)
          for (std::size_t j = i + 1; j < s.size(); ++j) {
            sandwich.add((1 - a) * s.d(i, j) <= b.d(i, j) && b.d(i, j) <= s.d(i, j), tag);
            if (!connectable_ref(s, i, j, e, sub))
              lower.add(b.d(i, j) >= (1 - a) * s.d(i, j) + e * min_of(a, 1 - a), tag);
          }
      }
    }
  }
  // Grid-scale equality: with eps just above the mesh every pair of a grid is
  // joined by adjacent hops, so b_{alpha,eps} = (1 - alpha) d everywhere.
  Count grid_eq;
  for (std::size_t n : {4, 8, 16, 29}) {
    auto g = grid_space(n);
    const Rational eps = g.min_positive_distance() * 9 / 8;
    for (const auto& a : alphas()) {
      auto b = b_metric(g, DerivedParams(a, eps));
      for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
          grid_eq.add(b.d(i, j) == (1 - a) * g.d(i, j), [&] { return "grid(" + std::to_string(n) + ")"; });
    }
  }
  return {axioms.failed + sandwich.failed + lower.failed + grid_eq.failed == 0,
          axioms.summary("metric") + ", " + sandwich.summary("sandwich") + ", " + lower.summary("lower bound") +
              ", " + grid_eq.summary("grid scale")};
}

// ------------------------------------------------------------------ 3

Outcome criterion3() {
  std::vector<Named> spaces;
  for (auto& ns : random_corpus())
    if (ns.space.size() <= 5) spaces.push_back(std::move(ns));
  for (auto& ns : generator_corpus())
    if (ns.space.size() <= 5) spaces.push_back(std::move(ns));

  // Zero coefficients only repeat vectors of the smaller spaces in the corpus.
  const std::vector<Rational> coeffs{R(1, 2), R(-1, 2), R(1), R(-1)};
  Count primal, dual, cert;
  std::size_t vectors = 0;
  double library_s = 0;
  for (const auto& ns : spaces) {
    const auto& s = ns.space;
    oracle::TreeTransport tt(s);
    auto vertices = oracle::dual_vertices(s);
    std::vector<std::size_t> free_points;
    for (std::size_t i = 0; i < s.size(); ++i)
      if (i != s.base()) free_points.push_back(i);
    std::vector<std::size_t> digits(free_points.size(), 0);
    while (true) {
      std::vector<Rational> c(s.size(), Rational(0));
      std::vector<std::pair<PointIndex, Rational>> terms;
      for (std::size_t k = 0; k < free_points.size(); ++k) {
        c[free_points[k]] = coeffs[digits[k]];
        terms.emplace_back(free_points[k], coeffs[digits[k]]);
      }
      FreeVector mu(s, terms);
      auto t0 = std::chrono::steady_clock::now();
      auto kr = kr_norm(s, mu);
      library_s += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      ++vectors;
      auto tag = [&] { return ns.name + " vector #" + std::to_string(vectors); };
      primal.add(kr.value == tt.min_cost(c), tag);
      std::optional<Rational> best;
      for (const auto& g : vertices) {
        Rational v = 0;
        for (std::size_t i = 0; i < s.size(); ++i) v += g[i] * c[i];
        if (!best || v > *best) best = v;
      }
      dual.add(best && *best == kr.value, tag);
      // Certificate: 1-Lipschitz, zero at the base, norming, and tight on every
      // arc that carries flow.
      const auto& g = kr.certificate;
      bool ok = g(s.base()) == 0 && pair(g, mu) == kr.value;
      for (std::size_t i = 0; i < s.size() && ok; ++i)
        for (std::size_t j = 0; j < s.size() && ok; ++j) ok = abs_r(g(i) - g(j)) <= s.d(i, j);
      for (const auto& arc : kr.flow.arcs)
        ok = ok && (arc.flow == 0 || g(arc.from) - g(arc.to) == s.d(arc.from, arc.to));
      cert.add(ok, tag);

      std::size_t pos = 0;
      while (pos < digits.size() && ++digits[pos] == coeffs.size()) digits[pos++] = 0;
      if (pos == digits.size()) break;
    }
  }
  char lib[48];
  std::snprintf(lib, sizeof lib, "%.1f s in kr_norm", library_s);
  return {primal.failed + dual.failed + cert.failed == 0,
          std::to_string(spaces.size()) + " spaces, " + lib + "; " + primal.summary("primal") + ", " + dual.summary("dual") +
              ", " + cert.summary("certificate")};
}

// ------------------------------------------------------------------ 4

Outcome criterion4() {
  Count c;
  std::ostringstream info;
  for (std::size_t n : {8, 16, 64}) {
    auto g = grid_space(n);
    const Rational eps = R(4, static_cast<std::int64_t>(n)), alpha = R(1, 2);
    auto mu = molecule(g, g.index_of("0"), g.index_of("1"));
    const std::string tag = "grid(" + std::to_string(n) + ")";
    c.add(b_norm(g, mu, alpha, eps) == R(1, 2), [&] { return tag + " b_norm"; });
    auto d = delta_decompose(g, mu, alpha, eps);
    c.add(d.lambda_sum == 1, [&] { return tag + " lambda sum " + str(d.lambda_sum); });
    c.add(d.combination.reconstruct(g) == mu, [&] { return tag + " reconstruction"; });
    c.add(!d.delta_flags.empty() && d.all_flagged(), [&] { return tag + " flags"; });
    info << tag << ": " << d.combination.atoms.size() << " atoms; ";
  }
  auto s = svc_space(2);
  const Rational eps = R(1, 32);
  auto bn = b_norm(s, molecule(s, s.index_of("0"), s.index_of("1")), R(1, 2), eps);
  c.add(bn >= R(1, 2) + eps * R(1, 2), [&] { return "svc(2) b_norm " + str(bn); });
  info << "svc(2) b_norm " << str(bn);
  return {c.failed == 0, c.summary("checks") + "; " + info.str()};
}

// ------------------------------------------------------------------ 5

Outcome criterion5() {
  Count c;
  for (std::size_t N = 1; N <= 5; ++N) {
    auto v = veeorg_space(N);
    const std::string tag = "N=" + std::to_string(N);
    const std::size_t n = v.size();
    // Metric axioms on every triple, recomputing d from the coordinates.
    bool metric = true;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const Rational xi = v.point(i).coords[0], yi = v.point(i).coords[1];
        const Rational xj = v.point(j).coords[0], yj = v.point(j).coords[1];
        Rational d = yi == yj ? abs_r(xi - xj) : abs_r(yi - yj) + min_of(xi + xj, 2 - xi - xj);
        metric = metric && v.d(i, j) == d && (i == j) == (d == 0);
        for (std::size_t k = 0; k < n; ++k) metric = metric && v.d(i, k) <= v.d(i, j) + v.d(j, k);
      }
    c.add(metric, [&] { return tag + " metric"; });

    // D(z) >= alpha - beta with the sets written out from the coordinates.
    const Rational alpha = R(2, 5), beta = R(1, 5);
    auto in_a = [&](std::size_t i) { return v.point(i).coords[0] < alpha; };
    auto in_b = [&](std::size_t i) { return beta < v.point(i).coords[0] && v.point(i).coords[0] < 1 - beta; };
    auto in_c = [&](std::size_t i) { return v.point(i).coords[0] > 1 - alpha; };
    std::optional<Rational> min_d;
    for (std::size_t z = 0; z < n; ++z) {
      Rational D = 0;
      for (const auto& in : std::vector<std::function<bool(std::size_t)>>{in_a, in_b, in_c}) {
        if (!in(z)) continue;
        std::optional<Rational> to_out;
        for (std::size_t w = 0; w < n; ++w)
          if (!in(w) && (!to_out || v.d(z, w) < *to_out)) to_out = v.d(z, w);
        if (to_out) D += *to_out;
      }
      if (!min_d || D < *min_d) min_d = D;
    }
    c.add(*min_d >= alpha - beta, [&] { return tag + " cover separation " + str(*min_d); });
    auto sep = cover_separation(v, abc_cover(v, alpha, beta));
    c.add(sep.min_value == *min_d && sep.holds, [&] { return tag + " cover_separation value"; });

    auto rt = decomposition_roundtrip(v, abc_cover(v, alpha, beta).sets());
    c.add(rt.failures == 0 && rt.checked == n + n * (n - 1) / 2, [&] { return tag + " roundtrip"; });

    auto h = h_function(v);
    c.add(lip_norm(v, h).value == 1, [&] { return tag + " lip h"; });

    // x(1 - y^2): norm 1 and (p,q) is the only trivial-segment pair attaining it.
    std::vector<Rational> fv;
    for (std::size_t i = 0; i < n; ++i) {
      const Rational& y = v.point(i).coords[1];
      fv.push_back(v.point(i).coords[0] * (1 - y * y));
    }
    Rational lip = 0;
    std::vector<std::pair<std::size_t, std::size_t>> attaining;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) lip = std::max(lip, abs_r(fv[i] - fv[j]) / v.d(i, j));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        bool trivial = true;
        for (std::size_t z = 0; z < n && trivial; ++z)
          if (z != i && z != j && v.d(i, z) + v.d(z, j) == v.d(i, j)) trivial = false;
        if (trivial && abs_r(fv[i] - fv[j]) / v.d(i, j) == lip) attaining.emplace_back(i, j);
      }
    const auto pq = std::make_pair(v.index_of("p"), v.index_of("q"));
    c.add(lip == 1 && attaining.size() == 1 && attaining[0] == pq, [&] { return tag + " polyhedral witness"; });
    c.add(polyhedral_witness(v).passes, [&] { return tag + " polyhedral_witness"; });
  }
  return {c.failed == 0, c.summary("checks")};
}

// ------------------------------------------------------------------ 6

// Observed at N = 6 by one run of the exact probe, then frozen.
const Rational kFrozenLevelSixDistance = R(2);

Outcome criterion6() {
  std::vector<Rational> seq;
  for (std::size_t N = 2; N <= 6; ++N) {
    auto v = veeorg_space(N);
    auto mu = molecule(v, v.index_of("q"), v.index_of("p"));
    seq.push_back(delta_distance_probe(v, mu, h_function(v), R(3, 10)).value);
  }
  bool mono = true;
  std::string s;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i > 0 && seq[i] < seq[i - 1]) mono = false;
    s += (i ? ", " : "") + str(seq[i]);
  }
  return {mono && seq.back() == kFrozenLevelSixDistance, "distances N=2..6: " + s};
}

// ------------------------------------------------------------------ 7

Outcome criterion7() {
  const Eigen::Index N = 112;
  Count c;
  std::ostringstream info;
  auto e = [&](Eigen::Index i) { return unit_vector(N, i); };
  double worst = 0;
  auto near = [&](double v, double want, double tol, const std::string& what) {
    worst = std::max(worst, std::abs(v - want));
    c.add(std::abs(v - want) <= tol, [&] { return what + " = " + format_double(v); });
  };
  near(trimmed_norm(e(0)).value, 1.0, 1e-7, "|||e_1|||");
  for (Eigen::Index n : {Eigen::Index{1}, Eigen::Index{2}, N / 2, N - 1}) {
    near(trimmed_norm(e(n)).value, 2.0, 1e-9, "|||e_n|||");
    near(trimmed_norm(e(0) + e(n)).value, 1.0, 1e-7, "|||e_1 + e_n|||");
  }
  for (std::size_t n : {1, 2, 3}) {
    auto lp = lemma32_points(n, static_cast<std::size_t>(N));
    const std::string tag = "n=" + std::to_string(n);
    c.add(lp.pairing == 1, [&] { return tag + " pairing " + str(lp.pairing); });
    c.add(lp.distance_squared == R(2, static_cast<std::int64_t>(n)), [&] { return tag + " distance"; });
    near(lp.x_norm.value, 1.0, 1e-7, tag + " |||x|||");
    near(lp.xstar_norm.value, 1.0, 1e-7, tag + " |||x*|||*");
  }
  // Every n up to 64; the witness costs two solves per n, so the full 112
  // would take most of the budget on its own.
  auto sd = super_delta_witness(64);
  for (double d : sd.primal_distances) near(d, 2.0, 1e-7, "primal witness distance");
  for (double d : sd.dual_distances) near(d, 2.0, 1e-7, "dual witness distance");
  info << "worst deviation " << worst;
  return {c.failed == 0, c.summary("checks") + "; " + info.str()};
}

// ------------------------------------------------------------------ 8

RenormVector draw(std::mt19937_64& rng, Eigen::Index N, int kind) {
  std::normal_distribution<double> g;
  RenormVector v(N);
  for (Eigen::Index i = 0; i < N; ++i) v(i) = g(rng);
  if (kind == 1) {  // near the atom e_1 + e_n
    v *= 1e-3;
    v(0) += 1;
    v(N - 1) += 1;
  } else if (kind == 2) {  // near a slab face
    v(0) = 2 * v(N - 1) + 1e-3 * g(rng);
  }
  return v;
}

Outcome criterion8() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<Eigen::Index> dim(2, 32);
  Count gaps, bilinear;
  double worst_gap = 0;
  for (int s = 0; s < 1000; ++s) {
    const Eigen::Index N = dim(rng);
    auto v = draw(rng, N, s % 3), a = draw(rng, N, (s / 3) % 3);
    auto nv = trimmed_norm(v), na = trimmed_dual_norm(a), nd = dkr_norm(v);
    for (const auto* r : {&nv, &na, &nd}) {
      worst_gap = std::max(worst_gap, r->gap);
      gaps.add(r->gap <= 1e-7, [&] { return "sample " + std::to_string(s); });
    }
    bilinear.add(std::abs(a.dot(v)) <= na.value * nv.value * (1 + 1e-6), [&] { return "sample " + std::to_string(s); });
  }

  Count dense;
  double worst_dense = 0;
  auto compare = [&](double lib, double ref, const std::string& what) {
    worst_dense = std::max(worst_dense, std::abs(lib - ref));
    dense.add(std::abs(lib - ref) <= 1e-5, [&] { return what; });
  };
  std::mt19937_64 orng(91);
  for (Eigen::Index N : {Eigen::Index{2}, Eigen::Index{3}}) {
    // The face walk is cheap, the dense sphere grid for the dual is not.
    const int count = 60, dual_count = N == 2 ? 12 : 6;
    for (int i = 0; i < count; ++i) {
      auto v = draw(orng, N, i % 3), a = draw(orng, N, (i + 1) % 3);
      const std::string tag = "N=" + std::to_string(N) + " #" + std::to_string(i);
      compare(dkr_norm(v).value, oracle::dkr_norm_dense(v), tag + " primal");
      if (i < dual_count) compare(trimmed_dual_norm(a).value, oracle::trimmed_dual_dense(a), tag + " dual");
    }
  }
  std::ostringstream info;
  info << gaps.summary("gaps") << " (worst " << worst_gap << "), " << bilinear.summary("bilinear") << ", "
       << dense.summary("dense oracle") << " (worst " << worst_dense << ")";
  return {gaps.failed + bilinear.failed + dense.failed == 0, info.str()};
}

// ------------------------------------------------------------------ 9

Outcome criterion9() {
  const std::size_t dim = 20;
  SliceProbeConfig cfg{400, 9};
  auto lp = lemma32_points(1, dim);
  auto probe = slice_diameter_probe(lp.xstar, {1e-1, 1e-2, 1e-3, 1e-4}, cfg);
  bool mono = true;
  std::optional<double> prev;
  std::ostringstream info;
  info << "x*(1):";
  for (const auto& row : probe.rows) {
    info << ' ' << (row.estimate ? format_double(*row.estimate).substr(0, 8) : "empty");
    if (!row.estimate) continue;
    if (prev && *row.estimate > *prev) mono = false;
    prev = row.estimate;
  }
  const auto N = static_cast<Eigen::Index>(dim);
  const RenormVector e1 = unit_vector(N, 0), e12 = e1 + unit_vector(N, 1);
  const double delta = 1e-3;
  // The explicit pair: both in the slice of e_1* and 2 apart.
  bool pair_ok = e1.dot(e1) > 1 - delta && e1.dot(e12) > 1 - delta && trimmed_norm(e12).value <= 1 + 1e-9 &&
                 std::abs(trimmed_norm(e1 - e12).value - 2) <= 1e-7;
  auto e1_probe = slice_diameter_probe(e1, {delta}, cfg);
  const double est = e1_probe.rows.front().estimate.value_or(0.0);
  info << "; e_1* at 1e-3: " << format_double(est);
  return {mono && pair_ok && est >= 2 - 1e-6, info.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "b-metric exactness", 60, criterion1},
      {2, "b-metric properties", 60, criterion2},
      {3, "free-space norm against exhaustive transport and dual vertices", 30, criterion3},
      {4, "Delta decomposition on grids, no certificate on SVC", 30, criterion4},
      {5, "Veeorg truncations", 120, criterion5},
      {6, "Daugavet trend for the p-q molecule", 120, criterion6},
      {7, "renorm identities", 60, criterion7},
      {8, "convex solver certification", 120, criterion8},
      {9, "strong-exposure trend", 60, criterion9},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.ok && in_time;
    all = all && pass;
    char timing[64];
    std::snprintf(timing, sizeof timing, "%.1f s of %.0f s", secs, c.budget_s);
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.name << " [" << timing
              << (in_time ? "" : ", over budget") << "] " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
