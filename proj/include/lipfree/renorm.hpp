#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/socp.hpp"

namespace lipfree {

/// Coordinates over e_1..e_N (index 0 is e_1).
using RenormVector = Eigen::VectorXd;

struct NormResult {
  /// Primal upper bound; the reported norm.
  double value = 0.0;
  /// Certified lower bound from the dual witness.
  double lower = 0.0;
  double gap = 0.0;
  /// Atom coefficients mu_n (n = 2..N) of the inf-convolution.
  Eigen::VectorXd primal;
  /// Dual-side witness: a functional for the primal norms, a vector for the dual ones.
  Eigen::VectorXd dual;
};

struct RenormOptions {
  /// A result whose certified gap exceeds this raises ConvergenceError.
  double accept_gap = 1e-7;
  /// Slack allowed in the equivalence-constant checks.
  double sandwich_slack = 1e-9;
  SocpOptions socp;
};

inline void require_renorm_vector(const RenormVector& v) {
  if (v.size() < 2) throw DomainError("renorm vectors need dimension >= 2");
  if (!v.allFinite()) throw DomainError("renorm vector has non-finite entries");
}

inline RenormVector unit_vector(Eigen::Index dim, Eigen::Index i) {
  RenormVector v = RenormVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

/// max(||a||_2, max_{n>=2} |a_1 + a_n|)
inline double dkr_dual_norm(const RenormVector& a) {
  require_renorm_vector(a);
  double best = a.norm();
  for (Eigen::Index n = 1; n < a.size(); ++n) best = std::max(best, std::abs(a(0) + a(n)));
  return best;
}

/// max_{n>=2} |v_1 - 2 v_n| and the maximizing index.
inline std::pair<double, Eigen::Index> trimmed_slab(const RenormVector& v) {
  double best = -1.0;
  Eigen::Index arg = 1;
  for (Eigen::Index n = 1; n < v.size(); ++n) {
    double s = std::abs(v(0) - 2.0 * v(n));
    if (s > best) {
      best = s;
      arg = n;
    }
  }
  return {best, arg};
}

/// ||v - sum_n mu_n (e_1 + e_n)||_2 + sum_n |mu_n|
inline double dkr_objective(const RenormVector& v, const Eigen::VectorXd& mu) {
  RenormVector r = v;
  r(0) -= mu.sum();
  r.tail(v.size() - 1) -= mu;
  return r.norm() + mu.lpNorm<1>();
}

namespace detail {

// max sum_n v_n a_n over a_n in [lo, hi] with sum a_n^2 <= r2.
inline double capped_box_max(const Eigen::VectorXd& v, double lo, double hi, double r2, Eigen::VectorXd& a) {
  const Eigen::Index m = v.size();
  a.resize(m);
  auto fill = [&](double lambda) {
    double sq = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      a(i) = lambda == 0.0 ? (v(i) > 0 ? hi : (v(i) < 0 ? lo : 0.0)) : std::clamp(v(i) / lambda, lo, hi);
      sq += a(i) * a(i);
    }
    return sq;
  };
  if (r2 <= 0.0 || v.isZero(0.0)) {
    a.setZero();
    return 0.0;
  }
  if (fill(0.0) <= r2) return v.dot(a);
  double lambda_hi = v.norm() / std::sqrt(r2);
  double lambda_lo = lambda_hi * 1e-300;
  lambda_lo = std::max(lambda_lo, std::numeric_limits<double>::min());
  for (int it = 0; it < 200; ++it) {
    double mid = std::sqrt(lambda_lo * lambda_hi);
    if (!(mid > lambda_lo && mid < lambda_hi)) break;
    if (fill(mid) > r2)
      lambda_lo = mid;
    else
      lambda_hi = mid;
  }
  // Re-solve lambda exactly for the final clip pattern.
  fill(lambda_hi);
  double clipped = 0.0, free_sq = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double u = v(i) / lambda_hi;
    if (u <= lo || u >= hi)
      clipped += a(i) * a(i);
    else
      free_sq += v(i) * v(i);
  }
  if (free_sq > 0.0 && r2 > clipped) {
    double lambda = std::sqrt(free_sq / (r2 - clipped));
    if (lambda > 0.0 && std::isfinite(lambda)) fill(std::max(lambda, lambda_lo));
  }
  double sq = a.squaredNorm();
  if (sq > r2) a *= std::sqrt(r2 / sq);
  return v.dot(a);
}

}  // namespace detail

struct DualSearch {
  double value = 0.0;  // <a, v>, a certified lower bound on the norm
  RenormVector witness;
};

/// Independent evaluation of the primal norm as max <a, v> over the explicit
/// dual ball {||a||_2 <= 1, |a_1 + a_n| <= 1}. For a fixed a_1 = t the inner
/// problem is a box-capped ball maximization solved by water-filling; the
/// outer concave function of t is maximized by golden-section search.
inline DualSearch dkr_norm_dual_search(const RenormVector& v) {
  require_renorm_vector(v);
  const Eigen::Index m = v.size() - 1;
  const Eigen::VectorXd tail = v.tail(m);
  Eigen::VectorXd inner;
  auto phi = [&](double t) {
    double val = t * v(0) + detail::capped_box_max(tail, -1.0 - t, 1.0 - t, 1.0 - t * t, inner);
    return val;
  };
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = -1.0, hi = 1.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 120 && hi - lo > 1e-15; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = phi(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = phi(x1);
    }
  }
  DualSearch best;
  best.value = -std::numeric_limits<double>::infinity();
  for (double t : {lo, hi, 0.5 * (lo + hi), -1.0, 1.0, 0.0}) {
    phi(t);
    RenormVector a(v.size());
    a(0) = t;
    a.tail(m) = inner;
    a /= std::max(1.0, dkr_dual_norm(a));
    double val = a.dot(v);
    if (val > best.value) {
      best.value = val;
      best.witness = a;
    }
  }
  return best;
}

namespace detail {

inline SocpProblem dkr_problem(const RenormVector& w) {
  const Eigen::Index N = w.size(), m = N - 1, nv = 2 * m + 1;
  SocpProblem p;
  p.c = Eigen::VectorXd::Zero(nv);
  p.c.segment(m, m).setOnes();
  p.c(nv - 1) = 1.0;
  p.G = Eigen::MatrixXd::Zero(2 * m, nv);
  p.h = Eigen::VectorXd::Zero(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    p.G(2 * i, i) = 1.0;
    p.G(2 * i, m + i) = -1.0;
    p.G(2 * i + 1, i) = -1.0;
    p.G(2 * i + 1, m + i) = -1.0;
  }
  SecondOrderCone k;
  k.F = Eigen::MatrixXd::Zero(N, nv);
  for (Eigen::Index i = 0; i < m; ++i) {
    k.F(0, i) = -1.0;
    k.F(i + 1, i) = -1.0;
  }
  k.f = w;
  k.g = Eigen::VectorXd::Zero(nv);
  k.g(nv - 1) = 1.0;
  p.cones.push_back(std::move(k));
  return p;
}

inline Eigen::VectorXd socp_start(Eigen::Index m, double tau) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 * m + 1);
  x.segment(m, m).setOnes();
  x(2 * m) = tau;
  return x;
}

inline void check_gap(const std::string& what, const NormResult& r, const RenormOptions& opt) {
  if (!(r.gap <= opt.accept_gap)) throw ConvergenceError(what + ": certified gap " + std::to_string(r.gap), r.gap);
}

}  // namespace detail

/// Gauge of clco(B_2 U {+-(e_1 + e_n)}), computed as
/// min_mu ||v - sum mu_n (e_1 + e_n)||_2 + sum |mu_n|. Certified by a functional
/// in the explicit dual ball.
inline NormResult dkr_norm(const RenormVector& v, const RenormOptions& opt = {}) {
  require_renorm_vector(v);
  const Eigen::Index m = v.size() - 1;
  NormResult out;
  const double scale = v.norm();
  if (scale == 0.0) {
    out.primal = Eigen::VectorXd::Zero(m);
    out.dual = RenormVector::Zero(v.size());
    return out;
  }
  const RenormVector w = v / scale;
  auto sol = solve_socp(detail::dkr_problem(w), detail::socp_start(m, 2.0), opt.socp);
  Eigen::VectorXd mu = sol.x.head(m);
  double upper = dkr_objective(w, mu);
  // The trivial choice mu = 0 is always available.
  if (upper > 1.0) {
    mu.setZero();
    upper = 1.0;
  }

  auto search = dkr_norm_dual_search(w);
  RenormVector a = search.witness;
  double lower = search.value;
  RenormVector r = w;
  r(0) -= mu.sum();
  r.tail(m) -= mu;
  if (r.norm() > 0.0) {
    RenormVector cand = r / r.norm();
    cand /= std::max(1.0, dkr_dual_norm(cand));
    if (cand.dot(w) > lower) {
      lower = cand.dot(w);
      a = cand;
    }
  }
  out.value = scale * upper;
  out.lower = scale * lower;
  out.gap = std::max(0.0, out.value - out.lower);
  out.primal = scale * mu;
  out.dual = a;
  detail::check_gap("dkr_norm", out, opt);
  const double two = v.norm(), slack = opt.sandwich_slack * std::max(1.0, two);
  if (out.value > two + slack || two > std::sqrt(2.0) * out.value + slack)
    throw std::logic_error("dkr_norm violates the Euclidean equivalence bounds");
  return out;
}

/// max(dkr_norm(v), max_{n>=2} |v_1 - 2 v_n|)
inline NormResult trimmed_norm(const RenormVector& v, const RenormOptions& opt = {}) {
  NormResult base = dkr_norm(v, opt);
  auto [slab, arg] = trimmed_slab(v);
  NormResult out = base;
  out.value = std::max(base.value, slab);
  if (slab >= base.lower) {
    out.lower = slab;
    RenormVector f = RenormVector::Zero(v.size());
    double sign = v(0) - 2.0 * v(arg) >= 0 ? 1.0 : -1.0;
    f(0) = sign;
    f(arg) = -2.0 * sign;
    out.dual = f;
  }
  out.gap = std::max(0.0, out.value - out.lower);
  detail::check_gap("trimmed_norm", out, opt);
  const double slack = opt.sandwich_slack * std::max(1.0, base.value);
  if (out.value < base.value - slack || out.value > 3.0 * base.value + slack)
    throw std::logic_error("trimmed_norm violates its equivalence bounds");
  return out;
}

/// Gauge of clco(B_{dkr*} U {+-(e_1* - 2 e_n*)}), computed as
/// min_mu dkr_dual_norm(a - sum mu_n (e_1* - 2 e_n*)) + sum |mu_n|. Certified
/// by a vector v: |<a, v>| <= |||a|||* |||v|||.
inline NormResult trimmed_dual_norm(const RenormVector& a, const RenormOptions& opt = {}) {
  require_renorm_vector(a);
  const Eigen::Index N = a.size(), m = N - 1, nv = 2 * m + 1;
  NormResult out;
  const double scale = a.norm();
  if (scale == 0.0) {
    out.primal = Eigen::VectorXd::Zero(m);
    out.dual = RenormVector::Zero(N);
    return out;
  }
  const RenormVector w = a / scale;

  SocpProblem p;
  p.c = Eigen::VectorXd::Zero(nv);
  p.c.segment(m, m).setOnes();
  p.c(nv - 1) = 1.0;
  p.G = Eigen::MatrixXd::Zero(4 * m, nv);
  p.h = Eigen::VectorXd::Zero(4 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    // +-(b_1 + b_n) <= tau with b_1 + b_n = w_1 + w_n - sum mu + 2 mu_n
    for (Eigen::Index j = 0; j < m; ++j) p.G(2 * i, j) = -1.0;
    p.G(2 * i, i) += 2.0;
    p.G(2 * i, nv - 1) = -1.0;
    p.h(2 * i) = -(w(0) + w(i + 1));
    for (Eigen::Index j = 0; j < m; ++j) p.G(2 * i + 1, j) = -p.G(2 * i, j);
    p.G(2 * i + 1, nv - 1) = -1.0;
    p.h(2 * i + 1) = w(0) + w(i + 1);
    // |mu_n| <= u_n
    p.G(2 * m + 2 * i, i) = 1.0;
    p.G(2 * m + 2 * i, m + i) = -1.0;
    p.G(2 * m + 2 * i + 1, i) = -1.0;
    p.G(2 * m + 2 * i + 1, m + i) = -1.0;
  }
  SecondOrderCone k;
  k.F = Eigen::MatrixXd::Zero(N, nv);
  for (Eigen::Index i = 0; i < m; ++i) {
    k.F(0, i) = -1.0;
    k.F(i + 1, i) = 2.0;
  }
  k.f = w;
  k.g = Eigen::VectorXd::Zero(nv);
  k.g(nv - 1) = 1.0;
  p.cones.push_back(std::move(k));

  auto sol = solve_socp(p, detail::socp_start(m, dkr_dual_norm(w) + 1.0), opt.socp);
  Eigen::VectorXd mu = sol.x.head(m);
  auto residual = [&](const Eigen::VectorXd& coeffs) {
    RenormVector b = w;
    b(0) -= coeffs.sum();
    b.tail(m) += 2.0 * coeffs;
    return b;
  };
  double upper = dkr_dual_norm(residual(mu)) + mu.lpNorm<1>();
  const double plain = dkr_dual_norm(w);
  if (upper > plain) {
    mu.setZero();
    upper = plain;
  }

  // Witness v = y + sum (l+ - l-)(e_1 + e_n) from the central-path multipliers.
  const auto& [z0, y] = sol.cone_dual.front();
  RenormVector v = y;
  double atoms = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double c = sol.linear_dual(2 * i) - sol.linear_dual(2 * i + 1);
    v(0) += c;
    v(i + 1) += c;
    atoms += std::abs(c);
  }
  (void)z0;
  double v_upper = std::max(y.norm() + atoms, trimmed_slab(v).first);
  double lower = v_upper > 0.0 ? w.dot(v) / v_upper : 0.0;
  RenormVector witness = v_upper > 0.0 ? RenormVector(v / v_upper) : v;
  // The residual direction lies in the Euclidean unit ball, so its norm is at
  // most max(1, slab).
  RenormVector b = residual(mu);
  if (b.norm() > 0.0) {
    RenormVector cand = b / b.norm();
    double cand_lower = w.dot(cand) / std::max(1.0, trimmed_slab(cand).first);
    if (cand_lower > lower) {
      lower = cand_lower;
      witness = cand / std::max(1.0, trimmed_slab(cand).first);
    }
  }
  // e_1 + e_n and e_1 have norm one, so they also certify lower bounds.
  for (Eigen::Index n = 0; n < N; ++n) {
    RenormVector cand = unit_vector(N, 0);
    if (n > 0) cand(n) += 1.0;
    for (double sgn : {1.0, -1.0})
      if (sgn * w.dot(cand) > lower) {
        lower = sgn * w.dot(cand);
        witness = sgn * cand;
      }
  }

  out.value = scale * upper;
  out.lower = scale * lower;
  out.gap = std::max(0.0, out.value - out.lower);
  out.primal = scale * mu;
  out.dual = witness;
  detail::check_gap("trimmed_dual_norm", out, opt);
  const double slack = opt.sandwich_slack * std::max(1.0, scale * plain);
  if (out.value > scale * plain + slack || scale * plain > 3.0 * out.value + slack)
    throw std::logic_error("trimmed_dual_norm violates its equivalence bounds");
  return out;
}

/// x = (1 - 1/n) e_1 + (1/(4n)) (e_2 + ... + e_{k+1}) with k = 32n - 16; the
/// functional x* has the same coordinates.
struct Lemma32Points {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<Rational> exact;  // shared coordinates of x and x*
  RenormVector x;
  RenormVector xstar;
  Rational pairing;            // <x*, x>
  Rational distance_squared;   // ||e_1 - x||_2^2
  bool pairing_is_one = false;
  bool distance_matches = false;  // ||e_1 - x||_2^2 == 2/n
  NormResult x_norm;              // |||x|||
  NormResult xstar_norm;          // |||x*|||*
};

inline Lemma32Points lemma32_points(std::size_t n, std::size_t dim, const RenormOptions& opt = {}) {
  if (n < 1) throw DomainError("n must be positive");
  const std::size_t k = 32 * n - 16;
  if (dim < k + 1)
    throw DomainError("dimension " + std::to_string(dim) + " is below k + 1 = " + std::to_string(k + 1));
  Lemma32Points out;
  out.n = n;
  out.k = k;
  const Rational nn(static_cast<long>(n));
  out.exact.assign(dim, Rational(0));
  out.exact[0] = 1 - 1 / nn;
  for (std::size_t i = 1; i <= k; ++i) out.exact[i] = 1 / (4 * nn);
  out.x = RenormVector(static_cast<Eigen::Index>(dim));
  for (std::size_t i = 0; i < dim; ++i) out.x(static_cast<Eigen::Index>(i)) = to_double(out.exact[i]);
  out.xstar = out.x;
  out.pairing = 0;
  out.distance_squared = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    out.pairing += out.exact[i] * out.exact[i];
    Rational diff = (i == 0 ? Rational(1) : Rational(0)) - out.exact[i];
    out.distance_squared += diff * diff;
  }
  out.pairing_is_one = out.pairing == 1;
  out.distance_matches = out.distance_squared == 2 / nn;
  out.x_norm = trimmed_norm(out.x, opt);
  out.xstar_norm = trimmed_dual_norm(out.xstar, opt);
  return out;
}

/// Lower bound for |||w||| that needs no optimization: the slab term and the
/// dual-search value of the base norm.
inline double trimmed_norm_lower(const RenormVector& w) {
  return std::max(trimmed_slab(w).first, dkr_norm_dual_search(w).value);
}

/// Upper bound max(||w||_2, slab) >= |||w|||.
inline double trimmed_norm_upper(const RenormVector& w) { return std::max(w.norm(), trimmed_slab(w).first); }

struct SliceProbeConfig {
  std::size_t samples = 400;
  std::uint64_t seed = 0;
};

struct SliceProbeRow {
  double delta = 0.0;
  std::size_t in_slice = 0;
  /// Certified lower bound on the slice diameter; absent for an empty slice.
  std::optional<double> estimate;
  std::optional<std::pair<std::size_t, std::size_t>> argmax;
};

struct SliceProbe {
  std::size_t pool_size = 0;
  std::vector<RenormVector> pool;
  std::vector<SliceProbeRow> rows;
};

namespace detail {

// Deterministic sample pool inside the unit ball of |||.|||, built around the
// direction of x*. Each vector is divided by a certified upper bound on its
// norm.
inline std::vector<RenormVector> slice_pool(const RenormVector& xstar, const SliceProbeConfig& cfg,
                                            const RenormOptions& opt) {
  const Eigen::Index N = xstar.size();
  std::vector<RenormVector> raw;
  for (Eigen::Index i = 0; i < N; ++i) {
    raw.push_back(unit_vector(N, i));
    raw.push_back(-unit_vector(N, i));
    if (i > 0) {
      RenormVector atom = unit_vector(N, 0);
      atom(i) = 1.0;
      raw.push_back(atom);
      raw.push_back(-atom);
    }
  }
  const RenormVector dir = xstar / xstar.norm();
  raw.push_back(dir);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::uniform_int_distribution<Eigen::Index> atom_index(1, N - 1);
  const double ladder[] = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const std::size_t rungs = sizeof(ladder) / sizeof(ladder[0]);
  for (std::size_t s = 0; s < cfg.samples; ++s) {
    RenormVector g(N);
    for (Eigen::Index i = 0; i < N; ++i) g(i) = gauss(rng);
    if (s % 4 == 3) {
      raw.push_back(g);
      continue;
    }
    const double sigma = ladder[s % rungs];
    const double tau = ladder[(s / rungs) % rungs];
    RenormVector y = dir + sigma * g / std::sqrt(static_cast<double>(N));
    y /= y.norm();
    RenormVector u = RenormVector::Zero(N);
    const int atoms = 1 + static_cast<int>(unif(rng) * 3.0);
    double left = 1.0;
    for (int j = 0; j < atoms; ++j) {
      double share = j + 1 == atoms ? left : left * unif(rng);
      left -= share;
      Eigen::Index n = atom_index(rng);
      double sign = unif(rng) < 0.8 ? 1.0 : -1.0;
      u(0) += sign * share;
      u(n) += sign * share;
    }
    const double lambda = 1.0 - tau * unif(rng);
    raw.push_back(lambda * y + (1.0 - lambda) * u);
  }
  std::vector<RenormVector> pool;
  for (auto& v : raw) {
    double nrm = trimmed_norm(v, opt).value;
    if (nrm <= 0.0) continue;
    pool.push_back(v / nrm);
  }
  return pool;
}

}  // namespace detail

/// Sampled lower bounds on diam {v : |||v||| <= 1, <x*, v> > 1 - delta} for
/// each delta. The pool does not depend on delta, so the estimates are
/// monotone in delta by construction.
inline SliceProbe slice_diameter_probe(const RenormVector& xstar, const std::vector<double>& deltas,
                                       const SliceProbeConfig& cfg, const RenormOptions& opt = {}) {
  require_renorm_vector(xstar);
  auto dn = trimmed_dual_norm(xstar, opt);
  if (std::abs(dn.value - 1.0) > opt.accept_gap)
    throw PreconditionError("slice functional must have dual norm 1, got " + std::to_string(dn.value));
  SliceProbe out;
  out.pool = detail::slice_pool(xstar, cfg, opt);
  out.pool_size = out.pool.size();
  std::vector<double> pairing;
  for (const auto& v : out.pool) pairing.push_back(xstar.dot(v));

  std::map<std::pair<std::size_t, std::size_t>, double> cache;
  for (double delta : deltas) {
    if (!(delta > 0)) throw DomainError("delta must be positive");
    SliceProbeRow row;
    row.delta = delta;
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < out.pool.size(); ++i)
      if (pairing[i] > 1.0 - delta) idx.push_back(i);
    row.in_slice = idx.size();
    if (!idx.empty()) row.estimate = 0.0;
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) {
        RenormVector diff = out.pool[idx[a]] - out.pool[idx[b]];
        if (trimmed_norm_upper(diff) <= *row.estimate) continue;
        auto key = std::make_pair(idx[a], idx[b]);
        auto it = cache.find(key);
        double lb = it != cache.end() ? it->second : (cache[key] = trimmed_norm_lower(diff));
        if (lb > *row.estimate) {
          row.estimate = lb;
          row.argmax = key;
        }
      }
    out.rows.push_back(row);
  }
  return out;
}

struct SuperDeltaWitness {
  std::size_t dim = 0;
  /// |||e_1 - (e_1 + e_n)||| for n = 2..N.
  std::vector<double> primal_distances;
  /// |||e_1* - (e_1* - 2 e_n*)|||* for n = 2..N.
  std::vector<double> dual_distances;
  double max_deviation = 0.0;  // from 2
  /// e_1 + e_n agrees with e_1 on the first n - 1 coordinates.
  bool coordinates_agree = true;
};

inline SuperDeltaWitness super_delta_witness(std::size_t dim, const RenormOptions& opt = {}) {
  if (dim < 3) throw DomainError("super_delta_witness needs dimension >= 3");
  SuperDeltaWitness out;
  out.dim = dim;
  const auto N = static_cast<Eigen::Index>(dim);
  const RenormVector e1 = unit_vector(N, 0);
  for (Eigen::Index n = 1; n < N; ++n) {
    RenormVector xn = e1 + unit_vector(N, n);
    out.primal_distances.push_back(trimmed_norm(e1 - xn, opt).value);
    RenormVector fn = e1 - 2.0 * unit_vector(N, n);
    out.dual_distances.push_back(trimmed_dual_norm(e1 - fn, opt).value);
    out.max_deviation = std::max({out.max_deviation, std::abs(out.primal_distances.back() - 2.0),
                                  std::abs(out.dual_distances.back() - 2.0)});
    out.coordinates_agree = out.coordinates_agree && xn.head(n).isApprox(e1.head(n));
  }
  return out;
}

struct MembershipFact {
  int index = 0;  // 1, 2: primal facts; 3, 4: dual facts
  std::string statement;
  bool hypothesis = false;
  std::optional<double> value;  // the norm that must exceed 1
  std::optional<double> lower;
  bool passes = true;
};

/// The four non-membership facts, evaluated on v:
///  1. v_n > 1 for some n        => ||v|| > 1
///  2. v_1 = 1, v_n < 0, n >= 2  => |||v||| > 1
///  3. v_1 > 1 or v_n > 2        => |||v|||* > 1
///  4. v_1 = 1, v_n > 0, n >= 2  => |||v|||* > 1
/// A fact passes when its hypothesis fails or the certified lower bound
/// exceeds 1 - tol.
inline std::vector<MembershipFact> membership_facts(const RenormVector& v, double tol = 1e-9,
                                                    const RenormOptions& opt = {}) {
  require_renorm_vector(v);
  const Eigen::Index N = v.size();
  bool any_gt1 = false, tail_neg = false, tail_pos = false, tail_gt2 = false;
  for (Eigen::Index n = 0; n < N; ++n) any_gt1 = any_gt1 || v(n) > 1.0;
  for (Eigen::Index n = 1; n < N; ++n) {
    tail_neg = tail_neg || v(n) < 0.0;
    tail_pos = tail_pos || v(n) > 0.0;
    tail_gt2 = tail_gt2 || v(n) > 2.0;
  }
  std::vector<MembershipFact> facts = {
      {1, "some coordinate exceeds 1 => outside the base unit ball", any_gt1, {}, {}},
      {2, "first coordinate 1 and a negative later coordinate => outside the renormed unit ball",
       v(0) == 1.0 && tail_neg, {}, {}},
      {3, "first coordinate above 1 or a later one above 2 => outside the dual unit ball",
       v(0) > 1.0 || tail_gt2, {}, {}},
      {4, "first coordinate 1 and a positive later coordinate => outside the dual unit ball",
       v(0) == 1.0 && tail_pos, {}, {}},
  };
  for (auto& f : facts) {
    if (!f.hypothesis) continue;
    NormResult r = f.index == 1 ? dkr_norm(v, opt) : f.index == 2 ? trimmed_norm(v, opt) : trimmed_dual_norm(v, opt);
    f.value = r.value;
    f.lower = r.lower;
    f.passes = r.lower > 1.0 - tol && r.value > 1.0;
  }
  return facts;
}

/// x -> max(||x|| / 2, max_n |f_n(x)|) for a base norm and a bounded family
/// of functionals with sup ||f_n|| <= K. Each evaluation checks
/// ||x|| / 2 <= |||x||| <= max(K, 1/2) ||x||.
class GenericRenorm {
 public:
  using BaseNorm = std::function<double(const RenormVector&)>;

  GenericRenorm(BaseNorm base, std::vector<RenormVector> functionals, double bound, double slack = 1e-9)
      : base_(std::move(base)), fs_(std::move(functionals)), bound_(bound), slack_(slack) {
    if (fs_.empty()) throw DomainError("generic renorming needs at least one functional");
    if (!(bound_ >= 0)) throw DomainError("functional bound must be non-negative");
  }

  double operator()(const RenormVector& x) const {
    const double b = base_(x);
    double val = 0.5 * b;
    for (const auto& f : fs_) {
      if (f.size() != x.size()) throw StructuralError("functional dimension mismatch");
      val = std::max(val, std::abs(f.dot(x)));
    }
    const double tol = slack_ * std::max(1.0, b);
    if (val < 0.5 * b - tol || val > std::max(bound_, 0.5) * b + tol)
      throw PreconditionError("renorming sandwich fails; is the functional bound too small?");
    return val;
  }

 private:
  BaseNorm base_;
  std::vector<RenormVector> fs_;
  double bound_;
  double slack_;
};

inline GenericRenorm generic_delta_renorm(GenericRenorm::BaseNorm base, std::vector<RenormVector> functionals,
                                          double bound) {
  return GenericRenorm(std::move(base), std::move(functionals), bound);
}

}  // namespace lipfree
