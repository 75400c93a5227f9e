#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "lipfree/error.hpp"

namespace lipfree {

/// ||F x + f||_2 <= g.x + e
struct SecondOrderCone {
  Eigen::MatrixXd F;
  Eigen::VectorXd f;
  Eigen::VectorXd g;
  double e = 0.0;
};

/// minimize c.x subject to G x <= h and the listed cone constraints.
struct SocpProblem {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  std::vector<SecondOrderCone> cones;
};

struct SocpOptions {
  /// Stop once the central-path bound nu / t is below this.
  double target_gap = 1e-11;
  double t0 = 1.0;
  double growth = 16.0;
  std::size_t max_newton_steps = 2000;
  std::size_t max_centering_steps = 60;
};

struct SocpSolution {
  Eigen::VectorXd x;
  double t = 0.0;
  double barrier_gap = std::numeric_limits<double>::infinity();
  std::size_t newton_steps = 0;
  bool converged = false;
  /// Central-path multipliers: one per linear row, and (z0, z) per cone.
  Eigen::VectorXd linear_dual;
  std::vector<std::pair<double, Eigen::VectorXd>> cone_dual;
};

namespace detail {

inline bool strictly_feasible(const SocpProblem& p, const Eigen::VectorXd& x) {
  if (p.G.rows() > 0 && ((p.h - p.G * x).array() <= 0).any()) return false;
  for (const auto& k : p.cones) {
    double s = k.g.dot(x) + k.e;
    if (s <= 0 || s * s - (k.F * x + k.f).squaredNorm() <= 0) return false;
  }
  return true;
}

// Change of t c.x + barrier(x) along x + s dx, computed term by term so that
// the large t c.x part cancels exactly. Empty when the trial point is not
// strictly feasible.
inline std::optional<double> barrier_change(const SocpProblem& p, const Eigen::VectorXd& x, const Eigen::VectorXd& dx,
                                            double s, double t) {
  double change = t * s * p.c.dot(dx);
  if (p.G.rows() > 0) {
    Eigen::VectorXd slack = p.h - p.G * x;
    Eigen::VectorXd gd = p.G * dx;
    for (Eigen::Index i = 0; i < slack.size(); ++i) {
      double ratio = -s * gd(i) / slack(i);
      if (ratio <= -1.0) return std::nullopt;
      change -= std::log1p(ratio);
    }
  }
  for (const auto& k : p.cones) {
    double s0 = k.g.dot(x) + k.e;
    Eigen::VectorXd w0 = k.F * x + k.f;
    double s1 = s0 + s * k.g.dot(dx);
    Eigen::VectorXd w1 = w0 + s * (k.F * dx);
    double d0 = s0 * s0 - w0.squaredNorm();
    double d1 = s1 * s1 - w1.squaredNorm();
    if (s1 <= 0 || d1 <= 0) return std::nullopt;
    change -= std::log(d1 / d0);
  }
  return change;
}

}  // namespace detail

/// Log-barrier interior point method with damped Newton centering. `x0` must
/// be strictly feasible. The returned multipliers are the central-path
/// estimates at the final t.
inline SocpSolution solve_socp(const SocpProblem& p, Eigen::VectorXd x0, const SocpOptions& opt = {}) {
  const Eigen::Index n = p.c.size();
  const double nu = static_cast<double>(p.G.rows()) + 2.0 * static_cast<double>(p.cones.size());
  if (!detail::strictly_feasible(p, x0)) throw DomainError("socp start point is not strictly feasible");

  // G is sparse in practice and F^T F never changes, so both are set up once.
  std::vector<std::vector<std::pair<Eigen::Index, double>>> g_rows(static_cast<std::size_t>(p.G.rows()));
  for (Eigen::Index r = 0; r < p.G.rows(); ++r)
    for (Eigen::Index j = 0; j < n; ++j)
      if (p.G(r, j) != 0.0) g_rows[static_cast<std::size_t>(r)].emplace_back(j, p.G(r, j));
  std::vector<Eigen::MatrixXd> cone_curvature;
  for (const auto& k : p.cones) cone_curvature.push_back(2.0 * k.g * k.g.transpose() - 2.0 * k.F.transpose() * k.F);

  SocpSolution sol;
  sol.x = std::move(x0);
  double t = opt.t0;
  bool exhausted = false;
  while (!exhausted) {
    // Centering.
    for (std::size_t inner = 0; inner < opt.max_centering_steps; ++inner) {
      if (sol.newton_steps >= opt.max_newton_steps) {
        exhausted = true;
        break;
      }
      Eigen::VectorXd grad = t * p.c;
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      if (p.G.rows() > 0) {
        Eigen::VectorXd inv = (p.h - p.G * sol.x).cwiseInverse();
        grad += p.G.transpose() * inv;
        for (std::size_t r = 0; r < g_rows.size(); ++r) {
          const double w2 = inv(static_cast<Eigen::Index>(r)) * inv(static_cast<Eigen::Index>(r));
          for (const auto& [a, ga] : g_rows[r])
            for (const auto& [b, gb] : g_rows[r]) hess(a, b) += w2 * ga * gb;
        }
      }
      for (std::size_t ci = 0; ci < p.cones.size(); ++ci) {
        const auto& k = p.cones[ci];
        double s = k.g.dot(sol.x) + k.e;
        Eigen::VectorXd w = k.F * sol.x + k.f;
        double d = s * s - w.squaredNorm();
        Eigen::VectorXd dd = 2.0 * s * k.g - 2.0 * k.F.transpose() * w;  // gradient of d
        grad -= dd / d;
        hess.noalias() += dd * dd.transpose() / (d * d);
        hess -= cone_curvature[ci] / d;
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = ldlt.solve(-grad);
      if (!step.allFinite()) break;
      double decrement = -grad.dot(step);
      ++sol.newton_steps;
      if (decrement <= 1e-10) break;

      double s = 1.0;
      bool moved = false;
      for (int halvings = 0; halvings < 60; ++halvings, s *= 0.5) {
        auto change = detail::barrier_change(p, sol.x, step, s, t);
        if (change && *change <= -0.25 * s * decrement) {
          sol.x += s * step;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (exhausted) break;
    if (nu / t <= opt.target_gap) {
      sol.converged = true;
      break;
    }
    t *= opt.growth;
  }
  sol.t = t;
  sol.barrier_gap = nu / t;

  sol.linear_dual = Eigen::VectorXd::Zero(p.G.rows());
  if (p.G.rows() > 0) sol.linear_dual = (p.h - p.G * sol.x).cwiseInverse() / sol.t;
  for (const auto& k : p.cones) {
    double s = k.g.dot(sol.x) + k.e;
    Eigen::VectorXd w = k.F * sol.x + k.f;
    double d = s * s - w.squaredNorm();
    sol.cone_dual.emplace_back(2.0 * s / (sol.t * d), Eigen::VectorXd(2.0 * w / (sol.t * d)));
  }
  return sol;
}

}  // namespace lipfree
