#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lipfree/delta_detect.hpp"
#include "lipfree/derived_metrics.hpp"
#include "lipfree/error.hpp"
#include "lipfree/free_space.hpp"
#include "lipfree/json_io.hpp"
#include "lipfree/metric_space.hpp"
#include "lipfree/random_spaces.hpp"
#include "lipfree/rational.hpp"
#include "lipfree/renorm.hpp"
#include "lipfree/veeorg.hpp"

namespace lipfree {

inline constexpr const char* kToolVersion = "0.1.0";

struct ExperimentInfo {
  std::string id;
  std::string description;
  std::string anchor;  // the statement the experiment checks
  bool sampled = false;
};

inline const std::vector<ExperimentInfo>& experiment_catalog() {
  static const std::vector<ExperimentInfo> catalog = {
      {"bmetric-exact", "b_{alpha,eps} against brute-force path minimization on random and generated spaces",
       "definition of b_{alpha,eps} as an infimum over chains", true},
      {"bmetric-props", "metric axioms, sandwich, non-connectable lower bound and grid-scale equality for b",
       "properties of the discounted metrics b_{alpha,eps}", true},
      {"kr-duality", "exact transport optimum, 1-Lipschitz certificate and molecule decomposition",
       "free-space norm as a minimum over molecule representations", true},
      {"delta-decompose-grid", "Delta decomposition of m_{0,1} on line grids; no certificate on SVC endpoints",
       "Delta-decomposition of finitely supported Delta-points", false},
      {"veeorg-verify", "metric, A/B/C cover separation, weighting round trip and witness functions on truncations",
       "duality construction on Veeorg's space: cover estimate D(z) >= alpha - beta", false},
      {"veeorg-daugavet", "distance from m_qp to the slice molecules of h per truncation level",
       "Daugavet behaviour of the molecule between p and q", false},
      {"renorm-lemma32", "the points x(n), x*(n): pairing, distance to e_1 and both norms",
       "approximation of e_1 by strongly exposed points x(n)", false},
      {"renorm-identities", "unit-vector norms, super Delta witness distances and the membership facts",
       "values of the trimmed norm on e_1, e_n and e_1 + e_n", false},
      {"renorm-solver", "certified duality gap and bilinear inequality on random vectors",
       "dual-norm formula for the renormed space", true},
      {"renorm-slice", "sampled slice diameters for x*(1) and e_1*",
       "slices of x*(n) shrink while slices of e_1* keep diameter 2", true},
  };
  return catalog;
}

inline const ExperimentInfo& experiment_info(const std::string& id) {
  for (const auto& e : experiment_catalog())
    if (e.id == id) return e;
  throw UsageError("unknown experiment '" + id + "'; run 'lipfree list' for the catalog");
}

struct Assertion {
  std::string statement;
  bool passed = false;
  std::string detail;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
      os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
  }
};

struct Report {
  std::string experiment;
  Json inputs = Json::object();
  Json results = Json::object();
  std::vector<Assertion> assertions;
  std::map<std::string, Table> tables;

  void check(const std::string& statement, bool ok, const std::string& detail = "") {
    assertions.push_back({statement, ok, detail});
  }
  bool passed() const {
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
  }
  const Assertion* first_failure() const {
    for (const auto& a : assertions)
      if (!a.passed) return &a;
    return nullptr;
  }

  /// Keys come out sorted; the timestamp is the only field that varies
  /// between reruns of the same config.
  Json to_json(const std::optional<std::string>& timestamp = std::nullopt) const {
    Json rows = Json::array();
    for (const auto& a : assertions) rows.push_back({{"statement", a.statement}, {"passed", a.passed}, {"detail", a.detail}});
    Json j = {{"experiment", experiment}, {"tool_version", kToolVersion}, {"inputs", inputs},
              {"results", results},       {"assertions", rows},           {"passed", passed()}};
    Json t = Json::object();
    for (const auto& [name, table] : tables) t[name] = table.header;
    j["tables"] = t;
    j["timestamp"] = timestamp ? Json(*timestamp) : Json(nullptr);
    return j;
  }
};

/// Parameter access that records every value it hands out (defaults
/// included) so the report echoes the full effective input.
class ExperimentParams {
 public:
  explicit ExperimentParams(Json params) : raw_(std::move(params)) {
    if (raw_.is_null()) raw_ = Json::object();
    if (!raw_.is_object()) throw UsageError("experiment params must be a JSON object");
  }

  Rational rational(const std::string& key, const std::string& def) {
    Rational r = parse_or_throw(key, fetch(key, def));
    echo_[key] = to_string(r);
    return r;
  }
  std::vector<Rational> rationals(const std::string& key, const std::vector<std::string>& def) {
    Json j = fetch(key, Json(def));
    if (!j.is_array() || j.empty()) throw UsageError("'" + key + "' must be a non-empty array");
    std::vector<Rational> out;
    Json e = Json::array();
    for (const auto& x : j) {
      out.push_back(parse_or_throw(key, x));
      e.push_back(to_string(out.back()));
    }
    echo_[key] = e;
    return out;
  }
  // Programmatic JSON stores small literals as signed integers.
  static bool non_negative_integer(const Json& j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
  }
  std::size_t count(const std::string& key, std::size_t def, std::size_t lo, std::size_t hi) {
    Json j = fetch(key, Json(def));
    if (!non_negative_integer(j)) throw UsageError("'" + key + "' must be a non-negative integer");
    auto v = j.get<std::size_t>();
    if (v < lo || v > hi)
      throw UsageError("'" + key + "' = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "]");
    echo_[key] = v;
    return v;
  }
  std::vector<double> reals(const std::string& key, const std::vector<double>& def) {
    Json j = fetch(key, Json(def));
    if (!j.is_array() || j.empty()) throw UsageError("'" + key + "' must be a non-empty array");
    std::vector<double> out;
    for (const auto& x : j) {
      if (!x.is_number()) throw UsageError("'" + key + "' entries must be numbers");
      out.push_back(x.get<double>());
    }
    echo_[key] = out;
    return out;
  }
  std::uint64_t seed() {
    if (!raw_.contains("seed")) throw UsageError("this experiment is sampled and needs a seed (--seed or params.seed)");
    const Json& j = raw_.at("seed");
    if (!non_negative_integer(j)) throw UsageError("'seed' must be a non-negative integer");
    used_.insert("seed");
    echo_["seed"] = j;
    return j.get<std::uint64_t>();
  }

  /// Rejects keys no experiment step asked for. A seed handed to an
  /// experiment that draws no samples is ignored.
  void finish() const {
    for (auto it = raw_.begin(); it != raw_.end(); ++it)
      if (!used_.contains(it.key()) && it.key() != "seed") throw UsageError("unknown parameter '" + it.key() + "'");
  }
  const Json& echo() const { return echo_; }

 private:
  Json fetch(const std::string& key, Json def) {
    used_.insert(key);
    return raw_.contains(key) ? raw_.at(key) : def;
  }
  static Rational parse_or_throw(const std::string& key, const Json& j) {
    try {
      return rational_from_json(j);
    } catch (const Error& e) {
      throw UsageError("'" + key + "': " + e.what());
    }
  }

  Json raw_;
  Json echo_ = Json::object();
  std::set<std::string> used_;
};

struct ExperimentConfig {
  std::string id;
  Json params = Json::object();
  std::optional<std::string> output;

  /// {"experiment": id?, "params": {...}?, "output": path?}
  static ExperimentConfig from_json(const std::string& id, const Json& j) {
    ExperimentConfig c;
    c.id = id;
    if (j.is_null()) return c;
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "experiment" && it.key() != "params" && it.key() != "output")
        throw UsageError("unknown config key '" + it.key() + "'");
    if (j.contains("experiment") && j.at("experiment") != id)
      throw UsageError("config is for experiment " + j.at("experiment").dump() + ", not '" + id + "'");
    if (j.contains("params")) c.params = j.at("params");
    if (j.contains("output")) c.output = j.at("output").get<std::string>();
    return c;
  }
};

namespace detail {

inline std::string str(const Rational& r) { return to_string(r); }

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Minimum hop-weight sum over all simple paths from s to t, by exhaustive DFS.
inline Rational simple_path_min(const DistanceMatrix& w, std::size_t s, std::size_t t) {
  const std::size_t n = w.size();
  std::vector<bool> used(n, false);
  std::optional<Rational> best;
  std::function<void(std::size_t, const Rational&)> go = [&](std::size_t u, const Rational& len) {
    if (best && len >= *best) return;
    if (u == t) {
      best = len;
      return;
    }
    used[u] = true;
    for (std::size_t v = 0; v < n; ++v)
      if (!used[v]) go(v, len + w(u, v));
    used[u] = false;
  };
  go(s, Rational(0));
  return *best;
}

// Hop-bounded min-plus iteration: after k rounds row s holds the best walk of
// at most k hops. Non-negative weights make n - 1 hops enough.
inline DistanceMatrix min_plus_closure(const DistanceMatrix& w) {
  const std::size_t n = w.size();
  DistanceMatrix cur = w;
  for (std::size_t round = 1; round + 1 < n; ++round) {
    bool changed = false;
    DistanceMatrix next = cur;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
          if (cur(i, k) + w(k, j) < next(i, j)) {
            next(i, j) = cur(i, k) + w(k, j);
            changed = true;
          }
    cur = std::move(next);
    if (!changed) break;
  }
  return cur;
}

inline DistanceMatrix hop_weights(const MetricSpace& space, const DerivedParams& params) {
  const std::size_t n = space.size();
  DistanceMatrix w(n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) w(i, j) = w_weight(space, params, i, j);
  return w;
}

struct NamedSpace {
  std::string name;
  MetricSpace space;
};

// Generators with at most `max_points` points.
inline std::vector<NamedSpace> generator_corpus(std::size_t max_points) {
  std::vector<NamedSpace> out;
  for (std::size_t n = 1; n + 1 <= max_points; ++n) out.push_back({"grid(" + std::to_string(n) + ")", grid_space(n)});
  for (std::size_t depth = 0; depth <= kMaxSvcDepth && (std::size_t{2} << depth) <= max_points; ++depth)
    out.push_back({"svc(" + std::to_string(depth) + ")", svc_space(depth)});
  for (std::size_t levels = 1; levels <= kMaxVeeorgLevels; ++levels) {
    auto s = veeorg_space(levels);
    if (s.size() > max_points) break;
    out.push_back({"veeorg(" + std::to_string(levels) + ")", std::move(s)});
  }
  return out;
}

inline std::vector<NamedSpace> random_corpus(std::uint64_t seed, std::size_t count, std::size_t max_points) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, max_points);
  std::vector<NamedSpace> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back({"random#" + std::to_string(i), random_rational_space(rng, size(rng))});
  return out;
}

// eps values probing every distance regime of the space.
inline std::vector<Rational> eps_grid(const MetricSpace& space) {
  std::set<Rational> eps;
  const Rational mesh = space.min_positive_distance();
  for (int k : {1, 2, 3, 4}) eps.insert(mesh * k);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size() && eps.size() < 12; ++j) eps.insert(space.d(i, j) + mesh / 2);
  return {eps.rbegin(), eps.rend()};
}

// First failure message collector: keeps a count and the first example.
struct Tally {
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string first;

  void add(bool ok, const std::function<std::string()>& what) {
    ++checked;
    if (!ok && failed++ == 0) first = what();
  }
  std::string detail() const {
    std::string s = std::to_string(checked) + " checked, " + std::to_string(failed) + " failed";
    if (failed) s += "; first: " + first;
    return s;
  }
};

inline void run_bmetric_exact(ExperimentParams& p, Report& r) {
  const auto seed = p.seed();
  const auto count = p.count("random_spaces", 500, 0, 100000);
  const auto small = p.count("random_max_points", 6, 2, 7);
  const auto gen_max = p.count("generator_max_points", 30, 2, 40);
  const auto alphas = p.rationals("alphas", {"1/4", "1/2", "3/4"});

  Tally random_tally, generator_tally;
  for (const auto& ns : random_corpus(seed, count, small))
    for (const auto& a : alphas)
      for (const auto& e : eps_grid(ns.space)) {
        DerivedParams params(a, e);
        auto b = b_metric(ns.space, params);
        auto w = hop_weights(ns.space, params);
        for (std::size_t i = 0; i < ns.space.size(); ++i)
          for (std::size_t j = 0; j < ns.space.size(); ++j) {
            if (i == j) continue;
            random_tally.add(b.d(i, j) == simple_path_min(w, i, j), [&] {
              return ns.name + " alpha=" + str(a) + " eps=" + str(e) + " pair (" + ns.space.id(i) + "," +
                     ns.space.id(j) + ")";
            });
          }
      }
  for (const auto& ns : generator_corpus(gen_max)) {
    auto grid = eps_grid(ns.space);
    grid.resize(std::min<std::size_t>(grid.size(), 5));
    for (const auto& e : grid) {
      DerivedParams params(Rational(1) / 2, e);
      auto b = b_metric(ns.space, params);
      auto ref = min_plus_closure(hop_weights(ns.space, params));
      for (std::size_t i = 0; i < ns.space.size(); ++i)
        for (std::size_t j = 0; j < ns.space.size(); ++j)
          if (i != j)
            generator_tally.add(b.d(i, j) == ref(i, j), [&] {
              return ns.name + " eps=" + str(e) + " pair (" + ns.space.id(i) + "," + ns.space.id(j) + ")";
            });
    }
  }
  r.results["random_pairs_checked"] = random_tally.checked;
  r.results["generator_pairs_checked"] = generator_tally.checked;
  r.check("b_{alpha,eps} equals the minimum over all simple chains (random spaces)", random_tally.failed == 0,
          random_tally.detail());
  r.check("b_{alpha,eps} equals the minimum over all chains (generated spaces)", generator_tally.failed == 0,
          generator_tally.detail());
}

inline void run_bmetric_props(ExperimentParams& p, Report& r) {
  const auto seed = p.seed();
  const auto count = p.count("random_spaces", 500, 0, 100000);
  const auto small = p.count("random_max_points", 6, 2, 12);
  const auto gen_max = p.count("generator_max_points", 30, 2, 70);
  const auto alphas = p.rationals("alphas", {"1/4", "1/2", "3/4"});

  auto corpus = random_corpus(seed, count, small);
  for (auto& g : generator_corpus(gen_max)) corpus.push_back(std::move(g));

  Tally axioms, sandwich, monotone, lower, b_alpha_d;
  for (const auto& ns : corpus) {
    const auto& sp = ns.space;
    const auto grid = eps_grid(sp);  // descending
    for (const auto& a : alphas) {
      const Rational discount = 1 - a;
      std::optional<MetricSpace> prev;
      for (const auto& e : grid) {
        auto b = b_metric(sp, DerivedParams(a, e));
        auto tag = [&](std::size_t i, std::size_t j) {
          return ns.name + " alpha=" + str(a) + " eps=" + str(e) + " (" + sp.id(i) + "," + sp.id(j) + ")";
        };
        axioms.add(validate_metric(b).empty(), [&] { return ns.name + " alpha=" + str(a) + " eps=" + str(e); });
        for (std::size_t i = 0; i < sp.size(); ++i)
          for (std::size_t j = 0; j < sp.size(); ++j) {
            if (i == j) continue;
            sandwich.add(discount * sp.d(i, j) <= b.d(i, j) && b.d(i, j) <= sp.d(i, j), [&] { return tag(i, j); });
            if (prev) monotone.add(prev->d(i, j) <= b.d(i, j), [&] { return tag(i, j); });
            if (i < j && !eps_connectable(sp, i, j, e).connectable)
              lower.add(b.d(i, j) >= discount * sp.d(i, j) + e * min_of(a, discount), [&] { return tag(i, j); });
          }
        prev = std::move(b);
      }
      if (sp.size() > 1) {
        auto ba = b_alpha(sp, a);
        b_alpha_d.add(ba.distances() == sp.distances(), [&] { return ns.name + " alpha=" + str(a); });
      }
    }
  }

  // Grid-scale equality: pairs connectable at every eps of the ladder down to
  // twice the mesh have b = (1 - alpha) d at the bottom of the ladder.
  Tally grid_eq;
  for (std::size_t n : {4, 8, 16, 29}) {
    auto sp = grid_space(n);
    const Rational mesh = sp.min_positive_distance();
    std::vector<Rational> ladder;
    for (Rational e = 1; e > 2 * mesh; e /= 2) ladder.push_back(e);
    ladder.push_back(2 * mesh);
    for (const auto& a : alphas) {
      auto b = b_metric(sp, DerivedParams(a, ladder.back()));
      for (std::size_t i = 0; i < sp.size(); ++i)
        for (std::size_t j = i + 1; j < sp.size(); ++j) {
          bool always = std::all_of(ladder.begin(), ladder.end(),
                                    [&](const Rational& e) { return eps_connectable(sp, i, j, e).connectable; });
          grid_eq.add(always && b.d(i, j) == (1 - a) * sp.d(i, j), [&] {
            return "grid(" + std::to_string(n) + ") alpha=" + str(a) + " (" + sp.id(i) + "," + sp.id(j) + ")";
          });
        }
    }
  }

  r.results["spaces"] = corpus.size();
  r.check("b_{alpha,eps} is a metric (symmetry, positivity, triangle inequality)", axioms.failed == 0, axioms.detail());
  r.check("(1 - alpha) d <= b_{alpha,eps} <= d", sandwich.failed == 0, sandwich.detail());
  r.check("b_{alpha,eps} increases as eps decreases", monotone.failed == 0, monotone.detail());
  r.check("not eps-connectable => b_{alpha,eps} >= (1 - alpha) d + eps min(alpha, 1 - alpha)", lower.failed == 0,
          lower.detail());
  r.check("b_alpha = d on finite spaces (supremum attained below the minimum gap)", b_alpha_d.failed == 0,
          b_alpha_d.detail());
  r.check("connectable at every scale on a grid => b_alpha(x,y) = (1 - alpha) d(x,y) at grid scale",
          grid_eq.failed == 0, grid_eq.detail());
}

inline void run_kr_duality(ExperimentParams& p, Report& r) {
  const auto seed = p.seed();
  const auto count = p.count("random_spaces", 200, 1, 100000);
  const auto max_points = p.count("max_points", 8, 2, 40);
  const auto vectors = p.count("vectors_per_space", 5, 1, 1000);

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<int> num(-4, 4);
  Tally cert, flow_ok, decomp;
  for (const auto& ns : random_corpus(seed, count, max_points)) {
    const auto& sp = ns.space;
    for (std::size_t v = 0; v < vectors; ++v) {
      std::vector<std::pair<PointIndex, Rational>> terms;
      for (PointIndex i = 0; i < sp.size(); ++i) terms.emplace_back(i, make_rational(num(rng), 2));
      FreeVector mu(sp, terms);
      auto kr = kr_norm(sp, mu);
      auto tag = [&] { return ns.name + " vector " + std::to_string(v); };
      cert.add(lip_norm(sp, kr.certificate).value <= 1 && pair(kr.certificate, mu) == kr.value, tag);

      std::vector<Rational> net(sp.size(), Rational(0));
      Rational cost = 0;
      bool nonneg = true;
      for (const auto& a : kr.flow.arcs) {
        net[a.from] += a.flow;
        net[a.to] -= a.flow;
        cost += a.flow * sp.d(a.from, a.to);
        nonneg = nonneg && a.flow >= 0;
      }
      bool balanced = true;
      for (PointIndex i = 0; i < sp.size(); ++i)
        if (i != sp.base()) balanced = balanced && net[i] == mu.coeff(i);
      flow_ok.add(nonneg && balanced && cost == kr.value && kr.flow.objective == kr.value, tag);

      auto mc = molecule_decompose(sp, mu);
      decomp.add(mc.reconstruct(sp) == mu && mc.total_weight() == kr.value, tag);
    }
  }
  r.results["vectors_checked"] = cert.checked;
  r.check("norming 1-Lipschitz certificate attains the norm", cert.failed == 0, cert.detail());
  r.check("optimal flow is feasible and its cost equals the norm", flow_ok.failed == 0, flow_ok.detail());
  r.check("molecule decomposition reconstructs mu with total weight equal to the norm", decomp.failed == 0,
          decomp.detail());
}

inline void run_delta_decompose_grid(ExperimentParams& p, Report& r) {
  const auto sizes = p.rationals("grid_sizes", {"8", "16", "64"});
  const auto alpha = p.rational("alpha", "1/2");
  const auto eps_factor = p.rational("eps_times_n", "4");
  const auto svc_depth = p.count("svc_depth", 2, 0, kMaxSvcDepth);
  const auto svc_eps = p.rational("svc_eps", "1/32");

  Json grids = Json::array();
  Table scan{{"grid_n", "eps", "b_norm"}, {}};
  for (const auto& nr : sizes) {
    if (denominator_of(nr) != 1 || nr < 1) throw UsageError("grid sizes must be positive integers");
    const auto n = numerator_of(nr).convert_to<std::size_t>();
    auto sp = grid_space(n);
    const Rational eps = eps_factor / nr;
    auto mu = molecule(sp, sp.index_of("0"), sp.index_of("1"));
    auto dec = delta_decompose(sp, mu, alpha, eps);
    const std::string tag = "grid(" + std::to_string(n) + ")";
    const bool recon = dec.combination.reconstruct(sp) == mu;
    grids.push_back({{"n", n},
                     {"eps", str(eps)},
                     {"b_norm", str(dec.b_norm)},
                     {"lambda_sum", str(dec.lambda_sum)},
                     {"atoms", dec.combination.atoms.size()},
                     {"all_flagged", dec.all_flagged()},
                     {"reconstructs", recon}});
    r.check(tag + ": b-norm of m_{0,1} equals 1 - alpha", dec.b_norm == 1 - alpha, str(dec.b_norm));
    r.check(tag + ": Delta decomposition weights sum to 1", dec.lambda_sum == 1, str(dec.lambda_sum));
    r.check(tag + ": Delta decomposition reconstructs m_{0,1}", recon);
    r.check(tag + ": every atom of the decomposition is a Delta-molecule at scale eps", dec.all_flagged());

    std::vector<Rational> ladder;
    for (Rational e = 1; e >= sp.min_positive_distance(); e /= 2) ladder.push_back(e);
    auto ns = norm_b_scan(sp, mu, alpha, ladder);
    for (const auto& row : ns.rows) scan.rows.push_back({std::to_string(n), str(row.eps), str(row.value)});
    r.check(tag + ": b-norm is nondecreasing as eps shrinks", ns.monotone);
    if (ns.final_matches_norm) r.check(tag + ": b-norm equals the norm below the mesh", *ns.final_matches_norm);
  }
  r.results["grids"] = grids;
  r.tables["eps_vs_bnorm"] = std::move(scan);

  auto svc = svc_space(svc_depth);
  auto mu = molecule(svc, svc.index_of("0"), svc.index_of("1"));
  auto bn = b_norm(svc, mu, alpha, svc_eps);
  const Rational bound = 1 - alpha + svc_eps * min_of(alpha, 1 - alpha);
  r.results["svc"] = {{"depth", svc_depth}, {"eps", str(svc_eps)}, {"b_norm", str(bn)}, {"bound", str(bound)}};
  r.check("SVC endpoints: b-norm of m_{0,1} stays above 1 - alpha + eps min(alpha, 1 - alpha) (no Delta certificate)",
          bn >= bound, str(bn) + " >= " + str(bound));
}

inline void run_veeorg_verify(ExperimentParams& p, Report& r) {
  const auto levels = p.count("levels", 5, 1, kMaxVeeorgLevels);
  const auto alpha = p.rational("alpha", "2/5");
  const auto beta = p.rational("beta", "1/5");
  const auto eps = p.rational("eps", "1/5");

  Json rows = Json::array();
  for (std::size_t n = 1; n <= levels; ++n) {
    auto sp = veeorg_space(n);
    const std::string tag = "level " + std::to_string(n);
    Json row = {{"levels", n}, {"points", sp.size()}};
    if (n <= kVeeorgExhaustiveLevels) {
      auto rep = validate_metric(sp);
      row["metric_violations"] = rep.size();
      r.check(tag + ": metric axioms hold on every triple", rep.empty());
    }
    const auto p_idx = sp.index_of("p"), q_idx = sp.index_of("q");
    auto seg = metric_segment(sp, p_idx, q_idx);
    r.check(tag + ": metric segment [p,q] contains p and q",
            std::count(seg.begin(), seg.end(), p_idx) == 1 && std::count(seg.begin(), seg.end(), q_idx) == 1);

    auto cover = abc_cover(sp, alpha, beta);
    auto sep = cover_separation(sp, cover);
    row["cover_min_D"] = str(sep.min_value);
    row["cover_warnings"] = sep.warnings;
    r.check(tag + ": A/B/C cover separation D(z) >= alpha - beta", sep.holds,
            str(sep.min_value) + " >= " + str(sep.bound) + " at " + sp.id(sep.argmin));

    auto rt = decomposition_roundtrip(sp, cover.sets());
    row["roundtrip_checked"] = rt.checked;
    r.check(tag + ": weighting operators of the partition of unity sum to the identity", rt.failures == 0,
            std::to_string(rt.failures) + " failures" + (rt.first_failure ? " (first " + *rt.first_failure + ")" : ""));

    auto h = h_function(sp);
    auto lh = lip_norm(sp, h).value;
    row["lip_h"] = str(lh);
    r.check(tag + ": h has Lipschitz norm 1", lh == 1, str(lh));

    auto pw = polyhedral_witness(sp);
    row["witness_margin"] = str(pw.margin);
    r.check(tag + ": x(1 - y^2) has norm 1 and among trivial-segment molecules only m_pq norms it", pw.passes,
            "lip " + str(pw.lip) + ", " + std::to_string(pw.attaining.size()) + " attaining pairs, margin " +
                str(pw.margin));

    try {
      auto as = almost_square_witness(sp, {h, pw.f}, eps);
      row["almost_square_level"] = as.level;
      r.check(tag + ": almost-squareness witness g has norm 1 and ||f_i +- g|| <= 1 + eps", as.passes,
              "k = " + std::to_string(as.level));
    } catch (const PreconditionError&) {
      row["almost_square_level"] = nullptr;  // truncation too shallow for this eps
    }
    rows.push_back(row);
  }
  r.results["levels"] = rows;
}

inline void run_veeorg_daugavet(ExperimentParams& p, Report& r) {
  const auto first = p.count("first_level", 2, 1, kMaxVeeorgLevels);
  const auto last = p.count("last_level", 6, first, kMaxVeeorgLevels);
  const auto alpha = p.rational("alpha", "3/10");

  Table t{{"levels", "points", "probe_distance", "slice_molecules"}, {}};
  std::optional<Rational> prev;
  bool nondecreasing = true, bounded = true;
  for (std::size_t n = first; n <= last; ++n) {
    auto sp = veeorg_space(n);
    auto mu = molecule(sp, sp.index_of("q"), sp.index_of("p"));
    auto probe = delta_distance_probe(sp, mu, h_function(sp), alpha);
    if (prev && probe.value < *prev) nondecreasing = false;
    bounded = bounded && probe.value <= 2;
    prev = probe.value;
    t.rows.push_back({std::to_string(n), std::to_string(sp.size()), str(probe.value),
                      std::to_string(probe.slice_molecules)});
  }
  r.results["final_distance"] = str(*prev);
  r.tables["level_vs_probe"] = t;
  r.check("distance from m_qp to the slice of h is nondecreasing in the truncation level", nondecreasing);
  r.check("slice distances never exceed 2", bounded);
}

inline void run_renorm_lemma32(ExperimentParams& p, Report& r) {
  const auto dim = p.count("dim", 112, 17, 4096);
  const auto max_n = p.count("max_n", 3, 1, 64);
  const auto tol = p.reals("tolerance", {1e-7}).front();
  Json rows = Json::array();
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (32 * n - 15 > dim) break;
    auto lp = lemma32_points(n, dim);
    const std::string tag = "n = " + std::to_string(n);
    rows.push_back({{"n", n},
                    {"k", lp.k},
                    {"pairing", str(lp.pairing)},
                    {"distance_squared", str(lp.distance_squared)},
                    {"x_norm", lp.x_norm.value},
                    {"x_norm_gap", lp.x_norm.gap},
                    {"xstar_dual_norm", lp.xstar_norm.value},
                    {"xstar_dual_norm_gap", lp.xstar_norm.gap}});
    r.check(tag + ": <x*, x> = 1 exactly", lp.pairing_is_one, str(lp.pairing));
    r.check(tag + ": ||e_1 - x||_2 = sqrt(2/n) exactly", lp.distance_matches, str(lp.distance_squared));
    r.check(tag + ": |||x||| = 1", std::abs(lp.x_norm.value - 1) <= tol, fmt(lp.x_norm.value));
    r.check(tag + ": |||x*|||* = 1", std::abs(lp.xstar_norm.value - 1) <= tol, fmt(lp.xstar_norm.value));
  }
  r.results["points"] = rows;
}

inline void run_renorm_identities(ExperimentParams& p, Report& r) {
  const auto dim = p.count("dim", 16, 3, 4096);
  const auto N = static_cast<Eigen::Index>(dim);
  const RenormVector e1 = unit_vector(N, 0), en = unit_vector(N, N - 1);
  auto a = trimmed_norm(e1), b = trimmed_norm(en), c = trimmed_norm(e1 + en);
  r.results["norm_e1"] = a.value;
  r.results["norm_en"] = b.value;
  r.results["norm_e1_plus_en"] = c.value;
  r.check("|||e_1||| = 1", std::abs(a.value - 1) <= 1e-7, fmt(a.value));
  r.check("|||e_n||| = 2", std::abs(b.value - 2) <= 1e-9, fmt(b.value));
  r.check("|||e_1 + e_n||| = 1", std::abs(c.value - 1) <= 1e-7, fmt(c.value));

  auto sd = super_delta_witness(dim);
  r.results["super_delta_max_deviation"] = sd.max_deviation;
  r.check("|||e_1 - (e_1 + e_n)||| = 2 and |||e_1* - (e_1* - 2e_n*)|||* = 2", sd.max_deviation <= 1e-7,
          "max deviation " + fmt(sd.max_deviation));

  std::vector<RenormVector> probes;
  {
    RenormVector v = RenormVector::Zero(N);
    v(1) = 1.5;
    probes.push_back(v);
    v = e1;
    v(N - 1) = -0.25;
    probes.push_back(v);
    v = RenormVector::Zero(N);
    v(0) = 1.25;
    probes.push_back(v);
    v = e1;
    v(1) = 0.125;
    probes.push_back(v);
  }
  Tally facts;
  for (std::size_t i = 0; i < probes.size(); ++i)
    for (const auto& f : membership_facts(probes[i]))
      if (f.hypothesis)
        facts.add(f.passes, [&, f] { return "probe " + std::to_string(i) + ": " + f.statement; });
  r.check("membership facts: the four hypotheses place their vectors outside the respective unit balls",
          facts.failed == 0 && facts.checked >= 4, facts.detail());
}

inline void run_renorm_solver(ExperimentParams& p, Report& r) {
  const auto seed = p.seed();
  const auto count = p.count("vectors", 1000, 1, 1000000);
  const auto max_dim = p.count("max_dim", 32, 2, 512);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> dims(2, max_dim);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  Tally gaps, bilinear;
  for (std::size_t s = 0; s < count; ++s) {
    const auto N = static_cast<Eigen::Index>(dims(rng));
    RenormVector v(N), a(N);
    for (Eigen::Index i = 0; i < N; ++i) {
      v(i) = gauss(rng);
      a(i) = gauss(rng);
    }
    // Some draws sit near the atoms e_1 + e_n where the trimmed norm is non-smooth.
    if (unif(rng) < 0.25) {
      Eigen::Index n = 1 + static_cast<Eigen::Index>(unif(rng) * static_cast<double>(N - 1));
      v *= 1e-3;
      v(0) += 1.0;
      v(std::min(n, N - 1)) += 1.0;
    }
    auto nv = trimmed_norm(v), na = trimmed_dual_norm(a), nd = dkr_norm(v);
    for (const auto* res : {&nv, &na, &nd}) {
      worst = std::max(worst, res->gap);
      gaps.add(res->gap <= 1e-7, [&] { return "sample " + std::to_string(s) + " gap " + fmt(res->gap); });
    }
    bilinear.add(std::abs(a.dot(v)) <= na.value * nv.value * (1 + 1e-6),
                 [&] { return "sample " + std::to_string(s); });
  }
  r.results["worst_gap"] = worst;
  r.check("certified duality gap <= 1e-7 for every norm evaluation", gaps.failed == 0, gaps.detail());
  r.check("|<a, v>| <= |||a|||* |||v||| (1 + 1e-6)", bilinear.failed == 0, bilinear.detail());
}

inline void run_renorm_slice(ExperimentParams& p, Report& r) {
  const auto seed = p.seed();
  const auto dim = p.count("dim", 20, 17, 4096);
  const auto samples = p.count("samples", 400, 0, 100000);
  const auto deltas = p.reals("deltas", {1e-1, 1e-2, 1e-3, 1e-4});
  const auto e1_delta = p.reals("e1_delta", {1e-3}).front();

  auto lp = lemma32_points(1, dim);
  SliceProbeConfig cfg{samples, seed};
  auto probe = slice_diameter_probe(lp.xstar, deltas, cfg);
  Table t{{"functional", "delta", "in_slice", "diameter_lower_bound"}, {}};
  bool nonincreasing = true;
  std::optional<double> prev;
  for (const auto& row : probe.rows) {
    t.rows.push_back({"x*(1)", fmt(row.delta), std::to_string(row.in_slice), row.estimate ? fmt(*row.estimate) : ""});
    if (row.estimate) {
      if (prev && *row.estimate > *prev + 1e-12) nonincreasing = false;
      prev = row.estimate;
    }
  }
  const auto N = static_cast<Eigen::Index>(dim);
  auto e1_probe = slice_diameter_probe(unit_vector(N, 0), {e1_delta}, cfg);
  const double e1_est = e1_probe.rows.front().estimate.value_or(0.0);
  t.rows.push_back({"e_1*", fmt(e1_delta), std::to_string(e1_probe.rows.front().in_slice), fmt(e1_est)});
  r.tables["delta_vs_diameter"] = t;
  r.results["pool_size"] = probe.pool_size;
  r.results["e1_estimate"] = e1_est;
  r.check("slice diameters of x*(1) are nonincreasing as delta shrinks", nonincreasing);
  r.check("slices of e_1* keep diameter 2 (pair e_1, e_1 + e_2)", e1_est >= 2 - 1e-6, fmt(e1_est));
}

}  // namespace detail

/// Runs one catalogued experiment. Invalid parameters raise UsageError;
/// failed assertions are reported, not thrown.
inline Report run_experiment(const ExperimentConfig& config) {
  const auto& info = experiment_info(config.id);
  static const std::map<std::string, void (*)(ExperimentParams&, Report&)> table = {
      {"bmetric-exact", detail::run_bmetric_exact},
      {"bmetric-props", detail::run_bmetric_props},
      {"kr-duality", detail::run_kr_duality},
      {"delta-decompose-grid", detail::run_delta_decompose_grid},
      {"veeorg-verify", detail::run_veeorg_verify},
      {"veeorg-daugavet", detail::run_veeorg_daugavet},
      {"renorm-lemma32", detail::run_renorm_lemma32},
      {"renorm-identities", detail::run_renorm_identities},
      {"renorm-solver", detail::run_renorm_solver},
      {"renorm-slice", detail::run_renorm_slice},
  };
  ExperimentParams params(config.params);
  Report r;
  r.experiment = info.id;
  table.at(info.id)(params, r);
  params.finish();
  r.inputs = params.echo();
  return r;
}

}  // namespace lipfree
