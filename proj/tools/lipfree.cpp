// lipfree: command-line front end for the library and the experiment harness.
//
// Exit codes: 0 success, 1 a check or assertion failed, 2 usage error,
// 3 invalid input data or solver failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lipfree/experiments.hpp"
#include "lipfree/json_io.hpp"
#include "lipfree/lipfree.hpp"

namespace {

using namespace lipfree;

constexpr int kFailed = 1;
constexpr int kUsage = 2;
constexpr int kInput = 3;

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

Rational rat(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const Error& e) {
    throw UsageError(std::string("bad rational '") + s + "': " + e.what());
  }
}

std::vector<Rational> rat_list(const std::string& s) {
  std::vector<Rational> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(rat(item));
  if (out.empty()) throw UsageError("empty list '" + s + "'");
  return out;
}

MetricSpace load_space(const std::string& path) { return space_from_json(read_json_file(path)); }

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw StructuralError("cannot write '" + path.string() + "'");
  out << text;
}

Json pair_ids(const MetricSpace& s, const std::optional<std::pair<PointIndex, PointIndex>>& p) {
  if (!p) return nullptr;
  return Json::array({s.id(p->first), s.id(p->second)});
}

Json chain_ids(const MetricSpace& s, const std::vector<PointIndex>& chain) {
  Json a = Json::array();
  for (auto i : chain) a.push_back(s.id(i));
  return a;
}

struct Cli {
  CLI::App app{"Lipschitz-free spaces over finite metric spaces: exact norms, b-metrics, Delta detection"};
  int status = 0;

  // Shared option storage. Each subcommand binds the fields it needs.
  std::string file, vec, func, x, y, alpha, beta, eps, eps_list, kind, config, out, experiment, functional;
  std::size_t param = 0, levels = 0, dim = 0, n = 0, samples = 400;
  std::uint64_t seed = 0;
  double delta = 0.0;
  bool dual = false, no_timestamp = false;

  Cli() {
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    add_space();
    add_free();
    add_delta();
    add_veeorg();
    add_renorm();
    add_run();
  }

  void add_space() {
    auto* space = app.add_subcommand("space", "finite metric spaces and the b-metrics")->require_subcommand(1);

    auto* gen = space->add_subcommand("gen", "emit a generated space as JSON");
    gen->add_option("--kind", kind, "grid or svc")->required()->check(CLI::IsMember({"grid", "svc"}));
    gen->add_option("--param", param, "grid size n or svc depth")->required();
    gen->callback([this] { emit(space_to_json(kind == "grid" ? grid_space(param) : svc_space(param))); });

    auto* val = space->add_subcommand("validate", "check the metric axioms");
    val->add_option("FILE", file)->required();
    val->callback([this] {
      auto [pts, base, dist] = space_parts_from_json(read_json_file(file));
      auto report = validate_metric(pts, base, dist);
      Json v = Json::array();
      for (const auto& m : report) v.push_back(m.describe());
      emit({{"valid", report.empty()}, {"violations", v}});
      if (!report.empty()) status = kFailed;
    });

    auto* bm = space->add_subcommand("bmetric", "b_{alpha,eps} as a space JSON");
    bm->add_option("FILE", file)->required();
    bm->add_option("--alpha", alpha)->required();
    bm->add_option("--eps", eps)->required();
    bm->callback([this] { emit(space_to_json(b_metric(load_space(file), DerivedParams(rat(alpha), rat(eps))))); });

    auto* con = space->add_subcommand("connectable", "eps-discrete connectability of two points");
    con->add_option("FILE", file)->required();
    con->add_option("--x", x)->required();
    con->add_option("--y", y)->required();
    con->add_option("--eps", eps)->required();
    con->callback([this] {
      auto s = load_space(file);
      auto xi = s.index_of(x), yi = s.index_of(y);
      auto c = eps_connectable(s, xi, yi, rat(eps));
      emit({{"connectable", c.connectable},
            {"eps", to_string(rat(eps))},
            {"distance", to_string(s.d(xi, yi))},
            {"chain", chain_ids(s, c.chain)},
            {"chain_length", c.chain_length ? Json(to_string(*c.chain_length)) : Json(nullptr)}});
    });
  }

  void add_free() {
    auto* fs = app.add_subcommand("free", "free-space norms, decompositions and pairings")->require_subcommand(1);

    auto* norm = fs->add_subcommand("norm", "exact norm with optimal flow and norming certificate");
    norm->add_option("SPACE", file)->required();
    norm->add_option("VEC", vec)->required();
    norm->callback([this] {
      auto s = load_space(file);
      auto mu = free_vector_from_json(s, read_json_file(vec));
      auto kr = kr_norm(s, mu);
      emit({{"norm", to_string(kr.value)},
            {"flow", flow_to_json(s, kr.flow)},
            {"certificate", function_to_json(s, kr.certificate)}});
    });

    auto* dec = fs->add_subcommand("decompose", "optimal molecule decomposition");
    dec->add_option("SPACE", file)->required();
    dec->add_option("VEC", vec)->required();
    dec->callback([this] {
      auto s = load_space(file);
      auto mu = free_vector_from_json(s, read_json_file(vec));
      auto mc = molecule_decompose(s, mu);
      emit({{"atoms", combination_to_json(s, mc)},
            {"total_weight", to_string(mc.total_weight())},
            {"norm", to_string(kr_norm(s, mu).value)}});
    });

    auto* pr = fs->add_subcommand("pair", "<f, mu>");
    pr->add_option("SPACE", file)->required();
    pr->add_option("FUNC", func)->required();
    pr->add_option("VEC", vec)->required();
    pr->callback([this] {
      auto s = load_space(file);
      auto f = lipschitz_from_json(s, read_json_file(func));
      emit({{"value", to_string(pair(f, free_vector_from_json(s, read_json_file(vec))))}});
    });

    auto* ln = fs->add_subcommand("lipnorm", "exact Lipschitz constant");
    ln->add_option("SPACE", file)->required();
    ln->add_option("FUNC", func)->required();
    ln->callback([this] {
      auto s = load_space(file);
      auto l = lip_norm(s, lipschitz_from_json(s, read_json_file(func)));
      emit({{"value", to_string(l.value)}, {"argmax", pair_ids(s, l.argmax)}});
    });
  }

  void add_delta() {
    auto* dl = app.add_subcommand("delta", "Delta-molecules and Delta decompositions at scale eps")
                   ->require_subcommand(1);

    auto* chk = dl->add_subcommand("check", "is m_xy a Delta-molecule at scale eps");
    chk->add_option("SPACE", file)->required();
    chk->add_option("--x", x)->required();
    chk->add_option("--y", y)->required();
    chk->add_option("--eps", eps)->required();
    chk->add_option("--alpha", alpha)->required();
    chk->callback([this] {
      auto s = load_space(file);
      auto r = delta_molecule_check(s, s.index_of(x), s.index_of(y), rat(eps), rat(alpha));
      emit({{"scale", to_string(r.eps)},
            {"delta_at_scale", r.delta_at_scale},
            {"b_value", to_string(r.b_value)},
            {"chain", chain_ids(s, r.chain)},
            {"chain_length", r.chain_length ? Json(to_string(*r.chain_length)) : Json(nullptr)},
            {"lower_bound", r.lower_bound ? Json(to_string(*r.lower_bound)) : Json(nullptr)}});
    });

    auto* dec = dl->add_subcommand("decompose", "Delta decomposition of a unit vector");
    dec->add_option("SPACE", file)->required();
    dec->add_option("VEC", vec)->required();
    dec->add_option("--alpha", alpha)->required();
    dec->add_option("--eps", eps)->required();
    dec->callback([this] {
      auto s = load_space(file);
      auto mu = free_vector_from_json(s, read_json_file(vec));
      auto d = delta_decompose(s, mu, rat(alpha), rat(eps));
      emit({{"scale", to_string(rat(eps))},
            {"atoms", combination_to_json(s, d.combination)},
            {"delta_flags", d.delta_flags},
            {"b_norm", to_string(d.b_norm)},
            {"lambda_sum", to_string(d.lambda_sum)},
            {"equality_case", d.equality_case},
            {"reconstructs", d.combination.reconstruct(s) == mu}});
    });

    auto* pb = dl->add_subcommand("probe", "max distance from mu to the slice molecules of f");
    pb->add_option("SPACE", file)->required();
    pb->add_option("VEC", vec)->required();
    pb->add_option("FUNC", func)->required();
    pb->add_option("--alpha", alpha)->required();
    pb->callback([this] {
      auto s = load_space(file);
      auto r = delta_distance_probe(s, free_vector_from_json(s, read_json_file(vec)),
                                    lipschitz_from_json(s, read_json_file(func)), rat(alpha));
      emit({{"alpha", to_string(rat(alpha))},
            {"value", to_string(r.value)},
            {"argmax", pair_ids(s, r.argmax)},
            {"slice_molecules", r.slice_molecules}});
    });

    auto* sc = dl->add_subcommand("scan", "b-norm over a descending eps list");
    sc->add_option("SPACE", file)->required();
    sc->add_option("VEC", vec)->required();
    sc->add_option("--alpha", alpha)->required();
    sc->add_option("--eps-list", eps_list, "comma-separated, descending")->required();
    sc->callback([this] {
      auto s = load_space(file);
      auto r = norm_b_scan(s, free_vector_from_json(s, read_json_file(vec)), rat(alpha), rat_list(eps_list));
      Json rows = Json::array();
      for (const auto& row : r.rows) rows.push_back({{"eps", to_string(row.eps)}, {"b_norm", to_string(row.value)}});
      emit({{"rows", rows},
            {"monotone", r.monotone},
            {"final_matches_norm", r.final_matches_norm ? Json(*r.final_matches_norm) : Json(nullptr)}});
    });
  }

  void add_veeorg() {
    auto* vg = app.add_subcommand("veeorg", "truncations of Veeorg's space")->require_subcommand(1);

    auto* gen = vg->add_subcommand("gen", "emit the truncation as a space JSON");
    gen->add_option("--levels", levels)->required();
    gen->callback([this] { emit(space_to_json(veeorg_space(levels))); });

    auto* ver = vg->add_subcommand("verify", "verification report for levels 1..N");
    ver->add_option("--levels", levels)->required();
    ver->add_option("--alpha", alpha)->required();
    ver->add_option("--beta", beta)->required();
    ver->add_option("--eps", eps)->required();
    ver->add_option("--out", out, "report path (default: $LIPFREE_OUT_DIR/veeorg-verify.json, else stdout)");
    ver->add_flag("--no-timestamp", no_timestamp, "leave the timestamp field null");
    ver->callback([this] {
      ExperimentConfig c{"veeorg-verify",
                         {{"levels", levels}, {"alpha", alpha}, {"beta", beta}, {"eps", eps}},
                         out.empty() ? std::nullopt : std::optional<std::string>(out)};
      finish_report(c, run_experiment(c));
    });

    auto* dp = vg->add_subcommand("daugavet-probe", "distance from m_qp to the slice molecules of h");
    dp->add_option("--levels", levels)->required();
    dp->add_option("--alpha", alpha)->required();
    dp->callback([this] {
      auto s = veeorg_space(levels);
      auto mu = molecule(s, s.index_of("q"), s.index_of("p"));
      auto r = delta_distance_probe(s, mu, h_function(s), rat(alpha));
      emit({{"levels", levels},
            {"alpha", to_string(rat(alpha))},
            {"molecule", Json::array({"q", "p"})},
            {"value", to_string(r.value)},
            {"argmax", pair_ids(s, r.argmax)},
            {"slice_molecules", r.slice_molecules}});
    });
  }

  void add_renorm() {
    auto* rn = app.add_subcommand("renorm", "the Delta-point renorming of l2 in dimension N")->require_subcommand(1);

    auto* nm = rn->add_subcommand("norm", "renormed norm (or its dual) with certificate");
    nm->add_option("--dim", dim)->required();
    nm->add_option("--vec", vec)->required();
    nm->add_flag("--dual", dual, "evaluate the dual norm");
    nm->callback([this] {
      auto v = load_vector(vec);
      auto r = dual ? trimmed_dual_norm(v) : trimmed_norm(v);
      auto j = norm_result_to_json(r);
      j["dual_norm"] = dual;
      emit(j);
    });

    auto* lm = rn->add_subcommand("lemma32", "the points x(n) and x*(n)");
    lm->add_option("--n", n)->required();
    lm->add_option("--dim", dim)->required();
    lm->callback([this] {
      auto p = lemma32_points(n, dim);
      Json coords = Json::array();
      for (const auto& c : p.exact) coords.push_back(to_string(c));
      emit({{"n", p.n},
            {"k", p.k},
            {"coordinates", coords},
            {"pairing", to_string(p.pairing)},
            {"pairing_is_one", p.pairing_is_one},
            {"distance_squared", to_string(p.distance_squared)},
            {"distance_matches", p.distance_matches},
            {"x_norm", norm_result_to_json(p.x_norm)},
            {"xstar_dual_norm", norm_result_to_json(p.xstar_norm)}});
    });

    auto* sl = rn->add_subcommand("slice", "sampled lower bound on a slice diameter");
    sl->add_option("--dim", dim)->required();
    sl->add_option("--functional", functional)->required();
    sl->add_option("--delta", delta)->required();
    sl->add_option("--samples", samples)->required();
    sl->add_option("--seed", seed)->required();
    sl->callback([this] {
      auto f = load_vector(functional);
      auto r = slice_diameter_probe(f, {delta}, SliceProbeConfig{samples, seed});
      const auto& row = r.rows.front();
      Json arg = nullptr;
      if (row.argmax)
        arg = Json::array({renorm_vector_to_json(r.pool[row.argmax->first]),
                           renorm_vector_to_json(r.pool[row.argmax->second])});
      emit({{"delta", row.delta},
            {"seed", seed},
            {"samples", samples},
            {"pool_size", r.pool_size},
            {"in_slice", row.in_slice},
            {"diameter_lower_bound", row.estimate ? Json(*row.estimate) : Json(nullptr)},
            {"witnesses", arg}});
    });

    auto* wt = rn->add_subcommand("witness", "distances from e_1 to e_1 + e_n and from e_1* to e_1* - 2 e_n*");
    wt->add_option("--dim", dim)->required();
    wt->callback([this] {
      auto w = super_delta_witness(dim);
      emit({{"dim", w.dim},
            {"primal_distances", w.primal_distances},
            {"dual_distances", w.dual_distances},
            {"max_deviation", w.max_deviation},
            {"coordinates_agree", w.coordinates_agree}});
    });

    auto* gr = rn->add_subcommand("generic", "max(||x||_2 / 2, max_n |f_n(x)|) on the unit vectors");
    gr->add_option("--dim", dim)->required();
    gr->add_option("--functionals", functional, "JSON array of vectors")->required();
    gr->callback([this] {
      auto j = read_json_file(functional);
      if (!j.is_array() || j.empty()) throw StructuralError("functionals must be a non-empty JSON array");
      std::vector<RenormVector> fs;
      double bound = 0.0;
      for (const auto& f : j) {
        fs.push_back(renorm_vector_from_json(f));
        if (fs.back().size() != static_cast<Eigen::Index>(dim)) throw StructuralError("functional dimension mismatch");
        bound = std::max(bound, fs.back().norm());
      }
      auto norm = generic_delta_renorm([](const RenormVector& v) { return v.norm(); }, fs, bound);
      Json values = Json::array();
      const auto N = static_cast<Eigen::Index>(dim);
      for (Eigen::Index i = 0; i < N; ++i) values.push_back(norm(unit_vector(N, i)));
      emit({{"dim", dim}, {"functional_bound", bound}, {"unit_vector_values", values}});
    });
  }

  void add_run() {
    auto* run = app.add_subcommand("run", "run a catalogued experiment");
    run->add_option("EXPERIMENT", experiment)->required();
    run->add_option("--config", config, "JSON config file");
    auto* s = run->add_option("--seed", seed, "seed for sampled experiments");
    run->add_option("--out", out, "report path (default: $LIPFREE_OUT_DIR/<id>.json, else stdout)");
    run->add_flag("--no-timestamp", no_timestamp, "leave the timestamp field null");
    run->callback([this, s] {
      auto c = ExperimentConfig::from_json(experiment, config.empty() ? Json(nullptr) : read_json_file(config));
      if (!out.empty()) c.output = out;
      if (s->count() > 0) c.params["seed"] = seed;
      finish_report(c, run_experiment(c));
    });

    auto* list = app.add_subcommand("list", "experiment catalog");
    list->callback([] {
      for (const auto& e : experiment_catalog())
        std::cout << e.id << (e.sampled ? " [needs seed]" : "") << "\n  " << e.description << "\n  checks: " << e.anchor
                  << "\n";
    });
  }

  RenormVector load_vector(const std::string& path) const {
    auto v = renorm_vector_from_json(read_json_file(path));
    if (v.size() != static_cast<Eigen::Index>(dim))
      throw StructuralError("vector in '" + path + "' has dimension " + std::to_string(v.size()) + ", expected " +
                            std::to_string(dim));
    return v;
  }

  // Writes the report (and CSV side tables next to it) and sets the exit status.
  void finish_report(const ExperimentConfig& c, const Report& r) {
    std::optional<std::string> ts;
    if (!no_timestamp) ts = utc_timestamp();
    const std::string text = r.to_json(ts).dump(2) + "\n";
    std::optional<std::filesystem::path> path;
    if (c.output)
      path = *c.output;
    else if (const char* dir = std::getenv("LIPFREE_OUT_DIR"); dir && *dir)
      path = std::filesystem::path(dir) / (c.id + ".json");
    if (path) {
      write_text(*path, text);
      for (const auto& [name, table] : r.tables)
        write_text(path->parent_path() / (c.id + "_" + name + ".csv"), table.to_csv());
      std::cerr << "report written to " << path->string() << "\n";
    } else {
      std::cout << text;
    }
    if (const auto* f = r.first_failure()) {
      std::cerr << "FAILED: " << f->statement << (f->detail.empty() ? "" : " (" + f->detail + ")") << "\n";
      status = kFailed;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  try {
    cli.app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = cli.app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const lipfree::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const lipfree::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInput;
  }
  return cli.status;
}
