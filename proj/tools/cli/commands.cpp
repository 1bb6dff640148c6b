#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "schema_check.hpp"
#include "schemas.hpp"
#include "suite.hpp"
#include "warpfield/car.hpp"
#include "warpfield/errors.hpp"
#include "warpfield/geometry.hpp"
#include "warpfield/geometry_json.hpp"
#include "warpfield/scalar.hpp"
#include "warpfield/thermal.hpp"

namespace warpfield::cli {

using nlohmann::json;
using suite::format_double;

namespace {

std::string quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

template <class T>
T value_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

// ---------------------------------------------------------------- npoint

scalar::GridPtr grid_from(const json& g, double mass) {
  const std::string kind = g.at("kind");
  if (kind == "cubic") return scalar::MassShellGrid::cubic(mass, value_or(g, "K", 1), value_or(g, "dp", 0.5));
  if (!g.contains("half_nodes") || !g.contains("weights"))
    throw ConfigError("grid kind \"pairs\" needs half_nodes and weights");
  std::vector<Eigen::Vector3d> half;
  for (const auto& p : g["half_nodes"]) half.emplace_back(p[0].get<double>(), p[1].get<double>(), p[2].get<double>());
  return scalar::MassShellGrid::symmetric_pairs(mass, half, g["weights"].get<std::vector<double>>());
}

struct FunctionTuple {
  std::string label;
  std::vector<scalar::MassShellFunction> fs;
};

}  // namespace

const char* schema_text(const std::string& command) {
  if (command == "npoint") return kNpointSchema;
  if (command == "geometry") return kGeometrySchema;
  if (command == "verify") return kVerifySchema;
  if (command == "car") return kCarSchema;
  throw ConfigError("unknown command " + command);
}

json load_config(const std::string& path, const std::string& command) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object() || !cfg.contains("command") || cfg["command"] != command)
    throw ConfigError("config \"command\" must be \"" + command + "\"");
  const auto errs = validate_schema(cfg, json::parse(schema_text(command)));
  if (!errs.empty()) {
    std::string msg = "config violates the " + command + " schema:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

std::string resolve_format(const json& cfg, const Options& opt) {
  if (opt.format) return *opt.format;
  if (cfg.contains("output") && cfg["output"].contains("format")) return cfg["output"]["format"];
  return "csv";
}

std::optional<std::string> resolve_out(const json& cfg, const Options& opt) {
  if (opt.out) return opt.out;
  if (cfg.contains("output") && cfg["output"].contains("path")) return cfg["output"]["path"].get<std::string>();
  return std::nullopt;
}

std::uint64_t resolve_seed(const json& cfg, const Options& opt, std::uint64_t fallback) {
  if (opt.seed) return *opt.seed;
  return value_or<std::uint64_t>(cfg, "seed", fallback);
}

CommandResult cmd_npoint(const json& cfg, const Options& opt) {
  const double mass = value_or(cfg, "mass", 1.0), beta = value_or(cfg, "beta", 1.0);
  const auto grid = grid_from(cfg.at("grid"), mass);
  const int N = value_or(cfg, "truncation", 3);
  const auto kappas = value_or(cfg, "kappas", std::vector<double>{0.0, 0.5, 1.0});
  const auto ns = value_or(cfg, "n", std::vector<int>{2, 3, 4});
  const int samples = value_or(cfg, "samples", 3);
  const double tol = value_or(cfg, "tolerance", 1e-10);
  const int max_points = value_or(cfg, "max_points", 6);
  std::mt19937_64 eng(resolve_seed(cfg, opt, 1));
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  const thermal::ThermalRep R(grid, N, beta);
  CommandResult res;
  json rows = json::array();
  std::ostringstream csv;
  csv << "n,sample,functions,kappa,closed_re,closed_im,brute_re,brute_im,abs_diff,rel_diff,kappa_dependence\n";
  for (int n : ns) {
    std::vector<FunctionTuple> tuples;
    if (cfg.contains("functions"))
      for (const auto& f : cfg["functions"]) {
        const auto nodes = f["nodes"].get<std::vector<int>>();
        if (static_cast<int>(nodes.size()) != n) continue;
        FunctionTuple t;
        for (int j : nodes) {
          if (j >= grid->size()) throw ConfigError("function node " + std::to_string(j) + " outside the grid");
          t.label += (t.label.empty() ? "nodes:" : "|") + std::to_string(j);
          t.fs.push_back(scalar::MassShellFunction::node(grid, j));
        }
        tuples.push_back(std::move(t));
      }
    for (int s = 0; s < samples; ++s) {
      FunctionTuple t{"random:" + std::to_string(s), {}};
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXcd a(grid->size());
        for (int j = 0; j < grid->size(); ++j) a[j] = {u(eng), u(eng)};
        t.fs.emplace_back(grid, a);
      }
      tuples.push_back(std::move(t));
    }
    for (std::size_t s = 0; s < tuples.size(); ++s) {
      thermal::NpointResult first;
      for (std::size_t k = 0; k < kappas.size(); ++k) {
        thermal::NpointResult r;
        try {
          r = thermal::deformed_npoint(tuples[s].fs, R, kappas[k], max_points);
        } catch (const PreconditionError& e) {
          throw ConfigError(e.what());
        }
        if (k == 0) first = r;
        const double dep = std::abs(r.brute - first.brute);
        const bool ok = r.abs_diff < tol;
        if (!ok)
          res.failures.push_back("n=" + std::to_string(n) + " " + tuples[s].label + " kappa=" + format_double(kappas[k]));
        csv << n << ',' << s << ',' << tuples[s].label << ',' << format_double(kappas[k]) << ','
            << format_double(r.closed.real()) << ',' << format_double(r.closed.imag()) << ','
            << format_double(r.brute.real()) << ',' << format_double(r.brute.imag()) << ','
            << format_double(r.abs_diff) << ',' << format_double(r.rel_diff) << ',' << format_double(dep) << '\n';
        rows.push_back({{"n", n},
                        {"sample", s},
                        {"functions", tuples[s].label},
                        {"kappa", kappas[k]},
                        {"closed", {r.closed.real(), r.closed.imag()}},
                        {"brute", {r.brute.real(), r.brute.imag()}},
                        {"abs_diff", r.abs_diff},
                        {"rel_diff", r.rel_diff},
                        {"kappa_dependence", dep},
                        {"pass", ok}});
      }
    }
  }
  res.exit_code = res.failures.empty() ? kPass : kNumericalFailure;
  res.output = resolve_format(cfg, opt) == "json"
                   ? json{{"command", "npoint"}, {"pass", res.failures.empty()}, {"tolerance", tol}, {"rows", rows}}.dump(2) + "\n"
                   : csv.str();
  return res;
}

// ---------------------------------------------------------------- geometry

namespace {

json matrix_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    a.push_back(row);
  }
  return a;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json key_json(const geometry::CoherentKey& k) {
  return {{"backend", geometry::to_string(k.backend)}, {"s", k.s}, {"e", vector_json(k.e)}};
}

json evidence_json(const geometry::SampleEvidence& e) {
  return {{"samples", e.samples},       {"in_w1", e.in_w1},           {"w1_not_w2", e.w1_not_w2},
          {"w2_not_w1", e.w2_not_w1},   {"w1_not_w2c", e.w1_not_w2c}, {"w2c_not_w1", e.w2c_not_w1}};
}

json run_query(const json& q, std::mt19937_64& eng, CommandResult& res, std::size_t index) {
  const std::string type = q.at("type");
  auto need = [&](const char* key) -> const json& {
    if (!q.contains(key)) throw ConfigError("query " + std::to_string(index) + " (" + type + ") needs \"" + key + "\"");
    return q[key];
  };
  if (type == "membership") {
    const auto W = geometry::wedge_from_json(need("wedge"));
    const auto x = geometry::point_from_json(need("point"));
    return {{"member", geometry::wedge_membership(W, x)}};
  }
  if (type == "causal_relation") {
    const auto x = geometry::point_from_json(need("x")), y = geometry::point_from_json(need("y"));
    return {{"relation", geometry::to_string(geometry::causal_relation(x, y))}, {"interval", geometry::interval(x, y)}};
  }
  if (type == "complement") {
    const auto W = geometry::wedge_from_json(need("wedge"));
    const auto C = geometry::causal_complement(W);
    const double inv = geometry::causal_complement(C).canonical().distance(W.canonical());
    return {{"complement", geometry::to_json(C)}, {"involution_distance", inv}};
  }
  if (type == "inclusion") {
    const auto w1 = geometry::wedge_from_json(need("w1")), w2 = geometry::wedge_from_json(need("w2"));
    geometry::InclusionOptions o;
    o.samples = value_or<std::size_t>(q, "samples", 10000);
    const auto v = geometry::wedge_inclusion(w1, w2, o);
    return {{"verdict", geometry::to_string(v)}, {"evidence", evidence_json(geometry::sample_relation(w1, w2, o.samples))}};
  }
  if (type == "coherent_key") {
    json keys = json::array();
    std::optional<geometry::CoherentKey> first;
    bool all_equal = true;
    for (const auto& wj : need("wedges")) {
      const auto k = geometry::coherent_family_key(geometry::wedge_from_json(wj));
      if (!first) first = k;
      all_equal = all_equal && k == *first;
      keys.push_back(key_json(k));
    }
    return {{"keys", keys}, {"all_equal", all_equal}};
  }
  if (type == "desitter_sweep") {
    const int pairs = value_or(q, "pairs", 100);
    const std::size_t samples = value_or<std::size_t>(q, "samples", 10000);
    int proper = 0, incomparable = 0, equal = 0;
    for (int i = 0; i < pairs; ++i) {
      const auto w1 = geometry::Wedge::desitter(suite::random_desitter(eng));
      const auto w2 = geometry::Wedge::desitter(suite::random_desitter(eng));
      const auto e = geometry::sample_relation(w1, w2, samples);
      if ((e.w1_not_w2 == 0 && e.w2_not_w1 > 0) || (e.w2_not_w1 == 0 && e.w1_not_w2 > 0)) ++proper;
      const auto v = geometry::analytic_inclusion(w1, w2);
      if (v == geometry::Inclusion::proper_subset) ++proper;
      if (v == geometry::Inclusion::equal) ++equal;
      if (v == geometry::Inclusion::incomparable) ++incomparable;
    }
    if (proper > 0) res.failures.push_back("de Sitter proper inclusion found (query " + std::to_string(index) + ")");
    return {{"pairs", pairs}, {"samples", samples}, {"proper_inclusions", proper}, {"equal", equal},
            {"incomparable", incomparable}};
  }
  if (type == "boost_flow") {
    const auto W = geometry::wedge_from_json(need("wedge"));
    const auto iso = geometry::boost_flow(W, need("t").get<double>());
    return {{"L", matrix_json(iso.L)}, {"shift", vector_json(iso.shift)}};
  }
  if (type == "frw_edge_image") {
    const auto chart = geometry::chart_from_json(need("chart"));
    const auto b = need("base").get<std::vector<double>>();
    const auto kp = need("killing_pair");
    geometry::Edge E{geometry::Backend::frw,
                     {b[0], b[1], b[2], b[3]},
                     {geometry::Backend::frw,
                      {0.0, kp[0][0].get<double>(), kp[0][1].get<double>(), kp[0][2].get<double>()},
                      {0.0, kp[1][0].get<double>(), kp[1][1].get<double>(), kp[1][2].get<double>()}}};
    const auto img = geometry::frw_edge_image(E, *chart);
    const auto back = geometry::frw_edge_from_flat(img, *chart);
    const double rt = std::max({(back.base - E.base).cwiseAbs().maxCoeff(), (back.xi.xi1 - E.xi.xi1).cwiseAbs().maxCoeff(),
                                (back.xi.xi2 - E.xi.xi2).cwiseAbs().maxCoeff()});
    return {{"tau", img.tau},
            {"base", vector_json(img.base)},
            {"dir1", vector_json(img.dir1)},
            {"dir2", vector_json(img.dir2)},
            {"round_trip_error", rt}};
  }
  throw ConfigError("unknown query type " + type);
}

}  // namespace

CommandResult cmd_geometry(const json& cfg, const Options& opt) {
  std::mt19937_64 eng(resolve_seed(cfg, opt, 1));
  CommandResult res;
  json answers = json::array();
  std::ostringstream csv;
  csv << "index,type,answer\n";
  const auto& queries = cfg.at("queries");
  for (std::size_t i = 0; i < queries.size(); ++i) {
    json a;
    try {
      a = run_query(queries[i], eng, res, i);
    } catch (const DiagnosticError& e) {
      res.failures.push_back(std::string("query ") + std::to_string(i) + ": " + e.what());
      a = {{"error", e.what()}};
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("query " + std::to_string(i) + ": " + e.what());
    }
    const std::string type = queries[i]["type"];
    csv << i << ',' << type << ',' << quote(a.dump()) << '\n';
    answers.push_back({{"index", i}, {"type", type}, {"answer", a}});
  }
  res.exit_code = res.failures.empty() ? kPass : kNumericalFailure;
  res.output = resolve_format(cfg, opt) == "json"
                   ? json{{"command", "geometry"}, {"pass", res.failures.empty()}, {"answers", answers}}.dump(2) + "\n"
                   : csv.str();
  return res;
}

// ---------------------------------------------------------------- verify

CommandResult cmd_verify(const json& cfg, const Options& opt) {
  suite::SuiteConfig sc;
  sc.seed = resolve_seed(cfg, opt, sc.seed);
  if (cfg.contains("criteria")) sc.criteria = cfg["criteria"].get<std::vector<int>>();
  sc.degenerate_kappa = value_or(cfg, "degenerate_kappa", false);
  sc.budget_scale = value_or(cfg, "budget_scale", 1.0);
  if (cfg.contains("debug")) sc.break_theta_antisymmetry = value_or(cfg["debug"], "break_theta_antisymmetry", false);
  if (cfg.contains("tolerances"))
    for (auto it = cfg["tolerances"].begin(); it != cfg["tolerances"].end(); ++it) {
      if (!sc.tolerances.count(it.key())) throw ConfigError("unknown tolerance \"" + it.key() + "\"");
      if (!it.value().is_number()) throw ConfigError("tolerance \"" + it.key() + "\" must be a number");
      sc.tolerances[it.key()] = it.value().get<double>();
    }

  const auto results = suite::run_suite(sc);
  CommandResult res;
  for (const auto& r : results)
    for (const auto& f : r.failing()) res.failures.push_back("criterion " + std::to_string(r.id) + ": " + f);
  res.exit_code = res.failures.empty() ? kPass : kNumericalFailure;
  res.output = resolve_format(cfg, opt) == "json"
                   ? json{{"command", "verify"}, {"seed", sc.seed}, {"pass", res.failures.empty()},
                          {"criteria", suite::to_json(results)}}
                             .dump(2) +
                         "\n"
                   : suite::to_csv(results);
  return res;
}

// ---------------------------------------------------------------- car

namespace {

struct Observable {
  std::string name, kind;
  spectral::Matrix op;
};

Observable build_observable(const json& o, const car::CarRep& R, std::mt19937_64& eng) {
  Observable ob{o.at("name"), o.at("kind"), {}};
  const int d = R.d();
  auto mode = [&](const char* key) {
    const int m = value_or(o, key, 0);
    if (m >= d) throw ConfigError("observable \"" + ob.name + "\": mode " + std::to_string(m) + " out of range");
    return m;
  };
  const auto n = R.dim();
  ob.op = spectral::Matrix::Zero(n, n);
  if (ob.kind == "identity") {
    ob.op.setIdentity();
  } else if (ob.kind == "charge" || ob.kind == "boost" || ob.kind == "number") {
    for (Eigen::Index a = 0; a < n; ++a)
      ob.op(a, a) = ob.kind == "charge" ? R.charge(a) : ob.kind == "boost" ? R.boost(a) : static_cast<double>(std::popcount(static_cast<unsigned long long>(a)));
  } else if (ob.kind == "hopping") {
    ob.op = R.annihilator(mode("i")).adjoint() * R.annihilator(mode("j"));
    ob.op += ob.op.adjoint().eval();
  } else if (ob.kind == "pair") {
    // Psi(e_j) Psi^dagger(e_i) with Psi(f-) = B(0 + f-), Psi^dagger(f+) = B(f+ + 0).
    Eigen::VectorXcd fm = Eigen::VectorXcd::Zero(2 * d), fp = Eigen::VectorXcd::Zero(2 * d);
    fm[d + mode("j")] = 1.0;
    fp[mode("i")] = 1.0;
    ob.op = R.b_operator(fm) * R.b_operator(fp);
  } else if (ob.kind == "creation" || ob.kind == "annihilation") {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(2 * d);
    f[(ob.kind == "creation" ? 0 : d) + mode("i")] = 1.0;
    ob.op = R.b_operator(f);
  } else if (ob.kind == "random_invariant") {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        if (R.charge(a) == R.charge(b)) ob.op(a, b) = {u(eng), u(eng)};
  }
  return ob;
}

std::optional<int> charge_degree(const spectral::Matrix& F, const car::CarRep& R) {
  std::optional<int> m;
  for (Eigen::Index b = 0; b < R.dim(); ++b)
    for (Eigen::Index a = 0; a < R.dim(); ++a)
      if (F(a, b) != spectral::cplx(0.0)) {
        const int s = R.charge(a) - R.charge(b);
        if (m && *m != s) return std::nullopt;
        m = s;
      }
  return m ? m : std::optional<int>(0);
}

}  // namespace

CommandResult cmd_car(const json& cfg, const Options& opt) {
  const auto kv = value_or(cfg, "k", std::vector<int>{1, 1, 2, -1});
  std::vector<double> k(kv.begin(), kv.end());
  std::vector<bool> mask;
  if (cfg.contains("mask")) mask = cfg["mask"].get<std::vector<bool>>();
  if (!mask.empty() && mask.size() != k.size()) throw ConfigError("mask length differs from k");
  const auto kappas = value_or(cfg, "kappas", std::vector<double>{0.1, 1.0, 10.0});
  const double tol = value_or(cfg, "tolerance", 1e-12);
  std::mt19937_64 eng(resolve_seed(cfg, opt, 1));

  const car::CarRep R = car::CarRep::with_boost(k, mask);
  json defaults = json::array({{{"name", "identity"}, {"kind", "identity"}},
                               {{"name", "charge"}, {"kind", "charge"}},
                               {{"name", "boost"}, {"kind", "boost"}},
                               {{"name", "pair_0_2"}, {"kind", "pair"}, {"i", 0}, {"j", 2}}});
  const json& obs = cfg.contains("observables") ? cfg["observables"] : defaults;

  CommandResult res;
  json rows = json::array();
  std::ostringstream csv;
  csv << "observable,kind,degree,kappa,vacuum_residual,derivative_norm,commutator_off_zero,fd_error,biconditional,pass\n";
  for (const auto& o : obs) {
    const Observable ob = build_observable(o, R, eng);
    const auto m = charge_degree(ob.op, R);
    if (!m) {
      res.failures.push_back(ob.name + ": not charge homogeneous");
      continue;
    }
    std::optional<car::FixedPointReport> fp;
    if (*m == 0) fp = car::fixed_point_derivative(ob.op, R);
    const bool bic = !fp || fp->derivative_zero == fp->commutes_off_zero;
    for (double kk : kappas) {
      const double vac = car::deformed_vacuum_check(ob.op, *m, kk, R);
      const bool ok = vac < tol && bic;
      if (!ok) res.failures.push_back(ob.name + " kappa=" + format_double(kk));
      csv << ob.name << ',' << ob.kind << ',' << *m << ',' << format_double(kk) << ',' << format_double(vac) << ','
          << (fp ? format_double(fp->derivative_norm) : "-") << ','
          << (fp ? format_double(fp->commutator_off_zero) : "-") << ','
          << (fp ? format_double(fp->finite_difference_error) : "-") << ',' << (bic ? "holds" : "violated") << ','
          << (ok ? "pass" : "fail") << '\n';
      json row{{"observable", ob.name}, {"kind", ob.kind}, {"degree", *m}, {"kappa", kk},
               {"vacuum_residual", vac}, {"biconditional", bic}, {"pass", ok}};
      if (fp) {
        row["derivative_norm"] = fp->derivative_norm;
        row["commutator_off_zero"] = fp->commutator_off_zero;
        row["fd_error"] = fp->finite_difference_error;
      }
      rows.push_back(row);
    }
  }
  res.exit_code = res.failures.empty() ? kPass : kNumericalFailure;
  res.output = resolve_format(cfg, opt) == "json"
                   ? json{{"command", "car"}, {"pass", res.failures.empty()}, {"tolerance", tol}, {"rows", rows}}.dump(2) + "\n"
                   : csv.str();
  return res;
}

}  // namespace warpfield::cli
