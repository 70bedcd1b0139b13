// fpp: batch experiment runner for the first-passage-percolation laboratory.
//
// Every subcommand reads a flat key-value spec file, runs deterministically
// for a fixed (spec, seed) pair and writes CSV/JSON artifacts atomically.
// The thread count only affects speed, never output bytes.

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fpp/convex.hpp"
#include "fpp/io.hpp"
#include "fpp/lattice.hpp"
#include "fpp/ld.hpp"
#include "fpp/metric.hpp"
#include "fpp/passage.hpp"
#include "fpp/rate.hpp"
#include "fpp/seminorm.hpp"

using nlohmann::json;
using namespace fpp;

namespace {

constexpr const char* kVersion = "fpp 0.1.0";

struct Runner {
  std::string spec_path;
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  int threads = 1;
  std::string out_dir = ".";
  bool exact = false;

  ExperimentSpec spec;
  std::string spec_text;
  std::vector<std::string> outputs;

  void load() {
    spec_text = read_file(spec_path);
    spec = ExperimentSpec::parse(spec_text);
    if (!seed_overridden && spec.has("seed"))
      seed = static_cast<std::uint64_t>(spec.get_int("seed"));
    else if (spec.has("seed"))
      spec.get("seed");  // consume
  }

  std::string path(const std::string& name) const { return out_dir + "/" + name; }

  void emit(const std::string& name, const std::string& content) {
    write_file_atomic(path(name), content);
    outputs.push_back(name);
  }

  void manifest(const std::string& command, double wall_ms) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["spec_hash"] = fnv1a(spec_text);
    m["seed"] = seed;
    m["wall_ms"] = wall_ms;
    m["outputs"] = outputs;
    write_file_atomic(path("manifest.json"), m.dump(2) + "\n");
  }

  BoundedLaw law() const { return BoundedLaw::parse(spec.get("law")); }

  LatticeBox box() const {
    Vec lo = spec.get_vec("lower"), hi = spec.get_vec("upper");
    IVec ilo(lo.size()), ihi(hi.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
      ilo[i] = std::lround(lo[i]);
      ihi[i] = std::lround(hi[i]);
    }
    return LatticeBox(ilo, ihi);
  }

  ConvexWindow window_or_unit(int d) const {
    if (spec.has("window")) return ConvexWindow::parse(spec.get("window"));
    return ConvexWindow::box(Vec(d, 0.0), Vec(d, 1.0));
  }

  CostModel model(int dim) const {
    std::string text = spec.get("model");
    std::istringstream is(text);
    std::string kind;
    is >> kind;
    if (kind == "kesten") return kesten_bound_model(law(), dim);
    if (kind == "quadratic") {
      double pivot;
      is >> pivot;
      if (!is) throw invalid_input("model: quadratic needs a pivot");
      return quadratic_toy_model(pivot, dim);
    }
    if (kind == "empirical") {
      std::string file;
      is >> file;
      std::istringstream tf(read_file(file));
      std::vector<std::pair<double, double>> table;
      double z, r;
      while (tf >> z >> r) table.push_back({z, r});
      return empirical_model(std::move(table), dim);
    }
    throw invalid_input("model: unknown kind " + kind);
  }
};

std::string rate_csv(const std::vector<RateEstimate>& rows) {
  std::ostringstream os;
  os << "# schema: n,hits,trials,p_hat,ci_lo,ci_hi,rate,method,eps,eps_slack "
        "(probabilities unitless, rate = -log(p)/n^d)\n";
  for (const auto& r : rows) {
    os << r.n << "," << r.hits << "," << r.trials << "," << format_double(r.p_hat)
       << "," << format_double(r.ci_lo) << "," << format_double(r.ci_hi) << ","
       << format_double(r.rate) << "," << r.method << "," << format_double(r.eps)
       << "," << format_double(r.eps_slack) << "\n";
  }
  return os.str();
}

json rate_json(const RateEstimate& r) {
  json j;
  j["n"] = r.n;
  j["hits"] = r.hits;
  j["trials"] = r.trials;
  j["exact"] = r.exact;
  j["p_hat"] = r.p_hat;
  j["ci_lo"] = r.ci_lo;
  j["ci_hi"] = r.ci_hi;
  j["rate"] = r.rate;
  j["zero_hits"] = r.zero_hits;
  j["method"] = r.method;
  j["theta"] = r.theta;
  j["eps"] = r.eps;
  j["eps_slack"] = r.eps_slack;
  return j;
}

// ---------------------------------------------------------------------------

void run_simulate(Runner& rn) {
  auto box = rn.box();
  auto law = rn.law();
  std::uint64_t stream =
      rn.spec.has("stream") ? static_cast<std::uint64_t>(rn.spec.get_int("stream")) : 0;
  rn.spec.expect_all_consumed();
  auto cfg = sample_configuration(box, law, rn.seed, stream);
  rn.emit("config.txt", dump_configuration(cfg));
}

void run_geodesic(Runner& rn) {
  std::optional<WeightConfiguration> cfg;
  if (rn.spec.has("config")) {
    cfg = load_configuration(read_file(rn.spec.get("config")));
  } else {
    std::uint64_t stream =
        rn.spec.has("stream") ? static_cast<std::uint64_t>(rn.spec.get_int("stream")) : 0;
    cfg = sample_configuration(rn.box(), rn.law(), rn.seed, stream);
  }
  Vec x = rn.spec.get_vec("x"), y = rn.spec.get_vec("y");
  rn.spec.expect_all_consumed();
  auto res = continuous_passage_time_with_path(*cfg, x, y);
  rn.emit("geodesic.csv", dump_geodesic(res.path));
}

void run_crossing(Runner& rn) {
  BoundedLaw law = rn.law();
  int n = static_cast<int>(rn.spec.get_int("n"));
  long long reps = rn.spec.has("replicas") ? rn.spec.get_int("replicas") : 1;
  int d = rn.spec.has("dim") ? static_cast<int>(rn.spec.get_int("dim")) : 2;
  rn.spec.expect_all_consumed();
  LatticeBox box(IVec(d, 0), IVec(d, n));
  std::ostringstream os;
  os << "# schema: replica,axis_0..axis_" << d - 1
     << " (rescaled face-to-face crossing times)\n";
  for (long long r = 0; r < reps; ++r) {
    auto cfg = sample_configuration(box, law, rn.seed, static_cast<std::uint64_t>(r));
    auto ct = crossing_times(cfg, n);
    os << r;
    for (double v : ct.values) os << "," << format_double(v);
    os << "\n";
  }
  rn.emit("crossing.csv", os.str());
}

void run_ball(Runner& rn) {
  BoundedLaw law = rn.law();
  int n = static_cast<int>(rn.spec.get_int("n"));
  double mesh = rn.spec.get_double("mesh");
  std::uint64_t stream =
      rn.spec.has("stream") ? static_cast<std::uint64_t>(rn.spec.get_int("stream")) : 0;
  int d = rn.spec.has("dim") ? static_cast<int>(rn.spec.get_int("dim")) : 2;
  rn.spec.expect_all_consumed();
  long radius = static_cast<long>(std::ceil(n / law.support_min()));
  LatticeBox box(IVec(d, -radius), IVec(d, radius));
  auto cfg = sample_configuration(box, law, rn.seed, stream);
  auto ball = growing_ball(cfg, n, mesh);
  std::ostringstream schema;
  schema << "x_0..x_" << d - 1 << " (rescaled ball points; effective mesh "
         << format_double(ball.mesh) << ")";
  rn.emit("ball.csv", dump_point_set(ball.points, schema.str()));
}

void run_rate_estimate(Runner& rn) {
  BoundedLaw law = rn.law();
  Seminorm g = Seminorm::parse(rn.spec.get("target"));
  int n = static_cast<int>(rn.spec.get_int("n"));
  int k = rn.spec.has("k") ? static_cast<int>(rn.spec.get_int("k")) : 0;
  double eps = rn.spec.get_double("eps");
  bool one_sided = rn.spec.get_or("flavor", "one-sided") == "one-sided";
  ConvexWindow window = rn.window_or_unit(g.dim());
  LdEvent evt = one_sided ? LdEvent::one_sided_lower(window, n, g, eps, k)
                          : LdEvent::two_sided(window, n, g, eps, k);
  bool exact = rn.exact || rn.spec.get_or("exact", "false") == "true";
  std::optional<double> theta;
  if (rn.spec.has("tilt")) theta = rn.spec.get_double("tilt");
  long long trials = rn.spec.has("trials") ? rn.spec.get_int("trials") : 10000;
  rn.spec.expect_all_consumed();

  std::vector<RateEstimate> rows;
  if (exact)
    rows.push_back(exact_probability(law, evt));
  else
    rows.push_back(estimate_probability(law, evt, trials, theta, rn.seed, rn.threads));
  rn.emit("rate.csv", rate_csv(rows));
  rn.emit("rate_summary.json", rate_json(rows[0]).dump(2) + "\n");
}

void run_elementary_rate(Runner& rn) {
  BoundedLaw law = rn.law();
  Seminorm g = Seminorm::parse(rn.spec.get("target"));
  double eps = rn.spec.get_double("eps");
  auto ns = rn.spec.get_int_list("n_list");
  long long trials = rn.spec.get_int("trials");
  std::optional<double> theta;
  if (rn.spec.has("tilt")) theta = rn.spec.get_double("tilt");
  rn.spec.expect_all_consumed();
  auto rows =
      elementary_rate_sequence(g, eps, ns, law, trials, theta, rn.seed, rn.threads);
  rn.emit("rates.csv", rate_csv(rows));
}

void run_assembly_check(Runner& rn) {
  BoundedLaw law = rn.law();
  Seminorm g = Seminorm::parse(rn.spec.get("target"));
  double eps = rn.spec.get_double("eps");
  double delta = rn.spec.get_double("delta");
  int n = static_cast<int>(rn.spec.get_int("n"));
  int k = static_cast<int>(rn.spec.get_int("k"));
  long long samples = rn.spec.get_int("samples");
  rn.spec.expect_all_consumed();
  auto rep = subadditive_assembly_check(g, eps, delta, n, k, law, samples, rn.seed);
  std::ostringstream os;
  os << "# schema: n,k,m,samples,inclusion_hits,tile_acceptance,rate_n,"
        "certified_rate_m_upper,corridor_term,max_two_sided_gap,tolerance\n";
  os << rep.n << "," << rep.k << "," << rep.m << "," << rep.samples << ","
     << rep.inclusion_hits << "," << format_double(rep.tile_acceptance) << ","
     << format_double(rep.rate_n) << "," << format_double(rep.certified_rate_m_upper)
     << "," << format_double(rep.corridor_term) << ","
     << format_double(rep.max_two_sided_gap) << "," << format_double(rep.tolerance)
     << "\n";
  rn.emit("assembly.csv", os.str());
  json j;
  j["n"] = rep.n;
  j["k"] = rep.k;
  j["m"] = rep.m;
  j["samples"] = rep.samples;
  j["inclusion_hits"] = rep.inclusion_hits;
  j["inclusion_all"] = rep.inclusion_all;
  j["tile_acceptance"] = rep.tile_acceptance;
  j["rate_n"] = rep.rate_n;
  j["certified_rate_m_upper"] = rep.certified_rate_m_upper;
  j["corridor_term"] = rep.corridor_term;
  j["max_two_sided_gap"] = rep.max_two_sided_gap;
  j["tolerance"] = rep.tolerance;
  rn.emit("assembly.json", j.dump(2) + "\n");
}

void run_functional(Runner& rn) {
  GradientField field = load_gradient_field(read_file(rn.spec.get("field")));
  CostModel m = rn.model(field.window().dim());
  int k = static_cast<int>(rn.spec.get_int("k"));
  // optional crossing-rate curve: `curve = axis steps`, zeta_base fixes the
  // other coordinates
  bool curve = rn.spec.has("curve");
  int curve_axis = 0, curve_steps = 0;
  Vec zeta_base;
  double curve_a = 0;
  if (curve) {
    std::istringstream is(rn.spec.get("curve"));
    is >> curve_axis >> curve_steps;
    if (!is) throw invalid_input("functional: curve needs `axis steps`");
    zeta_base = rn.spec.get_vec("zeta_base");
    curve_a = rn.spec.get_double("a");
  }
  rn.spec.expect_all_consumed();

  auto res = integral_rate(field, m, k);
  std::ostringstream os;
  os << "# schema: value,inner_sum,outer_sum,is_infinite (tile-midpoint quadrature)\n";
  os << format_double(res.value) << "," << format_double(res.inner_sum) << ","
     << format_double(res.outer_sum) << "," << (res.is_infinite ? 1 : 0) << "\n";
  rn.emit("functional.csv", os.str());

  if (curve) {
    std::ostringstream cs;
    cs << "# schema: zeta,value (crossing rate along axis " << curve_axis << ")\n";
    double b = field.bound_b();
    for (int i = 0; i <= curve_steps; ++i) {
      Vec zeta = zeta_base;
      zeta[curve_axis] = curve_a + (b - curve_a) * i / curve_steps;
      cs << format_double(zeta[curve_axis]) << ","
         << format_double(crossing_rate(zeta, m, curve_a)) << "\n";
    }
    rn.emit("curve.csv", cs.str());
  }
}

void run_point_point(Runner& rn) {
  BoundedLaw law = rn.law();
  Vec x = rn.spec.get_vec("x");
  double zeta = rn.spec.get_double("zeta");
  CostModel m = rn.model(static_cast<int>(x.size()));
  int tile_k = rn.spec.has("tile_k") ? static_cast<int>(rn.spec.get_int("tile_k")) : 4;
  int grid_m = rn.spec.has("grid_m") ? static_cast<int>(rn.spec.get_int("grid_m")) : 0;
  int budget = rn.spec.has("budget") ? static_cast<int>(rn.spec.get_int("budget")) : 400;
  rn.spec.expect_all_consumed();
  double a = law.support_min(), b = law.support_max();
  if (grid_m == 0)
    grid_m = static_cast<int>(4 * std::ceil(b * l1_norm(x) / a));
  auto res = point_point_rate(x, zeta, m, a, b, tile_k, grid_m, budget);
  std::ostringstream os;
  os << "# schema: zeta,value,constraint_margin,trivial_upper_bound,evaluations\n";
  os << format_double(zeta) << "," << format_double(res.value) << ","
     << format_double(res.constraint_margin) << ","
     << format_double(res.trivial_upper_bound) << "," << res.evaluations << "\n";
  rn.emit("pp.csv", os.str());
  rn.emit("witness.field", dump_gradient_field(res.witness));
}

void run_time_constant(Runner& rn) {
  BoundedLaw law = rn.law();
  Vec x = rn.spec.get_vec("x");
  auto ns = rn.spec.get_int_list("n_list");
  long long reps = rn.spec.get_int("replicas");
  rn.spec.expect_all_consumed();
  auto pts = time_constant(law, x, ns, reps, rn.seed, rn.threads);
  std::ostringstream os;
  os << "# schema: n,mean,half_width,replicas (T(0,nx)/n with 95% normal CI)\n";
  for (const auto& p : pts)
    os << p.n << "," << format_double(p.mean) << "," << format_double(p.half_width)
       << "," << p.reps << "\n";
  rn.emit("tc.csv", os.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) + " - first passage percolation laboratory"};
  app.require_subcommand(1);

  Runner rn;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--spec", rn.spec_path, "experiment spec file")->required();
    sub->add_option("--seed", rn.seed, "master seed (overrides the spec file)")
        ->each([&](const std::string&) { rn.seed_overridden = true; });
    sub->add_option("--threads", rn.threads, "worker threads (speed only)");
    sub->add_option("--out", rn.out_dir, "output directory");
    sub->add_flag("--exact", rn.exact, "use exact enumeration where budgeted");
  };

  struct Cmd {
    const char* name;
    void (*fn)(Runner&);
  };
  const Cmd cmds[] = {
      {"simulate", run_simulate},
      {"geodesic", run_geodesic},
      {"crossing", run_crossing},
      {"ball", run_ball},
      {"rate-estimate", run_rate_estimate},
      {"elementary-rate", run_elementary_rate},
      {"assembly-check", run_assembly_check},
      {"functional", run_functional},
      {"point-point", run_point_point},
      {"time-constant", run_time_constant},
  };
  for (const Cmd& c : cmds) add_common(app.add_subcommand(c.name));

  CLI11_PARSE(app, argc, argv);

  const Cmd* chosen = nullptr;
  for (const Cmd& c : cmds)
    if (app.get_subcommand(c.name)->parsed()) chosen = &c;
  if (!chosen) {
    std::cerr << "no subcommand\n";
    return 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  try {
    rn.load();
    if (rn.spec.has("command") && rn.spec.get("command") != chosen->name)
      throw invalid_input("spec command does not match the subcommand");
    chosen->fn(rn);
  } catch (const budget_exceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const internal_invariant_violation& e) {
    std::cerr << "internal invariant violation: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return 2;
  }
  auto wall = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  rn.manifest(chosen->name, wall);
  return 0;
}
