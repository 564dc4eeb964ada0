// Command-line front end: one subcommand per analysis, JSON/CSV outputs plus
// a run manifest, deterministic for fixed inputs.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qk/asymptotics.hpp"
#include "qk/density.hpp"
#include "qk/discrete.hpp"
#include "qk/kernel.hpp"
#include "qk/model.hpp"
#include "qk/oracle.hpp"
#include "qk/sphere.hpp"
#include "qk/transforms.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Ctx {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "csv";
  qk::Model model;
  json params = json::object();
  std::vector<std::string> outputs;
};

qk::Model load_config(const std::string& path) {
  if (path.empty()) throw qk::config_error("--config is required");
  return qk::load_model_file(path);
}

const qk::ContinuousModel& as_continuous(const qk::Model& m) {
  if (!std::holds_alternative<qk::ContinuousModel>(m))
    throw qk::config_error("this command needs a continuous model config");
  return std::get<qk::ContinuousModel>(m);
}

const qk::DiscreteModel& as_discrete(const qk::Model& m) {
  if (!std::holds_alternative<qk::DiscreteModel>(m))
    throw qk::config_error("this command needs a discrete model config");
  return std::get<qk::DiscreteModel>(m);
}

// CSV text -> JSON array of row objects (numbers where cells parse as such).
json csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> header;
  json rows = json::array();
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      header = cells;
      first = false;
      continue;
    }
    json row = json::object();
    for (std::size_t i = 0; i < cells.size() && i < header.size(); ++i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (end && *end == '\0' && end != cells[i].c_str())
        row[header[i]] = v;
      else
        row[header[i]] = cells[i];
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_file(Ctx& ctx, const std::string& name, const std::string& text) {
  fs::create_directories(ctx.out_dir);
  const fs::path p = fs::path(ctx.out_dir) / name;
  std::ofstream out(p);
  if (!out) throw qk::config_error("cannot write " + p.string());
  out << text;
  ctx.outputs.push_back(name);  // relative to the manifest's directory
}

// Tabular output honoring --format: csv verbatim or a JSON row array.
void write_table(Ctx& ctx, const std::string& stem, const std::string& csv) {
  if (ctx.format == "json")
    write_file(ctx, stem + ".json", csv_to_json(csv).dump(2) + "\n");
  else
    write_file(ctx, stem + ".csv", csv);
}

void write_manifest(Ctx& ctx, const std::string& command) {
  json man;
  man["command"] = command;
  man["config"] = ctx.config_path;
  man["tool_version"] = kVersion;
  man["format"] = ctx.format;
  man["parameters"] = ctx.params;
  man["outputs"] = ctx.outputs;
  write_file(ctx, "manifest.json", man.dump(2) + "\n");
}

int cmd_analyze(Ctx& ctx, int npoints) {
  ctx.params["points"] = npoints;
  json rep;
  if (std::holds_alternative<qk::ContinuousModel>(ctx.model)) {
    const auto& m = std::get<qk::ContinuousModel>(ctx.model);
    const auto st = qk::validate_continuous(m);
    rep["stable"] = st.stable;
    rep["stability_conditions"] = st.condition_values;
    const auto bp1 = qk::branch_points(m, 1);
    const auto bp2 = qk::branch_points(m, 2);
    rep["theta1_pm"] = {bp1.low, bp1.high};
    rep["theta2_pm"] = {bp2.low, bp2.high};
    rep["beta"] = qk::beta_angle(m);
    const auto gr = qk::group_order(m);
    rep["group"] = gr.verdict == qk::GroupReport::Verdict::finite
                       ? "Finite(" + std::to_string(gr.order) + ")"
                       : "ExceedsBound";
    write_table(ctx, "curve", qk::curve_to_csv(qk::sample_curve_R(m, npoints)));
  } else {
    const auto& m = std::get<qk::DiscreteModel>(ctx.model);
    const auto rp = qk::validate_discrete(m);
    rep["family_sums"] = rp.family_sums;
    rep["interior_drift"] = rp.interior_drift;
    const auto dy = qk::discriminant_roots(m, 1);
    const auto dx = qk::discriminant_roots(m, 2);
    rep["y_roots"] = dy.roots;
    rep["y_inside"] = {dy.y1, dy.y2};
    rep["x_roots"] = dx.roots;
    rep["x_inside"] = {dx.y1, dx.y2};
    const auto gr = qk::walk_group_order(m);
    rep["group"] = gr.verdict == qk::WalkGroupReport::Verdict::finite
                       ? "Finite(" + std::to_string(gr.order) + ")"
                       : "ExceedsBound";
    write_table(ctx, "curve", qk::curve_to_csv(qk::sample_curve_M(m, npoints)));
  }
  write_file(ctx, "analyze.json", rep.dump(2) + "\n");
  write_manifest(ctx, "analyze");
  return 0;
}

int cmd_transform(Ctx& ctx, int npoints, const std::vector<std::string>& at) {
  const auto& m = as_continuous(ctx.model);
  ctx.params["points"] = npoints;
  ctx.params["at"] = at;
  std::vector<qk::TransformEval> evals;
  const auto curve = qk::sample_curve_R(m, npoints);
  for (const auto& cp : curve.points)
    evals.push_back({cp.value, qk::phi1(m, cp.value)});
  for (const auto& s : at) {
    double re = 0.0, im = 0.0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &re, &im) != 2)
      throw qk::config_error("--at expects re,im: " + s);
    const qk::cplx z(re, im);
    evals.push_back({z, qk::phi1(m, z)});
    evals.push_back({z, qk::phi2(m, z)});
    evals.push_back({z, qk::psi1(m, z)});
    evals.push_back({z, qk::psi2(m, z)});
  }
  write_table(ctx, "transforms", qk::transforms_to_csv(evals));
  json rep;
  rep["phi1_poles_theta2"] = qk::transform_pole_scan(m, 1);
  rep["phi2_poles_theta1"] = qk::transform_pole_scan(m, 2);
  write_file(ctx, "transform.json", rep.dump(2) + "\n");
  write_manifest(ctx, "transform");
  return 0;
}

int cmd_density(Ctx& ctx, int grid, double tmax, int norm_nodes) {
  const auto& m = as_continuous(ctx.model);
  ctx.params["grid"] = grid;
  ctx.params["tmax"] = tmax;
  ctx.params["norm_nodes"] = norm_nodes;
  std::vector<qk::DensityGridPoint> pts;
  for (int i = 1; i <= grid; ++i) {
    for (int j = 1; j <= grid; ++j) {
      const double x1 = tmax * i / (grid + 1.0);
      const double x2 = tmax * j / (grid + 1.0);
      pts.push_back({x1, x2, qk::density_at(m, x1, x2)});
    }
  }
  write_table(ctx, "density", qk::density_grid_csv(pts));
  json rep;
  rep["normalization"] = qk::normalization_check(m, tmax, norm_nodes);
  rep["tmax"] = tmax;
  write_file(ctx, "density.json", rep.dump(2) + "\n");
  write_manifest(ctx, "density");
  return 0;
}

int cmd_asymptotics(Ctx& ctx, int nalpha) {
  const auto& m = as_continuous(ctx.model);
  ctx.params["alphas"] = nalpha;
  std::vector<double> alphas;
  for (int i = 1; i <= nalpha; ++i)
    alphas.push_back(qk::kPi / 2 * i / (nalpha + 1.0));
  write_table(ctx, "regimes", qk::regime_sweep_csv(m, alphas));
  write_manifest(ctx, "asymptotics");
  return 0;
}

int cmd_group(Ctx& ctx) {
  if (std::holds_alternative<qk::ContinuousModel>(ctx.model)) {
    const auto gr = qk::group_order(std::get<qk::ContinuousModel>(ctx.model));
    write_file(ctx, "group.json", qk::group_report_json(gr) + "\n");
  } else {
    const auto gr = qk::walk_group_order(std::get<qk::DiscreteModel>(ctx.model));
    json rep;
    rep["finite"] = gr.verdict == qk::WalkGroupReport::Verdict::finite;
    rep["order"] = gr.order;
    rep["max_iter"] = gr.max_iter;
    rep["orbit_residuals"] = gr.orbit_residuals;
    write_file(ctx, "group.json", rep.dump(2) + "\n");
  }
  write_manifest(ctx, "group");
  return 0;
}

int cmd_simulate(Ctx& ctx, qk::SimConfig cfg, const std::vector<std::string>& thetas,
                 const std::string& scheme) {
  const auto& m = as_continuous(ctx.model);
  for (const auto& s : thetas) {
    double a = 0.0, b = 0.0;
    if (std::sscanf(s.c_str(), "%lf,%lf", &a, &b) != 2)
      throw qk::config_error("--theta expects re,im: " + s);
    cfg.laplace_thetas.push_back({a, b});
  }
  if (cfg.laplace_thetas.empty())
    cfg.laplace_thetas = {{-1.0, -1.0}, {-0.5, -0.5}};
  if (scheme == "clamp")
    cfg.scheme = qk::SimConfig::Scheme::clamp;
  else if (scheme != "mirror")
    throw qk::config_error("--scheme must be mirror or clamp");

  ctx.params["dt"] = cfg.dt;
  ctx.params["horizon"] = cfg.horizon;
  ctx.params["burn_in"] = cfg.burn_in;
  ctx.params["replicas"] = cfg.replicas;
  ctx.params["seed"] = cfg.seed;
  ctx.params["scheme"] = scheme;
  ctx.params["thetas"] = cfg.laplace_thetas;

  const qk::SimResult res = qk::simulate_srbm(m, cfg);
  fs::create_directories(ctx.out_dir);
  const std::string prefix = (fs::path(ctx.out_dir) / "sim").string();
  qk::save_sim_result(res, prefix);
  ctx.outputs.push_back("sim.json");
  ctx.outputs.push_back("sim.bin");
  write_table(ctx, "histogram", qk::sim_histogram_csv(res));

  json rep;
  for (std::size_t i = 0; i < cfg.laplace_thetas.size(); ++i) {
    const auto e = res.laplace_estimate(i);
    rep["laplace"].push_back({{"theta", cfg.laplace_thetas[i]},
                              {"mean", e.mean},
                              {"se", e.se}});
  }
  for (int axis : {1, 2}) {
    const auto mz = res.mean_z_estimate(axis);
    const auto lt = res.local_time_estimate(axis);
    rep["mean_z"].push_back({{"axis", axis}, {"mean", mz.mean}, {"se", mz.se}});
    rep["local_time"].push_back({{"axis", axis}, {"mean", lt.mean}, {"se", lt.se}});
  }
  write_file(ctx, "simulate.json", rep.dump(2) + "\n");
  write_manifest(ctx, "simulate");
  return 0;
}

int cmd_discrete(Ctx& ctx, int nalpha, int lattice_n) {
  const auto& m = as_discrete(ctx.model);
  ctx.params["alphas"] = nalpha;
  ctx.params["lattice"] = lattice_n;
  std::vector<double> alphas;
  for (int i = 1; i <= nalpha; ++i)
    alphas.push_back(qk::kPi / 2 * i / (nalpha + 1.0));
  write_table(ctx, "discrete", qk::discrete_sweep_csv(m, alphas));
  if (lattice_n > 0) {
    const auto sol = qk::lattice_stationary(m, lattice_n);
    json rep;
    rep["N"] = sol.N;
    rep["residual"] = sol.residual;
    // Mass stuck near the reflecting far walls: a truncation-bias gauge.
    double wall = 0.0, total = 0.0;
    for (int i = 0; i <= sol.N; ++i) {
      for (int j = 0; j <= sol.N; ++j) {
        total += sol.at(i, j);
        if (i > sol.N - 5 || j > sol.N - 5) wall += sol.at(i, j);
      }
    }
    rep["mass_total"] = total;
    rep["mass_within_5_of_wall"] = wall;
    std::vector<double> rs, vs;
    for (int i = 4; i <= std::min(14, sol.N / 2); ++i) {
      rs.push_back(i);
      vs.push_back(sol.at(i, i));
    }
    const auto fit = qk::fit_decay_rate(rs, vs);
    rep["diagonal_fit"] = {{"slope", fit.slope},
                           {"slope_se", fit.slope_se},
                           {"logr_coef", fit.logr_coef},
                           {"prefer_logr", fit.prefer_logr}};
    write_file(ctx, "lattice.json", rep.dump(2) + "\n");
  }
  write_manifest(ctx, "discrete");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrant reflected-process analytics"};
  app.require_subcommand(1);

  Ctx ctx;
  long long seed = -1;
  app.add_option("--config", ctx.config_path, "Model config JSON")->required(false);
  app.add_option("--out", ctx.out_dir, "Output directory");
  app.add_option("--seed", seed, "Seed for stochastic commands");
  app.add_option("--format", ctx.format, "Tabular output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));

  int npoints = 200;
  auto* analyze = app.add_subcommand("analyze", "Kernel/curve/group report");
  analyze->add_option("--points", npoints, "Curve sample count");

  std::vector<std::string> at_points;
  auto* transform = app.add_subcommand("transform", "Boundary transform tables");
  transform->add_option("--points", npoints, "Curve sample count");
  transform->add_option("--at", at_points, "Extra complex arguments re,im");

  int grid = 10, norm_nodes = 41;
  double tmax = 4.0;
  auto* density = app.add_subcommand("density", "Density grid + normalization");
  density->add_option("--grid", grid, "Grid points per axis");
  density->add_option("--tmax", tmax, "Box size");
  density->add_option("--norm-nodes", norm_nodes, "Normalization nodes per axis");

  int nalpha = 9;
  auto* asym = app.add_subcommand("asymptotics", "Regime sweep over ray angles");
  asym->add_option("--alphas", nalpha, "Number of angles in (0, pi/2)");

  app.add_subcommand("group", "Group finiteness verdict");

  qk::SimConfig scfg;
  std::vector<std::string> thetas;
  std::string scheme = "mirror";
  auto* sim = app.add_subcommand("simulate", "Monte Carlo oracle run");
  sim->add_option("--dt", scfg.dt, "Euler step");
  sim->add_option("--horizon", scfg.horizon, "Per-replica horizon");
  sim->add_option("--burn-in", scfg.burn_in, "Discarded initial span");
  sim->add_option("--replicas", scfg.replicas, "Replica count");
  sim->add_option("--theta", thetas, "Laplace test points re,im");
  sim->add_option("--scheme", scheme, "mirror|clamp");

  int lattice_n = 0;
  auto* disc = app.add_subcommand("discrete", "Discrete regime sweep");
  disc->add_option("--alphas", nalpha, "Number of angles in (0, pi/2)");
  disc->add_option("--lattice", lattice_n, "Also solve the truncated lattice (size N)");

  // global flags may follow the subcommand name
  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // bad flags and bad values are config errors
  }

  try {
    ctx.model = load_config(ctx.config_path);
    if (seed >= 0) scfg.seed = static_cast<std::uint64_t>(seed);
    if (analyze->parsed()) return cmd_analyze(ctx, npoints);
    if (transform->parsed()) return cmd_transform(ctx, npoints, at_points);
    if (density->parsed()) return cmd_density(ctx, grid, tmax, norm_nodes);
    if (asym->parsed()) return cmd_asymptotics(ctx, nalpha);
    if (app.get_subcommand("group")->parsed()) return cmd_group(ctx);
    if (sim->parsed()) return cmd_simulate(ctx, scfg, thetas, scheme);
    if (disc->parsed()) return cmd_discrete(ctx, nalpha, lattice_n);
    throw qk::config_error("unknown subcommand");
  } catch (const qk::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const qk::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
