// Batch front end: config ingestion, subcommand dispatch, deterministic
// CSV/JSON emission, and a per-run manifest.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "irspaoi/frame_timing.hpp"
#include "irspaoi/hitting.hpp"
#include "irspaoi/io.hpp"
#include "irspaoi/irs_field.hpp"
#include "irspaoi/mobility_mc.hpp"
#include "irspaoi/mrgp.hpp"
#include "irspaoi/paoi.hpp"
#include "irspaoi/scenario.hpp"

namespace {

using namespace irspaoi;

struct CliOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string kernel_mode, kernel_shift, leg_convention;

  double r_in = -1.0, r_out = -1.0;
  std::string variant;
  long trials = -1;
  double t_upd = 1.0;
  double t_upd_min = -1.0, t_upd_max = -1.0, t_upd_step = -1.0;
  double threshold_db = 30.0;
  double grid_step = 0.025;
  int azimuths = 64;
  long stride = 1;
  bool refine = false;
  std::string target = "exit";
  std::vector<double> radii{0.3, 0.8, 1.2, 1.7};
  std::vector<std::string> variants{"constant", "pause"};
};

ScenarioConfig effective_config(const CliOptions& o) {
  ScenarioConfig cfg =
      o.config_path.empty() ? ScenarioConfig{} : load_config(o.config_path);
  if (o.seed_set) cfg.numerics.rng_seed = o.seed;
  if (!o.kernel_mode.empty())
    cfg.kernel.mode = kernel_mode_from_string(o.kernel_mode);
  if (!o.kernel_shift.empty())
    cfg.kernel.shift = kernel_shift_from_string(o.kernel_shift);
  if (!o.leg_convention.empty())
    cfg.kernel.legs = leg_convention_from_string(o.leg_convention);
  if (!o.variant.empty())
    cfg.mobility.variant = mobility_variant_from_string(o.variant);
  if (o.r_in > 0) cfg.geometry.r_in = o.r_in;
  if (o.r_out > 0) cfg.geometry.r_out = o.r_out;
  if (o.trials > 0) cfg.numerics.mc_trials = o.trials;
  validate(cfg);
  return cfg;
}

void emit(const std::string& key, const std::string& value) {
  std::cout << key << "=" << value << "\n";
}

void emit(const std::string& key, double value) { emit(key, format_num(value)); }

PaoiGrid grid_from(const CliOptions& o, const PaoiGrid& dflt) {
  PaoiGrid g = dflt;
  if (o.t_upd_min > 0) g.t_min = o.t_upd_min;
  if (o.t_upd_max > 0) g.t_max = o.t_upd_max;
  if (o.t_upd_step > 0) g.step = o.t_upd_step;
  return g;
}

SnrField compute_field(const ScenarioConfig& cfg, const CliOptions& o) {
  double lam = cfg.radio.wavelength();
  PanelElements elems = element_positions(cfg.panel, cfg.geometry.p_irs, lam);
  std::vector<double> phases =
      wide_beam_profile(elems, cfg.panel, cfg.geometry.p_ap, cfg.geometry, lam);
  double span = cfg.geometry.r_out + 0.5;
  const Vec2& c = cfg.geometry.illum_center;
  GridSpec grid;
  grid.x_min = c[0] - span;
  grid.x_max = c[0] + span;
  grid.y_min = c[1] - span;
  grid.y_max = c[1] + span;
  grid.n_x = size_t(std::llround(2.0 * span / o.grid_step)) + 1;
  grid.n_y = grid.n_x;
  return snr_map(cfg, elems, phases, grid);
}

std::vector<WrittenFile> run_timing(const ScenarioConfig& cfg,
                                    const CliOptions& o,
                                    std::vector<std::string>& warnings) {
  FrameTiming t = derive_timing(cfg.frame, cfg.panel, cfg.geometry);
  CsvTable tab;
  tab.columns = {{"quantity", ""}, {"value", "see unit"}, {"unit", ""}};
  auto row = [&](const std::string& q, double v, const std::string& u) {
    tab.add_row({q, format_num(v), u});
    emit(q + (u == "s" ? "_s" : ""), v);
  };
  row("t_data", t.t_data, "s");
  row("t_p_ovh", t.t_p_ovh, "s");
  row("t_idle", t.t_idle, "s");
  row("t_irs", t.t_irs, "s");
  row("t_loc", t.t_loc, "s");
  row("t_conf", t.t_conf(), "s");
  row("t_d", t.t_d, "s");
  if (period_feasible(t, o.t_upd)) {
    row("t_upd", o.t_upd, "s");
    row("packets_per_update", double(packets_per_update(t, o.t_upd)), "1");
    row("t_ovh", overhead_time(t, o.t_upd), "s");
    row("t_tx", effective_tx_period(t, o.t_upd), "s");
  } else {
    warnings.push_back("update period " + format_num(o.t_upd) +
                       " s is infeasible: overhead leaves no data time");
  }
  return write_csv_with_sidecar(o.out_dir, "timing", tab,
                                "frame timing quantities and per-period overhead");
}

std::vector<WrittenFile> run_snr_map(const ScenarioConfig& cfg,
                                     const CliOptions& o,
                                     std::vector<std::string>&) {
  SnrField f = compute_field(cfg, o);
  CsvTable tab;
  tab.columns = {{"x", "m"}, {"y", "m"}, {"snr", "dB"}};
  for (size_t i = 0; i < f.x_grid.size(); ++i)
    for (size_t j = 0; j < f.y_grid.size(); ++j)
      tab.add_row({format_num(f.x_grid[i]), format_num(f.y_grid[j]),
                   format_num(f.at(i, j))});
  double best = -std::numeric_limits<double>::infinity();
  for (double v : f.snr_db) best = std::max(best, v);
  emit("grid_points", double(f.snr_db.size()));
  emit("center_snr_db",
       f.bilinear_db(cfg.geometry.illum_center[0], cfg.geometry.illum_center[1]));
  emit("max_snr_db", best);
  return write_csv_with_sidecar(o.out_dir, "snr_map", tab,
                                "beamformed SNR over the user plane");
}

std::vector<WrittenFile> run_illuminated_radius(const ScenarioConfig& cfg,
                                                const CliOptions& o,
                                                std::vector<std::string>& warnings) {
  SnrField f = compute_field(cfg, o);
  IlluminatedRadius r = illuminated_radius(f, o.threshold_db,
                                           cfg.geometry.illum_center, o.azimuths);
  if (r.center_below_threshold)
    warnings.push_back("footprint center is below the service threshold");
  double center_db =
      f.bilinear_db(cfg.geometry.illum_center[0], cfg.geometry.illum_center[1]);
  emit("threshold_db", o.threshold_db);
  emit("radius_m", r.radius);
  emit("center_snr_db", center_db);
  emit("center_below_threshold", r.center_below_threshold ? 1.0 : 0.0);
  CsvTable tab;
  tab.columns = {{"threshold", "dB"}, {"radius", "m"}, {"center_snr", "dB"}};
  tab.add_row({format_num(o.threshold_db), format_num(r.radius),
               format_num(center_db)});
  return write_csv_with_sidecar(o.out_dir, "illuminated_radius", tab,
                                "largest full-perimeter radius meeting the threshold");
}

std::vector<WrittenFile> run_hitting(const ScenarioConfig& cfg,
                                     const CliOptions& o,
                                     std::vector<std::string>&) {
  HittingCurves h = hitting_curves(cfg.mobility, cfg.geometry, cfg.numerics,
                                   cfg.kernel.legs);
  CsvTable tab;
  tab.columns = {{"t", "s"},
                 {"stays_inside", "1"},
                 {"stays_outside", "1"},
                 {"first_exit_cdf", "1"},
                 {"first_entry_cdf", "1"}};
  size_t stride = size_t(std::max(1L, o.stride));
  for (size_t i = 0; i < h.p_in.values.size(); i += stride)
    tab.add_row({format_num(double(i) * h.p_in.dt),
                 format_num(h.p_in.values[i]), format_num(h.p_out.values[i]),
                 format_num(h.exit_fp.cdf.values[i]),
                 format_num(h.entry_fp.cdf.values[i])});
  emit("variant", to_string(cfg.mobility.variant));
  emit("exit_terms", double(h.exit_fp.terms));
  emit("exit_tail_bound", h.exit_fp.tail_bound);
  emit("entry_terms", double(h.entry_fp.terms));
  emit("entry_tail_bound", h.entry_fp.tail_bound);
  return write_csv_with_sidecar(o.out_dir, "hitting", tab,
                                "first-hitting distributions for the illuminated disc");
}

std::vector<WrittenFile> run_validate(const ScenarioConfig& cfg,
                                      const CliOptions& o,
                                      std::vector<std::string>& warnings) {
  if (o.target != "exit" && o.target != "entry")
    throw std::invalid_argument("validation target must be exit or entry");
  HittingCurves h = hitting_curves(cfg.mobility, cfg.geometry, cfg.numerics,
                                   cfg.kernel.legs);
  const SampledCurve& ana =
      o.target == "exit" ? h.exit_fp.cdf : h.entry_fp.cdf;
  EmpiricalCdf mc =
      o.target == "exit"
          ? first_exit_time_mc(cfg.mobility, cfg.geometry.r_in,
                               cfg.geometry.r_out, StartMode::UniformInner,
                               cfg.numerics.mc_trials, cfg.numerics.rng_seed)
          : first_entry_time_mc(cfg.mobility, cfg.geometry.r_in,
                                cfg.geometry.r_out, cfg.numerics.mc_trials,
                                cfg.numerics.rng_seed);
  CsvTable tab;
  tab.columns = {{"t", "s"},
                 {"analytic_cdf", "1"},
                 {"empirical_cdf", "1"},
                 {"abs_diff", "1"}};
  double sup = 0.0;
  size_t stride = size_t(std::max(1L, o.stride));
  for (size_t i = 0; i < ana.values.size(); ++i) {
    double t = double(i) * ana.dt;
    double d = std::abs(ana.values[i] - mc.at(t));
    sup = std::max(sup, d);
    if (i % stride == 0)
      tab.add_row({format_num(t), format_num(ana.values[i]),
                   format_num(mc.at(t)), format_num(d)});
  }
  if (mc.censored > 0)
    warnings.push_back(format_num(double(mc.censored)) +
                       " trials hit the leg safety cap and were censored");
  emit("target", o.target);
  emit("variant", to_string(cfg.mobility.variant));
  emit("trials", double(mc.trials));
  emit("censored", double(mc.censored));
  emit("sup_norm", sup);
  return write_csv_with_sidecar(
      o.out_dir, "validate_" + o.target, tab,
      "analytic first-hitting CDF against the Monte Carlo empirical CDF");
}

std::vector<WrittenFile> run_steady_state(const ScenarioConfig& cfg,
                                          const CliOptions& o,
                                          std::vector<std::string>&) {
  FrameTiming t = derive_timing(cfg.frame, cfg.panel, cfg.geometry);
  HittingCurves h = hitting_curves(cfg.mobility, cfg.geometry, cfg.numerics,
                                   cfg.kernel.legs);
  CurveIntegral in_int(h.p_in), out_int(h.p_out);
  PaoiGrid grid = grid_from(o, PaoiGrid{0.01, 8.0, 0.01});
  CsvTable tab;
  tab.columns = {{"t_upd", "s"},  {"pi1", "1"},     {"pi2", "1"},
                 {"pi3", "1"},    {"pi2_adj", "1"}, {"pi3_adj", "1"}};
  size_t n = size_t(std::floor((grid.t_max - grid.t_min) / grid.step + 1e-9)) + 1;
  double crossover = -1.0;
  double prev_gap = 0.0, prev_t = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double t_upd = grid.t_min + double(i) * grid.step;
    SteadyState s = steady_state_at(t, cfg.mobility, cfg.geometry.r_in,
                                    cfg.kernel, t_upd, in_int, out_int);
    tab.add_row({format_num(t_upd), format_num(s.pi1), format_num(s.pi2),
                 format_num(s.pi3), format_num(s.pi2_adj),
                 format_num(s.pi3_adj)});
    double gap = s.pi2_adj - s.pi3_adj;
    if (i > 0 && crossover < 0 && prev_gap > 0 && gap <= 0)
      crossover = prev_t + grid.step * prev_gap / (prev_gap - gap);
    prev_gap = gap;
    prev_t = t_upd;
  }
  emit("variant", to_string(cfg.mobility.variant));
  if (crossover > 0)
    emit("crossover_s", crossover);
  else
    emit("crossover_s", std::string("none"));
  return write_csv_with_sidecar(o.out_dir, "steady_state", tab,
                                "regenerative state shares versus update period");
}

std::vector<WrittenFile> run_paoi_curve(const ScenarioConfig& cfg,
                                        const CliOptions& o,
                                        std::vector<std::string>& warnings,
                                        const std::string& stem) {
  FrameTiming t = derive_timing(cfg.frame, cfg.panel, cfg.geometry);
  HittingCurves h = hitting_curves(cfg.mobility, cfg.geometry, cfg.numerics,
                                   cfg.kernel.legs);
  PaoiGrid grid = grid_from(o, PaoiGrid{});
  PaoiCurve curve = paoi_curve(t, cfg.mobility, cfg.geometry.r_in, cfg.kernel,
                               h, grid);
  CsvTable tab;
  tab.columns = {{"t_upd", "s"},   {"paoi", "s"},    {"feasible", "1"},
                 {"overhead_ratio", "1"}, {"pi3", "1"}, {"pi3_adj", "1"}};
  size_t stride = size_t(std::max(1L, o.stride));
  for (size_t i = 0; i < curve.points.size(); i += stride) {
    const PaoiPoint& p = curve.points[i];
    tab.add_row({format_num(p.t_upd), format_num(p.feasible ? p.paoi : 0.0),
                 p.feasible ? "1" : "0", format_num(p.overhead_ratio),
                 format_num(p.pi3), format_num(p.pi3_adj)});
  }
  std::vector<WrittenFile> files = write_csv_with_sidecar(
      o.out_dir, stem, tab, "average peak age over the update-period grid");
  if (!curve.any_feasible) {
    warnings.push_back("no feasible update period in the grid");
    return files;
  }
  emit("variant", to_string(cfg.mobility.variant));
  emit("grid_points", double(curve.points.size()));
  emit("t_upd_opt_s", curve.t_upd_opt);
  emit("paoi_opt_s", curve.paoi_opt);
  if (o.refine || stem == "optimize_curve") {
    OptimizeResult res = optimize_t_upd(t, cfg.mobility, cfg.geometry.r_in,
                                        cfg.kernel, h, grid, o.refine);
    emit("refined", res.refined ? 1.0 : 0.0);
    emit("t_upd_opt_refined_s", res.t_upd_opt);
    emit("paoi_opt_refined_s", res.paoi_opt);
    emit("overhead_ratio_opt", res.overhead_ratio);
    CsvTable opt;
    opt.columns = {{"t_upd_opt", "s"},
                   {"paoi_opt", "s"},
                   {"overhead_ratio", "1"},
                   {"pi1", "1"},
                   {"pi2", "1"},
                   {"pi3", "1"}};
    opt.add_row({format_num(res.t_upd_opt), format_num(res.paoi_opt),
                 format_num(res.overhead_ratio), format_num(res.steady.pi1),
                 format_num(res.steady.pi2), format_num(res.steady.pi3)});
    auto extra = write_csv_with_sidecar(o.out_dir, "optimize_optimum", opt,
                                        "minimizer of the average peak age");
    files.insert(files.end(), extra.begin(), extra.end());
  } else {
    const PaoiPoint& p = curve.points[curve.argmin];
    emit("overhead_ratio_opt", p.overhead_ratio);
  }
  return files;
}

std::vector<WrittenFile> run_sweep_radius(const ScenarioConfig& cfg,
                                          const CliOptions& o,
                                          std::vector<std::string>& warnings) {
  FrameTiming t = derive_timing(cfg.frame, cfg.panel, cfg.geometry);
  std::vector<MobilityVariant> variants;
  for (const std::string& v : o.variants)
    variants.push_back(mobility_variant_from_string(v));
  PaoiGrid grid = grid_from(o, PaoiGrid{});
  SweepResult res = sweep_radius(cfg, t, o.radii, variants, grid);
  for (const std::string& e : res.cell_errors) warnings.push_back(e);
  CsvTable tab;
  tab.columns = {{"r_in", "m"},          {"variant", ""},
                 {"t_upd_opt", "s"},     {"paoi_opt", "s"},
                 {"overhead_ratio", "1"}, {"straight_exit_time", "s"}};
  for (const SweepRow& r : res.rows)
    tab.add_row({format_num(r.r_in), to_string(r.variant),
                 format_num(r.t_upd_opt), format_num(r.paoi_opt),
                 format_num(r.overhead_ratio),
                 format_num(r.straight_exit_time)});
  emit("rows", double(res.rows.size()));
  emit("cell_errors", double(res.cell_errors.size()));
  return write_csv_with_sidecar(o.out_dir, "sweep_radius", tab,
                                "optimal update period per radius and mobility variant");
}

std::string single_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Optimal IRS reconfiguration period via average peak age of information"};
  app.require_subcommand(1);
  CliOptions o;

  app.add_option("--config", o.config_path, "scenario config file (TOML subset)");
  app.add_option("--out", o.out_dir, "output directory (default: out)");
  auto* seed_opt = app.add_option("--seed", o.seed, "RNG seed override");
  app.add_option("--kernel-mode", o.kernel_mode,
                 "out-branch mode: complement|literal")
      ->check(CLI::IsMember({"complement", "literal"}));
  app.add_option("--kernel-shift", o.kernel_shift,
                 "inside-curve time shift: literal|delayed")
      ->check(CLI::IsMember({"literal", "delayed"}));
  app.add_option("--leg-convention", o.leg_convention,
                 "hitting-leg convention: include_last|exclude_last")
      ->check(CLI::IsMember({"include_last", "exclude_last"}));

  auto* c_timing = app.add_subcommand("timing", "derive frame timing");
  c_timing->add_option("--t-upd", o.t_upd, "update period for overhead report, s");

  auto* c_snr = app.add_subcommand("snr-map", "beamformed SNR over the user plane");
  c_snr->add_option("--grid-step", o.grid_step, "map grid step, m");

  auto* c_rad = app.add_subcommand("illuminated-radius",
                                   "largest full-perimeter radius above threshold");
  c_rad->add_option("--grid-step", o.grid_step, "map grid step, m");
  c_rad->add_option("--threshold-db", o.threshold_db, "service threshold, dB");
  c_rad->add_option("--azimuths", o.azimuths, "perimeter sample count");

  auto* c_hit = app.add_subcommand("hitting", "analytic first-hitting curves");
  auto* c_val = app.add_subcommand("validate",
                                   "analytic curves against Monte Carlo");
  c_val->add_option("--target", o.target, "exit|entry");
  c_val->add_option("--trials", o.trials, "Monte Carlo trials");

  auto* c_ss = app.add_subcommand("steady-state",
                                  "state shares versus update period");
  auto* c_curve = app.add_subcommand("paoi-curve", "average peak age curve");
  auto* c_opt = app.add_subcommand("optimize", "minimize average peak age");
  c_opt->add_flag("--refine", o.refine, "golden-section polish in the best cell");
  auto* c_sweep = app.add_subcommand("sweep-radius",
                                     "optimum per radius and variant");
  c_sweep->add_option("--radii", o.radii, "radii to sweep, m");
  c_sweep->add_option("--variants", o.variants, "mobility variants to sweep");

  for (CLI::App* sub : {c_hit, c_val, c_ss, c_curve, c_opt, c_sweep}) {
    sub->add_option("--r-in", o.r_in, "illuminated radius override, m");
    sub->add_option("--r-out", o.r_out, "mobility radius override, m");
    sub->add_option("--variant", o.variant, "mobility variant override");
  }
  for (CLI::App* sub : {c_ss, c_curve, c_opt, c_sweep}) {
    sub->add_option("--t-upd-min", o.t_upd_min, "grid start, s");
    sub->add_option("--t-upd-max", o.t_upd_max, "grid end, s");
    sub->add_option("--t-upd-step", o.t_upd_step, "grid step, s");
  }
  for (CLI::App* sub : {c_hit, c_val, c_curve, c_opt})
    sub->add_option("--stride", o.stride, "CSV row stride");
  for (CLI::App* sub : app.get_subcommands(
           [](const CLI::App*) { return true; }))
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: cli: " << single_line(e.what()) << std::endl;
    int code = e.get_exit_code();
    return code == 0 ? 2 : code;
  }
  o.seed_set = seed_opt->count() > 0;

  auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.config_path = o.config_path.empty() ? "(defaults)" : o.config_path;
  std::vector<CLI::App*> parsed = app.get_subcommands();
  if (!parsed.empty()) manifest.subcommand = parsed.front()->get_name();
  int status = 0;
  try {
    ScenarioConfig cfg = effective_config(o);
    manifest.seed = cfg.numerics.rng_seed;
    manifest.kernel_mode = to_string(cfg.kernel.mode);
    manifest.leg_convention = to_string(cfg.kernel.legs);
    manifest.config_hash_hex = hex64(fnv1a_64(serialize_config(cfg)));
    if (c_timing->parsed()) {
      manifest.outputs = run_timing(cfg, o, manifest.warnings);
    } else if (c_snr->parsed()) {
      manifest.outputs = run_snr_map(cfg, o, manifest.warnings);
    } else if (c_rad->parsed()) {
      manifest.outputs = run_illuminated_radius(cfg, o, manifest.warnings);
    } else if (c_hit->parsed()) {
      manifest.outputs = run_hitting(cfg, o, manifest.warnings);
    } else if (c_val->parsed()) {
      manifest.outputs = run_validate(cfg, o, manifest.warnings);
    } else if (c_ss->parsed()) {
      manifest.outputs = run_steady_state(cfg, o, manifest.warnings);
    } else if (c_curve->parsed()) {
      manifest.outputs = run_paoi_curve(cfg, o, manifest.warnings, "paoi_curve");
    } else if (c_opt->parsed()) {
      manifest.outputs = run_paoi_curve(cfg, o, manifest.warnings, "optimize_curve");
    } else if (c_sweep->parsed()) {
      manifest.outputs = run_sweep_radius(cfg, o, manifest.warnings);
    }
    for (const std::string& w : manifest.warnings)
      std::cout << "warning=" << single_line(w) << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << single_line(e.what()) << std::endl;
    manifest.warnings.push_back(std::string("error: ") + e.what());
    status = 1;
  }
  manifest.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  try {
    write_manifest(o.out_dir, manifest);
  } catch (const std::exception& e) {
    if (status == 0) {
      std::cerr << "error: " << single_line(e.what()) << std::endl;
      status = 1;
    }
  }
  return status;
}
