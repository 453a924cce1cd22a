#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "isrsgn/config.hpp"
#include "isrsgn/csv.hpp"
#include "isrsgn/errors.hpp"
#include "isrsgn/gn_engine.hpp"
#include "isrsgn/metrics.hpp"
#include "isrsgn/raman.hpp"
#include "isrsgn/ssfm.hpp"
#include "isrsgn/units.hpp"
#include "isrsgn/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunContext {
  isrsgn::SystemConfig config;
  fs::path out_dir;
  std::vector<double> powers_dbm;
  std::vector<int> spans;
  int jobs = 0;
  bool force = false;
  json manifest_outputs = json::array();
};

std::string power_tag(double dbm) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", dbm);
  std::string s(buf);
  for (auto& c : s)
    if (c == '.') c = 'p';
  return s + "dbm";
}

void ensure_writable(const RunContext& ctx, const fs::path& p) {
  if (!ctx.force && fs::exists(p))
    throw isrsgn::config_error("output exists (use --force to overwrite): " + p.string());
}

void write_sidecar(RunContext& ctx, const fs::path& csv, const std::string& x_label,
                   const std::string& y_label, const std::string& title) {
  json side;
  side["title"] = title;
  side["x"] = {{"column", "f_thz"}, {"label", x_label}};
  side["y"] = {{"label", y_label}, {"scale", "dB"}};
  const fs::path p = csv.string() + ".plot.json";
  std::ofstream(p) << side.dump(2) << "\n";
}

void record_output(RunContext& ctx, const fs::path& p, const std::string& kind) {
  ctx.manifest_outputs.push_back({{"file", p.filename().string()}, {"kind", kind}});
}

isrsgn::WdmSpectrum spectrum_at_power(const isrsgn::SystemConfig& cfg, double p_dbm) {
  isrsgn::SystemConfig c = cfg;
  c.launch_power_dbm_total = p_dbm;
  c.launch_power_dbm_per_channel.clear();
  return c.spectrum();
}

std::vector<double> snr_column(const isrsgn::SystemConfig& cfg, const isrsgn::WdmSpectrum& spec,
                               const isrsgn::NliResult& nli, const isrsgn::PowerProfile& prof) {
  isrsgn::LinkSpec link = cfg.link();
  link.span_count = nli.span_count;
  const auto budget = isrsgn::compute_link_budget(spec, link, nli, prof);
  std::vector<double> snr;
  for (const auto& e : budget.entries) snr.push_back(e.snr_db);
  return snr;
}

json quad_diagnostics(const isrsgn::NliResult& nli) {
  long long evals = 0;
  double worst = 0.0;
  for (const auto& ch : nli.channels) {
    evals += ch.kernel_evals;
    worst = std::max(worst, ch.quad_rel_err);
  }
  return {{"kernel_evals", evals},
          {"max_rel_error_estimate", worst},
          {"kernel_z_points", nli.kernel_z_points}};
}

void task_profile(RunContext& ctx, json& diag) {
  const auto fiber = ctx.config.fiber();
  for (double p_dbm : ctx.powers_dbm) {
    const auto spec = spectrum_at_power(ctx.config, p_dbm);
    const auto analytic = isrsgn::make_analytical_profile(spec, fiber);
    std::vector<double> zgrid;
    for (int i = 0; i <= 200; ++i) zgrid.push_back(fiber.length_m * i / 200);
    isrsgn::RamanOdeOptions ode_opts;
    ode_opts.photon_factor = ctx.config.photon();
    const auto ode = isrsgn::solve_raman_ode(spec, fiber, zgrid, ode_opts);
    for (const auto* prof : {&analytic, &ode}) {
      const bool is_ode = prof == &ode;
      const fs::path p =
          ctx.out_dir / ("profile_" + std::string(is_ode ? "ode_" : "analytical_") +
                         power_tag(p_dbm) + ".csv");
      ensure_writable(ctx, p);
      isrsgn::write_profile_csv(p.string(), *prof, spec, {fiber.length_m});
      write_sidecar(ctx, p, "Channel frequency [THz]", "Net gain [dB]",
                    "ISRS net gain after one span");
      record_output(ctx, p, is_ode ? "profile-ode" : "profile-analytical");
    }
  }
  diag["task"] = "profile";
}

void task_case_study(RunContext& ctx, json& diag) {
  const auto fiber = ctx.config.fiber();
  auto quad = ctx.config.quadrature();
  quad.jobs = ctx.jobs;
  json per_run = json::array();
  for (double p_dbm : ctx.powers_dbm) {
    const auto spec = spectrum_at_power(ctx.config, p_dbm);
    const auto prof = isrsgn::make_analytical_profile(spec, fiber);
    for (int n : ctx.spans) {
      std::cerr << "case-study: P=" << p_dbm << " dBm, n=" << n << "\n";
      const auto nli =
          isrsgn::compute_nli(spec, fiber, n, ctx.config.model_variant(), quad);
      const fs::path p =
          ctx.out_dir / ("eta_" + power_tag(p_dbm) + "_n" + std::to_string(n) + ".csv");
      ensure_writable(ctx, p);
      isrsgn::write_nli_csv(p.string(), nli, snr_column(ctx.config, spec, nli, prof));
      write_sidecar(ctx, p, "Channel frequency [THz]", "NLI coefficient [dB(1/W^2)]",
                    "NLI coefficient vs channel frequency");
      record_output(ctx, p, "eta");
      per_run.push_back({{"power_dbm", p_dbm}, {"spans", n}, {"quadrature", quad_diagnostics(nli)}});
    }
  }
  diag["task"] = "case-study";
  diag["runs"] = per_run;
}

void task_compare_baselines(RunContext& ctx, json& diag) {
  const auto fiber = ctx.config.fiber();
  auto quad = ctx.config.quadrature();
  quad.jobs = ctx.jobs;
  json per_run = json::array();
  for (double p_dbm : ctx.powers_dbm) {
    const auto spec = spectrum_at_power(ctx.config, p_dbm);
    const int n = ctx.spans.empty() ? 1 : ctx.spans.front();
    std::cerr << "compare-baselines: P=" << p_dbm << " dBm\n";
    const auto ref =
        isrsgn::compute_nli(spec, fiber, n, isrsgn::ModelVariant::IsrsAnalytical, quad);
    const auto swapped =
        isrsgn::compute_nli(spec, fiber, n, isrsgn::ModelVariant::BaselineSwappedRho, quad);
    const auto effatt =
        isrsgn::compute_nli(spec, fiber, n, isrsgn::ModelVariant::BaselineEffectiveAtt, quad);
    isrsgn::CsvTable t;
    t.header = {"f_thz", "eta_db", "dev_swapped_db", "dev_effatt_db"};
    for (std::size_t i = 0; i < ref.channels.size(); ++i) {
      const double eta = ref.channels[i].eta_per_w2;
      t.rows.push_back(
          {isrsgn::format_double(ref.channels[i].f_hz / 1e12),
           isrsgn::format_double(10 * std::log10(eta)),
           isrsgn::format_double(10 * std::log10(swapped.channels[i].eta_per_w2 / eta)),
           isrsgn::format_double(10 * std::log10(effatt.channels[i].eta_per_w2 / eta))});
    }
    const fs::path p = ctx.out_dir / ("baseline_dev_" + power_tag(p_dbm) + ".csv");
    ensure_writable(ctx, p);
    isrsgn::write_csv(p.string(), t);
    write_sidecar(ctx, p, "Channel frequency [THz]", "NLI coefficient deviation [dB]",
                  "Baseline deviation from the reference model");
    record_output(ctx, p, "baseline-deviation");
    per_run.push_back({{"power_dbm", p_dbm}, {"quadrature", quad_diagnostics(ref)}});
  }
  diag["task"] = "compare-baselines";
  diag["runs"] = per_run;
}

void task_validate(RunContext& ctx, json& diag) {
  const auto fiber = ctx.config.fiber();
  auto quad = ctx.config.quadrature();
  quad.jobs = ctx.jobs;
  json per_run = json::array();
  for (double p_dbm : ctx.powers_dbm) {
    const auto spec = spectrum_at_power(ctx.config, p_dbm);
    const int n = ctx.spans.empty() ? ctx.config.spans : ctx.spans.front();
    std::cerr << "validate: P=" << p_dbm << " dBm (model)\n";
    const auto nli = isrsgn::compute_nli(spec, fiber, n, ctx.config.model_variant(), quad);
    const fs::path pm = ctx.out_dir / ("model_" + power_tag(p_dbm) + ".csv");
    ensure_writable(ctx, pm);
    isrsgn::write_nli_csv(pm.string(), nli, {});
    record_output(ctx, pm, "model-eta");
    std::cerr << "validate: P=" << p_dbm << " dBm (split-step)\n";
    auto sim_cfg = ctx.config.simulation();
    const double scale = isrsgn::units::dbm_to_watt(p_dbm) / sim_cfg.spectrum.total_power();
    for (auto& ch : sim_cfg.spectrum.channels) ch.power_w *= scale;
    sim_cfg.span_count = n;
    const auto sim = isrsgn::ssfm_simulate(sim_cfg);
    const fs::path ps = ctx.out_dir / ("sim_" + power_tag(p_dbm) + ".csv");
    ensure_writable(ctx, ps);
    isrsgn::write_sim_csv(ps.string(), sim);
    record_output(ctx, ps, "sim-eta");
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < nli.channels.size(); ++i) {
      const double dev = std::abs(10 * std::log10(sim.channels[i].eta_per_w2 /
                                                  nli.channels[i].eta_per_w2));
      worst = std::max(worst, dev);
    }
    per_run.push_back({{"power_dbm", p_dbm},
                       {"max_interior_eta_dev_db", worst},
                       {"quadrature", quad_diagnostics(nli)}});
    std::cerr << "validate: P=" << p_dbm << " dBm max interior |d eta| = " << worst << " dB\n";
  }
  diag["task"] = "validate";
  diag["runs"] = per_run;
}

void task_sweep(RunContext& ctx, json& diag) {
  const auto fiber = ctx.config.fiber();
  auto quad = ctx.config.quadrature();
  quad.jobs = ctx.jobs;
  isrsgn::CsvTable t;
  t.header = {"f_thz", "p_dbm", "n_spans", "eta_db", "g_nli_w_per_hz"};
  for (double p_dbm : ctx.powers_dbm) {
    const auto spec = spectrum_at_power(ctx.config, p_dbm);
    for (int n : ctx.spans) {
      std::cerr << "sweep: P=" << p_dbm << " dBm, n=" << n << "\n";
      const auto nli = isrsgn::compute_nli(spec, fiber, n, ctx.config.model_variant(), quad);
      for (const auto& ch : nli.channels)
        t.rows.push_back({isrsgn::format_double(ch.f_hz / 1e12), isrsgn::format_double(p_dbm),
                          std::to_string(n),
                          isrsgn::format_double(10 * std::log10(ch.eta_per_w2)),
                          isrsgn::format_double(ch.g_nli_w_per_hz)});
    }
  }
  const fs::path p = ctx.out_dir / "sweep.csv";
  ensure_writable(ctx, p);
  isrsgn::write_csv(p.string(), t);
  record_output(ctx, p, "sweep");
  diag["task"] = "sweep";
}

int run_diff(const std::string& a, const std::string& b, double tol_db) {
  const auto ta = isrsgn::read_csv(a);
  const auto tb = isrsgn::read_csv(b);
  const int fa = ta.column("f_thz"), fb = tb.column("f_thz");
  if (fa < 0 || fb < 0) throw isrsgn::config_error("diff: files need an f_thz column");
  if (ta.rows.size() != tb.rows.size())
    throw isrsgn::config_error("diff: row count mismatch (" + std::to_string(ta.rows.size()) +
                               " vs " + std::to_string(tb.rows.size()) + ")");
  int col_a = ta.column("eta_db"), col_b = tb.column("eta_db");
  if (col_a < 0 || col_b < 0) {
    col_a = ta.column("snr_db");
    col_b = tb.column("snr_db");
  }
  if (col_a < 0 || col_b < 0)
    throw isrsgn::config_error("diff: no shared eta_db or snr_db column");
  double max_dev = 0.0, sum = 0.0;
  for (std::size_t r = 0; r < ta.rows.size(); ++r) {
    const double f1 = ta.number(r, fa), f2 = tb.number(r, fb);
    if (std::abs(f1 - f2) > 1e-9)
      throw isrsgn::config_error("diff: channel grids differ at f = " +
                                 isrsgn::format_double(f1) + " THz vs " +
                                 isrsgn::format_double(f2) + " THz");
    const double d = std::abs(ta.number(r, col_a) - tb.number(r, col_b));
    max_dev = std::max(max_dev, d);
    sum += d;
  }
  const double mean = ta.rows.empty() ? 0.0 : sum / ta.rows.size();
  const bool pass = max_dev <= tol_db;
  std::cout << "rows=" << ta.rows.size() << " max_db=" << max_dev << " mean_db=" << mean
            << " tol_db=" << tol_db << " verdict=" << (pass ? "pass" : "fail") << "\n";
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wideband WDM nonlinear-interference engine"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run scenario tasks from a config file");
  std::string config_path, task, out_dir = "out";
  std::vector<double> powers;
  std::vector<int> spans;
  int jobs = 0;
  std::int64_t seed_override = -1;
  bool force = false;
  run->add_option("--config", config_path, "config file")->required();
  run->add_option("--task", task, "profile | validate | case-study | compare-baselines | sweep")
      ->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--power-dbm", powers, "total launch powers to evaluate");
  run->add_option("--spans", spans, "span counts to evaluate");
  run->add_option("--jobs", jobs, "worker threads (0 = hardware)");
  run->add_option("--seed", seed_override, "override simulation seed");
  run->add_flag("--force", force, "overwrite existing outputs");

  auto* diff = app.add_subcommand("diff", "compare two result CSV files in dB");
  std::string diff_a, diff_b;
  double tol_db = 0.1;
  diff->add_option("file_a", diff_a)->required();
  diff->add_option("file_b", diff_b)->required();
  diff->add_option("--tol-db", tol_db, "max per-channel deviation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (diff->parsed()) return run_diff(diff_a, diff_b, tol_db);

    RunContext ctx;
    ctx.config = isrsgn::load_config(config_path);
    if (seed_override >= 0) ctx.config.seed = static_cast<std::uint64_t>(seed_override);
    ctx.out_dir = out_dir;
    ctx.jobs = jobs;
    ctx.force = force;
    ctx.powers_dbm = powers;
    if (ctx.powers_dbm.empty()) {
      if (ctx.config.launch_power_dbm_total)
        ctx.powers_dbm.push_back(*ctx.config.launch_power_dbm_total);
      else
        ctx.powers_dbm.push_back(
            isrsgn::units::watt_to_dbm(ctx.config.spectrum().total_power()));
    }
    ctx.spans = spans;
    if (ctx.spans.empty()) ctx.spans.push_back(ctx.config.spans);

    static const std::set<std::string> known = {"profile", "validate", "case-study",
                                                "compare-baselines", "sweep"};
    if (!known.count(task)) {
      std::cerr << "unknown task '" << task << "'\n";
      return 2;
    }
    fs::create_directories(ctx.out_dir);

    json manifest;
    manifest["tool"] = "isrsgn";
    manifest["version"] = isrsgn::kVersion;
    manifest["task"] = task;
    manifest["config_path"] = config_path;
    manifest["config"] = ctx.config.serialize();
    manifest["powers_dbm"] = ctx.powers_dbm;
    manifest["spans"] = ctx.spans;
    manifest["seed"] = ctx.config.seed;

    json diag;
    try {
      if (task == "profile")
        task_profile(ctx, diag);
      else if (task == "case-study")
        task_case_study(ctx, diag);
      else if (task == "compare-baselines")
        task_compare_baselines(ctx, diag);
      else if (task == "validate")
        task_validate(ctx, diag);
      else
        task_sweep(ctx, diag);
    } catch (const isrsgn::config_error&) {
      throw;
    } catch (const std::exception& e) {
      // Task failures still produce a manifest naming the failure.
      manifest["error"] = e.what();
      manifest["outputs"] = ctx.manifest_outputs;
      std::ofstream(ctx.out_dir / "manifest.json") << manifest.dump(2) << "\n";
      std::cerr << "task failed: " << e.what() << "\n";
      return 1;
    }
    manifest["diagnostics"] = diag;
    manifest["outputs"] = ctx.manifest_outputs;
    const fs::path mp = ctx.out_dir / "manifest.json";
    if (!ctx.force && fs::exists(mp))
      throw isrsgn::config_error("output exists (use --force to overwrite): " + mp.string());
    std::ofstream(mp) << manifest.dump(2) << "\n";
    return 0;
  } catch (const isrsgn::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
