#pragma once

// Experiment runner: executes one configuration or a hyperparameter sweep,
// persisting for each run a trajectory CSV, the solution profile, a spider
// chart of final strategies, and metric curves.  Sweeps fan out over a worker
// pool — one subdirectory per run keeps writers from contending — and finish
// with a summary CSV plus an overlay chart of every run's Nash-gap curve.

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "potg/config.hpp"
#include "potg/metrics.hpp"
#include "potg/solver.hpp"
#include "potg/svg.hpp"

namespace potg {

struct RunRecord {
  std::string name;
  std::string fingerprint;
  std::filesystem::path trajectory_csv;
  std::filesystem::path profile_file;
  std::filesystem::path spider_svg;
  std::filesystem::path metrics_svg;
  bool ok = false;
  std::string error;

  // summary scalars from the last trajectory row
  double final_phi = 0.0;
  double final_nash_gap = 0.0;
  double final_violation = 0.0;
  double final_lambda_sum = 0.0;
  int best_iteration = 0;
  double best_displacement = 0.0;

  // hyperparameters this run used (budget/hw_slope only for congestion instances)
  double eta = 0.0, mu = 0.0;
  std::optional<double> budget, hw_slope;

  // (t, nash gap) curve kept in memory for sweep overlays
  std::vector<std::pair<double, double>> gap_curve;
};

namespace detail {

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline std::string trajectory_csv_text(const Trajectory& traj) {
  std::string csv = "t,phi,lagrangian,nash_gap,violation,lambda_sum,displacement\n";
  for (const auto& pt : traj) {
    csv += std::to_string(pt.t);
    csv += ',';
    csv += format_number(pt.phi);
    csv += ',';
    csv += format_number(pt.lagrangian);
    csv += ',';
    csv += format_number(pt.nash_gap);
    csv += ',';
    csv += format_number(pt.violation);
    csv += ',';
    csv += format_number(pt.lambda_sum);
    csv += ',';
    csv += format_number(pt.displacement);
    csv += '\n';
  }
  return csv;
}

inline json profile_json(const SolverState& solution, int players) {
  json doc;
  doc["players"] = players;
  doc["iteration"] = solution.iteration;
  doc["strategies"] = solution.x.strategies;
  doc["multipliers"] = solution.lambda;
  return doc;
}

inline MixedProfile initial_profile(const ActionSpace& space, const SolverConfig& solver) {
  if (solver.init == "uniform") return MixedProfile::uniform(space);
  if (solver.init != "dirichlet")
    throw std::invalid_argument("unknown init mode: " + solver.init);
  // Flat Dirichlet per player, deterministic in the seed.
  std::mt19937_64 rng(solver.seed);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  MixedProfile x;
  for (int a : space.actions) {
    std::vector<double> xi(static_cast<std::size_t>(a));
    double sum = 0.0;
    for (double& v : xi) {
      v = gamma(rng);
      sum += v;
    }
    for (double& v : xi) v /= sum;
    x.strategies.push_back(std::move(xi));
  }
  return x;
}

inline svg::ChartSpec metric_panel(const Trajectory& traj, const std::string& title,
                                   double TrajectoryPoint::* field, bool log_y) {
  svg::Series s;
  s.label = title;
  for (const auto& pt : traj) {
    s.xs.push_back(static_cast<double>(pt.t));
    s.ys.push_back(pt.*field);
  }
  svg::ChartSpec spec;
  spec.title = title;
  spec.x_label = "iteration";
  spec.y_label = title;
  spec.series = {std::move(s)};
  spec.log_y = log_y;
  spec.legend = false;
  return spec;
}

}  // namespace detail

// Runs one configuration and writes trajectory.csv, profile.json, spider.svg,
// and metrics.svg into out_dir.  Failures are captured in the record rather
// than thrown so sweeps can continue past a bad cell.
inline RunRecord run_single(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                            bool quiet = true) {
  RunRecord rec;
  rec.name = out_dir.filename().string();
  rec.eta = cfg.solver.eta;
  rec.mu = cfg.solver.mu;
  if (cfg.congestion && !cfg.congestion->budgets.empty()) {
    rec.budget = cfg.congestion->budgets.front();
    if (!cfg.congestion->network.paths.empty()) {
      const auto& hw = cfg.congestion->network.paths.back();
      rec.hw_slope = cfg.congestion->network.edges[static_cast<std::size_t>(hw.front())].slope;
    }
  }
  try {
    for (const auto& d : validate_config(cfg))
      if (d.error) throw std::invalid_argument(d.message);

    rec.fingerprint = config_fingerprint(cfg);
    const ResolvedInstance inst = resolve_instance(cfg);

    SolverParams params;
    params.mu = cfg.solver.mu;
    params.eta = cfg.solver.eta;
    params.iterations = cfg.solver.iterations;
    params.record_every = cfg.solver.record_every;

    const MixedProfile x0 = detail::initial_profile(inst.game.space, cfg.solver);
    const RunResult result = run(inst.game, inst.constraints, x0, params);

    std::filesystem::create_directories(out_dir);
    rec.trajectory_csv = out_dir / "trajectory.csv";
    rec.profile_file = out_dir / "profile.json";
    rec.spider_svg = out_dir / "spider.svg";
    rec.metrics_svg = out_dir / "metrics.svg";

    detail::write_text_file(rec.trajectory_csv, detail::trajectory_csv_text(result.trajectory));
    detail::write_text_file(rec.profile_file,
                            detail::profile_json(result.best, inst.game.space.players()).dump(2) + "\n");

    // Spider chart: one axis per action, one polygon per player (solution mix).
    std::vector<std::pair<std::string, std::vector<double>>> polys;
    for (int i = 0; i < inst.game.space.players(); ++i)
      polys.emplace_back("player " + std::to_string(i),
                         result.best.x.strategies[static_cast<std::size_t>(i)]);
    detail::write_text_file(rec.spider_svg,
                            svg::spider_chart("solution strategy mix", inst.action_names, polys));

    detail::write_text_file(
        rec.metrics_svg,
        svg::stacked_charts({detail::metric_panel(result.trajectory, "nash gap",
                                                  &TrajectoryPoint::nash_gap, true),
                             detail::metric_panel(result.trajectory, "constraint violation",
                                                  &TrajectoryPoint::violation, true),
                             detail::metric_panel(result.trajectory, "multiplier sum",
                                                  &TrajectoryPoint::lambda_sum, false)}));

    const TrajectoryPoint& last = result.trajectory.back();
    rec.final_phi = last.phi;
    rec.final_nash_gap = last.nash_gap;
    rec.final_violation = last.violation;
    rec.final_lambda_sum = last.lambda_sum;
    rec.best_iteration = result.best_iteration;
    rec.best_displacement = result.best_displacement;
    rec.gap_curve.reserve(result.trajectory.size());
    for (const auto& pt : result.trajectory)
      rec.gap_curve.emplace_back(static_cast<double>(pt.t), pt.nash_gap);
    rec.ok = true;

    if (!quiet)
      std::fprintf(stdout, "[%s] gap %.4g, violation %.4g, best step %d\n", rec.name.c_str(),
                   rec.final_nash_gap, rec.final_violation, rec.best_iteration);
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
    if (!quiet) std::fprintf(stderr, "[%s] failed: %s\n", rec.name.c_str(), e.what());
  }
  return rec;
}

struct SweepResult {
  std::vector<RunRecord> records;
  std::filesystem::path summary_csv;
  std::filesystem::path overlay_svg;
  std::size_t failures = 0;
};

namespace detail {

inline std::string grid_tag(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// One sweep cell: the base config with overrides applied.  Budgets apply to
// every player; hw_slope re-slopes the last path (the highway by convention).
inline ExperimentConfig apply_overrides(const ExperimentConfig& base, std::optional<double> budget,
                                        std::optional<double> eta, std::optional<double> mu,
                                        std::optional<double> hw_slope) {
  ExperimentConfig cfg = base;
  cfg.sweep.reset();
  if (eta) cfg.solver.eta = *eta;
  if (mu) cfg.solver.mu = *mu;
  if (budget || hw_slope) {
    if (!cfg.congestion)
      throw std::invalid_argument("budget/hw_slope sweeps need a congestion instance");
    if (budget)
      cfg.congestion->budgets.assign(cfg.congestion->budgets.size(), *budget);
    if (hw_slope)
      for (int e : cfg.congestion->network.paths.back())
        cfg.congestion->network.edges[static_cast<std::size_t>(e)].slope = *hw_slope;
  }
  return cfg;
}

}  // namespace detail

// Cartesian product of the sweep grids (budget, then eta, then mu, then
// hw_slope; absent grids keep the base value).  Runs execute on `jobs` worker
// threads, each into its own subdirectory.  Per-run failures are recorded in
// the summary and do not stop the sweep.
inline SweepResult run_sweep(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                             unsigned jobs = 0, bool quiet = true) {
  if (!cfg.sweep || !cfg.sweep->any())
    throw std::invalid_argument("run_sweep: config has no sweep grids");
  const SweepGrids& grids = *cfg.sweep;

  const auto axis = [](const std::vector<double>& g) {
    std::vector<std::optional<double>> out;
    if (g.empty())
      out.push_back(std::nullopt);
    else
      for (double v : g) out.push_back(v);
    return out;
  };
  const auto budgets = axis(grids.budget);
  const auto etas = axis(grids.eta);
  const auto mus = axis(grids.mu);
  const auto hws = axis(grids.hw_slope);

  struct Cell {
    ExperimentConfig config;
    std::filesystem::path dir;
  };
  std::vector<Cell> cells;
  std::size_t index = 0;
  for (const auto& b : budgets)
    for (const auto& e : etas)
      for (const auto& m : mus)
        for (const auto& h : hws) {
          ExperimentConfig cell = detail::apply_overrides(cfg, b, e, m, h);
          char prefix[16];
          std::snprintf(prefix, sizeof(prefix), "run_%03zu", index++);
          std::string name = prefix;
          if (b) name += "_gas" + detail::grid_tag(*b);
          if (e) name += "_eta" + detail::grid_tag(*e);
          if (m) name += "_mu" + detail::grid_tag(*m);
          if (h) name += "_hw" + detail::grid_tag(*h);
          cells.push_back(Cell{std::move(cell), out_dir / name});
        }

  std::vector<RunRecord> records(cells.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers =
      std::max(1u, jobs == 0 ? std::thread::hardware_concurrency() : jobs);
  const auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      records[k] = run_single(cells[k].config, cells[k].dir, quiet);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers && w < cells.size(); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepResult result;
  result.records = std::move(records);

  std::string csv =
      "run,gas_budget,eta,mu,hw_slope,status,fingerprint,best_iteration,"
      "final_phi,final_nash_gap,final_violation,final_lambda_sum,error\n";
  const auto opt_cell = [](const std::optional<double>& v) {
    return v ? detail::format_number(*v) : std::string{};
  };
  const auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += "\"\"";
      else q += c;
    }
    q += '"';
    return q;
  };
  for (const auto& rec : result.records) {
    if (!rec.ok) ++result.failures;
    csv += rec.name + ',' + opt_cell(rec.budget) + ',' + detail::format_number(rec.eta) + ',' +
           detail::format_number(rec.mu) + ',' + opt_cell(rec.hw_slope) + ',' +
           (rec.ok ? "ok" : "failed") + ',' + rec.fingerprint + ',' +
           std::to_string(rec.best_iteration) + ',' + detail::format_number(rec.final_phi) + ',' +
           detail::format_number(rec.final_nash_gap) + ',' +
           detail::format_number(rec.final_violation) + ',' +
           detail::format_number(rec.final_lambda_sum) + ',' + quote(rec.error) + '\n';
  }
  std::filesystem::create_directories(out_dir);
  result.summary_csv = out_dir / "summary.csv";
  detail::write_text_file(result.summary_csv, csv);

  svg::ChartSpec overlay;
  overlay.title = "nash gap across sweep";
  overlay.x_label = "iteration";
  overlay.y_label = "nash gap";
  overlay.log_y = true;
  for (const auto& rec : result.records) {
    if (!rec.ok) continue;
    svg::Series s;
    s.label = rec.name;
    for (const auto& [t, gap] : rec.gap_curve) {
      s.xs.push_back(t);
      s.ys.push_back(gap);
    }
    overlay.series.push_back(std::move(s));
  }
  result.overlay_svg = out_dir / "nash_gap_overlay.svg";
  detail::write_text_file(result.overlay_svg, svg::line_chart(overlay, 760.0, 420.0));
  return result;
}

}  // namespace potg
