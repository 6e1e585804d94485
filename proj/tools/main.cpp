// potg command-line interface.
//
//   potg run      --config C [--out D] [--seed N] [--quiet]
//   potg sweep    --config C [--out D] [--seed N] [--jobs J] [--quiet]
//   potg validate --config C [--quiet]
//   potg gap      --config C --profile P [--quiet]
//   potg info     --config C [--eps E] [--quiet]
//
// Exit code 0 on success; nonzero with a diagnostic on stderr for any hard
// error (parse failure, invalid config, failed run).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "potg/potg.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_out) {
  cmd->add_option("--config", args.config_path, "configuration file (JSON, comments allowed)")
      ->required();
  if (with_out)
    cmd->add_option("--out", args.out_dir, "output directory (default: config's `output`)");
  cmd->add_option("--seed", args.seed, "override the config seed")
      ->each([&](const std::string&) { args.seed_set = true; });
  cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

potg::ExperimentConfig load(const CommonArgs& args) {
  potg::ExperimentConfig cfg = potg::load_config(args.config_path);
  if (args.seed_set) cfg.solver.seed = args.seed;
  return cfg;
}

std::filesystem::path output_dir(const CommonArgs& args, const potg::ExperimentConfig& cfg) {
  if (!args.out_dir.empty()) return args.out_dir;
  return cfg.base_dir / cfg.output;
}

int cmd_run(const CommonArgs& args) {
  const potg::ExperimentConfig cfg = load(args);
  const potg::RunRecord rec = potg::run_single(cfg, output_dir(args, cfg), args.quiet);
  if (!rec.ok) {
    std::fprintf(stderr, "run failed: %s\n", rec.error.c_str());
    return 1;
  }
  if (!args.quiet)
    std::printf("wrote %s\n      %s\n      %s\n      %s\n", rec.trajectory_csv.c_str(),
                rec.profile_file.c_str(), rec.spider_svg.c_str(), rec.metrics_svg.c_str());
  std::printf("final: phi %.6g, nash gap %.6g, violation %.6g, multiplier sum %.6g\n",
              rec.final_phi, rec.final_nash_gap, rec.final_violation, rec.final_lambda_sum);
  return 0;
}

int cmd_sweep(const CommonArgs& args, unsigned jobs) {
  const potg::ExperimentConfig cfg = load(args);
  const potg::SweepResult result = potg::run_sweep(cfg, output_dir(args, cfg), jobs, args.quiet);
  std::printf("sweep: %zu runs, %zu failed; summary at %s\n", result.records.size(),
              result.failures, result.summary_csv.c_str());
  return result.failures == result.records.size() && !result.records.empty() ? 1 : 0;
}

int cmd_validate(const CommonArgs& args) {
  const potg::ExperimentConfig cfg = load(args);
  const auto diags = potg::validate_config(cfg);
  bool any_error = false;
  for (const auto& d : diags) {
    any_error |= d.error;
    std::fprintf(d.error ? stderr : stdout, "%s: %s\n", d.error ? "error" : "warning",
                 d.message.c_str());
  }
  if (!any_error && !args.quiet) std::printf("config ok (%zu warnings)\n", diags.size());
  return any_error ? 1 : 0;
}

int cmd_gap(const CommonArgs& args, const std::string& profile_path) {
  const potg::ExperimentConfig cfg = load(args);
  const potg::ResolvedInstance inst = potg::resolve_instance(cfg);

  std::ifstream in(profile_path);
  if (!in) throw std::runtime_error("cannot open profile: " + profile_path);
  const potg::json doc = potg::json::parse(in, nullptr, true, /*ignore_comments=*/true);
  potg::MixedProfile x;
  x.strategies = doc.at("strategies").get<std::vector<std::vector<double>>>();

  const potg::NashGapReport report = potg::nash_gap(inst.game, inst.constraints, x);
  const double viol = potg::violation(inst.constraints, x);
  for (std::size_t i = 0; i < report.per_player.size(); ++i)
    std::printf("player %zu: gap %.10g\n", i, report.per_player[i]);
  std::printf("total gap: %.10g\nviolation: %.10g\n", report.total, viol);
  return 0;
}

int cmd_info(const CommonArgs& args, double eps) {
  const potg::ExperimentConfig cfg = load(args);
  const potg::ResolvedInstance inst = potg::resolve_instance(cfg);
  const auto& game = inst.game;
  const auto& cs = inst.constraints;

  double phi_max = game.potential.front(), phi_min = game.potential.front();
  for (double v : game.potential) {
    phi_max = std::max(phi_max, v);
    phi_min = std::min(phi_min, v);
  }
  std::printf("players:              %d\n", game.space.players());
  std::printf("actions per player:   ");
  for (int a : game.space.actions) std::printf("%d ", a);
  std::printf("\njoint profiles:       %zu\n", game.space.profile_count());
  std::printf("potential range:      [%.6g, %.6g]\n", phi_min, phi_max);
  std::printf("constraints (total):  %d\n", cs.total_constraints());
  if (cs.total_constraints() > 0) {
    std::printf("g_max:                %.6g\n", potg::g_max(cs));
    std::printf("multiplier norm cap:  %.6g (mu = %g)\n",
                potg::lambda_norm_bound(cs, cfg.solver.mu), cfg.solver.mu);
  }
  for (int i = 0; i < cs.players(); ++i) {
    if (cs.constraint_count(i) == 0) continue;
    const double margin = potg::slater_margin(cs, i);
    std::printf("player %d margin:      %.6g", i, margin);
    if (margin < 0.0)
      std::printf("  (multiplier bound %.6g)\n",
                  potg::optimal_multiplier_bound(game, cs, i));
    else
      std::printf("  (multiplier bound unavailable)\n");
  }
  std::printf("recommended eta:      %.6g\n", potg::recommended_step(game, cs, cfg.solver.mu));
  std::printf("iterations for eps=%g: %.4g\n", eps,
              potg::recommended_iterations(game, cs, cfg.solver.mu, eps));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium search in constrained potential games"};
  app.require_subcommand(1);

  CommonArgs run_args, sweep_args, validate_args, gap_args, info_args;
  unsigned jobs = 0;
  std::string profile_path;
  double eps = 0.01;

  add_common(app.add_subcommand("run", "solve one configuration"), run_args, true);
  auto* sweep = app.add_subcommand("sweep", "run the hyperparameter sweep grid");
  add_common(sweep, sweep_args, true);
  sweep->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
  add_common(app.add_subcommand("validate", "check a configuration"), validate_args, false);
  auto* gap = app.add_subcommand("gap", "Nash gap of a saved profile");
  add_common(gap, gap_args, false);
  gap->add_option("--profile", profile_path, "profile JSON written by `run`")->required();
  auto* info = app.add_subcommand("info", "instance bounds and step-size/iteration estimates");
  add_common(info, info_args, false);
  info->add_option("--eps", eps, "stationarity target for the iteration estimate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("run")) return cmd_run(run_args);
    if (app.got_subcommand("sweep")) return cmd_sweep(sweep_args, jobs);
    if (app.got_subcommand("validate")) return cmd_validate(validate_args);
    if (app.got_subcommand("gap")) return cmd_gap(gap_args, profile_path);
    if (app.got_subcommand("info")) return cmd_info(info_args, eps);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
