#pragma once

// Experiment configuration: a single JSON document (comments allowed) that
// names an instance — the built-in highway network, an inline path list, or a
// serialized game file — plus solver parameters, optional sweep grids, and an
// output directory.  Loading, validation diagnostics, instance resolution,
// and the config fingerprint all live here.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "potg/congestion.hpp"
#include "potg/constraints.hpp"
#include "potg/game.hpp"
#include "potg/metrics.hpp"

namespace potg {

using json = nlohmann::json;

struct SolverConfig {
  double mu = 1e-3;
  double eta = 1e-3;
  int iterations = 10'000;
  int record_every = 1;
  std::uint64_t seed = 0;
  std::string init = "uniform";  // "uniform" or "dirichlet"
};

struct SweepGrids {
  std::vector<double> budget;
  std::vector<double> eta;
  std::vector<double> mu;
  std::vector<double> hw_slope;

  bool any() const { return !budget.empty() || !eta.empty() || !mu.empty() || !hw_slope.empty(); }

  std::size_t combinations() const {
    const auto dim = [](const std::vector<double>& v) { return v.empty() ? std::size_t{1} : v.size(); };
    return dim(budget) * dim(eta) * dim(mu) * dim(hw_slope);
  }
};

struct ExperimentConfig {
  std::optional<CongestionInstance> congestion;  // inline or built-in instance
  std::optional<std::string> game_file;          // alternative: serialized game + constraints
  SolverConfig solver;
  std::optional<SweepGrids> sweep;
  std::string output = "out";
  std::filesystem::path base_dir;  // directory of the config file; resolves relative paths
};

// A ready-to-solve instance: the compiled game, the constraints, and labels
// for reports.  Keeps the congestion structure around when there is one.
struct ResolvedInstance {
  Game game;
  ConstraintSet constraints;
  std::vector<std::string> action_names;
  std::optional<CongestionInstance> congestion;
};

// --- game + constraints serialization ---------------------------------------
//
// {"players": n, "actions": [|A_i|...], "potential": [flat], "costs": [[flat]...],
//  "constraints": [[{"coefficients": [...], "offset": b} |
//                   {"consumption": [...], "budget": B}, ...] per player],
//  "action_names": ["..."] }        (tensors flat row-major, player 0 slowest)

inline json serialize_game(const Game& game, const ConstraintSet& cs,
                           const std::vector<std::string>& action_names = {}) {
  game.validate();
  json doc;
  doc["players"] = game.space.players();
  doc["actions"] = game.space.actions;
  doc["potential"] = game.potential;
  doc["costs"] = game.costs;
  json cons = json::array();
  for (int i = 0; i < cs.players(); ++i) {
    json list = json::array();
    for (const auto& g : cs.per_player[static_cast<std::size_t>(i)]) {
      const auto& aff = g.as_affine();
      list.push_back(json{{"coefficients", aff.coefficients}, {"offset", aff.offset}});
    }
    cons.push_back(std::move(list));
  }
  doc["constraints"] = std::move(cons);
  if (!action_names.empty()) doc["action_names"] = action_names;
  return doc;
}

inline ResolvedInstance deserialize_game(const json& doc) {
  ResolvedInstance out;
  out.game.space.actions = doc.at("actions").get<std::vector<int>>();
  if (doc.contains("players") &&
      doc.at("players").get<int>() != out.game.space.players())
    throw std::invalid_argument("game file: players field disagrees with actions list");
  out.game.potential = doc.at("potential").get<std::vector<double>>();
  out.game.costs = doc.at("costs").get<std::vector<std::vector<double>>>();
  out.game.validate();
  out.constraints = ConstraintSet::none(out.game.space.players());
  if (doc.contains("constraints")) {
    const auto& cons = doc.at("constraints");
    if (static_cast<int>(cons.size()) != out.game.space.players())
      throw std::invalid_argument("game file: need one constraint list per player");
    for (std::size_t i = 0; i < cons.size(); ++i)
      for (const auto& entry : cons[i]) {
        std::vector<double> coeff;
        double offset = 0.0;
        if (entry.contains("consumption")) {  // gas-budget shorthand
          coeff = entry.at("consumption").get<std::vector<double>>();
          offset = entry.at("budget").get<double>();
        } else {
          coeff = entry.at("coefficients").get<std::vector<double>>();
          offset = entry.at("offset").get<double>();
        }
        if (coeff.size() != static_cast<std::size_t>(out.game.space.actions[i]))
          throw std::invalid_argument("game file: constraint dimension mismatch");
        out.constraints.per_player[i].push_back(Constraint::affine(std::move(coeff), offset));
      }
  }
  if (doc.contains("action_names"))
    out.action_names = doc.at("action_names").get<std::vector<std::string>>();
  else
    for (int a = 0; a < out.game.space.max_actions(); ++a)
      out.action_names.push_back("A" + std::to_string(a));
  return out;
}

// --- config parsing ----------------------------------------------------------

namespace detail {

inline CongestionInstance instance_from_json(const json& inst) {
  const int players = inst.value("players", 5);
  double hw_slope = inst.value("hw_slope", 0.01);

  CongestionInstance out;
  if (inst.contains("paths")) {
    int next_edge = 0;
    for (const auto& p : inst.at("paths")) {
      const int edges = p.at("edges").get<int>();
      const double slope = p.value("slope", 1.0);
      if (edges < 1) throw std::invalid_argument("config: path needs at least one edge");
      std::vector<int> path;
      for (int k = 0; k < edges; ++k) {
        out.network.edges.push_back(Edge{slope, p.value("intercept", 0.0)});
        path.push_back(next_edge++);
      }
      out.network.paths.push_back(std::move(path));
      out.network.gas_cost.push_back(p.value("gas", static_cast<double>(edges)));
      if (p.contains("name")) out.network.path_names.push_back(p.at("name").get<std::string>());
    }
    if (!out.network.path_names.empty() &&
        out.network.path_names.size() != out.network.paths.size())
      throw std::invalid_argument("config: name every path or none");
    out.players = players;
    // hw_slope, when present, re-slopes the last path (the highway by convention)
    if (inst.contains("hw_slope") && !out.network.paths.empty())
      for (int e : out.network.paths.back())
        out.network.edges[static_cast<std::size_t>(e)].slope = hw_slope;
  } else {
    out = highway_instance(hw_slope, 13.0, players);
  }

  if (inst.contains("budgets")) {
    const auto& b = inst.at("budgets");
    if (b.is_array()) {
      out.budgets = b.get<std::vector<double>>();
    } else {
      out.budgets.assign(static_cast<std::size_t>(out.players), b.get<double>());
    }
  } else if (out.budgets.empty()) {
    throw std::invalid_argument("config: instance needs budgets");
  }
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(const std::string& text, const std::string& source_name,
                                     const std::filesystem::path& base_dir = ".") {
  json doc;
  try {
    doc = json::parse(text, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(source_name + ": " + e.what());
  }

  ExperimentConfig cfg;
  cfg.base_dir = base_dir;
  if (doc.contains("instance")) {
    const auto& inst = doc.at("instance");
    if (inst.contains("game_file"))
      cfg.game_file = inst.at("game_file").get<std::string>();
    else
      cfg.congestion = detail::instance_from_json(inst);
  } else {
    cfg.congestion = detail::instance_from_json(json::object());
  }

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    cfg.solver.mu = s.value("mu", cfg.solver.mu);
    cfg.solver.eta = s.value("eta", cfg.solver.eta);
    cfg.solver.iterations = s.value("iterations", cfg.solver.iterations);
    cfg.solver.record_every = s.value("record_every", cfg.solver.record_every);
    cfg.solver.seed = s.value("seed", cfg.solver.seed);
    cfg.solver.init = s.value("init", cfg.solver.init);
  }

  if (doc.contains("sweep")) {
    SweepGrids grids;
    const auto& s = doc.at("sweep");
    const auto grid = [&](const char* key) {
      return s.contains(key) ? s.at(key).get<std::vector<double>>() : std::vector<double>{};
    };
    grids.budget = grid("budget");
    grids.eta = grid("eta");
    grids.mu = grid("mu");
    grids.hw_slope = grid("hw_slope");
    cfg.sweep = std::move(grids);
  }

  cfg.output = doc.value("output", cfg.output);
  return cfg;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.filename().string(), path.parent_path());
}

inline ResolvedInstance resolve_instance(const ExperimentConfig& cfg) {
  if (cfg.game_file) {
    const std::filesystem::path p = cfg.base_dir / *cfg.game_file;
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open game file: " + p.string());
    json doc;
    try {
      doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(p.string() + ": " + e.what());
    }
    return deserialize_game(doc);
  }
  if (!cfg.congestion) throw std::logic_error("config has no instance");
  const auto& inst = *cfg.congestion;
  CompiledGame compiled = compile(inst);
  ResolvedInstance out;
  out.game = std::move(compiled.game);
  out.constraints = std::move(compiled.constraints);
  for (int p = 0; p < inst.network.path_count(); ++p)
    out.action_names.push_back(inst.network.path_name(p));
  out.congestion = inst;
  return out;
}

// --- diagnostics -------------------------------------------------------------

struct Diagnostic {
  bool error = false;  // false = warning
  std::string message;
};

inline std::vector<Diagnostic> validate_config(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  const auto error = [&](std::string m) { out.push_back({true, std::move(m)}); };
  const auto warn = [&](std::string m) { out.push_back({false, std::move(m)}); };

  if (!(cfg.solver.mu > 0.0)) error("solver.mu must be > 0");
  if (!(cfg.solver.eta > 0.0)) error("solver.eta must be > 0");
  if (cfg.solver.iterations < 0) error("solver.iterations must be >= 0");
  if (cfg.solver.record_every < 1) error("solver.record_every must be >= 1");
  if (cfg.solver.init != "uniform" && cfg.solver.init != "dirichlet")
    error("solver.init must be 'uniform' or 'dirichlet'");

  if (cfg.sweep) {
    if (!cfg.sweep->any()) error("sweep requested but every grid is empty");
    if (cfg.game_file && (!cfg.sweep->budget.empty() || !cfg.sweep->hw_slope.empty()))
      error("budget/hw_slope sweeps need a congestion instance, not a game file");
  }

  ResolvedInstance inst;
  try {
    inst = resolve_instance(cfg);
  } catch (const std::exception& e) {
    error(std::string("instance: ") + e.what());
    return out;
  }

  try {
    inst.game.space.profile_count();
  } catch (const std::exception& e) {
    error(std::string("instance: ") + e.what());
    return out;
  }

  for (int i = 0; i < inst.constraints.players(); ++i) {
    if (inst.constraints.constraint_count(i) == 0) continue;
    // Empty feasible region is a hard error: no strategy satisfies the player's
    // constraints, so best responses (and the Nash gap) are undefined.
    try {
      minimize_over_feasible(
          std::vector<double>(static_cast<std::size_t>(inst.game.space.num_actions(i)), 0.0),
          inst.constraints, i);
    } catch (const std::exception&) {
      error("player " + std::to_string(i) + ": feasible region is empty");
      continue;
    }
    const double margin = slater_margin(inst.constraints, i);
    if (margin > 0.0)
      warn("player " + std::to_string(i) + ": constraints can be violated (margin " +
           std::to_string(margin) + "); multiplier bounds unavailable");
    else if (margin == 0.0)
      warn("player " + std::to_string(i) +
           ": certificate margin is exactly 0 (some vertex sits on a constraint boundary)");
  }
  return out;
}

// --- fingerprint -------------------------------------------------------------

namespace detail {

inline std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace detail

// Stable hash of the resolved run parameters: instance structure plus solver
// settings.  Identical configurations fingerprint identically regardless of
// the config file they came from.
inline std::string config_fingerprint(const ExperimentConfig& cfg) {
  json doc;
  if (cfg.congestion) {
    const auto& inst = *cfg.congestion;
    json net;
    for (std::size_t p = 0; p < inst.network.paths.size(); ++p) {
      json path;
      path["edges"] = inst.network.paths[p].size();
      path["gas"] = inst.network.gas_cost[p];
      json slopes = json::array();
      for (int e : inst.network.paths[p]) {
        slopes.push_back(inst.network.edges[static_cast<std::size_t>(e)].slope);
        slopes.push_back(inst.network.edges[static_cast<std::size_t>(e)].intercept);
      }
      path["edge_coeffs"] = std::move(slopes);
      net.push_back(std::move(path));
    }
    doc["network"] = std::move(net);
    doc["players"] = inst.players;
    doc["budgets"] = inst.budgets;
  } else if (cfg.game_file) {
    doc["game_file"] = *cfg.game_file;
  }
  doc["mu"] = cfg.solver.mu;
  doc["eta"] = cfg.solver.eta;
  doc["iterations"] = cfg.solver.iterations;
  doc["record_every"] = cfg.solver.record_every;
  doc["seed"] = cfg.solver.seed;
  doc["init"] = cfg.solver.init;

  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(doc.dump())));
  return buf;
}

}  // namespace potg
