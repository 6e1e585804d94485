#pragma once

// Routing/congestion games: a set of edges with affine load-dependent costs,
// paths as edge lists, and per-player gas budgets.  Every congestion game is
// an exact potential game via the Rosenthal potential
//
//   Phi(a) = sum_e sum_{j=1}^{load_e(a)} c_e(j),
//
// and compile() materializes that potential and the per-player cost tensors
// into a Game, plus one affine gas constraint per player.

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "potg/constraints.hpp"
#include "potg/game.hpp"

namespace potg {

struct Edge {
  double slope = 0.0;      // alpha in c_e(j) = alpha*j + beta
  double intercept = 0.0;  // beta
};

struct Network {
  std::vector<Edge> edges;
  std::vector<std::vector<int>> paths;  // edge indices per path
  std::vector<double> gas_cost;         // per path
  std::vector<std::string> path_names;  // optional labels for reports/plots

  int path_count() const { return static_cast<int>(paths.size()); }

  void validate() const {
    if (paths.empty()) throw std::invalid_argument("Network: need at least one path");
    if (gas_cost.size() != paths.size())
      throw std::invalid_argument("Network: need one gas cost per path");
    if (!path_names.empty() && path_names.size() != paths.size())
      throw std::invalid_argument("Network: path_names must be empty or match path count");
    for (const auto& path : paths) {
      if (path.empty()) throw std::invalid_argument("Network: empty path");
      for (int e : path)
        if (e < 0 || e >= static_cast<int>(edges.size()))
          throw std::invalid_argument("Network: edge index out of range");
    }
    for (const auto& e : edges) {
      if (!std::isfinite(e.slope) || !std::isfinite(e.intercept))
        throw std::invalid_argument("Network: non-finite congestion coefficient");
      if (e.slope < 0.0) throw std::invalid_argument("Network: negative congestion slope");
    }
    for (double g : gas_cost)
      if (!std::isfinite(g)) throw std::invalid_argument("Network: non-finite gas cost");
  }

  std::string path_name(int p) const {
    if (!path_names.empty()) return path_names[static_cast<std::size_t>(p)];
    return "P" + std::to_string(p);
  }
};

struct CongestionInstance {
  Network network;
  int players = 0;
  std::vector<double> budgets;  // per player

  void validate() const {
    network.validate();
    if (players < 1) throw std::invalid_argument("CongestionInstance: need at least one player");
    if (budgets.size() != static_cast<std::size_t>(players))
      throw std::invalid_argument("CongestionInstance: need one budget per player");
    for (double b : budgets)
      if (!std::isfinite(b)) throw std::invalid_argument("CongestionInstance: non-finite budget");
  }
};

namespace detail {

inline std::vector<int> edge_loads(const Network& net, const std::vector<int>& profile) {
  std::vector<int> load(net.edges.size(), 0);
  for (int choice : profile) {
    if (choice < 0 || choice >= net.path_count())
      throw std::out_of_range("congestion: invalid path index " + std::to_string(choice));
    for (int e : net.paths[static_cast<std::size_t>(choice)]) ++load[static_cast<std::size_t>(e)];
  }
  return load;
}

// sum_{j=1}^{load} (alpha*j + beta) = alpha*load*(load+1)/2 + beta*load
inline double edge_potential(const Edge& e, int load) {
  const double l = static_cast<double>(load);
  return e.slope * l * (l + 1.0) / 2.0 + e.intercept * l;
}

}  // namespace detail

// Rosenthal potential of a pure profile (one path choice per player).
inline double rosenthal_potential(const Network& net, const std::vector<int>& profile) {
  const auto load = detail::edge_loads(net, profile);
  double phi = 0.0;
  for (std::size_t e = 0; e < net.edges.size(); ++e)
    phi += detail::edge_potential(net.edges[e], load[e]);
  return phi;
}

// Cost a player experiences: sum over the edges of their chosen path of the
// edge cost at its realized load.
inline double player_cost(const Network& net, const std::vector<int>& profile, int player) {
  if (player < 0 || player >= static_cast<int>(profile.size()))
    throw std::out_of_range("congestion: player index out of range");
  const auto load = detail::edge_loads(net, profile);
  double cost = 0.0;
  for (int e : net.paths[static_cast<std::size_t>(profile[static_cast<std::size_t>(player)])]) {
    const auto& edge = net.edges[static_cast<std::size_t>(e)];
    const double l = static_cast<double>(load[static_cast<std::size_t>(e)]);
    cost += edge.slope * l + edge.intercept;
  }
  return cost;
}

struct CompiledGame {
  Game game;
  ConstraintSet constraints;
};

// Materializes the instance: actions = paths, Phi tensor = Rosenthal potential
// over all joint profiles, C_i tensors = realized path costs, plus one affine
// gas constraint per player: gas_cost' x_i - budget_i <= 0.
inline CompiledGame compile(const CongestionInstance& inst) {
  inst.validate();

  Game game;
  game.space.actions.assign(static_cast<std::size_t>(inst.players), inst.network.path_count());
  const std::size_t count = game.space.profile_count();  // enforces the enumeration guard
  game.potential.resize(count);
  game.costs.assign(static_cast<std::size_t>(inst.players), std::vector<double>(count));

  detail::for_each_profile(game.space, [&](const std::vector<int>& profile, std::size_t idx) {
    const auto load = detail::edge_loads(inst.network, profile);
    double phi = 0.0;
    for (std::size_t e = 0; e < inst.network.edges.size(); ++e)
      phi += detail::edge_potential(inst.network.edges[e], load[e]);
    game.potential[idx] = phi;
    for (int i = 0; i < inst.players; ++i) {
      double cost = 0.0;
      for (int e : inst.network.paths[static_cast<std::size_t>(profile[static_cast<std::size_t>(i)])]) {
        const auto& edge = inst.network.edges[static_cast<std::size_t>(e)];
        cost += edge.slope * static_cast<double>(load[static_cast<std::size_t>(e)]) + edge.intercept;
      }
      game.costs[static_cast<std::size_t>(i)][idx] = cost;
    }
  });

  ConstraintSet cs = ConstraintSet::none(inst.players);
  for (int i = 0; i < inst.players; ++i)
    cs.per_player[static_cast<std::size_t>(i)].push_back(
        Constraint::affine(inst.network.gas_cost, inst.budgets[static_cast<std::size_t>(i)]));
  return CompiledGame{std::move(game), std::move(cs)};
}

// The five-commuter benchmark: four edge-disjoint routes between one source
// and one sink — three short roads R1/R2/R3 of lengths 2/3/4 with unit
// congestion slope per edge, and a ten-edge highway HW whose per-edge slope is
// small.  Gas cost equals path length (unit distance per edge), so the gas
// consumption vector is (2, 3, 4, 10).
inline CongestionInstance highway_instance(double highway_slope = 0.01, double budget = 13.0,
                                           int players = 5) {
  if (!(highway_slope >= 0.0))
    throw std::invalid_argument("highway_instance: highway slope must be >= 0");
  CongestionInstance inst;
  const std::vector<int> lengths = {2, 3, 4, 10};
  int next_edge = 0;
  for (std::size_t p = 0; p < lengths.size(); ++p) {
    const double slope = (p + 1 == lengths.size()) ? highway_slope : 1.0;
    std::vector<int> path;
    for (int k = 0; k < lengths[p]; ++k) {
      inst.network.edges.push_back(Edge{slope, 0.0});
      path.push_back(next_edge++);
    }
    inst.network.paths.push_back(std::move(path));
    inst.network.gas_cost.push_back(static_cast<double>(lengths[p]));
  }
  inst.network.path_names = {"R1", "R2", "R3", "HW"};
  inst.players = players;
  inst.budgets.assign(static_cast<std::size_t>(players), budget);
  return inst;
}

}  // namespace potg
