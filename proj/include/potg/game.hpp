#pragma once

// Finite normal-form potential games over mixed strategies.
//
// A game stores a dense potential tensor Phi(a) and per-player cost tensors
// C_i(a) over joint pure profiles a.  All expected values and gradients are
// exact multilinear expectations computed by full enumeration of the joint
// profile space, which is guarded by max_enumerable_profiles.
//
// Tensor layout: flat row-major with player 0 as the slowest index, i.e.
// flat(a) = ((a_0 * |A_1| + a_1) * |A_2| + a_2) * ...

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace potg {

// Hard ceiling on the joint-profile count any operation will enumerate.
inline constexpr std::size_t max_enumerable_profiles = 10'000'000;

// Simplex membership tolerances shared across the library.
inline constexpr double simplex_sum_tol = 1e-9;
inline constexpr double simplex_neg_tol = 1e-12;

struct ActionSpace {
  std::vector<int> actions;  // |A_i| per player

  int players() const { return static_cast<int>(actions.size()); }

  int num_actions(int player) const { return actions.at(static_cast<std::size_t>(player)); }

  int max_actions() const {
    int m = 0;
    for (int a : actions) m = std::max(m, a);
    return m;
  }

  void validate() const {
    if (actions.empty()) throw std::invalid_argument("ActionSpace: need at least one player");
    for (int a : actions)
      if (a < 1) throw std::invalid_argument("ActionSpace: every player needs at least one action");
  }

  // Pi_i |A_i|, throwing when the product exceeds the enumeration ceiling.
  std::size_t profile_count() const {
    validate();
    std::size_t count = 1;
    for (int a : actions) {
      const auto na = static_cast<std::size_t>(a);
      if (count > max_enumerable_profiles / na)
        throw std::length_error("ActionSpace: joint profile space exceeds " +
                                std::to_string(max_enumerable_profiles) + " profiles");
      count *= na;
    }
    return count;
  }
};

struct MixedProfile {
  std::vector<std::vector<double>> strategies;  // x_i per player

  static MixedProfile uniform(const ActionSpace& space) {
    MixedProfile x;
    x.strategies.reserve(space.actions.size());
    for (int a : space.actions)
      x.strategies.emplace_back(static_cast<std::size_t>(a), 1.0 / static_cast<double>(a));
    return x;
  }

  void validate(const ActionSpace& space) const {
    if (strategies.size() != space.actions.size())
      throw std::invalid_argument("MixedProfile: player count mismatch");
    for (std::size_t i = 0; i < strategies.size(); ++i) {
      const auto& xi = strategies[i];
      if (xi.size() != static_cast<std::size_t>(space.actions[i]))
        throw std::invalid_argument("MixedProfile: action count mismatch for player " +
                                    std::to_string(i));
      double sum = 0.0;
      for (double p : xi) {
        if (!std::isfinite(p) || p < -simplex_neg_tol)
          throw std::invalid_argument("MixedProfile: negative or non-finite probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > simplex_sum_tol)
        throw std::invalid_argument("MixedProfile: probabilities of player " + std::to_string(i) +
                                    " sum to " + std::to_string(sum));
    }
  }
};

struct Game {
  ActionSpace space;
  std::vector<double> potential;           // Phi(a), flat
  std::vector<std::vector<double>> costs;  // C_i(a), flat per player

  std::size_t flat_index(const std::vector<int>& profile) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < profile.size(); ++i)
      idx = idx * static_cast<std::size_t>(space.actions[i]) + static_cast<std::size_t>(profile[i]);
    return idx;
  }

  void validate() const {
    const std::size_t count = space.profile_count();
    if (potential.size() != count) throw std::invalid_argument("Game: potential tensor size mismatch");
    if (costs.size() != static_cast<std::size_t>(space.players()))
      throw std::invalid_argument("Game: need one cost tensor per player");
    for (const auto& c : costs)
      if (c.size() != count) throw std::invalid_argument("Game: cost tensor size mismatch");
    for (double v : potential)
      if (!std::isfinite(v)) throw std::invalid_argument("Game: non-finite potential entry");
    for (const auto& c : costs)
      for (double v : c)
        if (!std::isfinite(v)) throw std::invalid_argument("Game: non-finite cost entry");
  }
};

namespace detail {

// Visits every joint pure profile in row-major order (player 0 slowest).
// fn receives (profile, flat_index).
template <typename Fn>
void for_each_profile(const ActionSpace& space, Fn&& fn) {
  const std::size_t count = space.profile_count();
  const int n = space.players();
  std::vector<int> profile(static_cast<std::size_t>(n), 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    fn(profile, idx);
    for (int i = n - 1; i >= 0; --i) {
      if (++profile[static_cast<std::size_t>(i)] < space.actions[static_cast<std::size_t>(i)]) break;
      profile[static_cast<std::size_t>(i)] = 0;
    }
  }
}

inline double expected_tensor_value(const ActionSpace& space, const std::vector<double>& tensor,
                                    const MixedProfile& x) {
  double acc = 0.0;
  for_each_profile(space, [&](const std::vector<int>& a, std::size_t idx) {
    double prob = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      prob *= x.strategies[i][static_cast<std::size_t>(a[i])];
    acc += tensor[idx] * prob;
  });
  return acc;
}

// Component a of the gradient w.r.t. player's strategy: the expectation of the
// tensor over everyone else's mixture with the player pinned to action a.
inline std::vector<double> tensor_gradient(const ActionSpace& space, const std::vector<double>& tensor,
                                           int player, const MixedProfile& x) {
  std::vector<double> grad(static_cast<std::size_t>(space.num_actions(player)), 0.0);
  const auto p = static_cast<std::size_t>(player);
  for_each_profile(space, [&](const std::vector<int>& a, std::size_t idx) {
    double others = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (i != p) others *= x.strategies[i][static_cast<std::size_t>(a[i])];
    grad[static_cast<std::size_t>(a[p])] += tensor[idx] * others;
  });
  return grad;
}

inline void check_player(const Game& game, int player) {
  if (player < 0 || player >= game.space.players())
    throw std::out_of_range("player index " + std::to_string(player) + " out of range");
}

}  // namespace detail

// E_{a~x}[Phi(a)], exact multilinear expectation.
inline double expected_potential(const Game& game, const MixedProfile& x) {
  x.validate(game.space);
  return detail::expected_tensor_value(game.space, game.potential, x);
}

// E_{a~x}[C_i(a)].
inline double expected_cost(const Game& game, int player, const MixedProfile& x) {
  detail::check_player(game, player);
  x.validate(game.space);
  return detail::expected_tensor_value(game.space, game.costs[static_cast<std::size_t>(player)], x);
}

// Component a: E_{a_{-i}~x_{-i}}[Phi(a, a_{-i})].
inline std::vector<double> potential_gradient(const Game& game, int player, const MixedProfile& x) {
  detail::check_player(game, player);
  x.validate(game.space);
  return detail::tensor_gradient(game.space, game.potential, player, x);
}

// Component a: E_{a_{-i}~x_{-i}}[C_i(a, a_{-i})] — the expected cost of each
// pure action against the others' mixture.  This is the gradient the descent
// step consumes; it differs from potential_gradient by a per-player constant
// shift, which the simplex projection absorbs.
inline std::vector<double> cost_gradient(const Game& game, int player, const MixedProfile& x) {
  detail::check_player(game, player);
  x.validate(game.space);
  return detail::tensor_gradient(game.space, game.costs[static_cast<std::size_t>(player)], player, x);
}

struct PotentialCheck {
  double max_violation = 0.0;
  bool ok = false;
};

// Checks the exact-potential identity on pure profiles:
//   C_i(a_i', a_{-i}) - C_i(a) = Phi(a_i', a_{-i}) - Phi(a)
// for every player, profile, and unilateral deviation.  Diagnostic: reports
// the max absolute violation rather than failing.
inline PotentialCheck validate_potential(const Game& game) {
  game.validate();
  const int n = game.space.players();

  // Row-major strides: changing player i's action moves the flat index by stride[i].
  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i)
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i + 1)] *
        static_cast<std::size_t>(game.space.actions[static_cast<std::size_t>(i + 1)]);

  double worst = 0.0;
  detail::for_each_profile(game.space, [&](const std::vector<int>& a, std::size_t idx) {
    for (int i = 0; i < n; ++i) {
      const auto ip = static_cast<std::size_t>(i);
      const auto& ci = game.costs[ip];
      const std::size_t base = idx - static_cast<std::size_t>(a[ip]) * stride[ip];
      for (int alt = 0; alt < game.space.actions[ip]; ++alt) {
        if (alt == a[ip]) continue;
        const std::size_t jdx = base + static_cast<std::size_t>(alt) * stride[ip];
        const double dc = ci[jdx] - ci[idx];
        const double dphi = game.potential[jdx] - game.potential[idx];
        worst = std::max(worst, std::abs(dc - dphi));
      }
    }
  });
  return PotentialCheck{worst, worst <= 1e-12};
}

}  // namespace potg
