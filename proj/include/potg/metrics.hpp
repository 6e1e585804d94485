#pragma once

// Solution-quality metrics: per-player best feasible responses via an exact
// small-scale LP, the Nash gap, and multiplier diagnostics.
//
// The best-response LP  min p'y  s.t.  1'y = 1, y >= 0, c_m'y <= b_m  is
// solved exactly by enumerating basic feasible solutions: for every subset S
// of the player's affine constraints and every action support of size |S|+1,
// the |S|+1 active equalities (the simplex equality plus the constraints in S
// at equality) determine a unique candidate point.  Dimensions here are tiny,
// so enumeration is exact, dependency-free, and directly testable against
// grid search.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "potg/constraints.hpp"
#include "potg/game.hpp"

namespace potg {

struct BestResponse {
  double value = 0.0;
  std::vector<double> strategy;
};

namespace detail {

// Solves the dense square system A y = rhs by Gaussian elimination with
// partial pivoting.  Returns false when the system is (numerically) singular.
inline bool solve_dense(std::vector<std::vector<double>> A, std::vector<double> rhs,
                        std::vector<double>& out) {
  const std::size_t n = A.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
    if (std::abs(A[pivot][col]) < 1e-12) return false;
    std::swap(A[pivot], A[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = A[r][col] / A[col][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  out.assign(n, 0.0);
  for (std::size_t r = n; r-- > 0;) {
    double v = rhs[r];
    for (std::size_t c = r + 1; c < n; ++c) v -= A[r][c] * out[c];
    out[r] = v / A[r][r];
  }
  return true;
}

// Enumerates k-subsets of {0..n-1} in lexicographic order.
inline bool next_subset(std::vector<int>& subset, int n) {
  const int k = static_cast<int>(subset.size());
  for (int i = k - 1; i >= 0; --i) {
    if (subset[static_cast<std::size_t>(i)] < n - (k - i)) {
      ++subset[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j)
        subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

inline std::vector<int> first_subset(int k) {
  std::vector<int> s(static_cast<std::size_t>(k));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

}  // namespace detail

inline constexpr double lp_feasibility_tol = 1e-9;

// Minimizes p'y over the player's feasible region (simplex intersected with
// their affine constraints).  Throws when the region is empty.
inline BestResponse minimize_over_feasible(const std::vector<double>& p, const ConstraintSet& cs,
                                           int player) {
  cs.check_player(player);
  const auto& list = cs.per_player[static_cast<std::size_t>(player)];
  const int actions = static_cast<int>(p.size());
  const int d = static_cast<int>(list.size());
  for (const auto& g : list)
    if (!g.is_affine())
      throw std::logic_error("best response: only affine constraints are supported");

  BestResponse best;
  best.value = std::numeric_limits<double>::infinity();

  std::vector<double> y(static_cast<std::size_t>(actions));
  const auto consider = [&](const std::vector<int>& support, const std::vector<double>& vals) {
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < support.size(); ++j) {
      if (vals[j] < -lp_feasibility_tol) return;  // outside the simplex
      y[static_cast<std::size_t>(support[j])] = std::max(0.0, vals[j]);
    }
    for (const auto& g : list)
      if (g.value(y) > lp_feasibility_tol) return;  // violates some constraint
    double obj = 0.0;
    for (int a = 0; a < actions; ++a) obj += p[static_cast<std::size_t>(a)] * y[static_cast<std::size_t>(a)];
    if (obj < best.value) {
      best.value = obj;
      best.strategy = y;
    }
  };

  // Active sets of k constraints with supports of k+1 actions cover every
  // extreme point of the feasible polytope.
  for (int k = 0; k <= std::min(d, actions - 1); ++k) {
    std::vector<int> active = detail::first_subset(k);
    do {
      std::vector<int> support = detail::first_subset(k + 1);
      do {
        std::vector<std::vector<double>> A(static_cast<std::size_t>(k + 1),
                                           std::vector<double>(static_cast<std::size_t>(k + 1)));
        std::vector<double> rhs(static_cast<std::size_t>(k + 1));
        for (int j = 0; j <= k; ++j) A[0][static_cast<std::size_t>(j)] = 1.0;  // sum to one
        rhs[0] = 1.0;
        for (int r = 0; r < k; ++r) {
          const auto& aff = list[static_cast<std::size_t>(active[static_cast<std::size_t>(r)])].as_affine();
          for (int j = 0; j <= k; ++j)
            A[static_cast<std::size_t>(r + 1)][static_cast<std::size_t>(j)] =
                aff.coefficients[static_cast<std::size_t>(support[static_cast<std::size_t>(j)])];
          rhs[static_cast<std::size_t>(r + 1)] = aff.offset;
        }
        std::vector<double> vals;
        if (detail::solve_dense(std::move(A), std::move(rhs), vals)) consider(support, vals);
      } while (detail::next_subset(support, actions));
    } while (k > 0 && detail::next_subset(active, d));
  }

  if (!std::isfinite(best.value))
    throw std::runtime_error("best response: player " + std::to_string(player) +
                             " has an empty feasible region");
  return best;
}

// Best feasible response against the opponents' mixture at x: the LP objective
// p(a) is the expected cost of each pure action a, i.e. cost_gradient.
inline BestResponse best_response_lp(const Game& game, const ConstraintSet& cs, int player,
                                     const MixedProfile& x) {
  return minimize_over_feasible(cost_gradient(game, player, x), cs, player);
}

struct NashGapReport {
  std::vector<double> per_player;                     // clamped at 0
  double total = 0.0;                                 // sum of per-player gaps
  std::vector<std::vector<double>> best_responses;    // optimizer per player
};

namespace detail {

inline NashGapReport nash_gap_impl(const Game& game, const ConstraintSet& cs,
                                   const MixedProfile& x) {
  NashGapReport report;
  const int n = game.space.players();
  report.per_player.reserve(static_cast<std::size_t>(n));
  report.best_responses.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::vector<double> p = cost_gradient(game, i, x);
    // Current expected cost is exactly p . x_i (multilinearity).
    double current = 0.0;
    const auto& xi = x.strategies[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < xi.size(); ++a) current += p[a] * xi[a];
    BestResponse br = minimize_over_feasible(p, cs, i);
    double gap = current - br.value;
    if (gap < -1e-9) {
      // A feasible strategy can never beat the feasible minimum, so a gap this
      // negative means the LP failed.  An infeasible strategy legitimately
      // can (it buys cost with constraint violation); clamp it like the rest.
      double worst = 0.0;
      for (const auto& g : cs.per_player[static_cast<std::size_t>(i)])
        worst = std::max(worst, g.value(xi));
      if (worst <= lp_feasibility_tol)
        throw std::runtime_error("nash gap: best response exceeds current cost beyond tolerance");
    }
    gap = std::max(0.0, gap);
    report.per_player.push_back(gap);
    report.total += gap;
    report.best_responses.push_back(std::move(br.strategy));
  }
  return report;
}

}  // namespace detail

// Nash gap against the exact feasible sets: sum_i (current cost - best
// feasible response cost), each term clamped at 0 after a -1e-9 sanity check.
// Zero exactly at a Nash equilibrium.
inline NashGapReport nash_gap(const Game& game, const ConstraintSet& cs, const MixedProfile& x) {
  x.validate(game.space);
  return detail::nash_gap_impl(game, cs, x);
}

// Variant measured against eps-relaxed feasible sets: every affine offset is
// loosened by eps, so deviations may violate each constraint by up to eps.
inline NashGapReport nash_gap_relaxed(const Game& game, const ConstraintSet& cs,
                                      const MixedProfile& x, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("nash_gap_relaxed: eps must be >= 0");
  x.validate(game.space);
  ConstraintSet relaxed = ConstraintSet::none(cs.players());
  for (int i = 0; i < cs.players(); ++i)
    for (const auto& g : cs.per_player[static_cast<std::size_t>(i)]) {
      const auto& aff = g.as_affine();
      relaxed.per_player[static_cast<std::size_t>(i)].push_back(
          Constraint::affine(aff.coefficients, aff.offset + eps));
    }
  return detail::nash_gap_impl(game, relaxed, x);
}

// sum_{i,m} lambda_{i,m}
inline double multiplier_summary(const std::vector<std::vector<double>>& lambda) {
  double total = 0.0;
  for (const auto& li : lambda)
    for (double v : li) total += v;
  return total;
}

// Bound on any optimal multiplier component of a player whose constraints all
// have a strictly negative certificate margin:  max_m 2(Phi_max - Phi_min)/|xi_m|
// with xi_m the per-constraint margin.  Unavailable (throws) when the player's
// margin is not strictly negative; 0 for players without constraints.
inline double optimal_multiplier_bound(const Game& game, const ConstraintSet& cs, int player) {
  const double margin = slater_margin(cs, player);
  if (!(margin < 0.0))
    throw std::domain_error("optimal_multiplier_bound: certificate margin is not negative");
  double phi_max = -std::numeric_limits<double>::infinity();
  double phi_min = std::numeric_limits<double>::infinity();
  for (double v : game.potential) {
    phi_max = std::max(phi_max, v);
    phi_min = std::min(phi_min, v);
  }
  const double range = phi_max - phi_min;
  double bound = 0.0;
  for (int m = 0; m < cs.constraint_count(player); ++m)
    bound = std::max(bound, 2.0 * range / std::abs(slater_margin(cs, player, m)));
  return bound;
}

}  // namespace potg
