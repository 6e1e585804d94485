#pragma once

// Independent projected gradient descent on the regularized Lagrangian.
//
// For mu > 0 the regularized Lagrangian of a potential game with private
// constraints is
//
//   L~(x, lambda) = Phi(x) + sum_{i,m} lambda_{i,m} g_{i,m}(x_i) - mu ||lambda||^2,
//
// whose maximizer over lambda >= 0 has the closed form
// lambda*_{i,m} = max(0, g_{i,m}(x_i)) / (2 mu).  Descent runs on
//
//   phi(x) = max_{lambda >= 0} L~(x, lambda) = Phi(x) + sum max(0, g)^2 / (4 mu):
//
// each iteration refreshes lambda in closed form, then every player
// synchronously takes a projected gradient step
//
//   x_i <- project_simplex( x_i - eta (grad_i C_i(x) + sum_m lambda_{i,m} grad g_{i,m}(x_i)) ).
//
// The iterate with the smallest step displacement ||x^{t+1} - x^t|| is
// returned as the solution: small displacement certifies approximate
// first-order stationarity of the projected dynamics.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "potg/constraints.hpp"
#include "potg/game.hpp"
#include "potg/metrics.hpp"

namespace potg {

struct SolverParams {
  double mu = 1e-3;     // regularizer, > 0
  double eta = 1e-3;    // step size, > 0
  int iterations = 10'000;
  int record_every = 1;  // trajectory stride; the final step is always recorded

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("SolverParams: mu must be > 0");
    if (!(eta > 0.0)) throw std::invalid_argument("SolverParams: eta must be > 0");
    if (iterations < 0) throw std::invalid_argument("SolverParams: iterations must be >= 0");
    if (record_every < 1) throw std::invalid_argument("SolverParams: record_every must be >= 1");
  }
};

struct SolverState {
  MixedProfile x;
  std::vector<std::vector<double>> lambda;  // lambda_i in R_+^{d_i}
  int iteration = 0;
};

struct TrajectoryPoint {
  int t = 0;
  MixedProfile x;
  std::vector<std::vector<double>> lambda;
  double phi = 0.0;
  double lagrangian = 0.0;
  double nash_gap = 0.0;
  double violation = 0.0;
  double lambda_sum = 0.0;
  double displacement = 0.0;  // ||x^t - x^{t-1}||, 0 for the initial point
};

using Trajectory = std::vector<TrajectoryPoint>;

// Euclidean projection onto the probability simplex by the sort-and-threshold
// rule: with u the coordinates sorted in descending order and
// rho = max{ j : u_j - (sum_{k<=j} u_k - 1)/j > 0 }, the threshold is
// tau = (sum_{k<=rho} u_k - 1)/rho and the projection is max(v - tau, 0).
// The output sum is renormalized so simplex membership holds exactly.
inline std::vector<double> project_simplex(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("project_simplex: empty vector");
  for (double c : v)
    if (!std::isfinite(c)) throw std::invalid_argument("project_simplex: non-finite input");

  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > 0.0) tau = candidate;
  }
  double sum = 0.0;
  for (double& c : v) {
    c = std::max(c - tau, 0.0);
    sum += c;
  }
  for (double& c : v) c /= sum;  // exact renormalization; sum is within rounding of 1
  return v;
}

// Closed-form maximizer of L~ over lambda >= 0 at the current iterate:
// lambda_{i,m} = max(0, g_{i,m}(x_i) / (2 mu)).  Exact by strong concavity and
// per-component separability.
inline std::vector<std::vector<double>> multiplier_step(const ConstraintSet& cs,
                                                        const MixedProfile& x, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("multiplier_step: mu must be > 0");
  if (static_cast<int>(x.strategies.size()) != cs.players())
    throw std::invalid_argument("multiplier_step: player count mismatch");
  std::vector<std::vector<double>> lambda(x.strategies.size());
  for (int i = 0; i < cs.players(); ++i) {
    const auto& xi = x.strategies[static_cast<std::size_t>(i)];
    auto& li = lambda[static_cast<std::size_t>(i)];
    for (const auto& g : cs.per_player[static_cast<std::size_t>(i)])
      li.push_back(std::max(0.0, g.value(xi) / (2.0 * mu)));
  }
  return lambda;
}

// One synchronous iteration: refresh multipliers from x^t, then step every
// player from the same x^t.
inline SolverState igd_step(const Game& game, const ConstraintSet& cs, const SolverState& state,
                            const SolverParams& params) {
  if (!(params.mu > 0.0)) throw std::invalid_argument("igd_step: mu must be > 0");
  if (!(params.eta >= 0.0)) throw std::invalid_argument("igd_step: eta must be >= 0");
  SolverState next;
  next.lambda = multiplier_step(cs, state.x, params.mu);
  next.x.strategies.resize(state.x.strategies.size());
  for (int i = 0; i < game.space.players(); ++i) {
    const auto ip = static_cast<std::size_t>(i);
    std::vector<double> step = cost_gradient(game, i, state.x);
    const auto& constraints = cs.per_player[ip];
    for (std::size_t m = 0; m < constraints.size(); ++m) {
      const double lam = next.lambda[ip][m];
      if (lam == 0.0) continue;
      const std::vector<double> cg = constraints[m].gradient(state.x.strategies[ip]);
      for (std::size_t a = 0; a < step.size(); ++a) step[a] += lam * cg[a];
    }
    std::vector<double> target = state.x.strategies[ip];
    for (std::size_t a = 0; a < target.size(); ++a) target[a] -= params.eta * step[a];
    next.x.strategies[ip] = project_simplex(std::move(target));
  }
  next.iteration = state.iteration + 1;
  return next;
}

// phi(x) = Phi(x) + sum_{i,m} max(0, g_{i,m}(x_i))^2 / (4 mu); equals Phi(x)
// exactly on the feasible set.
inline double phi(const Game& game, const ConstraintSet& cs, const MixedProfile& x, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("phi: mu must be > 0");
  double value = expected_potential(game, x);
  for (int i = 0; i < cs.players(); ++i) {
    const auto& xi = x.strategies[static_cast<std::size_t>(i)];
    for (const auto& g : cs.per_player[static_cast<std::size_t>(i)]) {
      const double gv = std::max(0.0, g.value(xi));
      value += gv * gv / (4.0 * mu);
    }
  }
  return value;
}

// L~(x, lambda) for explicit multipliers (phi(x) when lambda = lambda*(x)).
inline double lagrangian(const Game& game, const ConstraintSet& cs, const MixedProfile& x,
                         const std::vector<std::vector<double>>& lambda, double mu) {
  double value = expected_potential(game, x);
  for (int i = 0; i < cs.players(); ++i) {
    const auto& xi = x.strategies[static_cast<std::size_t>(i)];
    const auto& li = lambda[static_cast<std::size_t>(i)];
    const auto& constraints = cs.per_player[static_cast<std::size_t>(i)];
    for (std::size_t m = 0; m < constraints.size(); ++m)
      value += li[m] * constraints[m].value(xi) - mu * li[m] * li[m];
  }
  return value;
}

// Gradient block of phi for one player, evaluated via the envelope identity
// grad phi = grad_x L~(x, lambda*(x)): the potential gradient plus the
// multiplier-weighted constraint gradients.  (The descent step itself uses
// cost_gradient; the two differ by a constant shift the projection absorbs.)
inline std::vector<double> phi_gradient(const Game& game, const ConstraintSet& cs, int player,
                                        const MixedProfile& x, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("phi_gradient: mu must be > 0");
  std::vector<double> grad = potential_gradient(game, player, x);
  const auto ip = static_cast<std::size_t>(player);
  const auto& xi = x.strategies[ip];
  for (const auto& g : cs.per_player[ip]) {
    const double lam = std::max(0.0, g.value(xi) / (2.0 * mu));
    if (lam == 0.0) continue;
    const std::vector<double> cg = g.gradient(xi);
    for (std::size_t a = 0; a < grad.size(); ++a) grad[a] += lam * cg[a];
  }
  return grad;
}

// ||lambda|| never exceeds sqrt(d) * max(0, G_max) / (2 mu); the clamp keeps
// the bound meaningful when every constraint is strictly negative everywhere.
inline double lambda_norm_bound(const ConstraintSet& cs, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("lambda_norm_bound: mu must be > 0");
  const int d = cs.total_constraints();
  if (d == 0) return 0.0;
  const double gmax = std::max(0.0, g_max(cs));
  return std::sqrt(static_cast<double>(d)) * gmax / (2.0 * mu);
}

struct RunResult {
  Trajectory trajectory;
  SolverState best;            // post-step iterate of the smallest step
  double best_displacement = std::numeric_limits<double>::infinity();
  int best_iteration = 0;
  SolverState final_state;
};

namespace detail {

inline double profile_distance(const MixedProfile& a, const MixedProfile& b) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.strategies.size(); ++i)
    for (std::size_t j = 0; j < a.strategies[i].size(); ++j) {
      const double d = a.strategies[i][j] - b.strategies[i][j];
      sq += d * d;
    }
  return std::sqrt(sq);
}

inline TrajectoryPoint record_point(const Game& game, const ConstraintSet& cs,
                                    const SolverState& state, double mu, double displacement) {
  TrajectoryPoint pt;
  pt.t = state.iteration;
  pt.x = state.x;
  pt.lambda = state.lambda;
  const double ep = expected_potential(game, state.x);
  double penalty = 0.0;   // sum max(0,g)^2 / (4 mu)
  double lag_terms = 0.0; // sum lambda g - mu ||lambda||^2
  for (int i = 0; i < cs.players(); ++i) {
    const auto ipl = static_cast<std::size_t>(i);
    const auto& xi = state.x.strategies[ipl];
    const auto& constraints = cs.per_player[ipl];
    for (std::size_t m = 0; m < constraints.size(); ++m) {
      const double gv = constraints[m].value(xi);
      const double hinge = std::max(0.0, gv);
      penalty += hinge * hinge / (4.0 * mu);
      pt.violation += hinge;
      const double lam = state.lambda[ipl][m];
      lag_terms += lam * gv - mu * lam * lam;
      pt.lambda_sum += lam;
    }
  }
  pt.phi = ep + penalty;
  pt.lagrangian = ep + lag_terms;
  pt.nash_gap = nash_gap(game, cs, state.x).total;
  pt.displacement = displacement;
  return pt;
}

}  // namespace detail

// Runs T synchronous iterations from x0.  Records a trajectory point at t = 0,
// every record_every steps, and at the final step; returns the full trajectory
// together with the iterate whose incoming step displacement is smallest.
inline RunResult run(const Game& game, const ConstraintSet& cs, const MixedProfile& x0,
                     const SolverParams& params) {
  params.validate();
  game.validate();
  x0.validate(game.space);
  if (cs.players() != game.space.players())
    throw std::invalid_argument("run: constraint set does not match the game");

  RunResult result;
  SolverState state{x0, multiplier_step(cs, x0, params.mu), 0};
  result.trajectory.push_back(detail::record_point(game, cs, state, params.mu, 0.0));

  result.best = state;  // fallback for T = 0
  result.best_iteration = 0;

  for (int t = 0; t < params.iterations; ++t) {
    SolverState next = igd_step(game, cs, state, params);
    const double displacement = detail::profile_distance(next.x, state.x);
    if (displacement < result.best_displacement) {
      result.best_displacement = displacement;
      result.best = next;
      result.best_iteration = next.iteration;
    }
    state = std::move(next);
    if (state.iteration % params.record_every == 0 || state.iteration == params.iterations)
      result.trajectory.push_back(detail::record_point(game, cs, state, params.mu, displacement));
  }
  result.final_state = std::move(state);
  return result;
}

// Step-size recipe eta = mu / (4 ((n A_max Phi_max)^2 + (Lambda_max gamma)^2)),
// a conservative 1/(smoothness of phi) estimate.  Diagnostic default — any
// caller-supplied eta overrides it.
inline double recommended_step(const Game& game, const ConstraintSet& cs, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("recommended_step: mu must be > 0");
  const double n = static_cast<double>(game.space.players());
  const double a_max = static_cast<double>(game.space.max_actions());
  double phi_max = 0.0;
  for (double v : game.potential) phi_max = std::max(phi_max, std::abs(v));
  const double lam_gamma = lambda_norm_bound(cs, mu) * cs.gamma();
  const double smooth = n * a_max * phi_max;
  const double denom = 4.0 * (smooth * smooth + lam_gamma * lam_gamma);
  if (denom <= 0.0) return 1.0;  // flat objective: any step is safe
  return mu / denom;
}

// Iteration-count estimate sufficient for an eps-stationary point of phi:
//   T = (32 / (eps^2 mu)) (Phi_max + Lambda_max sqrt(d) G_max) ((n A_max)^2 + (Lambda_max gamma)^2)
// with G_max clamped at 0.  Returned as a double — the bound is often
// astronomically conservative.  Diagnostic only, never enforced.
inline double recommended_iterations(const Game& game, const ConstraintSet& cs, double mu,
                                     double eps) {
  if (!(mu > 0.0)) throw std::invalid_argument("recommended_iterations: mu must be > 0");
  if (!(eps > 0.0)) throw std::invalid_argument("recommended_iterations: eps must be > 0");
  const double n = static_cast<double>(game.space.players());
  const double a_max = static_cast<double>(game.space.max_actions());
  double phi_max = 0.0;
  for (double v : game.potential) phi_max = std::max(phi_max, std::abs(v));
  const int d = cs.total_constraints();
  const double gmax = d == 0 ? 0.0 : std::max(0.0, g_max(cs));
  const double lam_max = lambda_norm_bound(cs, mu);
  const double gamma = cs.gamma();
  const double level = phi_max + lam_max * std::sqrt(static_cast<double>(std::max(d, 1))) * gmax;
  const double curvature = (n * a_max) * (n * a_max) + (lam_max * gamma) * (lam_max * gamma);
  return 32.0 / (eps * eps * mu) * level * curvature;
}

}  // namespace potg
