#pragma once

// Per-player private convex constraints g_{i,m}(x_i) <= 0.
//
// The interface accepts any differentiable convex g via value/gradient
// callbacks; affine constraints g(x_i) = c'x_i - b are the concrete kind the
// library ships and the only kind the exact vertex-enumeration operations
// (slater_margin, g_max, best-response LP) support.  Non-affine constraints
// make those operations throw rather than silently approximate.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "potg/game.hpp"

namespace potg {

struct AffineConstraint {
  std::vector<double> coefficients;  // c, one entry per action
  double offset = 0.0;               // b; the constraint reads c'x - b <= 0
};

class Constraint {
 public:
  using ValueFn = std::function<double(const std::vector<double>&)>;
  using GradientFn = std::function<std::vector<double>(const std::vector<double>&)>;

  static Constraint affine(std::vector<double> coefficients, double offset) {
    for (double c : coefficients)
      if (!std::isfinite(c)) throw std::invalid_argument("Constraint: non-finite coefficient");
    if (!std::isfinite(offset)) throw std::invalid_argument("Constraint: non-finite offset");
    Constraint g;
    g.affine_ = AffineConstraint{std::move(coefficients), offset};
    return g;
  }

  // General differentiable convex constraint; gamma bounds the smoothness of
  // its gradient (0 for affine).
  static Constraint smooth(ValueFn value, GradientFn gradient, double gamma) {
    if (!value || !gradient) throw std::invalid_argument("Constraint: null callback");
    if (!(gamma >= 0.0)) throw std::invalid_argument("Constraint: gamma must be >= 0");
    Constraint g;
    g.value_ = std::move(value);
    g.gradient_ = std::move(gradient);
    g.gamma_ = gamma;
    return g;
  }

  double value(const std::vector<double>& x) const {
    if (affine_) {
      const auto& a = *affine_;
      if (x.size() != a.coefficients.size())
        throw std::invalid_argument("Constraint: dimension mismatch");
      double dot = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) dot += a.coefficients[j] * x[j];
      return dot - a.offset;
    }
    return value_(x);
  }

  std::vector<double> gradient(const std::vector<double>& x) const {
    if (affine_) {
      if (x.size() != affine_->coefficients.size())
        throw std::invalid_argument("Constraint: dimension mismatch");
      return affine_->coefficients;
    }
    return gradient_(x);
  }

  bool is_affine() const { return affine_.has_value(); }

  const AffineConstraint& as_affine() const {
    if (!affine_) throw std::logic_error("Constraint: operation requires an affine constraint");
    return *affine_;
  }

  double gamma() const { return gamma_; }

 private:
  Constraint() = default;
  std::optional<AffineConstraint> affine_;
  ValueFn value_;
  GradientFn gradient_;
  double gamma_ = 0.0;
};

struct ConstraintSet {
  std::vector<std::vector<Constraint>> per_player;  // d_i constraints for player i

  int players() const { return static_cast<int>(per_player.size()); }

  int constraint_count(int player) const {
    return static_cast<int>(per_player.at(static_cast<std::size_t>(player)).size());
  }

  // d = sum_i d_i
  int total_constraints() const {
    int d = 0;
    for (const auto& list : per_player) d += static_cast<int>(list.size());
    return d;
  }

  // Smoothness bound over all constraint gradients; 0 when everything is affine.
  double gamma() const {
    double g = 0.0;
    for (const auto& list : per_player)
      for (const auto& c : list) g = std::max(g, c.gamma());
    return g;
  }

  static ConstraintSet none(int players) {
    ConstraintSet cs;
    cs.per_player.resize(static_cast<std::size_t>(players));
    return cs;
  }

  void check_player(int player) const {
    if (player < 0 || player >= players())
      throw std::out_of_range("ConstraintSet: player index out of range");
  }
};

// (g_{i,1}(x_i), ..., g_{i,d_i}(x_i))
inline std::vector<double> evaluate(const ConstraintSet& cs, int player,
                                    const std::vector<double>& x_i) {
  cs.check_player(player);
  const auto& list = cs.per_player[static_cast<std::size_t>(player)];
  std::vector<double> values;
  values.reserve(list.size());
  for (const auto& g : list) values.push_back(g.value(x_i));
  return values;
}

// Gradient of g_{i,m}; constant (the coefficient vector) for affine
// constraints, which is the only point-free form available.  Non-affine
// constraints require a point: use Constraint::gradient directly.
inline std::vector<double> gradient(const ConstraintSet& cs, int player, int m) {
  cs.check_player(player);
  const auto& list = cs.per_player[static_cast<std::size_t>(player)];
  if (m < 0 || m >= static_cast<int>(list.size()))
    throw std::out_of_range("ConstraintSet: constraint index out of range");
  const auto& g = list[static_cast<std::size_t>(m)];
  if (!g.is_affine())
    throw std::logic_error("ConstraintSet: point-free gradient requires an affine constraint");
  return g.as_affine().coefficients;
}

// Reported feasibility metric: sum_i sum_m max(0, g_{i,m}(x_i)).
inline double violation(const ConstraintSet& cs, const MixedProfile& x) {
  if (static_cast<int>(x.strategies.size()) != cs.players())
    throw std::invalid_argument("violation: player count mismatch");
  double total = 0.0;
  for (int i = 0; i < cs.players(); ++i)
    for (const auto& g : cs.per_player[static_cast<std::size_t>(i)])
      total += std::max(0.0, g.value(x.strategies[static_cast<std::size_t>(i)]));
  return total;
}

namespace detail {

// Worst value of one affine constraint over the simplex: max over vertices of
// c'e_a - b = max(c) - b.
inline double vertex_max(const Constraint& g) {
  const auto& a = g.as_affine();
  if (a.coefficients.empty()) return -a.offset;
  double m = -std::numeric_limits<double>::infinity();
  for (double c : a.coefficients) m = std::max(m, c);
  return m - a.offset;
}

}  // namespace detail

// Per-constraint certificate margin: the worst (largest) value g_{i,m} attains
// over the player's simplex, exact for affine g via vertex enumeration.  A
// negative value certifies that every vertex — hence the whole simplex — is
// strictly feasible for this constraint.
inline double slater_margin(const ConstraintSet& cs, int player, int m) {
  cs.check_player(player);
  const auto& list = cs.per_player[static_cast<std::size_t>(player)];
  if (m < 0 || m >= static_cast<int>(list.size()))
    throw std::out_of_range("ConstraintSet: constraint index out of range");
  const auto& g = list[static_cast<std::size_t>(m)];
  if (!g.is_affine())
    throw std::logic_error("slater_margin: unsupported for non-affine constraints");
  return detail::vertex_max(g);
}

// Player-level certificate: the weakest constraint's margin, i.e. max over m
// of slater_margin(player, m).  Negative return certifies a strictly feasible
// vertex (indeed, every vertex) for all of the player's constraints.  Players
// without constraints report -infinity (vacuously satisfied).
inline double slater_margin(const ConstraintSet& cs, int player) {
  cs.check_player(player);
  const auto& list = cs.per_player[static_cast<std::size_t>(player)];
  double margin = -std::numeric_limits<double>::infinity();
  for (int m = 0; m < static_cast<int>(list.size()); ++m)
    margin = std::max(margin, slater_margin(cs, player, m));
  return margin;
}

// G_max: max over players, constraints, and simplex vertices of g_{i,m}.
// -infinity when there are no constraints at all.
inline double g_max(const ConstraintSet& cs) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& list : cs.per_player)
    for (const auto& g : list) {
      if (!g.is_affine()) throw std::logic_error("g_max: unsupported for non-affine constraints");
      m = std::max(m, detail::vertex_max(g));
    }
  return m;
}

}  // namespace potg
