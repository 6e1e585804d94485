// Minimal end-to-end use of the library: build the bundled highway network,
// run the regularized primal-dual dynamics, and print where everyone ends up.

#include <potg/potg.hpp>

#include <cstdio>

int main() {
  using namespace potg;

  // Five commuters, four disjoint routes, a per-player gas budget of 13.
  const CongestionInstance instance = highway_instance(/*highway_slope=*/0.01,
                                                       /*gas_budget=*/13.0);
  const CompiledGame compiled = compile(instance);

  SolverParams params;
  params.mu = 1e-3;          // dual regularization
  params.eta = 1e-3;         // primal step size
  params.iterations = 2000;
  params.record_every = 100;

  const MixedProfile start = MixedProfile::uniform(compiled.game.space);
  const RunResult result = run(compiled.game, compiled.constraints, start, params);

  std::printf("iterations: %d, recorded points: %zu\n", params.iterations,
              result.trajectory.size());
  std::printf("potential: %.4f -> %.4f\n", result.trajectory.front().phi,
              result.trajectory.back().phi);

  const NashGapReport gap = nash_gap(compiled.game, compiled.constraints, result.final_state.x);
  std::printf("nash gap: %.6f, budget violation: %.6f\n", gap.total,
              violation(compiled.constraints, result.final_state.x));

  for (int i = 0; i < compiled.game.space.players(); ++i) {
    std::printf("player %d:", i);
    const auto& xi = result.final_state.x.strategies[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < xi.size(); ++a)
      std::printf(" %s=%.3f", instance.network.path_name(static_cast<int>(a)).c_str(), xi[a]);
    std::printf("\n");
  }
  return 0;
}
