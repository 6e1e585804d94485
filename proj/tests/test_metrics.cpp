#include <catch2/catch_amalgamated.hpp>

#include <potg/congestion.hpp>
#include <potg/metrics.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"

using namespace potg;

namespace {

Game single_player_two_costs() {
    Game g;
    g.space.actions = {2};
    g.potential = {1.0, 2.0};
    g.costs = {{1.0, 2.0}};
    return g;
}

}  // namespace

TEST_CASE("best response program: pinned values") {
    SECTION("unconstrained optimum sits on a vertex") {
        const BestResponse br =
            minimize_over_feasible({1.0, 2.0}, ConstraintSet::none(1), 0);
        CHECK(br.value == 1.0);
        CHECK(br.strategy == std::vector<double>{1.0, 0.0});
    }
    SECTION("a cap on the cheap action forces a two-point solution") {
        ConstraintSet cs = ConstraintSet::none(1);
        cs.per_player[0].push_back(Constraint::affine({1.0, 0.0}, 0.5));  // x(0) <= 0.5
        const BestResponse br = minimize_over_feasible({1.0, 2.0}, cs, 0);
        CHECK(br.value == Catch::Approx(1.5).margin(1e-12));
        CHECK(br.strategy[0] == Catch::Approx(0.5).margin(1e-12));
        CHECK(br.strategy[1] == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("a budget of 2 forces the shortest route") {
        CongestionInstance inst = highway_instance(0.01, 2.0);
        const CompiledGame c = compile(inst);
        std::mt19937_64 rng(5001);
        for (int trial = 0; trial < 5; ++trial) {
            const MixedProfile x = oracle::random_profile(rng, c.game.space);
            const BestResponse br = best_response_lp(c.game, c.constraints, 0, x);
            REQUIRE(br.strategy.size() == 4);
            CHECK(br.strategy[0] == Catch::Approx(1.0).margin(1e-9));
        }
    }
    SECTION("an empty feasible region is an error") {
        ConstraintSet cs = ConstraintSet::none(1);
        cs.per_player[0].push_back(Constraint::affine({2.0, 3.0}, 1.0));  // min over simplex is 1
        CHECK_THROWS_AS(minimize_over_feasible({1.0, 1.0}, cs, 0), std::runtime_error);
    }
}

TEST_CASE("best response beats every feasible grid point") {
    std::mt19937_64 rng(5002);
    std::uniform_real_distribution<double> cost(-2.0, 2.0);
    std::uniform_real_distribution<double> coeff(-1.0, 2.0);
    std::uniform_int_distribution<int> actions_draw(2, 4);
    std::uniform_int_distribution<int> d_draw(0, 2);
    int tested = 0;
    while (tested < 20) {
        const int actions = actions_draw(rng);
        std::vector<double> p(static_cast<std::size_t>(actions));
        for (double& v : p) v = cost(rng);
        ConstraintSet cs = ConstraintSet::none(1);
        const int d = d_draw(rng);
        for (int m = 0; m < d; ++m) {
            std::vector<double> c(static_cast<std::size_t>(actions));
            for (double& v : c) v = coeff(rng);
            cs.per_player[0].push_back(Constraint::affine(std::move(c), coeff(rng) + 0.5));
        }
        BestResponse br;
        try {
            br = minimize_over_feasible(p, cs, 0);
        } catch (const std::runtime_error&) {
            continue;  // empty region; draw another instance
        }
        ++tested;
        const double grid = oracle::grid_best_response(p, cs, 0, 100);
        CHECK(br.value <= grid + 1e-9);

        // The optimizer itself is feasible and lives on the simplex.
        double sum = 0.0;
        for (double v : br.strategy) {
            CHECK(v >= -1e-9);
            sum += v;
        }
        CHECK(sum == Catch::Approx(1.0).margin(1e-9));
        for (double gv : evaluate(cs, 0, br.strategy)) CHECK(gv <= 1e-9);
    }
}

TEST_CASE("nash gap: pinned values") {
    SECTION("a dominant-strategy equilibrium has zero gap") {
        const CompiledGame c = compile(highway_instance());
        MixedProfile x;
        for (int i = 0; i < 5; ++i) x.strategies.push_back({0.0, 0.0, 0.0, 1.0});
        const NashGapReport report = nash_gap(c.game, c.constraints, x);
        CHECK(report.total <= 1e-9);
        for (double g : report.per_player) CHECK(g <= 1e-9);
    }
    SECTION("playing the worse action costs exactly the difference") {
        const Game g = single_player_two_costs();
        MixedProfile x;
        x.strategies = {{0.0, 1.0}};
        const NashGapReport report = nash_gap(g, ConstraintSet::none(1), x);
        CHECK(report.total == Catch::Approx(1.0).margin(1e-12));
        CHECK(report.best_responses[0] == std::vector<double>{1.0, 0.0});
    }
    SECTION("total is the sum of per-player gaps") {
        const CompiledGame c = compile(highway_instance());
        std::mt19937_64 rng(5003);
        const MixedProfile x = oracle::random_profile(rng, c.game.space);
        const NashGapReport report = nash_gap(c.game, c.constraints, x);
        double sum = 0.0;
        for (double g : report.per_player) {
            CHECK(g >= 0.0);
            sum += g;
        }
        CHECK(report.total == Catch::Approx(sum).margin(1e-12));
    }
}

TEST_CASE("nash gap soundness: the report's responses attain its values") {
    const CompiledGame c = compile(highway_instance(0.01, 6.0));
    std::mt19937_64 rng(5004);
    for (int trial = 0; trial < 5; ++trial) {
        const MixedProfile x = oracle::random_profile(rng, c.game.space);
        const NashGapReport report = nash_gap(c.game, c.constraints, x);
        for (int i = 0; i < 5; ++i) {
            MixedProfile deviated = x;
            deviated.strategies[static_cast<std::size_t>(i)] =
                report.best_responses[static_cast<std::size_t>(i)];
            const double achieved = expected_cost(c.game, i, deviated);
            const double current = expected_cost(c.game, i, x);
            // A random (possibly infeasible) strategy can cost less than the
            // best feasible response, so the improvement clamps at 0.
            const double clamped = std::max(0.0, current - achieved);
            CHECK(std::abs(clamped - report.per_player[static_cast<std::size_t>(i)]) <= 1e-10);
        }
    }
}

TEST_CASE("relaxing the feasible set never shrinks the gap") {
    const CompiledGame c = compile(highway_instance(0.01, 4.0));
    std::mt19937_64 rng(5005);
    const MixedProfile x = oracle::random_profile(rng, c.game.space);
    const double exact = nash_gap(c.game, c.constraints, x).total;
    const double relaxed = nash_gap_relaxed(c.game, c.constraints, x, 0.5).total;
    CHECK(relaxed >= exact - 1e-12);
    CHECK(nash_gap_relaxed(c.game, c.constraints, x, 0.0).total ==
          Catch::Approx(exact).margin(1e-12));
    CHECK_THROWS_AS(nash_gap_relaxed(c.game, c.constraints, x, -0.1), std::invalid_argument);
}

TEST_CASE("multiplier summary") {
    CHECK(multiplier_summary({}) == 0.0);
    CHECK(multiplier_summary({{0.0}, {0.0, 0.0}}) == 0.0);
    CHECK(multiplier_summary({{2.0}, {0.5}}) == 2.5);
}

TEST_CASE("optimal multiplier bound: pinned values") {
    SECTION("a flat potential gives a zero bound") {
        Game g;
        g.space.actions = {2};
        g.potential = {3.0, 3.0};
        g.costs = {g.potential};
        ConstraintSet cs = ConstraintSet::none(1);
        cs.per_player[0].push_back(Constraint::affine({-1.0, -1.0}, 0.0));  // margin -1
        CHECK(optimal_multiplier_bound(g, cs, 0) == 0.0);
    }
    SECTION("range 10 over margin 2 gives 10") {
        Game g;
        g.space.actions = {2};
        g.potential = {0.0, 10.0};
        g.costs = {g.potential};
        ConstraintSet cs = ConstraintSet::none(1);
        cs.per_player[0].push_back(Constraint::affine({-2.0, -2.0}, 0.0));  // margin -2
        CHECK(optimal_multiplier_bound(g, cs, 0) == Catch::Approx(10.0).margin(1e-12));
    }
    SECTION("the benchmark at budget 11") {
        const CompiledGame c = compile(highway_instance(0.01, 11.0));
        // Potential range: 60 (everyone on the four-edge road) down to 1.5
        // (everyone on the highway); margin -1 from the 10-unit route.
        CHECK(optimal_multiplier_bound(c.game, c.constraints, 0) ==
              Catch::Approx(117.0).margin(1e-9));
    }
    SECTION("unavailable without a strictly negative margin") {
        const CompiledGame c = compile(highway_instance(0.01, 10.0));  // margin exactly 0
        CHECK_THROWS_AS(optimal_multiplier_bound(c.game, c.constraints, 0), std::domain_error);
    }
    SECTION("players without constraints are unconstrained at zero") {
        Game g = single_player_two_costs();
        CHECK(optimal_multiplier_bound(g, ConstraintSet::none(1), 0) == 0.0);
    }
}
