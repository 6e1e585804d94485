#include <catch2/catch_amalgamated.hpp>

#include <potg/congestion.hpp>
#include <potg/game.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"

using namespace potg;

namespace {

Game matching_pennies_potential() {
    // 2 players, 2 actions, Phi = [[0,1],[1,0]]; both players' costs equal Phi.
    Game g;
    g.space.actions = {2, 2};
    g.potential = {0.0, 1.0, 1.0, 0.0};
    g.costs = {g.potential, g.potential};
    return g;
}

}  // namespace

TEST_CASE("action space counts and validation") {
    ActionSpace space{{2, 3, 4}};
    CHECK(space.players() == 3);
    CHECK(space.num_actions(1) == 3);
    CHECK(space.max_actions() == 4);
    CHECK(space.profile_count() == 24);

    CHECK_THROWS_AS(ActionSpace{}.validate(), std::invalid_argument);
    CHECK_THROWS_AS((ActionSpace{{2, 0}}).validate(), std::invalid_argument);
}

TEST_CASE("profile-space enumeration guard") {
    // 10 players with 10 actions each = 10^10 joint profiles, over the ceiling.
    ActionSpace big{std::vector<int>(10, 10)};
    CHECK_THROWS_AS(big.profile_count(), std::length_error);

    // Exactly at the ceiling passes: 10^7.
    ActionSpace at_limit{std::vector<int>(7, 10)};
    CHECK(at_limit.profile_count() == 10'000'000);
}

TEST_CASE("mixed profile validation") {
    ActionSpace space{{2, 2}};
    MixedProfile u = MixedProfile::uniform(space);
    CHECK_NOTHROW(u.validate(space));
    CHECK(u.strategies[0][0] == 0.5);

    MixedProfile bad_sum = u;
    bad_sum.strategies[0] = {0.7, 0.7};
    CHECK_THROWS_AS(bad_sum.validate(space), std::invalid_argument);

    MixedProfile negative = u;
    negative.strategies[1] = {1.5, -0.5};
    CHECK_THROWS_AS(negative.validate(space), std::invalid_argument);

    MixedProfile wrong_shape;
    wrong_shape.strategies = {{1.0, 0.0}};
    CHECK_THROWS_AS(wrong_shape.validate(space), std::invalid_argument);
}

TEST_CASE("expected potential: pinned values") {
    SECTION("pure strategy selects the tensor entry") {
        Game g;
        g.space.actions = {2};
        g.potential = {3.0, 7.0};
        g.costs = {g.potential};
        MixedProfile x;
        x.strategies = {{1.0, 0.0}};
        CHECK(expected_potential(g, x) == 3.0);
    }
    SECTION("constant tensor") {
        Game g;
        g.space.actions = {2, 2};
        g.potential = {1.0, 1.0, 1.0, 1.0};
        g.costs = {g.potential, g.potential};
        MixedProfile x;
        x.strategies = {{0.3, 0.7}, {0.9, 0.1}};
        CHECK(expected_potential(g, x) == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("uniform play on the off-diagonal tensor") {
        const Game g = matching_pennies_potential();
        const MixedProfile x = MixedProfile::uniform(g.space);
        CHECK(expected_potential(g, x) == Catch::Approx(0.5).margin(1e-15));
    }
}

TEST_CASE("expected cost: pinned values") {
    SECTION("pure strategy") {
        Game g;
        g.space.actions = {2};
        g.potential = {2.0, 5.0};
        g.costs = {{2.0, 5.0}};
        MixedProfile x;
        x.strategies = {{0.0, 1.0}};
        CHECK(expected_cost(g, 0, x) == 5.0);
    }
    SECTION("matching game under uniform play") {
        Game g;
        g.space.actions = {2, 2};
        g.potential = {1.0, 0.0, 0.0, 1.0};
        g.costs = {{1.0, 0.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 1.0}};
        const MixedProfile x = MixedProfile::uniform(g.space);
        CHECK(expected_cost(g, 0, x) == Catch::Approx(0.5).margin(1e-15));
    }
    SECTION("pure profiles read tensor entries exactly") {
        std::mt19937_64 rng(1001);
        const Game g = oracle::random_potential_game(rng);
        std::vector<int> a(static_cast<std::size_t>(g.space.players()), 0);
        detail::for_each_profile(g.space, [&](const std::vector<int>& profile, std::size_t idx) {
            MixedProfile x;
            for (int i = 0; i < g.space.players(); ++i) {
                std::vector<double> xi(static_cast<std::size_t>(g.space.num_actions(i)), 0.0);
                xi[static_cast<std::size_t>(profile[static_cast<std::size_t>(i)])] = 1.0;
                x.strategies.push_back(std::move(xi));
            }
            CHECK(expected_potential(g, x) == g.potential[idx]);
            for (int i = 0; i < g.space.players(); ++i)
                CHECK(expected_cost(g, i, x) == g.costs[static_cast<std::size_t>(i)][idx]);
        });
        (void)a;
    }
}

TEST_CASE("expectations agree with brute-force recursion on random games") {
    std::mt19937_64 rng(1002);
    for (int trial = 0; trial < 25; ++trial) {
        const Game g = oracle::random_potential_game(rng);
        const MixedProfile x = oracle::random_profile(rng, g.space);
        CHECK(expected_potential(g, x) ==
              Catch::Approx(oracle::brute_expectation(g, g.potential, x)).margin(1e-12));
        for (int i = 0; i < g.space.players(); ++i)
            CHECK(expected_cost(g, i, x) ==
                  Catch::Approx(oracle::brute_expectation(g, g.costs[static_cast<std::size_t>(i)], x))
                      .margin(1e-12));
    }
}

TEST_CASE("potential gradient: pinned values") {
    SECTION("single player: the tensor itself") {
        Game g;
        g.space.actions = {3};
        g.potential = {4.0, -1.0, 2.5};
        g.costs = {g.potential};
        MixedProfile x;
        x.strategies = {{0.2, 0.3, 0.5}};
        const auto grad = potential_gradient(g, 0, x);
        CHECK(grad == std::vector<double>{4.0, -1.0, 2.5});
    }
    SECTION("constant tensor gives a constant gradient") {
        Game g;
        g.space.actions = {2, 2};
        g.potential = {3.0, 3.0, 3.0, 3.0};
        g.costs = {g.potential, g.potential};
        const auto grad = potential_gradient(g, 0, MixedProfile::uniform(g.space));
        CHECK(grad[0] == Catch::Approx(3.0).margin(1e-15));
        CHECK(grad[1] == Catch::Approx(3.0).margin(1e-15));
    }
    SECTION("off-diagonal tensor under a uniform opponent") {
        const Game g = matching_pennies_potential();
        const auto grad = potential_gradient(g, 0, MixedProfile::uniform(g.space));
        CHECK(grad[0] == Catch::Approx(0.5).margin(1e-15));
        CHECK(grad[1] == Catch::Approx(0.5).margin(1e-15));
    }
}

TEST_CASE("cost gradient: pinned values") {
    SECTION("single player") {
        Game g;
        g.space.actions = {2};
        g.potential = {2.0, 5.0};
        g.costs = {{2.0, 5.0}};
        MixedProfile x;
        x.strategies = {{0.5, 0.5}};
        CHECK(cost_gradient(g, 0, x) == std::vector<double>{2.0, 5.0});
    }
    SECTION("skewed opponent mixture") {
        const Game g = matching_pennies_potential();
        MixedProfile x;
        x.strategies = {{0.5, 0.5}, {0.25, 0.75}};
        const auto grad = cost_gradient(g, 0, x);
        CHECK(grad[0] == Catch::Approx(0.75).margin(1e-15));
        CHECK(grad[1] == Catch::Approx(0.25).margin(1e-15));
    }
    SECTION("cost and potential gradients differ by a constant per player") {
        std::mt19937_64 rng(1003);
        for (int trial = 0; trial < 20; ++trial) {
            const Game g = oracle::random_potential_game(rng);
            const MixedProfile x = oracle::random_profile(rng, g.space);
            for (int i = 0; i < g.space.players(); ++i) {
                const auto cg = cost_gradient(g, i, x);
                const auto pg = potential_gradient(g, i, x);
                const double shift = cg[0] - pg[0];
                for (std::size_t a = 1; a < cg.size(); ++a)
                    CHECK(cg[a] - pg[a] == Catch::Approx(shift).margin(1e-10));
            }
        }
    }
}

TEST_CASE("gradient matches finite differences of the expectation") {
    std::mt19937_64 rng(1004);
    for (int trial = 0; trial < 10; ++trial) {
        const Game g = oracle::random_potential_game(rng);
        const MixedProfile x = oracle::random_profile(rng, g.space);
        for (int i = 0; i < g.space.players(); ++i) {
            const auto grad = potential_gradient(g, i, x);
            for (std::size_t k = 0; k < grad.size(); ++k) {
                const double fd = oracle::central_difference(
                    [&](const MixedProfile& y) {
                        return oracle::brute_expectation(g, g.potential, y);
                    },
                    x, i, k);
                const double scale = std::max(1.0, std::abs(grad[k]));
                CHECK(std::abs(fd - grad[k]) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("multilinearity in each player's strategy") {
    std::mt19937_64 rng(1005);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Game g = oracle::random_potential_game(rng);
        const MixedProfile base = oracle::random_profile(rng, g.space);
        for (int i = 0; i < g.space.players(); ++i) {
            const auto u = oracle::random_interior_point(
                rng, static_cast<std::size_t>(g.space.num_actions(i)));
            const auto v = oracle::random_interior_point(
                rng, static_cast<std::size_t>(g.space.num_actions(i)));
            const double alpha = unif(rng);

            MixedProfile xu = base, xv = base, mix = base;
            xu.strategies[static_cast<std::size_t>(i)] = u;
            xv.strategies[static_cast<std::size_t>(i)] = v;
            auto& m = mix.strategies[static_cast<std::size_t>(i)];
            for (std::size_t a = 0; a < m.size(); ++a)
                m[a] = alpha * u[a] + (1.0 - alpha) * v[a];

            const double lhs = expected_potential(g, mix);
            const double rhs =
                alpha * expected_potential(g, xu) + (1.0 - alpha) * expected_potential(g, xv);
            CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
        }
    }
}

TEST_CASE("validate_potential") {
    SECTION("compiled routing games satisfy the identity exactly") {
        const CompiledGame c = compile(highway_instance());
        const PotentialCheck check = validate_potential(c.game);
        CHECK(check.ok);
        CHECK(check.max_violation <= 1e-12);
    }
    SECTION("a one-entry perturbation is detected") {
        CompiledGame c = compile(highway_instance());
        c.game.costs[0][17] += 1.0;
        const PotentialCheck check = validate_potential(c.game);
        CHECK_FALSE(check.ok);
        CHECK(check.max_violation >= 1.0 - 1e-12);
    }
    SECTION("single-player game with cost equal to potential") {
        Game g;
        g.space.actions = {4};
        g.potential = {1.0, 2.0, 3.0, 4.0};
        g.costs = {g.potential};
        const PotentialCheck check = validate_potential(g);
        CHECK(check.ok);
        CHECK(check.max_violation == 0.0);
    }
    SECTION("random generated potential games pass") {
        std::mt19937_64 rng(1006);
        for (int trial = 0; trial < 10; ++trial) {
            const Game g = oracle::random_potential_game(rng);
            CHECK(validate_potential(g).ok);
        }
    }
}

TEST_CASE("dimension mismatches are rejected") {
    const Game g = matching_pennies_potential();
    MixedProfile wrong;
    wrong.strategies = {{1.0, 0.0}, {0.5, 0.25, 0.25}};
    CHECK_THROWS_AS(expected_potential(g, wrong), std::invalid_argument);
    CHECK_THROWS_AS(cost_gradient(g, 5, MixedProfile::uniform(g.space)), std::out_of_range);

    Game bad = g;
    bad.potential.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
