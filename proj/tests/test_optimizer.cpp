#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bellbench/optimizer.hpp"
#include "bellbench/sampling.hpp"
#include "oracles.hpp"

using namespace bellbench;

namespace {
constexpr double sqrt2 = std::numbers::sqrt2;

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("maximize_chsh on the alpha-beta family") {
    SUBCASE("maximal entanglement reaches 2 sqrt(2)") {
        const auto result = maximize_chsh(make_alpha_beta_state_from_alpha2(0.5));
        CHECK(close(result.best_value, 2.0 * sqrt2, 1e-6));
    }
    SUBCASE("product state ceiling is 2") {
        const auto result = maximize_chsh(make_alpha_beta_state_from_alpha2(1.0));
        CHECK(close(result.best_value, 2.0, 1e-6));
    }
    SUBCASE("family curve matches 2 sqrt(1 + 4 alpha^2 beta^2)") {
        for (double u : {0.1, 0.25, 0.4, 0.6, 0.85}) {
            const auto state = make_alpha_beta_state_from_alpha2(u);
            const double expected = 2.0 * std::sqrt(1.0 + 4.0 * u * (1.0 - u));
            SUBCASE("general search") {
                const auto result = maximize_chsh(state);
                CHECK(close(result.best_value, expected, 1e-6));
            }
            SUBCASE("planar search") {
                const auto result = maximize_chsh(state, true);
                CHECK(close(result.best_value, expected, 1e-6));
                CHECK(result.best_config.planar().has_value());
            }
            SUBCASE("dense slice oracle") {
                CHECK(close(oracle::dense_slice_max_chsh(state), expected, 1e-9));
            }
        }
    }
}

TEST_CASE("maximize_chsh invariants") {
    Xoshiro256pp rng(211);
    for (int i = 0; i < 10; ++i) {
        const auto state = random_haar_state(rng);
        const auto result = maximize_chsh(state);
        // Re-evaluation consistency through the dense path.
        CHECK(close(std::abs(chsh_value(state, result.best_config)), result.best_value, 1e-9));
        // Refinement never loses ground against the grid.
        CHECK(result.best_value >= result.coarse_value - 1e-12);
        CHECK(result.refined);
        CHECK(std::abs(result.best_value) <= 2.0 * sqrt2 + 1e-9);
    }
}

TEST_CASE("every entangled family member admits a violating configuration") {
    for (int i = 1; i <= 19; ++i) {
        const double u = 0.05 * i;
        const auto state = make_alpha_beta_state_from_alpha2(u);
        const auto result = maximize_chsh(state);
        CHECK(result.best_value > 2.0 + 1e-6);
        CHECK(close(result.best_value, oracle::dense_slice_max_chsh(state), 1e-6));
    }
}

TEST_CASE("maximize_g") {
    SUBCASE("family closed form 2 alpha beta") {
        for (double u : {0.1, 0.3, 0.5, 0.8}) {
            const auto result = maximize_g(make_alpha_beta_state_from_alpha2(u));
            CHECK(close(result.best_value, 2.0 * std::sqrt(u * (1.0 - u)), 1e-9));
        }
    }
    SUBCASE("product state gives zero") {
        const auto result = maximize_g(make_alpha_beta_state_from_alpha2(1.0));
        CHECK(result.best_value <= 1e-10);
    }
    SUBCASE("maximal entanglement gives one") {
        const auto result = maximize_g(make_alpha_beta_state_from_alpha2(0.5));
        CHECK(close(result.best_value, 1.0, 1e-9));
    }
    SUBCASE("agreement with the singular value and re-evaluation consistency") {
        Xoshiro256pp rng(223);
        for (int i = 0; i < 25; ++i) {
            const auto state = random_haar_state(rng);
            const auto result = maximize_g(state);
            const auto verdict = separability_test(state);
            CHECK(close(result.best_value, verdict.max_abs_g, 1e-9));
            CHECK(close(std::abs(g_value(state, result.best_a, result.best_b)),
                        result.best_value, 1e-9));
            CHECK(result.best_value >= result.coarse_value - 1e-12);
        }
    }
}

TEST_CASE("find_crossings") {
    SUBCASE("configuration B crosses the classical bound twice") {
        // |<B>| = sqrt(2)(1 + 2 alpha beta) = 2 solves to
        // alpha^2 = (1 -+ sqrt(2 sqrt(2) - 2)) / 2.
        const double root = std::sqrt(2.0 * sqrt2 - 2.0);
        const double u_low = (1.0 - root) / 2.0;
        const double u_high = (1.0 + root) / 2.0;
        const auto crossings = find_crossings(ChshConfig::preset_b(), 2.0);
        REQUIRE(crossings.size() == 2);
        CHECK(close(crossings[0], u_low, 1e-10));
        CHECK(close(crossings[1], u_high, 1e-10));
    }
    SUBCASE("no crossings above the quantum ceiling") {
        CHECK(find_crossings(ChshConfig::preset_b(), 2.0 * sqrt2 + 0.1).empty());
    }
    SUBCASE("configuration C crossings are self-consistent") {
        const auto config = ChshConfig::preset_c();
        const auto crossings = find_crossings(config, 2.0);
        CHECK(!crossings.empty());
        for (double u : crossings) {
            const double v = std::abs(chsh_value(make_alpha_beta_state_from_alpha2(u), config));
            CHECK(close(v, 2.0, 1e-9));
        }
    }
}
