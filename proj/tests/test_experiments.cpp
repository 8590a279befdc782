#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bellbench/experiments.hpp"
#include "oracles.hpp"

using namespace bellbench;
namespace fs = std::filesystem;

namespace {
constexpr double sqrt2 = std::numbers::sqrt2;

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "bellbench_test";
    fs::create_directories(dir);
    return dir / name;
}
}  // namespace

TEST_CASE("figure config labels") {
    CHECK(parse_figure_config("B") == FigureConfig::b);
    CHECK(parse_figure_config("c") == FigureConfig::c);
    CHECK_THROWS_AS(parse_figure_config("D"), std::invalid_argument);
    CHECK_THROWS_AS(parse_figure_config("AB"), std::invalid_argument);
}

TEST_CASE("figure 1 scan") {
    const auto scan = figure1_scan({FigureConfig::a, FigureConfig::b, FigureConfig::c}, 101);
    REQUIRE(scan.series.size() == 5);  // three configs + two bound lines
    REQUIRE(scan.x.size() == 101);

    SUBCASE("x grid strictly increasing over [0, 1]") {
        CHECK(scan.x.front() == 0.0);
        CHECK(scan.x.back() == 1.0);
        for (std::size_t i = 1; i < scan.x.size(); ++i) CHECK(scan.x[i] > scan.x[i - 1]);
    }
    SUBCASE("configuration B equals -sqrt(2)(1 + 2 alpha beta)") {
        const auto& b = scan.series[1];
        CHECK(b.name == "B");
        for (std::size_t i = 0; i < scan.x.size(); ++i) {
            const double u = scan.x[i];
            CHECK(close(b.y[i], -sqrt2 * (1.0 + 2.0 * std::sqrt(u * (1.0 - u))), 1e-9));
        }
        CHECK(close(b.y[50], -2.0 * sqrt2, 1e-9));  // alpha^2 = 0.5
    }
    SUBCASE("separable endpoints stay within [-2, 2]") {
        for (std::size_t s = 0; s < 3; ++s) {
            CHECK(std::abs(scan.series[s].y.front()) <= 2.0 + 1e-12);
            CHECK(std::abs(scan.series[s].y.back()) <= 2.0 + 1e-12);
        }
    }
    SUBCASE("every point recomputes through the dense path") {
        const std::vector<ChshConfig> configs = {ChshConfig::preset_a(), ChshConfig::preset_b(),
                                                 ChshConfig::preset_c()};
        for (std::size_t s = 0; s < 3; ++s) {
            for (std::size_t i = 0; i < scan.x.size(); i += 7) {
                const double expected =
                    chsh_value(make_alpha_beta_state_from_alpha2(scan.x[i]), configs[s]);
                CHECK(close(scan.series[s].y[i], expected, 1e-9));
            }
        }
    }
    SUBCASE("configuration B is symmetric under alpha^2 -> 1 - alpha^2") {
        const auto& b = scan.series[1];
        for (std::size_t i = 0; i < scan.x.size(); ++i) {
            CHECK(close(b.y[i], b.y[scan.x.size() - 1 - i], 1e-9));
        }
    }
    SUBCASE("bound lines are constant +-2") {
        CHECK(scan.series[3].name == "bound_upper");
        CHECK(scan.series[3].y.front() == 2.0);
        CHECK(scan.series[4].y.back() == -2.0);
    }
    SUBCASE("n_points below 2 rejected") {
        CHECK_THROWS_AS(figure1_scan({FigureConfig::b}, 1), std::invalid_argument);
    }
}

TEST_CASE("figure 2 scan") {
    const auto scan = figure2_scan({FigureConfig::b}, 101);
    REQUIRE(scan.series.size() == 3);  // G(a,b), G(a,b'), zero line
    const auto& ab = scan.series[0];
    const auto& abp = scan.series[1];

    SUBCASE("named series") {
        CHECK(ab.name == "B_G_ab");
        CHECK(abp.name == "B_G_abprime");
        CHECK(scan.series[2].name == "local_realism");
    }
    SUBCASE("product endpoints vanish") {
        CHECK(std::abs(ab.y.front()) <= 1e-12);
        CHECK(std::abs(ab.y.back()) <= 1e-12);
        CHECK(std::abs(abp.y.front()) <= 1e-12);
        CHECK(std::abs(abp.y.back()) <= 1e-12);
    }
    SUBCASE("closed-form values at alpha^2 = 0.5") {
        CHECK(close(ab.y[50], -sqrt2 / 2.0, 1e-9));
        CHECK(close(abp.y[50], -sqrt2 / 2.0, 1e-9));
    }
    SUBCASE("recompute through the dense path") {
        const auto config = ChshConfig::preset_b();
        for (std::size_t i = 0; i < scan.x.size(); i += 5) {
            const auto state = make_alpha_beta_state_from_alpha2(scan.x[i]);
            CHECK(close(ab.y[i], g_value(state, config.a(), config.b()), 1e-9));
            CHECK(close(abp.y[i], g_value(state, config.a(), config.b_prime()), 1e-9));
        }
    }
    SUBCASE("configuration B depends only on alpha beta: symmetric scans") {
        for (std::size_t i = 0; i < scan.x.size(); ++i) {
            CHECK(close(ab.y[i], ab.y[scan.x.size() - 1 - i], 1e-9));
            CHECK(close(abp.y[i], abp.y[scan.x.size() - 1 - i], 1e-9));
        }
    }
}

TEST_CASE("figure 3 curve and the aspect coefficient") {
    SUBCASE("measured coefficients") {
        const auto scan = figure3_curve(AspectRates{}, 101);
        const double expected = (0.971 - 0.029) * (0.968 - 0.028) * 0.984;
        CHECK(close(scan.series[0].y.front(), expected, 1e-15));
        CHECK(close(scan.series[0].y.front(), 0.87131, 5e-5));
        // phi = pi/4 zero of cos(2 phi)
        CHECK(close(scan.series[0].y[25], 0.0, 1e-9));
        // phi = pi/2 trough
        CHECK(close(scan.series[0].y[50], -expected, 1e-12));
        CHECK(scan.x.back() == doctest::Approx(std::numbers::pi));
    }
    SUBCASE("ideal limit coefficient is exactly one") {
        CHECK(AspectRates::ideal().coefficient() == 1.0);
        const auto scan = figure3_curve(AspectRates::ideal(), 11);
        CHECK(scan.series[0].y.front() == 1.0);
    }
    SUBCASE("out-of-range efficiencies rejected") {
        AspectRates bad;
        bad.eff1_plus = 1.2;
        CHECK_THROWS_AS(figure3_curve(bad, 11), std::invalid_argument);
        AspectRates negative;
        negative.angular_factor = -0.1;
        CHECK_THROWS_AS(figure3_curve(negative, 11), std::invalid_argument);
    }
}

TEST_CASE("g from rates") {
    CHECK(g_from_rates(0.25, 0.5, 0.5) == 0.0);
    CHECK(g_from_rates(0.5, 0.5, 0.5) == 1.0);
    CHECK(g_from_rates(0.0, 0.5, 0.5) == -1.0);
    CHECK_THROWS_AS(g_from_rates(1.5, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(g_from_rates(0.5, -0.1, 0.5), std::invalid_argument);
}

TEST_CASE("csv output") {
    const auto scan = figure3_curve(AspectRates{}, 21);
    const auto path = temp_file("figure3.csv");
    write_csv(scan, path);

    SUBCASE("deterministic bytes") {
        const std::string first = slurp(path);
        write_csv(scan, path);
        CHECK(first == slurp(path));
        CHECK(!first.empty());
    }
    SUBCASE("format: header, LF endings, 9 significant digits") {
        const std::string text = slurp(path);
        CHECK(text.find("phi,G_quantum,local_realism\n") == 0);
        CHECK(text.find('\r') == std::string::npos);
        CHECK(text.find("0.87131232") != std::string::npos);
        // line count: header + 21 rows
        CHECK(std::count(text.begin(), text.end(), '\n') == 22);
    }
    SUBCASE("metadata sibling") {
        const std::string meta = slurp(path.string() + ".meta");
        CHECK(meta.find("state_family=photon_coincidence\n") != std::string::npos);
        CHECK(meta.find("seed=none\n") != std::string::npos);
        CHECK(meta.find("n_points=21\n") != std::string::npos);
        CHECK(meta.find("tool_version=") != std::string::npos);
    }
}
