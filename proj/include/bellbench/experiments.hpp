#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bellbench/criteria.hpp"
#include "bellbench/quantum.hpp"

namespace bellbench {

inline constexpr const char* bellbench_version = "0.1.0";

// Tabular figure data: one common x grid, one or more named y series.
// Output is data, not rendered images; plotting is left to external tools.
struct FigureScan {
    std::string x_label;
    std::string y_label;
    std::vector<double> x;  // strictly increasing

    struct Series {
        std::string name;
        std::vector<double> y;
    };
    std::vector<Series> series;

    std::vector<std::pair<std::string, std::string>> metadata;
};

enum class FigureConfig { a, b, c };

FigureConfig parse_figure_config(const std::string& label);  // "A"/"B"/"C", case-insensitive
std::string to_string(FigureConfig config);
ChshConfig chsh_config_for(FigureConfig config);

// <B> versus alpha^2 for the real alpha-beta family, one series per named
// configuration, plus the +-2 bound lines.
FigureScan figure1_scan(const std::vector<FigureConfig>& configs, int n_points = 101);

// G(a,b) and G(a,b') versus alpha^2 for the same family and configurations,
// plus the zero line predicted when correlations factorize.
FigureScan figure2_scan(const std::vector<FigureConfig>& configs, int n_points = 101);

// Polarizer transmissions and angular-aperture factor of the two-photon
// coincidence setup. Defaults are the measured values; ideal() is the
// lossless limit with coefficient exactly 1.
struct AspectRates {
    double eff1_plus = 0.971;
    double eff1_minus = 0.029;
    double eff2_plus = 0.968;
    double eff2_minus = 0.028;
    double angular_factor = 0.984;

    static AspectRates ideal() { return {1.0, 0.0, 1.0, 0.0, 1.0}; }

    // (eff1_plus - eff1_minus)(eff2_plus - eff2_minus) * angular_factor
    double coefficient() const;
};

// G(phi) = coefficient * cos(2 phi) over phi in [0, pi] (photon convention;
// the spin form of the figure-2 scans uses cos(phi) and is a separate path),
// plus the zero line.
FigureScan figure3_curve(const AspectRates& rates, int n_points = 101);

// Covariance from measured coincidence-rate ratios:
// 4 * (rate_ratio - r1 * r2), all ratios in [0, 1].
double g_from_rates(double rate_ratio, double r1, double r2);

// CSV: header row "x_label,series...", comma separator, %.9g floats, LF line
// endings. Metadata goes to a sibling file at path + ".meta" as key=value
// lines (keys: config, state_family, seed, n_points, tool_version).
void write_csv(const FigureScan& scan, const std::filesystem::path& path);

}  // namespace bellbench
