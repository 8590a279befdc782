#include "bellbench/experiments.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "bellbench/checks.hpp"

namespace bellbench {

namespace {

std::vector<double> linspace(double lo, double hi, int n_points) {
    if (n_points < 2) throw std::invalid_argument("n_points must be at least 2");
    std::vector<double> x(static_cast<std::size_t>(n_points));
    for (int i = 0; i < n_points; ++i) {
        x[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) /
                                                  static_cast<double>(n_points - 1);
    }
    return x;
}

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string config_list_string(const std::vector<FigureConfig>& configs) {
    std::string out;
    for (const auto& c : configs) {
        if (!out.empty()) out += ",";
        out += to_string(c);
    }
    return out;
}

}  // namespace

FigureConfig parse_figure_config(const std::string& label) {
    if (label.size() == 1) {
        switch (std::tolower(static_cast<unsigned char>(label[0]))) {
            case 'a': return FigureConfig::a;
            case 'b': return FigureConfig::b;
            case 'c': return FigureConfig::c;
            default: break;
        }
    }
    throw std::invalid_argument("unknown configuration label '" + label + "' (expected A, B or C)");
}

std::string to_string(FigureConfig config) {
    switch (config) {
        case FigureConfig::a: return "A";
        case FigureConfig::b: return "B";
        case FigureConfig::c: return "C";
    }
    return "?";
}

ChshConfig chsh_config_for(FigureConfig config) {
    switch (config) {
        case FigureConfig::a: return ChshConfig::preset_a();
        case FigureConfig::b: return ChshConfig::preset_b();
        case FigureConfig::c: return ChshConfig::preset_c();
    }
    throw std::invalid_argument("unknown configuration");
}

FigureScan figure1_scan(const std::vector<FigureConfig>& configs, int n_points) {
    FigureScan scan;
    scan.x_label = "alpha_squared";
    scan.y_label = "chsh_expectation";
    scan.x = linspace(0.0, 1.0, n_points);

    for (const auto& label : configs) {
        const ChshConfig config = chsh_config_for(label);
        FigureScan::Series s;
        s.name = to_string(label);
        s.y.reserve(scan.x.size());
        for (double u : scan.x) {
            s.y.push_back(chsh_value(make_alpha_beta_state_from_alpha2(u), config));
        }
        scan.series.push_back(std::move(s));
    }
    scan.series.push_back({"bound_upper", std::vector<double>(scan.x.size(), 2.0)});
    scan.series.push_back({"bound_lower", std::vector<double>(scan.x.size(), -2.0)});

    scan.metadata = {{"config", config_list_string(configs)},
                     {"state_family", "alpha_beta_real"},
                     {"seed", "none"},
                     {"n_points", std::to_string(n_points)},
                     {"tool_version", bellbench_version}};
    return scan;
}

FigureScan figure2_scan(const std::vector<FigureConfig>& configs, int n_points) {
    FigureScan scan;
    scan.x_label = "alpha_squared";
    scan.y_label = "g_value";
    scan.x = linspace(0.0, 1.0, n_points);

    for (const auto& label : configs) {
        const ChshConfig config = chsh_config_for(label);
        FigureScan::Series ab{to_string(label) + "_G_ab", {}};
        FigureScan::Series abp{to_string(label) + "_G_abprime", {}};
        ab.y.reserve(scan.x.size());
        abp.y.reserve(scan.x.size());
        for (double u : scan.x) {
            const TwoQubitState state = make_alpha_beta_state_from_alpha2(u);
            ab.y.push_back(g_value(state, config.a(), config.b()));
            abp.y.push_back(g_value(state, config.a(), config.b_prime()));
        }
        scan.series.push_back(std::move(ab));
        scan.series.push_back(std::move(abp));
    }
    scan.series.push_back({"local_realism", std::vector<double>(scan.x.size(), 0.0)});

    scan.metadata = {{"config", config_list_string(configs)},
                     {"state_family", "alpha_beta_real"},
                     {"seed", "none"},
                     {"n_points", std::to_string(n_points)},
                     {"tool_version", bellbench_version}};
    return scan;
}

double AspectRates::coefficient() const {
    return (eff1_plus - eff1_minus) * (eff2_plus - eff2_minus) * angular_factor;
}

FigureScan figure3_curve(const AspectRates& rates, int n_points) {
    const double coefficients[5] = {rates.eff1_plus, rates.eff1_minus, rates.eff2_plus,
                                    rates.eff2_minus, rates.angular_factor};
    for (double c : coefficients) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("efficiency coefficients must lie in [0, 1]");
        }
    }
    const double f = rates.coefficient();

    FigureScan scan;
    scan.x_label = "phi";
    scan.y_label = "g_value";
    scan.x = linspace(0.0, std::numbers::pi, n_points);

    FigureScan::Series quantum{"G_quantum", {}};
    quantum.y.reserve(scan.x.size());
    for (double phi : scan.x) quantum.y.push_back(f * std::cos(2.0 * phi));
    scan.series.push_back(std::move(quantum));
    scan.series.push_back({"local_realism", std::vector<double>(scan.x.size(), 0.0)});

    char config[160];
    std::snprintf(config, sizeof config,
                  "eff1=(%.9g,%.9g);eff2=(%.9g,%.9g);angular_factor=%.9g", rates.eff1_plus,
                  rates.eff1_minus, rates.eff2_plus, rates.eff2_minus, rates.angular_factor);
    scan.metadata = {{"config", config},
                     {"state_family", "photon_coincidence"},
                     {"seed", "none"},
                     {"n_points", std::to_string(n_points)},
                     {"tool_version", bellbench_version}};
    return scan;
}

double g_from_rates(double rate_ratio, double r1, double r2) {
    const double ratios[3] = {rate_ratio, r1, r2};
    for (double r : ratios) {
        if (!(r >= 0.0 && r <= 1.0)) {
            throw std::invalid_argument("rate ratios must lie in [0, 1]");
        }
    }
    return 4.0 * (rate_ratio - r1 * r2);
}

void write_csv(const FigureScan& scan, const std::filesystem::path& path) {
    internal_check(!scan.x.empty(), "figure scan has at least one row");
    for (const auto& s : scan.series) {
        internal_check(s.y.size() == scan.x.size(), "series length matches the x grid");
    }
    for (std::size_t i = 1; i < scan.x.size(); ++i) {
        internal_check(scan.x[i] > scan.x[i - 1], "x grid strictly increasing");
    }

    std::ofstream out(path, std::ios::binary);  // binary keeps line endings LF everywhere
    if (!out) throw std::invalid_argument("cannot open output file: " + path.string());
    out << scan.x_label;
    for (const auto& s : scan.series) out << ',' << s.name;
    out << '\n';
    for (std::size_t i = 0; i < scan.x.size(); ++i) {
        out << format_value(scan.x[i]);
        for (const auto& s : scan.series) out << ',' << format_value(s.y[i]);
        out << '\n';
    }
    out.flush();
    if (!out) throw std::runtime_error("failed writing output file: " + path.string());

    std::filesystem::path meta_path = path;
    meta_path += ".meta";
    std::ofstream meta(meta_path, std::ios::binary);
    if (!meta) throw std::invalid_argument("cannot open metadata file: " + meta_path.string());
    for (const auto& [key, value] : scan.metadata) meta << key << '=' << value << '\n';
    meta.flush();
    if (!meta) throw std::runtime_error("failed writing metadata file: " + meta_path.string());
}

}  // namespace bellbench
