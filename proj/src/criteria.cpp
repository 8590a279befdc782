#include "bellbench/criteria.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bellbench/checks.hpp"

namespace bellbench {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double planar_regen_tol = 1e-12;

bool close(const Direction& d, const Direction& e) {
    return std::abs(d.x() - e.x()) <= planar_regen_tol &&
           std::abs(d.y() - e.y()) <= planar_regen_tol &&
           std::abs(d.z() - e.z()) <= planar_regen_tol;
}

}  // namespace

ChshConfig::ChshConfig(Direction a, Direction a_prime, Direction b, Direction b_prime)
    : a_(a), a_prime_(a_prime), b_(b), b_prime_(b_prime) {}

ChshConfig ChshConfig::from_planar(const PlanarAngles& angles) {
    ChshConfig config(Direction::planar(angles.theta), Direction::planar(angles.theta_prime),
                      Direction::planar(angles.phi), Direction::planar(angles.phi_prime));
    config.planar_ = angles;
    // The stored vectors must regenerate from the angles exactly.
    internal_check(close(config.a_, Direction::planar(angles.theta)) &&
                       close(config.b_, Direction::planar(angles.phi)) &&
                       close(config.a_prime_, Direction::planar(angles.theta_prime)) &&
                       close(config.b_prime_, Direction::planar(angles.phi_prime)),
                   "planar parameterization regenerates the stored directions");
    return config;
}

ChshConfig ChshConfig::from_planar(double theta, double phi, double theta_prime,
                                   double phi_prime) {
    return from_planar(PlanarAngles{theta, phi, theta_prime, phi_prime});
}

ChshConfig ChshConfig::preset_a() { return from_planar(pi / 3, pi / 8, pi / 4, pi / 6); }
ChshConfig ChshConfig::preset_b() { return from_planar(pi / 4, pi / 2, 3 * pi / 4, 0.0); }
ChshConfig ChshConfig::preset_c() { return from_planar(pi / 6, 3 * pi / 4, pi, 0.0); }

double chsh_value(const TwoQubitState& state, const ChshConfig& config) {
    const double value = pauli_expectation(state, config.a(), config.b()) +
                         pauli_expectation(state, config.a(), config.b_prime()) +
                         pauli_expectation(state, config.a_prime(), config.b()) -
                         pauli_expectation(state, config.a_prime(), config.b_prime());
    internal_check(std::abs(value) <= 2.0 * std::numbers::sqrt2 + 1e-9,
                   "quantum CHSH value within the 2*sqrt(2) ceiling");
    return value;
}

double g_value(const TwoQubitState& state, const Direction& a, const Direction& b) {
    return pauli_expectation(state, a, b) -
           marginal_expectation(state, a, Side::first) *
               marginal_expectation(state, b, Side::second);
}

double g_value_projector_form(const TwoQubitState& state, const Direction& a,
                              const Direction& b) {
    return 4.0 * (projector_expectation(state, a, b) -
                  projector_marginal(state, a, Side::first) *
                      projector_marginal(state, b, Side::second));
}

Eigen::Matrix3d g_tensor(const TwoQubitState& state) {
    const CorrelationTensor ct = correlation_tensor(state);
    return ct.t - ct.m1 * ct.m2.transpose();
}

SeparabilityVerdict separability_test(const TwoQubitState& state, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("separability_test: tol must be positive");
    const Eigen::Matrix3d g = g_tensor(state);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double sigma_max = svd.singularValues()(0);
    const Eigen::Vector3d u = svd.matrixU().col(0);
    const Eigen::Vector3d v = svd.matrixV().col(0);
    return SeparabilityVerdict{sigma_max <= tol, sigma_max,
                               Direction::normalized(u), Direction::normalized(v)};
}

CornerRange four_corner_bound(double m1_a, double m1_a_prime, double m2_b, double m2_b_prime) {
    const double values[4] = {m1_a, m1_a_prime, m2_b, m2_b_prime};
    for (double v : values) {
        if (!(v >= -1.0 && v <= 1.0)) {
            throw std::invalid_argument("four_corner_bound: inputs must lie in [-1, 1]");
        }
    }
    CornerRange range{0.0, 0.0};
    bool first = true;
    for (int mask = 0; mask < 16; ++mask) {
        const double x = (mask & 1) ? std::abs(m1_a) : -std::abs(m1_a);
        const double y = (mask & 2) ? std::abs(m1_a_prime) : -std::abs(m1_a_prime);
        const double u = (mask & 4) ? std::abs(m2_b) : -std::abs(m2_b);
        const double v = (mask & 8) ? std::abs(m2_b_prime) : -std::abs(m2_b_prime);
        const double f = x * (u + v) + y * (u - v);
        if (first || f < range.min) range.min = f;
        if (first || f > range.max) range.max = f;
        first = false;
    }
    internal_check(range.min >= -2.0 - 1e-12 && range.max <= 2.0 + 1e-12,
                   "separable CHSH range within [-2, 2]");
    return range;
}

std::string to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::qm: return "QM";
        case CaseLabel::chsh_consistent: return "CHSH-consistent";
        case CaseLabel::g_consistent: return "G-consistent";
    }
    return "unknown";
}

CriterionVerdict classify(const TwoQubitState& state, const ChshConfig& config, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("classify: tol must be positive");
    CriterionVerdict verdict{};
    verdict.chsh = chsh_value(state, config);
    verdict.chsh_violated = std::abs(verdict.chsh) > 2.0 + tol;
    verdict.tsirelson_ok = std::abs(verdict.chsh) <= 2.0 * std::numbers::sqrt2 + tol;
    verdict.g_values = {g_value(state, config.a(), config.b()),
                        g_value(state, config.a(), config.b_prime()),
                        g_value(state, config.a_prime(), config.b()),
                        g_value(state, config.a_prime(), config.b_prime())};
    verdict.max_abs_g = 0.0;
    for (double g : verdict.g_values) verdict.max_abs_g = std::max(verdict.max_abs_g, std::abs(g));
    verdict.g_zero = verdict.max_abs_g <= tol;
    verdict.label = verdict.chsh_violated ? CaseLabel::qm
                    : verdict.g_zero      ? CaseLabel::g_consistent
                                          : CaseLabel::chsh_consistent;
    return verdict;
}

}  // namespace bellbench
