#include "bellbench/quantum.hpp"

#include <cmath>
#include <stdexcept>

#include "bellbench/checks.hpp"

namespace bellbench {

namespace {

constexpr double unit_tol = 1e-12;
constexpr double hermiticity_tol = 1e-12;

bool finite(const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

// <psi| M |psi> for Hermitian M; asserts the imaginary residue before
// discarding it.
double real_expectation(const TwoQubitState& state, const Eigen::Matrix4cd& m) {
    const Eigen::Vector4cd psi = state.vec();
    const Complex value = psi.dot(m * psi);  // Eigen's dot conjugates the left side
    internal_check(std::abs(value.imag()) < hermiticity_tol,
                   "expectation of a Hermitian observable must be real");
    return value.real();
}

double clamp01(double v, const char* what) {
    internal_check(v > -unit_tol && v < 1.0 + unit_tol, what);
    return std::min(1.0, std::max(0.0, v));
}

}  // namespace

Direction::Direction(double x, double y, double z) : x_(x), y_(y), z_(z) {
    if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
        throw std::invalid_argument("Direction: non-finite component");
    }
    if (std::abs(x * x + y * y + z * z - 1.0) > unit_tol) {
        throw std::invalid_argument("Direction: not a unit vector (use Direction::normalized)");
    }
}

Direction Direction::normalized(double x, double y, double z) {
    const double n = std::sqrt(x * x + y * y + z * z);
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("Direction::normalized: zero or non-finite vector");
    }
    return {x / n, y / n, z / n};
}

Direction Direction::normalized(const Eigen::Vector3d& v) { return normalized(v.x(), v.y(), v.z()); }

Direction Direction::planar(double angle) { return {std::sin(angle), 0.0, std::cos(angle)}; }

Direction Direction::axis(int i) {
    switch (i) {
        case 0: return {1.0, 0.0, 0.0};
        case 1: return {0.0, 1.0, 0.0};
        case 2: return {0.0, 0.0, 1.0};
        default: throw std::invalid_argument("Direction::axis: index must be 0, 1 or 2");
    }
}

TwoQubitState::TwoQubitState(const std::array<Complex, 4>& amplitudes) : amp_(amplitudes) {
    double norm_sq = 0.0;
    for (const auto& c : amp_) {
        if (!finite(c)) throw std::invalid_argument("TwoQubitState: non-finite amplitude");
        norm_sq += std::norm(c);
    }
    if (!(norm_sq > 0.0)) throw std::invalid_argument("TwoQubitState: zero state vector");
    const double inv = 1.0 / std::sqrt(norm_sq);
    double check = 0.0;
    for (auto& c : amp_) {
        c *= inv;
        check += std::norm(c);
    }
    internal_check(std::abs(check - 1.0) <= unit_tol, "state normalization");
}

Eigen::Vector4cd TwoQubitState::vec() const {
    return Eigen::Vector4cd(amp_[0], amp_[1], amp_[2], amp_[3]);
}

TwoQubitState make_alpha_beta_state(Complex alpha, Complex beta) {
    if (std::norm(alpha) + std::norm(beta) <= 0.0) {
        throw std::invalid_argument("make_alpha_beta_state: alpha and beta cannot both be zero");
    }
    return TwoQubitState({Complex{0.0}, alpha, -beta, Complex{0.0}});
}

TwoQubitState make_alpha_beta_state_from_alpha2(double alpha2) {
    if (!(alpha2 >= 0.0 && alpha2 <= 1.0)) {
        throw std::invalid_argument("alpha2 must lie in [0, 1]");
    }
    return make_alpha_beta_state(std::sqrt(alpha2), std::sqrt(1.0 - alpha2));
}

TwoQubitState make_product_state(const std::array<Complex, 2>& first,
                                 const std::array<Complex, 2>& second) {
    return TwoQubitState({first[0] * second[0], first[0] * second[1],
                          first[1] * second[0], first[1] * second[1]});
}

Eigen::Matrix2cd pauli_dot(const Direction& a) {
    Eigen::Matrix2cd m;
    m << Complex{a.z(), 0.0}, Complex{a.x(), -a.y()},
         Complex{a.x(), a.y()}, Complex{-a.z(), 0.0};
    return m;
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& first, const Eigen::Matrix2cd& second) {
    Eigen::Matrix4cd m;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m.block<2, 2>(2 * i, 2 * j) = first(i, j) * second;
        }
    }
    return m;
}

double pauli_expectation(const TwoQubitState& state, const Direction& a, const Direction& b) {
    const double value = real_expectation(state, kron(pauli_dot(a), pauli_dot(b)));
    internal_check(std::abs(value) <= 1.0 + unit_tol, "pauli expectation within [-1, 1]");
    return value;
}

double marginal_expectation(const TwoQubitState& state, const Direction& a, Side side) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix4cd m =
        side == Side::first ? kron(pauli_dot(a), id) : kron(id, pauli_dot(a));
    const double value = real_expectation(state, m);
    internal_check(std::abs(value) <= 1.0 + unit_tol, "marginal expectation within [-1, 1]");
    return value;
}

double projector_expectation(const TwoQubitState& state, const Direction& a, const Direction& b) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd pa = 0.5 * (id + pauli_dot(a));
    const Eigen::Matrix2cd pb = 0.5 * (id + pauli_dot(b));
    return clamp01(real_expectation(state, kron(pa, pb)), "projector expectation within [0, 1]");
}

double projector_marginal(const TwoQubitState& state, const Direction& a, Side side) {
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd pa = 0.5 * (id + pauli_dot(a));
    const Eigen::Matrix4cd m = side == Side::first ? kron(pa, id) : kron(id, pa);
    return clamp01(real_expectation(state, m), "projector marginal within [0, 1]");
}

CorrelationTensor correlation_tensor(const TwoQubitState& state) {
    CorrelationTensor out;
    for (int i = 0; i < 3; ++i) {
        out.m1(i) = marginal_expectation(state, Direction::axis(i), Side::first);
        out.m2(i) = marginal_expectation(state, Direction::axis(i), Side::second);
        for (int j = 0; j < 3; ++j) {
            out.t(i, j) = pauli_expectation(state, Direction::axis(i), Direction::axis(j));
        }
    }
    return out;
}

Eigen::Vector3d bloch_vector(const TwoQubitState& state, Side side) {
    Eigen::Vector3d n;
    for (int i = 0; i < 3; ++i) n(i) = marginal_expectation(state, Direction::axis(i), side);
    return n;
}

double concurrence(const TwoQubitState& state) {
    const auto& a = state.amplitudes();
    return 2.0 * std::abs(a[0] * a[3] - a[1] * a[2]);
}

}  // namespace bellbench
