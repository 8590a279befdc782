#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace bellbench {

using Complex = std::complex<double>;

// Real 3-vector constrained to unit length (within 1e-12 on the squared norm).
class Direction {
  public:
    Direction(double x, double y, double z);

    // Scales an arbitrary nonzero vector to unit length.
    static Direction normalized(double x, double y, double z);
    static Direction normalized(const Eigen::Vector3d& v);

    // In-plane direction (sin t, 0, cos t); the measurement-plane
    // parameterization used by the figure configurations.
    static Direction planar(double angle);

    static Direction axis(int i);  // 0,1,2 -> x,y,z

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }
    Eigen::Vector3d vec() const { return {x_, y_, z_}; }

    Direction operator-() const { return {-x_, -y_, -z_}; }

  private:
    double x_, y_, z_;
};

inline double dot(const Direction& a, const Direction& b) {
    return a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

// Normalized pure state of two qubits in the ordered product basis
// (|++>, |+->, |-+>, |-->), |+>/|-> being the sigma_z eigenstates.
class TwoQubitState {
  public:
    // Normalizes on construction; rejects the zero vector and non-finite input.
    explicit TwoQubitState(const std::array<Complex, 4>& amplitudes);

    const std::array<Complex, 4>& amplitudes() const { return amp_; }
    Complex amplitude(int i) const { return amp_[static_cast<std::size_t>(i)]; }
    Eigen::Vector4cd vec() const;

  private:
    std::array<Complex, 4> amp_;
};

// The one-parameter entangled family (alpha |+-> - beta |-+>) / norm.
// Rejects alpha = beta = 0.
TwoQubitState make_alpha_beta_state(Complex alpha, Complex beta);

// Real nonneg (alpha, beta) = (sqrt(u), sqrt(1-u)) for u = alpha^2 in [0, 1].
TwoQubitState make_alpha_beta_state_from_alpha2(double alpha2);

// Tensor product of two single-qubit states (each given in the sigma_z basis).
TwoQubitState make_product_state(const std::array<Complex, 2>& first,
                                 const std::array<Complex, 2>& second);

enum class Side { first, second };

// <psi| a.sigma (x) b.sigma |psi>, dense 4x4 contraction. Real within 1e-12
// by Hermiticity; the imaginary residue is checked, then discarded.
double pauli_expectation(const TwoQubitState& state, const Direction& a, const Direction& b);

// <psi| a.sigma (x) 1 |psi> or <psi| 1 (x) a.sigma |psi>.
double marginal_expectation(const TwoQubitState& state, const Direction& a, Side side);

// <psi| P(a) (x) P(b) |psi> with P(a) = (1 + a.sigma)/2; value in [0, 1].
double projector_expectation(const TwoQubitState& state, const Direction& a, const Direction& b);

// Projector expectation with the other side replaced by the unit operator.
double projector_marginal(const TwoQubitState& state, const Direction& a, Side side);

// All nine pairwise Pauli expectations plus the two marginal Bloch vectors.
struct CorrelationTensor {
    Eigen::Matrix3d t;   // t(i,j) = <sigma_i (x) sigma_j>
    Eigen::Vector3d m1;  // <sigma_i (x) 1>
    Eigen::Vector3d m2;  // <1 (x) sigma_j>
};

CorrelationTensor correlation_tensor(const TwoQubitState& state);

// Marginal Bloch vector of one side; norm <= 1, with equality iff the state
// is a product state.
Eigen::Vector3d bloch_vector(const TwoQubitState& state, Side side);

// Pure-state concurrence 2|a0 a3 - a1 a2|; equals 2|alpha beta| for the
// alpha-beta family. 0 for product states, 1 at maximal entanglement.
double concurrence(const TwoQubitState& state);

// Building blocks shared with the tests and the optimizer.
Eigen::Matrix2cd pauli_dot(const Direction& a);  // a.sigma
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& first, const Eigen::Matrix2cd& second);

}  // namespace bellbench
