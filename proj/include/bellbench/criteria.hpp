#pragma once

#include <array>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "bellbench/quantum.hpp"

namespace bellbench {

// Measurement-plane angles (theta, phi, theta', phi') generating
// a = (sin theta, 0, cos theta), b = (sin phi, 0, cos phi) and the primed pair.
struct PlanarAngles {
    double theta;
    double phi;
    double theta_prime;
    double phi_prime;
};

// The four measurement directions entering the CHSH combination
// E(a,b) + E(a,b') + E(a',b) - E(a',b').
class ChshConfig {
  public:
    ChshConfig(Direction a, Direction a_prime, Direction b, Direction b_prime);

    static ChshConfig from_planar(const PlanarAngles& angles);
    static ChshConfig from_planar(double theta, double phi, double theta_prime, double phi_prime);

    // The three named configurations used by the figure scans:
    //   A: (pi/3, pi/8, pi/4, pi/6)
    //   B: (pi/4, pi/2, 3pi/4, 0)   -- maximal violation at alpha^2 = 1/2
    //   C: (pi/6, 3pi/4, pi, 0)
    static ChshConfig preset_a();
    static ChshConfig preset_b();
    static ChshConfig preset_c();

    const Direction& a() const { return a_; }
    const Direction& a_prime() const { return a_prime_; }
    const Direction& b() const { return b_; }
    const Direction& b_prime() const { return b_prime_; }
    const std::optional<PlanarAngles>& planar() const { return planar_; }

  private:
    Direction a_, a_prime_, b_, b_prime_;
    std::optional<PlanarAngles> planar_;
};

// <B> = E(a,b) + E(a,b') + E(a',b) - E(a',b') via the dense matrix path.
// Asserts |<B>| <= 2*sqrt(2) + 1e-9; exceeding that ceiling signals a bug.
double chsh_value(const TwoQubitState& state, const ChshConfig& config);

// Correlation minus the product of marginals,
//   G(a,b) = <a.sigma (x) b.sigma> - <a.sigma (x) 1><1 (x) b.sigma>.
// Zero for every (a, b) exactly when the state's correlations factorize.
double g_value(const TwoQubitState& state, const Direction& a, const Direction& b);

// Same quantity through projectors: 4[<P(a) (x) P(b)> - <P(a) (x) 1><1 (x) P(b)>].
// Agrees with g_value to 1e-12; kept as a second algebraic route.
double g_value_projector_form(const TwoQubitState& state, const Direction& a, const Direction& b);

// G-hat with g_value(a, b) = a . G-hat . b for all unit a, b; equals
// T - m1 m2^T from the correlation tensor.
Eigen::Matrix3d g_tensor(const TwoQubitState& state);

struct SeparabilityVerdict {
    bool compatible;      // max |G| <= tol over all direction pairs
    double max_abs_g;     // largest singular value of the G tensor
    Direction witness_a;  // maximizing pair (left/right singular directions)
    Direction witness_b;
};

// Local-realism compatibility via the largest singular value of the G tensor.
SeparabilityVerdict separability_test(const TwoQubitState& state, double tol = 1e-10);

struct CornerRange {
    double min;
    double max;
};

// Extrema of the separable CHSH form x(u+v) + y(u-v) over the symmetric box
// whose half-widths are the magnitudes of the four given marginal
// expectations. Linearity in each variable puts the extrema at the 16
// corners; the range always lies within [-2, 2].
CornerRange four_corner_bound(double m1_a, double m1_a_prime, double m2_b, double m2_b_prime);

enum class CaseLabel {
    qm,               // CHSH violated: no local-realistic account at all
    chsh_consistent,  // CHSH holds, yet some G != 0: covariance still detects the state
    g_consistent,     // all four G vanish: consistent with local realism here
};

std::string to_string(CaseLabel label);

struct CriterionVerdict {
    double chsh;
    bool chsh_violated;              // |chsh| > 2 + tol
    bool tsirelson_ok;               // |chsh| <= 2*sqrt(2) + tol
    std::array<double, 4> g_values;  // pairs (a,b), (a,b'), (a',b), (a',b')
    double max_abs_g;                // max of the four magnitudes
    bool g_zero;                     // all four within tol of zero
    CaseLabel label;
};

// Evaluates the CHSH test and the four covariance relations for one
// configuration and labels which description survives.
CriterionVerdict classify(const TwoQubitState& state, const ChshConfig& config, double tol = 1e-10);

}  // namespace bellbench
