#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "bellbench/criteria.hpp"
#include "bellbench/quantum.hpp"

namespace bellbench {

// A hidden variable is a point on the unit sphere, drawn uniformly.
using HiddenVariable = Direction;

// Dichotomic single-side response: sign(a . (n + lambda)) with the tie
// sign(0) = +1. n is the marginal Bloch vector of the measured side (norm
// <= 1), so the ensemble average over uniform lambda is exactly a . n.
int d2_response(const Eigen::Vector3d& bloch, const Direction& a, const HiddenVariable& lambda);

enum class HvKind {
    factorized,        // lambda_1, lambda_2 drawn independently
    delta_correlated,  // lambda_2 = lambda_1 (single shared variable)
};

using ResponseFn =
    std::function<int(const Eigen::Vector3d& bloch, const Direction& a, const HiddenVariable&)>;

// A noncontextual local model: a weight density over (lambda_1, lambda_2)
// fixed by `kind`, plus a dichotomic response rule. The default response is
// d2_response; tests may substitute adversarial rules. Responses must return
// exactly +1 or -1.
struct HvModel {
    HvKind kind = HvKind::factorized;
    ResponseFn response;

    static HvModel factorized();
    static HvModel delta_correlated();
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;  // sample standard deviation / sqrt(n)
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    // Correlations of non-product states are not reproducible by these
    // models; estimates for them are still computed but flagged.
    bool non_product_state = false;
};

// Monte Carlo estimate of E[a(lambda_1) b(lambda_2)] under the model.
// For the factorized kind this converges to the product of the two marginal
// expectations.
McEstimate hv_correlation(const HvModel& model, const TwoQubitState& state, const Direction& a,
                          const Direction& b, std::int64_t n_samples, std::uint64_t seed,
                          unsigned n_threads = 0);

// Monte Carlo estimate of the CHSH combination sampled per draw as
// ab + ab' + a'b - a'b'. Every per-sample value is exactly +2 or -2
// (asserted), so the mean lies in [-2, 2].
McEstimate hv_chsh(const HvModel& model, const TwoQubitState& state, const ChshConfig& config,
                   std::int64_t n_samples, std::uint64_t seed, unsigned n_threads = 0);

// Certificate that |b+b'| bt(lambda) = b(lambda) + b'(lambda) has no
// dichotomic solution at any single lambda for non-collinear b, b': the left
// side takes values +-|b+b'|, the right side lies in {-2, 0, +2}, and
// |b+b'| is strictly between 0 and 2.
struct PointwiseLinearityReport {
    double combined_norm;                // |b + b'|
    std::array<double, 2> lhs_values;    // {-|b+b'|, +|b+b'|}
    std::array<double, 3> rhs_values;    // {-2, 0, +2}
    double min_gap;                      // smallest |lhs - rhs|; > 0 certifies failure
    bool satisfiable;                    // always false for accepted inputs
};

// Rejects collinear pairs (|b.b'| >= 1 - 1e-9): there the relation can hold
// and the combined direction may be undefined.
PointwiseLinearityReport pointwise_linearity_failure(const Direction& b,
                                                     const Direction& b_prime);

// Ensemble check of additivity of the expectation over b + b': compares
// |b+b'| <A bt> against <A b> + <A b'> under the model, where A is the
// response for direction a or the constant +1 when `a` is empty (the
// identity case). Both sides are sampled on the same draws.
struct LinearityCheckReport {
    bool identity_case;
    double lhs_mean;
    double rhs_mean;
    double discrepancy_mean;       // mean of per-sample (lhs - rhs)
    double discrepancy_std_error;
    bool consistent;               // |discrepancy| <= 5 * std_error
    std::int64_t n_samples;
    std::uint64_t seed;
};

LinearityCheckReport ensemble_linearity_check(const HvModel& model, const TwoQubitState& state,
                                              const std::optional<Direction>& a, const Direction& b,
                                              const Direction& b_prime, std::int64_t n_samples,
                                              std::uint64_t seed, unsigned n_threads = 0);

// Conditioning demonstration: reweighting by acceptance of a-response = -1
// defines a second weight density for the other side. For independent
// hidden variables the conditioned and unconditioned expectations of the
// second side agree; the report compares them along the three coordinate
// axes. Zero acceptance (deterministic a-response) is reported as vacuous,
// not an error.
struct ConditionalDensityReport {
    std::int64_t n_samples = 0;
    std::int64_t n_accepted = 0;
    double acceptance_rate = 0.0;
    bool vacuous = false;

    struct AxisComparison {
        double conditioned_mean;
        double unconditioned_mean;
        double combined_std_error;
        bool consistent;  // |difference| <= 5 * combined std error
    };
    std::array<AxisComparison, 3> axes{};  // probes along x, y, z
    bool all_consistent = false;
    std::uint64_t seed = 0;
};

ConditionalDensityReport conditional_density_demo(const Direction& a, const TwoQubitState& state,
                                                  std::int64_t n_samples, std::uint64_t seed,
                                                  const HvModel& model = HvModel::factorized(),
                                                  unsigned n_threads = 0);

}  // namespace bellbench
