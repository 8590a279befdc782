#include "bellbench/hv.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "bellbench/checks.hpp"
#include "bellbench/mc.hpp"
#include "bellbench/sampling.hpp"

namespace bellbench {

namespace {

constexpr double collinear_tol = 1e-9;
constexpr double product_state_tol = 1e-9;

int checked_response(const HvModel& model, const Eigen::Vector3d& bloch, const Direction& a,
                     const HiddenVariable& lambda) {
    const int r = model.response(bloch, a, lambda);
    internal_check(r == 1 || r == -1, "response must be dichotomic (+1 or -1)");
    return r;
}

// Draws the pair (lambda_1, lambda_2) according to the model's weight
// density: independent points for the factorized kind, one shared point for
// the delta-correlated kind.
struct LambdaPair {
    HiddenVariable first;
    HiddenVariable second;
};

LambdaPair draw_lambdas(const HvModel& model, Xoshiro256pp& rng) {
    const HiddenVariable l1 = random_direction(rng);
    if (model.kind == HvKind::delta_correlated) return {l1, l1};
    return {l1, random_direction(rng)};
}

McEstimate finish(const MeanAccumulator& acc, std::uint64_t seed, bool non_product) {
    McEstimate est;
    est.mean = acc.mean();
    est.std_error = acc.std_error();
    est.n_samples = acc.count;
    est.seed = seed;
    est.non_product_state = non_product;
    return est;
}

Direction combined_direction(const Direction& b, const Direction& b_prime) {
    return Direction::normalized(b.x() + b_prime.x(), b.y() + b_prime.y(),
                                 b.z() + b_prime.z());
}

void require_non_collinear(const Direction& b, const Direction& b_prime, const char* who) {
    if (std::abs(dot(b, b_prime)) >= 1.0 - collinear_tol) {
        throw std::invalid_argument(std::string(who) + ": b and b' must not be collinear");
    }
}

}  // namespace

int d2_response(const Eigen::Vector3d& bloch, const Direction& a, const HiddenVariable& lambda) {
    const double s = a.x() * (bloch.x() + lambda.x()) + a.y() * (bloch.y() + lambda.y()) +
                     a.z() * (bloch.z() + lambda.z());
    return s < 0.0 ? -1 : 1;
}

HvModel HvModel::factorized() { return HvModel{HvKind::factorized, ResponseFn(&d2_response)}; }

HvModel HvModel::delta_correlated() {
    return HvModel{HvKind::delta_correlated, ResponseFn(&d2_response)};
}

McEstimate hv_correlation(const HvModel& model, const TwoQubitState& state, const Direction& a,
                          const Direction& b, std::int64_t n_samples, std::uint64_t seed,
                          unsigned n_threads) {
    const Eigen::Vector3d n1 = bloch_vector(state, Side::first);
    const Eigen::Vector3d n2 = bloch_vector(state, Side::second);
    const auto acc = run_chunked<MeanAccumulator>(
        n_samples, seed, n_threads, [&](Xoshiro256pp& rng, MeanAccumulator& out) {
            const LambdaPair l = draw_lambdas(model, rng);
            const int product = checked_response(model, n1, a, l.first) *
                                checked_response(model, n2, b, l.second);
            out.add(static_cast<double>(product));
        });
    return finish(acc, seed, concurrence(state) > product_state_tol);
}

McEstimate hv_chsh(const HvModel& model, const TwoQubitState& state, const ChshConfig& config,
                   std::int64_t n_samples, std::uint64_t seed, unsigned n_threads) {
    const Eigen::Vector3d n1 = bloch_vector(state, Side::first);
    const Eigen::Vector3d n2 = bloch_vector(state, Side::second);
    const auto acc = run_chunked<MeanAccumulator>(
        n_samples, seed, n_threads, [&](Xoshiro256pp& rng, MeanAccumulator& out) {
            const LambdaPair l = draw_lambdas(model, rng);
            const int ra = checked_response(model, n1, config.a(), l.first);
            const int ra_prime = checked_response(model, n1, config.a_prime(), l.first);
            const int rb = checked_response(model, n2, config.b(), l.second);
            const int rb_prime = checked_response(model, n2, config.b_prime(), l.second);
            const int combo = ra * rb + ra * rb_prime + ra_prime * rb - ra_prime * rb_prime;
            internal_check(combo == 2 || combo == -2,
                           "per-sample CHSH combination must be +-2");
            out.add(static_cast<double>(combo));
        });
    return finish(acc, seed, concurrence(state) > product_state_tol);
}

PointwiseLinearityReport pointwise_linearity_failure(const Direction& b,
                                                     const Direction& b_prime) {
    require_non_collinear(b, b_prime, "pointwise_linearity_failure");
    const double norm = std::sqrt((b.x() + b_prime.x()) * (b.x() + b_prime.x()) +
                                  (b.y() + b_prime.y()) * (b.y() + b_prime.y()) +
                                  (b.z() + b_prime.z()) * (b.z() + b_prime.z()));
    PointwiseLinearityReport report;
    report.combined_norm = norm;
    report.lhs_values = {-norm, norm};
    report.rhs_values = {-2.0, 0.0, 2.0};
    double min_gap = std::numeric_limits<double>::infinity();
    for (double lhs : report.lhs_values) {
        for (double rhs : report.rhs_values) {
            min_gap = std::min(min_gap, std::abs(lhs - rhs));
        }
    }
    report.min_gap = min_gap;
    // For non-collinear unit vectors |b+b'| lies strictly inside (0, 2), so
    // the candidate sets can never meet.
    internal_check(norm > 0.0 && norm < 2.0, "combined norm strictly inside (0, 2)");
    internal_check(min_gap > 0.0, "value sets of the pointwise relation are disjoint");
    report.satisfiable = false;
    return report;
}

namespace {

struct LinearityAccumulator {
    MeanAccumulator lhs;
    MeanAccumulator rhs;
    MeanAccumulator diff;

    void merge(const LinearityAccumulator& o) {
        lhs.merge(o.lhs);
        rhs.merge(o.rhs);
        diff.merge(o.diff);
    }
};

}  // namespace

LinearityCheckReport ensemble_linearity_check(const HvModel& model, const TwoQubitState& state,
                                              const std::optional<Direction>& a, const Direction& b,
                                              const Direction& b_prime, std::int64_t n_samples,
                                              std::uint64_t seed, unsigned n_threads) {
    require_non_collinear(b, b_prime, "ensemble_linearity_check");
    const Direction b_tilde = combined_direction(b, b_prime);
    const double norm = std::sqrt(2.0 + 2.0 * dot(b, b_prime));
    const Eigen::Vector3d n1 = bloch_vector(state, Side::first);
    const Eigen::Vector3d n2 = bloch_vector(state, Side::second);

    const auto acc = run_chunked<LinearityAccumulator>(
        n_samples, seed, n_threads, [&](Xoshiro256pp& rng, LinearityAccumulator& out) {
            const LambdaPair l = draw_lambdas(model, rng);
            const int ra = a ? checked_response(model, n1, *a, l.first) : 1;
            const int rt = checked_response(model, n2, b_tilde, l.second);
            const int rb = checked_response(model, n2, b, l.second);
            const int rb_prime = checked_response(model, n2, b_prime, l.second);
            const double lhs = norm * ra * rt;
            const double rhs = static_cast<double>(ra * rb + ra * rb_prime);
            out.lhs.add(lhs);
            out.rhs.add(rhs);
            out.diff.add(lhs - rhs);
        });

    LinearityCheckReport report;
    report.identity_case = !a.has_value();
    report.lhs_mean = acc.lhs.mean();
    report.rhs_mean = acc.rhs.mean();
    report.discrepancy_mean = acc.diff.mean();
    report.discrepancy_std_error = acc.diff.std_error();
    report.consistent = std::abs(report.discrepancy_mean) <= 5.0 * report.discrepancy_std_error;
    report.n_samples = n_samples;
    report.seed = seed;
    return report;
}

namespace {

struct ConditionalAccumulator {
    std::int64_t total = 0;
    std::int64_t accepted = 0;
    std::array<MeanAccumulator, 3> conditioned{};
    std::array<MeanAccumulator, 3> unconditioned{};

    void merge(const ConditionalAccumulator& o) {
        total += o.total;
        accepted += o.accepted;
        for (int i = 0; i < 3; ++i) {
            conditioned[static_cast<std::size_t>(i)].merge(o.conditioned[static_cast<std::size_t>(i)]);
            unconditioned[static_cast<std::size_t>(i)].merge(o.unconditioned[static_cast<std::size_t>(i)]);
        }
    }
};

}  // namespace

ConditionalDensityReport conditional_density_demo(const Direction& a, const TwoQubitState& state,
                                                  std::int64_t n_samples, std::uint64_t seed,
                                                  const HvModel& model, unsigned n_threads) {
    const Eigen::Vector3d n1 = bloch_vector(state, Side::first);
    const Eigen::Vector3d n2 = bloch_vector(state, Side::second);

    const auto acc = run_chunked<ConditionalAccumulator>(
        n_samples, seed, n_threads, [&](Xoshiro256pp& rng, ConditionalAccumulator& out) {
            const LambdaPair l = draw_lambdas(model, rng);
            const bool keep = checked_response(model, n1, a, l.first) == -1;
            ++out.total;
            if (keep) ++out.accepted;
            for (int i = 0; i < 3; ++i) {
                const double r = static_cast<double>(
                    checked_response(model, n2, Direction::axis(i), l.second));
                out.unconditioned[static_cast<std::size_t>(i)].add(r);
                if (keep) out.conditioned[static_cast<std::size_t>(i)].add(r);
            }
        });

    ConditionalDensityReport report;
    report.n_samples = acc.total;
    report.n_accepted = acc.accepted;
    report.acceptance_rate = static_cast<double>(acc.accepted) / static_cast<double>(acc.total);
    report.seed = seed;
    report.vacuous = acc.accepted < 2;
    if (report.vacuous) return report;

    report.all_consistent = true;
    for (std::size_t i = 0; i < 3; ++i) {
        auto& axis = report.axes[i];
        axis.conditioned_mean = acc.conditioned[i].mean();
        axis.unconditioned_mean = acc.unconditioned[i].mean();
        axis.combined_std_error = std::sqrt(
            acc.conditioned[i].std_error() * acc.conditioned[i].std_error() +
            acc.unconditioned[i].std_error() * acc.unconditioned[i].std_error());
        axis.consistent = std::abs(axis.conditioned_mean - axis.unconditioned_mean) <=
                          5.0 * axis.combined_std_error;
        report.all_consistent = report.all_consistent && axis.consistent;
    }
    return report;
}

}  // namespace bellbench
