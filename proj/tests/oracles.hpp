#pragma once

// Test-only oracles. Each one recomputes a quantity by a route that is
// independent of the library path it is used to check: hand-expanded closed
// forms for the alpha-beta family, raw index-loop contractions, dense grid
// searches, and quadrature. Keep these free of the production expectation /
// SVD / optimizer code paths.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "bellbench/criteria.hpp"
#include "bellbench/quantum.hpp"

namespace oracle {

using bellbench::Complex;
using bellbench::Direction;
using bellbench::TwoQubitState;

// Closed form for the normalized real family (alpha |+-> - beta |-+>):
// the correlation matrix is diag(-2ab, -2ab, -1), so
// E(a, b) = -2 alpha beta (ax bx + ay by) - az bz.
inline double alpha_beta_pauli(double alpha, double beta, const Direction& a,
                               const Direction& b) {
    return -2.0 * alpha * beta * (a.x() * b.x() + a.y() * b.y()) - a.z() * b.z();
}

// Marginal Bloch vectors of the same family: (0, 0, alpha^2 - beta^2) on the
// first side and (0, 0, beta^2 - alpha^2) on the second.
inline double alpha_beta_marginal(double alpha, double beta, const Direction& a,
                                  bellbench::Side side) {
    const double mz = side == bellbench::Side::first ? alpha * alpha - beta * beta
                                                     : beta * beta - alpha * alpha;
    return a.z() * mz;
}

// G(a, b) for the real family: a . diag(-2ab, -2ab, -4a^2b^2) . b.
inline double alpha_beta_g(double alpha, double beta, const Direction& a, const Direction& b) {
    const double k = 2.0 * alpha * beta;
    return -k * (a.x() * b.x() + a.y() * b.y()) - k * k * a.z() * b.z();
}

namespace detail {

// 2x2 entries of a . sigma written out by hand.
inline std::array<std::array<Complex, 2>, 2> pauli_entries(const Direction& a) {
    return {{{Complex{a.z(), 0.0}, Complex{a.x(), -a.y()}},
             {Complex{a.x(), a.y()}, Complex{-a.z(), 0.0}}}};
}

inline std::array<std::array<Complex, 2>, 2> projector_entries(const Direction& a) {
    auto m = pauli_entries(a);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            m[i][j] *= 0.5;
            if (i == j) m[i][j] += 0.5;
        }
    }
    return m;
}

inline std::array<std::array<Complex, 2>, 2> identity_entries() {
    return {{{Complex{1.0}, Complex{0.0}}, {Complex{0.0}, Complex{1.0}}}};
}

// Raw four-index contraction sum_{ij,kl} conj(psi_ij) M1[i][k] M2[j][l] psi_kl,
// with the basis index 2i + j.
inline double contract(const TwoQubitState& state,
                       const std::array<std::array<Complex, 2>, 2>& m1,
                       const std::array<std::array<Complex, 2>, 2>& m2) {
    const auto& amp = state.amplitudes();
    Complex total{0.0};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            for (int k = 0; k < 2; ++k) {
                for (int l = 0; l < 2; ++l) {
                    total += std::conj(amp[static_cast<std::size_t>(2 * i + j)]) * m1[i][k] *
                             m2[j][l] * amp[static_cast<std::size_t>(2 * k + l)];
                }
            }
        }
    }
    return total.real();
}

}  // namespace detail

// Brute-force summation over basis states, no matrix library involved.
inline double bruteforce_pauli(const TwoQubitState& state, const Direction& a,
                               const Direction& b) {
    return detail::contract(state, detail::pauli_entries(a), detail::pauli_entries(b));
}

inline double bruteforce_marginal(const TwoQubitState& state, const Direction& a,
                                  bellbench::Side side) {
    return side == bellbench::Side::first
               ? detail::contract(state, detail::pauli_entries(a), detail::identity_entries())
               : detail::contract(state, detail::identity_entries(), detail::pauli_entries(a));
}

inline double bruteforce_projector(const TwoQubitState& state, const Direction& a,
                                   const Direction& b) {
    return detail::contract(state, detail::projector_entries(a), detail::projector_entries(b));
}

// Dense grid extrema of x(u+v) + y(u-v) over the box with the given
// half-widths; n_per_axis points per axis, endpoints included.
inline std::pair<double, double> corner_bruteforce(double hx, double hy, double hu, double hv,
                                                   int n_per_axis) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    auto grid = [n_per_axis](double h, int i) {
        return -h + 2.0 * h * static_cast<double>(i) / static_cast<double>(n_per_axis - 1);
    };
    for (int ix = 0; ix < n_per_axis; ++ix) {
        for (int iy = 0; iy < n_per_axis; ++iy) {
            for (int iu = 0; iu < n_per_axis; ++iu) {
                for (int iv = 0; iv < n_per_axis; ++iv) {
                    const double x = grid(std::abs(hx), ix);
                    const double y = grid(std::abs(hy), iy);
                    const double u = grid(std::abs(hu), iu);
                    const double v = grid(std::abs(hv), iv);
                    const double f = x * (u + v) + y * (u - v);
                    if (first || f < lo) lo = f;
                    if (first || f > hi) hi = f;
                    first = false;
                }
            }
        }
    }
    return {lo, hi};
}

// Ensemble average of sign(a.(n + lambda)) over lambda uniform on the unit
// sphere, by midpoint quadrature. With the polar axis along a the average
// reduces to (1/2) Integral_{-1}^{1} sign(a.n + z) dz; the midpoint rule's
// error is bounded by the width of the one cell containing the sign flip.
inline double sphere_quadrature_response_mean(const Eigen::Vector3d& n, const Direction& a,
                                              std::int64_t n_cells = 4'000'000) {
    const double c = a.x() * n.x() + a.y() * n.y() + a.z() * n.z();
    const double h = 2.0 / static_cast<double>(n_cells);
    double sum = 0.0;
    for (std::int64_t i = 0; i < n_cells; ++i) {
        const double z = -1.0 + (static_cast<double>(i) + 0.5) * h;
        sum += (c + z < 0.0) ? -1.0 : 1.0;
    }
    return 0.5 * sum * h;
}

// Dense grid search for max |G(a, b)|. G is linear in a, so for each b the
// profile vector w(b) = (G(x,b), G(y,b), G(z,b)) gives max over a as |w(b)|;
// b runs over a 2-degree grid, then coordinate golden-section refinement.
inline double grid_max_g(const TwoQubitState& state) {
    namespace bb = bellbench;
    constexpr double pi = std::numbers::pi;
    auto profile_norm = [&state](double polar, double azimuth) {
        const double s = std::sin(polar);
        const Direction b = Direction::normalized(s * std::cos(azimuth), s * std::sin(azimuth),
                                                  std::cos(polar));
        double w2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double wi = bb::g_value(state, Direction::axis(i), b);
            w2 += wi * wi;
        }
        return std::sqrt(w2);
    };

    const double step = pi / 90.0;
    double best = -1.0, best_polar = 0.0, best_azimuth = 0.0;
    for (int ip = 0; ip <= 90; ++ip) {
        for (int iq = 0; iq < 180; ++iq) {
            const double v = profile_norm(ip * step, iq * step);
            if (v > best) {
                best = v;
                best_polar = ip * step;
                best_azimuth = iq * step;
            }
        }
    }

    // Coordinate golden-section refinement on (polar, azimuth).
    constexpr double invphi = 0.6180339887498949;
    double h = step;
    for (int sweep = 0; sweep < 40; ++sweep) {
        for (int axis = 0; axis < 2; ++axis) {
            double lo = (axis == 0 ? best_polar : best_azimuth) - h;
            double hi = (axis == 0 ? best_polar : best_azimuth) + h;
            auto eval = [&](double t) {
                return axis == 0 ? profile_norm(t, best_azimuth) : profile_norm(best_polar, t);
            };
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < 50; ++it) {
                if (f1 < f2) {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + invphi * (hi - lo); f2 = eval(x2);
                } else {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - invphi * (hi - lo); f1 = eval(x1);
                }
            }
            const double t = f1 > f2 ? x1 : x2;
            const double v = eval(t);
            if (v > best) {
                best = v;
                (axis == 0 ? best_polar : best_azimuth) = t;
            }
        }
        h *= 0.5;
        if (h < 1e-10) break;
    }
    return best;
}

// Same search, but on the bilinear form itself: for each grid b the exact
// max over a is |G b|. Fast enough to validate the singular-value route on
// thousands of states; grid_max_g above additionally re-derives the form
// from dense expectations on a few states.
inline double grid_max_g_form(const Eigen::Matrix3d& g) {
    constexpr double pi = std::numbers::pi;
    auto score = [&g](double polar, double azimuth) {
        const double s = std::sin(polar);
        return (g * Eigen::Vector3d(s * std::cos(azimuth), s * std::sin(azimuth),
                                    std::cos(polar)))
            .norm();
    };

    const double step = pi / 90.0;
    double best = -1.0, best_polar = 0.0, best_azimuth = 0.0;
    for (int ip = 0; ip <= 90; ++ip) {
        for (int iq = 0; iq < 180; ++iq) {
            const double v = score(ip * step, iq * step);
            if (v > best) {
                best = v;
                best_polar = ip * step;
                best_azimuth = iq * step;
            }
        }
    }

    constexpr double invphi = 0.6180339887498949;
    double h = step;
    for (int sweep = 0; sweep < 40; ++sweep) {
        for (int axis = 0; axis < 2; ++axis) {
            double lo = (axis == 0 ? best_polar : best_azimuth) - h;
            double hi = (axis == 0 ? best_polar : best_azimuth) + h;
            auto eval = [&](double t) {
                return axis == 0 ? score(t, best_azimuth) : score(best_polar, t);
            };
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < 50; ++it) {
                if (f1 < f2) {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + invphi * (hi - lo); f2 = eval(x2);
                } else {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - invphi * (hi - lo); f1 = eval(x1);
                }
            }
            const double t = f1 > f2 ? x1 : x2;
            const double v = eval(t);
            if (v > best) {
                best = v;
                (axis == 0 ? best_polar : best_azimuth) = t;
            }
        }
        h *= 0.5;
        if (h < 1e-10) break;
    }
    return best;
}

// Dense planar-slice search for max |<B>|: b, b' scan the measurement plane
// at pi/360 resolution while a, a' are eliminated exactly through the
// correlation matrix; golden-section refinement follows. For the real
// alpha-beta family the global optimum lives in this slice.
inline double dense_slice_max_chsh(const TwoQubitState& state) {
    namespace bb = bellbench;
    constexpr double pi = std::numbers::pi;
    const Eigen::Matrix3d t = bb::correlation_tensor(state).t;
    auto value = [&t](double phi_b, double phi_bp) {
        const Eigen::Vector3d b(std::sin(phi_b), 0.0, std::cos(phi_b));
        const Eigen::Vector3d bp(std::sin(phi_bp), 0.0, std::cos(phi_bp));
        return (t * (b + bp)).norm() + (t * (b - bp)).norm();
    };

    const double step = pi / 360.0;
    double best = -1.0, best_b = 0.0, best_bp = 0.0;
    for (int i = 0; i < 720; ++i) {
        for (int j = 0; j < 720; ++j) {
            const double v = value(i * step, j * step);
            if (v > best) {
                best = v;
                best_b = i * step;
                best_bp = j * step;
            }
        }
    }

    constexpr double invphi = 0.6180339887498949;
    double h = step;
    for (int sweep = 0; sweep < 40; ++sweep) {
        for (int axis = 0; axis < 2; ++axis) {
            double lo = (axis == 0 ? best_b : best_bp) - h;
            double hi = (axis == 0 ? best_b : best_bp) + h;
            auto eval = [&](double x) {
                return axis == 0 ? value(x, best_bp) : value(best_b, x);
            };
            double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < 50; ++it) {
                if (f1 < f2) {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + invphi * (hi - lo); f2 = eval(x2);
                } else {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - invphi * (hi - lo); f1 = eval(x1);
                }
            }
            const double x = f1 > f2 ? x1 : x2;
            const double v = eval(x);
            if (v > best) {
                best = v;
                (axis == 0 ? best_b : best_bp) = x;
            }
        }
        h *= 0.5;
        if (h < 1e-10) break;
    }
    return best;
}

}  // namespace oracle
