#include "bellbench/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bellbench/checks.hpp"

namespace bellbench {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double coarse_step = pi / 18;    // 10 degrees
constexpr double local_step = pi / 90;     // 2 degrees
constexpr double ascent_step_floor = 1e-8;
constexpr double ascent_sweep_tol = 1e-10;
constexpr int ascent_max_sweeps = 200;

Eigen::Vector3d spherical(double polar, double azimuth) {
    const double s = std::sin(polar);
    return {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar)};
}

// Golden-section maximization of f over [lo, hi]; returns the argmax.
template <typename F>
double golden_max(F&& f, double lo, double hi, long& evals) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    evals += 2;
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
        ++evals;
        if (hi - lo < 1e-12) break;
    }
    return f1 > f2 ? x1 : x2;
}

// Coordinate ascent with per-axis golden-section line searches and a
// shrinking bracket, down to the step floor.
template <typename Obj>
double coordinate_ascent(Obj&& obj, std::vector<double>& x, double start_value, long& evals) {
    double best = start_value;
    double h = local_step;
    for (int sweep = 0; sweep < ascent_max_sweeps; ++sweep) {
        const double before = best;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double xi = x[i];
            auto line = [&](double t) {
                x[i] = t;
                const double v = obj(x);
                x[i] = xi;
                return v;
            };
            const double t_best = golden_max(line, xi - h, xi + h, evals);
            const double v_best = line(t_best);
            ++evals;
            if (v_best > best) {
                best = v_best;
                x[i] = t_best;
            }
        }
        const bool converged = best - before < ascent_sweep_tol;
        if (converged && h <= ascent_step_floor) break;
        h = std::max(h * 0.35, ascent_step_floor);
    }
    return best;
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * pi;
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
}

// |<B>| for the planar parameterization, evaluated through the correlation
// tensor; x = (theta_a, phi_b, theta_a', phi_b').
double planar_objective(const Eigen::Matrix3d& t, const std::vector<double>& x) {
    const Eigen::Vector3d a = spherical(x[0], 0.0);
    const Eigen::Vector3d b = spherical(x[1], 0.0);
    const Eigen::Vector3d ap = spherical(x[2], 0.0);
    const Eigen::Vector3d bp = spherical(x[3], 0.0);
    return std::abs(a.dot(t * (b + bp)) + ap.dot(t * (b - bp)));
}

// max over a, a' of |<B>| for given b, b': the optimal a, a' align with
// T(b +- b'), so the objective reduces to |T(b+b')| + |T(b-b')|;
// x = (polar_b, azimuth_b, polar_b', azimuth_b').
double reduced_objective(const Eigen::Matrix3d& t, const std::vector<double>& x) {
    const Eigen::Vector3d b = spherical(x[0], x[1]);
    const Eigen::Vector3d bp = spherical(x[2], x[3]);
    return (t * (b + bp)).norm() + (t * (b - bp)).norm();
}

Direction direction_or_z(const Eigen::Vector3d& v) {
    const double n = v.norm();
    if (n < 1e-14) return Direction::axis(2);  // degenerate: any choice contributes zero
    return Direction::normalized(v);
}

ChshSearchResult maximize_chsh_planar(const TwoQubitState& state) {
    const Eigen::Matrix3d t = correlation_tensor(state).t;
    long evals = 0;

    // Coarse level: 10-degree grid on all four angles, accelerated by the
    // precomputed dot table d(i,j) = a_i . T b_j. Ties resolve to the lowest
    // linear index in (ia, ib, ia', ib') order via strict comparison.
    constexpr int n_coarse = 36;
    std::vector<Eigen::Vector3d> tb(n_coarse);
    std::vector<Eigen::Vector3d> at(n_coarse);
    for (int i = 0; i < n_coarse; ++i) {
        tb[static_cast<std::size_t>(i)] = t * spherical(i * coarse_step, 0.0);
        at[static_cast<std::size_t>(i)] = t.transpose() * spherical(i * coarse_step, 0.0);
    }
    std::vector<double> d(n_coarse * n_coarse);
    for (int ia = 0; ia < n_coarse; ++ia) {
        for (int ib = 0; ib < n_coarse; ++ib) {
            d[static_cast<std::size_t>(ia * n_coarse + ib)] =
                at[static_cast<std::size_t>(ia)].dot(spherical(ib * coarse_step, 0.0));
        }
    }
    double best = -1.0;
    std::vector<double> x(4, 0.0);
    for (int ia = 0; ia < n_coarse; ++ia) {
        for (int ib = 0; ib < n_coarse; ++ib) {
            for (int iap = 0; iap < n_coarse; ++iap) {
                for (int ibp = 0; ibp < n_coarse; ++ibp) {
                    const double v = std::abs(d[static_cast<std::size_t>(ia * n_coarse + ib)] +
                                              d[static_cast<std::size_t>(ia * n_coarse + ibp)] +
                                              d[static_cast<std::size_t>(iap * n_coarse + ib)] -
                                              d[static_cast<std::size_t>(iap * n_coarse + ibp)]);
                    ++evals;
                    if (v > best) {
                        best = v;
                        x = {ia * coarse_step, ib * coarse_step, iap * coarse_step,
                             ibp * coarse_step};
                    }
                }
            }
        }
    }

    auto obj = [&t](const std::vector<double>& angles) { return planar_objective(t, angles); };

    // Local level: 2-degree grid around the coarse optimum.
    std::vector<double> center = x;
    for (int o0 = -5; o0 <= 5; ++o0)
        for (int o1 = -5; o1 <= 5; ++o1)
            for (int o2 = -5; o2 <= 5; ++o2)
                for (int o3 = -5; o3 <= 5; ++o3) {
                    const std::vector<double> cand = {
                        center[0] + o0 * local_step, center[1] + o1 * local_step,
                        center[2] + o2 * local_step, center[3] + o3 * local_step};
                    const double v = obj(cand);
                    ++evals;
                    if (v > best) {
                        best = v;
                        x = cand;
                    }
                }
    const double coarse_value = best;

    best = coordinate_ascent(obj, x, best, evals);

    const ChshConfig config = ChshConfig::from_planar(wrap_angle(x[0]), wrap_angle(x[1]),
                                                      wrap_angle(x[2]), wrap_angle(x[3]));
    const double value = std::abs(chsh_value(state, config));
    return ChshSearchResult{value, config, coarse_value, evals, ascent_step_floor, true};
}

ChshSearchResult maximize_chsh_general(const TwoQubitState& state) {
    const Eigen::Matrix3d t = correlation_tensor(state).t;
    long evals = 0;

    // Coarse level over (b, b') only; a, a' are eliminated in closed form.
    constexpr int n_polar = 19;    // [0, pi] inclusive
    constexpr int n_azimuth = 36;  // [0, 2pi)
    struct GridPoint {
        double polar, azimuth;
        Eigen::Vector3d tv;
    };
    std::vector<GridPoint> pts;
    pts.reserve(n_polar * n_azimuth);
    for (int ip = 0; ip < n_polar; ++ip) {
        for (int iq = 0; iq < n_azimuth; ++iq) {
            const double polar = ip * coarse_step;
            const double azimuth = iq * coarse_step;
            pts.push_back({polar, azimuth, t * spherical(polar, azimuth)});
        }
    }
    double best = -1.0;
    std::vector<double> x(4, 0.0);
    for (const auto& p : pts) {
        for (const auto& q : pts) {
            const double v = (p.tv + q.tv).norm() + (p.tv - q.tv).norm();
            ++evals;
            if (v > best) {
                best = v;
                x = {p.polar, p.azimuth, q.polar, q.azimuth};
            }
        }
    }

    auto obj = [&t](const std::vector<double>& angles) { return reduced_objective(t, angles); };

    std::vector<double> center = x;
    for (int o0 = -5; o0 <= 5; ++o0)
        for (int o1 = -5; o1 <= 5; ++o1)
            for (int o2 = -5; o2 <= 5; ++o2)
                for (int o3 = -5; o3 <= 5; ++o3) {
                    const std::vector<double> cand = {
                        center[0] + o0 * local_step, center[1] + o1 * local_step,
                        center[2] + o2 * local_step, center[3] + o3 * local_step};
                    const double v = obj(cand);
                    ++evals;
                    if (v > best) {
                        best = v;
                        x = cand;
                    }
                }
    const double coarse_value = best;

    best = coordinate_ascent(obj, x, best, evals);

    const Eigen::Vector3d b = spherical(x[0], x[1]);
    const Eigen::Vector3d bp = spherical(x[2], x[3]);
    const Direction dir_b = Direction::normalized(b);
    const Direction dir_bp = Direction::normalized(bp);
    const Direction dir_a = direction_or_z(t * (b + bp));
    const Direction dir_ap = direction_or_z(t * (b - bp));
    const ChshConfig config(dir_a, dir_ap, dir_b, dir_bp);
    const double value = std::abs(chsh_value(state, config));
    return ChshSearchResult{value, config, coarse_value, evals, ascent_step_floor, true};
}

}  // namespace

ChshSearchResult maximize_chsh(const TwoQubitState& state, bool planar) {
    return planar ? maximize_chsh_planar(state) : maximize_chsh_general(state);
}

GSearchResult maximize_g(const TwoQubitState& state) {
    const Eigen::Matrix3d g = g_tensor(state);
    long evals = 0;

    // Coarse scan over b; the optimal a for fixed b is G b / |G b|.
    constexpr int n_polar = 19;
    constexpr int n_azimuth = 36;
    double best = -1.0;
    Eigen::Vector3d v_best(0.0, 0.0, 1.0);
    for (int ip = 0; ip < n_polar; ++ip) {
        for (int iq = 0; iq < n_azimuth; ++iq) {
            const Eigen::Vector3d v = spherical(ip * coarse_step, iq * coarse_step);
            const double score = (g * v).norm();
            ++evals;
            if (score > best) {
                best = score;
                v_best = v;
            }
        }
    }
    const double coarse_value = best;

    // Alternating closed-form updates (power iteration on the singular pair).
    Eigen::Vector3d v = v_best;
    Eigen::Vector3d u(0.0, 0.0, 1.0);
    double value = best;
    for (int it = 0; it < ascent_max_sweeps; ++it) {
        const Eigen::Vector3d gv = g * v;
        const double n_gv = gv.norm();
        if (n_gv < 1e-300) break;  // zero tensor: max |G| is 0
        u = gv / n_gv;
        const Eigen::Vector3d gtu = g.transpose() * u;
        const double n_gtu = gtu.norm();
        if (n_gtu < 1e-300) break;
        v = gtu / n_gtu;
        evals += 2;
        if (n_gtu - value < 1e-13) {
            value = std::max(value, n_gtu);
            break;
        }
        value = n_gtu;
    }

    const Direction dir_a = direction_or_z(u);
    const Direction dir_b = direction_or_z(v);
    const double re_eval = std::abs(g_value(state, dir_a, dir_b));
    return GSearchResult{re_eval, dir_a, dir_b, coarse_value, evals, ascent_step_floor, true};
}

std::vector<double> find_crossings(const ChshConfig& config, double threshold) {
    if (!std::isfinite(threshold)) {
        throw std::invalid_argument("find_crossings: threshold must be finite");
    }
    auto excess = [&](double alpha2) {
        return std::abs(chsh_value(make_alpha_beta_state_from_alpha2(alpha2), config)) - threshold;
    };

    constexpr int n_scan = 2000;
    std::vector<double> crossings;
    double prev_u = 0.0;
    double prev_f = excess(0.0);
    for (int i = 1; i <= n_scan; ++i) {
        const double u = static_cast<double>(i) / n_scan;
        const double f = excess(u);
        if (prev_f == 0.0) {
            crossings.push_back(prev_u);
        } else if (prev_f * f < 0.0) {
            double lo = prev_u, hi = u, f_lo = prev_f;
            for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = excess(mid);
                if (f_mid == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (f_lo * f_mid < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    f_lo = f_mid;
                }
            }
            crossings.push_back(0.5 * (lo + hi));
        }
        prev_u = u;
        prev_f = f;
    }
    if (prev_f == 0.0) crossings.push_back(prev_u);
    return crossings;
}

}  // namespace bellbench
