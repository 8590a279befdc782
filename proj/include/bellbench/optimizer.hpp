#pragma once

#include <vector>

#include "bellbench/criteria.hpp"
#include "bellbench/quantum.hpp"

namespace bellbench {

struct ChshSearchResult {
    double best_value;       // max |<B>| found, re-evaluated through the dense path
    ChshConfig best_config;
    double coarse_value;     // best value on the coarse grid, before refinement
    long evaluations;
    double grid_resolution;  // radians, finest grid level
    bool refined;
};

// Maximizes |<B>| over measurement configurations by hierarchical grid search
// plus coordinate-ascent refinement. With planar = true the search is
// restricted to the in-plane parameterization (theta, phi, theta', phi');
// otherwise each of b, b' carries (polar, azimuth) angles and the optimal
// a, a' follow in closed form from the correlation tensor. Entangled states
// of the alpha-beta family always yield a value above 2.
ChshSearchResult maximize_chsh(const TwoQubitState& state, bool planar = false);

struct GSearchResult {
    double best_value;  // max |G(a, b)|, re-evaluated through the dense path
    Direction best_a;
    Direction best_b;
    double coarse_value;
    long evaluations;
    double grid_resolution;
    bool refined;
};

// Maximizes |G(a, b)| over direction pairs; the result matches the largest
// singular value of the G tensor.
GSearchResult maximize_g(const TwoQubitState& state);

// Scans the real alpha-beta family over alpha^2 in [0, 1] and returns every
// alpha^2 where |<B>| crosses the threshold, located by a dense scan plus
// bisection to 1e-10.
std::vector<double> find_crossings(const ChshConfig& config, double threshold);

}  // namespace bellbench
