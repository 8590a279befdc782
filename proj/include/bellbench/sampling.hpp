#pragma once

#include <cmath>
#include <numbers>

#include "bellbench/quantum.hpp"
#include "bellbench/rng.hpp"

namespace bellbench {

// Uniform point on the unit sphere: z uniform in (-1, 1], azimuth uniform.
inline Direction random_direction(Xoshiro256pp& rng) {
    const double z = 1.0 - 2.0 * rng.next_unit();
    const double phi = 2.0 * std::numbers::pi * rng.next_unit();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

// Haar-random pure state: four complex Gaussian amplitudes, normalized.
inline TwoQubitState random_haar_state(Xoshiro256pp& rng) {
    std::array<Complex, 4> amp;
    for (auto& c : amp) c = Complex{rng.next_gaussian(), rng.next_gaussian()};
    return TwoQubitState(amp);
}

// Product of two independent single-qubit states drawn uniformly on the
// Bloch sphere.
inline TwoQubitState random_product_state(Xoshiro256pp& rng) {
    auto qubit = [&rng]() -> std::array<Complex, 2> {
        const double z = 1.0 - 2.0 * rng.next_unit();
        const double phi = 2.0 * std::numbers::pi * rng.next_unit();
        const double theta = std::acos(z);
        return {Complex{std::cos(theta / 2.0), 0.0},
                std::polar(std::sin(theta / 2.0), phi)};
    };
    return make_product_state(qubit(), qubit());
}

}  // namespace bellbench
