#ifndef HILBERT_RNG_HPP
#define HILBERT_RNG_HPP

#include <random>

#include "hilbert/geometry.hpp"

namespace hilbert {

using Rng = std::mt19937_64;

/// Uniform point on the unit sphere in R^d.
inline Vec random_unit_vector(int d, Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec v(d);
    do {
        for (int i = 0; i < d; ++i) v(i) = gauss(rng);
    } while (v.norm() < 1e-12);
    return v / v.norm();
}

/// Uniform point in the Euclidean ball of given center and radius.
inline Vec random_in_ball(const Vec& center, double radius, Rng& rng) {
    const int d = static_cast<int>(center.size());
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Vec u = random_unit_vector(d, rng);
    double r = radius * std::pow(unif(rng), 1.0 / d);
    return center + r * u;
}

} // namespace hilbert

#endif
