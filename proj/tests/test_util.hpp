#ifndef HILBERT_TEST_UTIL_HPP
#define HILBERT_TEST_UTIL_HPP

#include <memory>
#include <vector>

#include "hilbert/polytope.hpp"
#include "hilbert/rng.hpp"

namespace hilbert::testutil {

/// Random full-dimensional polytope: hull of k points on a jittered sphere.
inline std::shared_ptr<const Polytope> random_polytope(int d, int k, Rng& rng) {
    std::uniform_real_distribution<double> radius(0.6, 1.4);
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::vector<Vec> pts;
        pts.reserve(k);
        for (int i = 0; i < k; ++i) pts.push_back(radius(rng) * random_unit_vector(d, rng));
        try {
            return Polytope::convex_hull(pts, d);
        } catch (const Error&) {
            continue; // degenerate draw, retry
        }
    }
    throw Error("random_polytope failed to produce a full-dimensional hull");
}

/// Random convex polygon with all vertices on a circle of the given radius.
inline std::shared_ptr<const Polytope> random_polygon_on_circle(int k, double radius, Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<Vec> pts;
    pts.reserve(k);
    for (int i = 0; i < k; ++i) {
        double th = angle(rng);
        Vec p(2);
        p << radius * std::cos(th), radius * std::sin(th);
        pts.push_back(p);
    }
    return Polytope::convex_hull(pts, 2);
}

} // namespace hilbert::testutil

#endif
