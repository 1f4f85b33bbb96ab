#include "hilbert/nets.hpp"

#include <cmath>

#include "hilbert/errors.hpp"
#include "hilbert/rng.hpp"

namespace hilbert {

DirectionNet DirectionNet::segment() {
    DirectionNet net;
    net.dim = 1;
    Vec plus(1), minus(1);
    plus << 1.0;
    minus << -1.0;
    net.dirs = {plus, minus};
    net.weight = 1.0; // counting measure on S^0
    return net;
}

DirectionNet DirectionNet::circle(int n) {
    if (n < 4) n = 4;
    if (n % 2) ++n;
    DirectionNet net;
    net.dim = 2;
    net.dirs.reserve(n);
    const int h = n / 2;
    // Half-integer offset keeps fixture facet normals out of the net.
    for (int i = 0; i < h; ++i) {
        double th = 2.0 * std::numbers::pi * (i + 0.5) / n;
        Vec u(2);
        u << std::cos(th), std::sin(th);
        net.dirs.push_back(u);
    }
    for (int i = 0; i < h; ++i) net.dirs.push_back(-net.dirs[i]);
    net.weight = 2.0 * std::numbers::pi / n;
    return net;
}

DirectionNet DirectionNet::sphere(int n) {
    if (n < 16) n = 16;
    if (n % 2) ++n;
    const int h = n / 2;
    DirectionNet net;
    net.dim = 3;
    net.dirs.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < h; ++i) {
        // Spiral over the full sphere, half the count; antipodes fill in.
        double z = 1.0 - (2.0 * i + 1.0) / (2.0 * h);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        double phi = golden * i;
        Vec u(3);
        u << r * std::cos(phi), r * std::sin(phi), z;
        net.dirs.push_back(u);
    }
    for (int i = 0; i < h; ++i) net.dirs.push_back(-net.dirs[i]);
    net.weight = 4.0 * std::numbers::pi / n;
    return net;
}

DirectionNet DirectionNet::hypersphere(int d, int n, std::uint64_t seed) {
    if (n < 16) n = 16;
    if (n % 2) ++n;
    const int h = n / 2;
    DirectionNet net;
    net.dim = d;
    net.dirs.reserve(n);
    Rng rng(seed + static_cast<std::uint64_t>(d));
    for (int i = 0; i < h; ++i) net.dirs.push_back(random_unit_vector(d, rng));
    for (int i = 0; i < h; ++i) net.dirs.push_back(-net.dirs[i]);
    net.weight = unit_sphere_area(d) / n;
    return net;
}

DirectionNet DirectionNet::for_dim(int d, int n) {
    switch (d) {
        case 1: return segment();
        case 2: return circle(n > 0 ? n : 512);
        case 3: return sphere(n > 0 ? n : 4096);
        default:
            if (d < 1) throw DimensionMismatch("direction net needs d >= 1");
            return hypersphere(d, n > 0 ? n : 4096);
    }
}

std::vector<double> arc_angles(double theta0, double theta1, int n) {
    std::vector<double> out;
    if (n < 1) n = 1;
    out.reserve(n);
    const double h = (theta1 - theta0) / n;
    for (int i = 0; i < n; ++i) out.push_back(theta0 + (i + 0.5) * h);
    return out;
}

} // namespace hilbert
