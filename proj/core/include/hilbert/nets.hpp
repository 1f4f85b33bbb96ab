#ifndef HILBERT_NETS_HPP
#define HILBERT_NETS_HPP

#include <cstdint>
#include <vector>

#include "hilbert/geometry.hpp"

namespace hilbert {

/// Equal-weight direction net on the unit sphere of R^d, laid out in
/// antipodal pairs: dirs[i + n/2] == -dirs[i] for i < n/2. The pairing lets
/// radial samplers reuse chord hits, since Hilbert tangent balls are
/// centrally symmetric.
struct DirectionNet {
    int dim = 0;
    std::vector<Vec> dirs;
    double weight = 0.0; // per-direction quadrature weight; sum = sphere area

    int size() const { return static_cast<int>(dirs.size()); }
    int pair_count() const { return size() / 2; }
    int antipode(int i) const {
        const int h = pair_count();
        return i < h ? i + h : i - h;
    }

    /// d = 1: the two endpoints of S^0.
    static DirectionNet segment();
    /// d = 2: n uniformly spaced angles (n rounded up to even).
    static DirectionNet circle(int n);
    /// d = 3: Fibonacci spiral on a half-sphere plus antipodes.
    static DirectionNet sphere(int n);
    /// d >= 4: seeded random net (deterministic for a fixed seed).
    static DirectionNet hypersphere(int d, int n, std::uint64_t seed = 0x9e3779b97f4a7c15ULL);
    /// Dispatch on dimension with the module defaults when n <= 0.
    static DirectionNet for_dim(int d, int n = 0);
};

/// Uniform angular net on the arc [theta0, theta1] (2D clipped quadrature).
std::vector<double> arc_angles(double theta0, double theta1, int n);

} // namespace hilbert

#endif
